// Copyright 2026 The gossipleak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <vector>

namespace gossipleak {

using Rational = mpq_class;

// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double value);

// Dense row-major matrix of rationals. Only the handful of operations the
// exact attack paths need.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  static RationalMatrix identity(int n);
  static RationalMatrix from_double(const Eigen::MatrixXd& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Rational& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::vector<Rational> row(int r) const;
  void set_row(int r, const std::vector<Rational>& values);
  RationalMatrix block(int r0, int c0, int nr, int nc) const;
  RationalMatrix transpose() const;

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix operator+(const RationalMatrix& rhs) const;
  RationalMatrix operator-(const RationalMatrix& rhs) const;
  bool operator==(const RationalMatrix& rhs) const;

  Eigen::MatrixXd to_double() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

// Row vector times matrix.
std::vector<Rational> multiply(const std::vector<Rational>& row, const RationalMatrix& m);

// Solves the square system A x = B exactly by Gauss-Jordan. Throws
// InvalidArgument when A is singular.
RationalMatrix solve_exact(const RationalMatrix& a, const RationalMatrix& b);

}  // namespace gossipleak
