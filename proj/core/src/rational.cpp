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

#include "gossipleak/rational.hpp"

#include <cmath>
#include <utility>

#include "gossipleak/errors.hpp"

namespace gossipleak {

Rational to_rational(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("to_rational: non-finite value");
  Rational q(value);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_double(const Eigen::MatrixXd& m) {
  RationalMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = to_rational(m(r, c));
  return out;
}

std::vector<Rational> RationalMatrix::row(int r) const {
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(r) * cols_;
  return {first, first + cols_};
}

void RationalMatrix::set_row(int r, const std::vector<Rational>& values) {
  for (int c = 0; c < cols_; ++c) (*this)(r, c) = values[c];
}

RationalMatrix RationalMatrix::block(int r0, int c0, int nr, int nc) const {
  RationalMatrix out(nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InvalidArgument("RationalMatrix: dimension mismatch in product");
  RationalMatrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(r, k);
      if (sgn(a) == 0) continue;
      for (int c = 0; c < rhs.cols_; ++c) {
        if (sgn(rhs(k, c)) != 0) out(r, c) += a * rhs(k, c);
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw InvalidArgument("RationalMatrix: dimension mismatch in sum");
  }
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw InvalidArgument("RationalMatrix: dimension mismatch in difference");
  }
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c).get_d();
  return out;
}

std::vector<Rational> multiply(const std::vector<Rational>& row, const RationalMatrix& m) {
  if (static_cast<int>(row.size()) != m.rows()) {
    throw InvalidArgument("multiply: dimension mismatch");
  }
  std::vector<Rational> out(m.cols());
  for (int k = 0; k < m.rows(); ++k) {
    if (sgn(row[k]) == 0) continue;
    for (int c = 0; c < m.cols(); ++c) {
      if (sgn(m(k, c)) != 0) out[c] += row[k] * m(k, c);
    }
  }
  return out;
}

RationalMatrix solve_exact(const RationalMatrix& a, const RationalMatrix& b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n) throw InvalidArgument("solve_exact: dimension mismatch");
  RationalMatrix lhs = a;
  RationalMatrix rhs = b;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (sgn(lhs(r, col)) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw InvalidArgument("solve_exact: singular system");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(lhs(pivot, c), lhs(col, c));
      for (int c = 0; c < rhs.cols(); ++c) std::swap(rhs(pivot, c), rhs(col, c));
    }
    Rational inv = 1 / lhs(col, col);
    for (int c = 0; c < n; ++c) lhs(col, c) *= inv;
    for (int c = 0; c < rhs.cols(); ++c) rhs(col, c) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || sgn(lhs(r, col)) == 0) continue;
      Rational factor = lhs(r, col);
      for (int c = 0; c < n; ++c) lhs(r, c) -= factor * lhs(col, c);
      for (int c = 0; c < rhs.cols(); ++c) rhs(r, c) -= factor * rhs(col, c);
    }
  }
  return rhs;
}

}  // namespace gossipleak
