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

#include <Eigen/Dense>
#include <vector>

#include "gossipleak/rational.hpp"

namespace gossipleak {

enum class NumericMode { kFloat, kExact };

// Pivots with |value| <= kPivotTolerance * max|K| are treated as zero.
inline constexpr double kPivotTolerance = 1e-9;
// A float RREF row counts as one-hot when one entry is within this of 1 and
// all others are below it in magnitude.
inline constexpr double kOneHotTolerance = 1e-6;
// Looser threshold for rows reported as "numerically leaked".
inline constexpr double kNearOneHotTolerance = 1e-3;

// U = L * K with U the reduced row echelon form of K.
//
// In exact mode `U` and `L` hold the rounded values of `exact_u` and
// `exact_l`. `L` (and `exact_l`) are empty when the transform was not
// requested.
struct RrefDecomposition {
  NumericMode mode = NumericMode::kFloat;
  Eigen::MatrixXd u;
  Eigen::MatrixXd l;
  RationalMatrix exact_u;
  RationalMatrix exact_l;
  std::vector<int> pivot_cols;
  int rank = 0;
  // Absolute pivot threshold actually used (0 in exact mode).
  double tolerance = 0.0;

  bool has_transform() const { return l.size() > 0; }
};

// Gauss-Jordan elimination with partial pivoting.
RrefDecomposition rref_float(const Eigen::MatrixXd& k, double tau = kPivotTolerance,
                             bool with_transform = true);

// Exact elimination over the rationals.
RrefDecomposition rref_exact(const RationalMatrix& k, bool with_transform = true);

// Maintains the RREF of a growing set of rational rows.
//
// Rows are kept as primitive integer vectors (fraction-free elimination),
// which is much cheaper than normalized rationals for the power-of-W rows the
// attacks produce. Only the first `pivot_cols` columns are eligible as
// pivots; trailing columns ride along (used to track the transform L).
class ExactRowReducer {
 public:
  explicit ExactRowReducer(int cols, int pivot_cols = -1);

  // Returns true when the row increased the rank. A dependent row is
  // discarded unless `keep_dependent` is set, in which case its reduced
  // remainder (zero on the pivot columns) is stored.
  bool add_row(const std::vector<Rational>& row, bool keep_dependent = false);

  int rank() const { return static_cast<int>(basis_.size()); }
  int cols() const { return cols_; }
  int pivot_limit() const { return pivot_limit_; }

  // Pivot-eligible columns c whose basis row is exactly e_c.
  std::vector<int> one_hot_columns() const;
  // Pivot columns in increasing order.
  std::vector<int> pivots() const;
  // The RREF rows (leading entry 1), ordered by pivot column.
  RationalMatrix reduced_rows() const;
  // Remainders of dependent rows, in insertion order.
  RationalMatrix dependent_rows() const;

 private:
  struct Row {
    std::vector<mpz_class> values;
    int pivot = -1;
  };
  void eliminate(std::vector<mpz_class>& target, const Row& by, int col) const;
  static void make_primitive(std::vector<mpz_class>& values);

  int cols_;
  int pivot_limit_;
  std::vector<Row> basis_;  // sorted by pivot
  std::vector<std::vector<mpz_class>> dependent_;
};

// Columns c for which some row of U equals e_c. Exact decompositions are
// checked exactly and `tol` is ignored.
std::vector<int> one_hot_columns(const RrefDecomposition& dec, double tol = kOneHotTolerance);

}  // namespace gossipleak
