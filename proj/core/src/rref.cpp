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

#include "gossipleak/rref.hpp"

#include <algorithm>
#include <cmath>

#include "gossipleak/errors.hpp"

namespace gossipleak {

RrefDecomposition rref_float(const Eigen::MatrixXd& k, double tau, bool with_transform) {
  const int m = static_cast<int>(k.rows());
  const int n = static_cast<int>(k.cols());
  RrefDecomposition dec;
  dec.mode = NumericMode::kFloat;
  Eigen::MatrixXd a = k;
  Eigen::MatrixXd l;
  if (with_transform) l = Eigen::MatrixXd::Identity(m, m);
  const double scale = k.size() > 0 ? k.cwiseAbs().maxCoeff() : 0.0;
  dec.tolerance = tau * scale;

  int row = 0;
  for (int c = 0; c < n && row < m; ++c) {
    Eigen::Index best = 0;
    const double magnitude = a.col(c).tail(m - row).cwiseAbs().maxCoeff(&best);
    if (magnitude <= dec.tolerance) continue;
    const int p = row + static_cast<int>(best);
    if (p != row) {
      a.row(p).swap(a.row(row));
      if (with_transform) l.row(p).swap(l.row(row));
    }
    const double pivot = a(row, c);
    a.row(row) /= pivot;
    if (with_transform) l.row(row) /= pivot;
    a(row, c) = 1.0;
    for (int r = 0; r < m; ++r) {
      if (r == row) continue;
      const double factor = a(r, c);
      if (factor == 0.0) continue;
      a.row(r) -= factor * a.row(row);
      if (with_transform) l.row(r) -= factor * l.row(row);
      a(r, c) = 0.0;
    }
    dec.pivot_cols.push_back(c);
    ++row;
  }
  dec.rank = row;
  if (row < m) a.bottomRows(m - row).setZero();
  dec.u = std::move(a);
  dec.l = std::move(l);
  return dec;
}

RrefDecomposition rref_exact(const RationalMatrix& k, bool with_transform) {
  const int m = k.rows();
  const int n = k.cols();
  RrefDecomposition dec;
  dec.mode = NumericMode::kExact;

  ExactRowReducer reducer(with_transform ? n + m : n, n);
  for (int r = 0; r < m; ++r) {
    std::vector<Rational> row = k.row(r);
    if (with_transform) {
      row.resize(n + m);
      row[n + r] = 1;
    }
    reducer.add_row(row, with_transform);
  }
  dec.rank = reducer.rank();
  dec.pivot_cols = reducer.pivots();

  RationalMatrix reduced = reducer.reduced_rows();
  dec.exact_u = RationalMatrix(m, n);
  for (int r = 0; r < dec.rank; ++r)
    for (int c = 0; c < n; ++c) dec.exact_u(r, c) = reduced(r, c);
  if (with_transform) {
    RationalMatrix dependent = reducer.dependent_rows();
    dec.exact_l = RationalMatrix(m, m);
    for (int r = 0; r < dec.rank; ++r)
      for (int c = 0; c < m; ++c) dec.exact_l(r, c) = reduced(r, n + c);
    for (int r = 0; r < dependent.rows(); ++r)
      for (int c = 0; c < m; ++c) dec.exact_l(dec.rank + r, c) = dependent(r, n + c);
    dec.l = dec.exact_l.to_double();
  }
  dec.u = dec.exact_u.to_double();
  return dec;
}

ExactRowReducer::ExactRowReducer(int cols, int pivot_cols)
    : cols_(cols), pivot_limit_(pivot_cols < 0 ? cols : pivot_cols) {
  if (pivot_limit_ > cols_) throw InvalidArgument("ExactRowReducer: pivot limit exceeds width");
}

void ExactRowReducer::make_primitive(std::vector<mpz_class>& values) {
  mpz_class g = 0;
  for (const auto& v : values) {
    if (sgn(v) == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& v : values) {
      if (sgn(v) != 0) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }
  }
}

// target <- a * target - f * by, with a = by[col] / g and f = target[col] / g,
// which zeroes target[col]. by[col] is positive so the sign of target's own
// pivot (if any) is preserved.
void ExactRowReducer::eliminate(std::vector<mpz_class>& target, const Row& by, int col) const {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), by.values[col].get_mpz_t(), target[col].get_mpz_t());
  mpz_class a = by.values[col] / g;
  mpz_class f = target[col] / g;
  const bool scale = a != 1;
  for (int c = 0; c < cols_; ++c) {
    if (scale && sgn(target[c]) != 0) target[c] *= a;
    if (sgn(by.values[c]) != 0) target[c] -= f * by.values[c];
  }
  target[col] = 0;
}

bool ExactRowReducer::add_row(const std::vector<Rational>& row, bool keep_dependent) {
  if (static_cast<int>(row.size()) != cols_) throw InvalidArgument("ExactRowReducer: row width");
  mpz_class lcm = 1;
  for (const auto& q : row) {
    if (sgn(q) != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  }
  std::vector<mpz_class> values(cols_);
  for (int c = 0; c < cols_; ++c) {
    if (sgn(row[c]) == 0) continue;
    values[c] = row[c].get_num() * (lcm / row[c].get_den());
  }

  for (const Row& b : basis_) {
    if (sgn(values[b.pivot]) != 0) eliminate(values, b, b.pivot);
  }
  make_primitive(values);

  int pivot = -1;
  for (int c = 0; c < pivot_limit_; ++c) {
    if (sgn(values[c]) != 0) {
      pivot = c;
      break;
    }
  }
  if (pivot < 0) {
    if (keep_dependent) dependent_.push_back(std::move(values));
    return false;
  }
  if (sgn(values[pivot]) < 0) {
    for (auto& v : values) v = -v;
  }
  Row fresh{std::move(values), pivot};
  for (Row& b : basis_) {
    if (sgn(b.values[pivot]) != 0) {
      eliminate(b.values, fresh, pivot);
      make_primitive(b.values);
    }
  }
  auto pos = std::lower_bound(basis_.begin(), basis_.end(), pivot,
                              [](const Row& r, int p) { return r.pivot < p; });
  basis_.insert(pos, std::move(fresh));
  return true;
}

std::vector<int> ExactRowReducer::one_hot_columns() const {
  std::vector<int> out;
  for (const Row& b : basis_) {
    bool single = true;
    for (int c = 0; c < pivot_limit_ && single; ++c) {
      if (c != b.pivot && sgn(b.values[c]) != 0) single = false;
    }
    if (single) out.push_back(b.pivot);
  }
  return out;
}

std::vector<int> ExactRowReducer::pivots() const {
  std::vector<int> out;
  out.reserve(basis_.size());
  for (const Row& b : basis_) out.push_back(b.pivot);
  return out;
}

RationalMatrix ExactRowReducer::reduced_rows() const {
  RationalMatrix out(rank(), cols_);
  for (int r = 0; r < rank(); ++r) {
    const Row& b = basis_[r];
    for (int c = 0; c < cols_; ++c) {
      if (sgn(b.values[c]) == 0) continue;
      out(r, c) = Rational(b.values[c], b.values[b.pivot]);
      out(r, c).canonicalize();
    }
  }
  return out;
}

RationalMatrix ExactRowReducer::dependent_rows() const {
  RationalMatrix out(static_cast<int>(dependent_.size()), cols_);
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = Rational(dependent_[r][c]);
  return out;
}

std::vector<int> one_hot_columns(const RrefDecomposition& dec, double tol) {
  std::vector<int> out;
  const int n = static_cast<int>(dec.u.cols());
  for (int r = 0; r < dec.rank; ++r) {
    const int pivot = dec.pivot_cols[r];
    bool single = true;
    if (dec.mode == NumericMode::kExact) {
      for (int c = 0; c < n && single; ++c) {
        if (c != pivot && sgn(dec.exact_u(r, c)) != 0) single = false;
      }
    } else {
      if (std::abs(dec.u(r, pivot) - 1.0) > tol) single = false;
      for (int c = 0; c < n && single; ++c) {
        if (c != pivot && std::abs(dec.u(r, c)) >= tol) single = false;
      }
    }
    if (single) out.push_back(pivot);
  }
  return out;
}

}  // namespace gossipleak
