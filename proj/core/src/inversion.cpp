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

#include "gossipleak/inversion.hpp"

#include <cmath>

#include "gossipleak/errors.hpp"

namespace gossipleak {

ReconstructedDatum invert_logistic_gradient(const Eigen::VectorXd& gradient, int classes, double threshold) {
  if (classes < 1 || gradient.size() % classes != 0 || gradient.size() < 2 * classes) {
    throw InvalidArgument("invert_logistic_gradient: gradient size is not classes * (p + 1)");
  }
  if (!gradient.allFinite()) throw InvalidArgument("invert_logistic_gradient: non-finite gradient");
  const Eigen::Index p = gradient.size() / classes - 1;
  const Eigen::VectorXd bias = gradient.tail(classes);

  Eigen::Index divisor_class = 0;
  const double magnitude = bias.cwiseAbs().maxCoeff(&divisor_class);
  if (!(magnitude >= threshold) || magnitude == 0.0) {
    throw InvalidArgument("uninformative gradient");
  }

  ReconstructedDatum datum;
  datum.input = gradient.segment(divisor_class * p, p) / bias[divisor_class];
  datum.confidence = magnitude;
  // The residual p - y is negative only at the true class, so in the stored
  // convention g = -eta * grad the true class is the lone positive bias
  // entry. With three or more classes the lone entry is also identifiable
  // when the scale's sign is unknown: it is the one whose sign disagrees with
  // the majority. Two classes are ambiguous under sign flips and fall back
  // to the stored convention.
  int positive = 0;
  int negative = 0;
  for (Eigen::Index c = 0; c < classes; ++c) {
    if (bias[c] > 0.0) ++positive;
    if (bias[c] < 0.0) ++negative;
  }
  if (classes >= 3 && positive > negative) {
    bias.minCoeff(&divisor_class);
  } else {
    bias.maxCoeff(&divisor_class);
  }
  datum.label = static_cast<int>(divisor_class);
  return datum;
}

double psnr(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double peak) {
  if (a.size() != b.size()) throw InvalidArgument("psnr: length mismatch");
  if (peak <= 0.0) throw InvalidArgument("psnr: peak must be positive");
  if (a.size() == 0) throw InvalidArgument("psnr: empty vectors");
  const double mse = (a - b).squaredNorm() / static_cast<double>(a.size());
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(peak * peak / mse);
}

double relative_square_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& truth) {
  if (a.size() != truth.size()) throw InvalidArgument("relative_square_distance: length mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) throw InvalidArgument("relative_square_distance: zero truth vector");
  return (a - truth).squaredNorm() / denom;
}

double success_rate(const std::vector<Eigen::VectorXd>& estimates, const std::vector<Eigen::VectorXd>& truths,
                    double psnr_threshold, double peak) {
  if (estimates.size() != truths.size()) throw InvalidArgument("success_rate: unpaired inputs");
  if (estimates.empty()) return 0.0;
  int hits = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (psnr(estimates[i], truths[i], peak) > psnr_threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(estimates.size());
}

}  // namespace gossipleak
