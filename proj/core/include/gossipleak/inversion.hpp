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
#include <limits>
#include <vector>

namespace gossipleak {

struct ReconstructedDatum {
  Eigen::VectorXd input;
  int label = 0;
  // |bias gradient| of the class used as divisor.
  double confidence = 0.0;
};

inline constexpr double kDefaultDivisorFloor = 1e-8;

// Recovers the input of a single softmax-regression datum from its
// (possibly scaled) gradient. For the weight block, row c equals
// (p_c - y_c) * x and the bias entry c equals p_c - y_c, so any class with a
// nonzero bias entry yields x by division; the largest one is used. Any
// nonzero scale (including -eta) cancels.
//
// Throws InvalidArgument("uninformative gradient") if every bias entry is
// below `threshold`. The label assumes the stored -eta * grad convention
// for two classes; with three or more it is sign agnostic.
ReconstructedDatum invert_logistic_gradient(const Eigen::VectorXd& gradient, int classes,
                                            double threshold = kDefaultDivisorFloor);

// Returned by psnr for identical inputs.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

// 10 log10(peak^2 / MSE).
double psnr(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double peak = 1.0);

// |a - truth|^2 / |truth|^2.
double relative_square_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& truth);

// Fraction of (estimate, truth) pairs with PSNR strictly above the threshold.
double success_rate(const std::vector<Eigen::VectorXd>& estimates, const std::vector<Eigen::VectorXd>& truths,
                    double psnr_threshold = 10.0, double peak = 1.0);

}  // namespace gossipleak
