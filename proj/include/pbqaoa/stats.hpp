// Copyright 2026 The pbqaoa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pbq {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.576;

/// Ordinary least squares y = slope * x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Coefficient of determination; 1 when the data are fitted exactly.
    double r2 = 0.0;
    /// Pearson correlation of (x, y); 0 if y is constant.
    double correlation = 0.0;
    double slope_stderr = 0.0;
    /// sqrt(SS_res / (n - 2)).
    double residual_std = 0.0;
    std::size_t n = 0;
};

/// Throws std::invalid_argument for fewer than 3 points or constant x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Pairwise (cascade) summation; result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> values);
double median(std::vector<double> values);
double geometric_mean(std::span<const double> values);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace pbq
