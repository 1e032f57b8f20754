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

#include <array>
#include <cstddef>
#include <functional>

namespace pbq {

using Point2 = std::array<double, 2>;

struct NelderMeadResult {
    Point2 point{};
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Two-dimensional Nelder-Mead with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// Stops when every vertex lies within `tolerance` of the best one, or after
/// `max_evaluations`. The starting point is evaluated first and the returned
/// value is never worse than it. Out-of-domain points should return +inf.
NelderMeadResult nelder_mead(const std::function<double(const Point2 &)> &objective,
                             const Point2 &start, const Point2 &step, double tolerance,
                             std::size_t max_evaluations);

} // namespace pbq
