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
#include "pbqaoa/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

namespace pbq {

namespace {

Point2 affine(const Point2 &a, const Point2 &b, double t) {
    // a + t (b - a)
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

double distance(const Point2 &a, const Point2 &b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const Point2 &)> &objective,
                             const Point2 &start, const Point2 &step, double tolerance,
                             std::size_t max_evaluations) {
    std::array<Point2, 3> vertex{start, Point2{start[0] + step[0], start[1]},
                                 Point2{start[0], start[1] + step[1]}};
    std::array<double, 3> value{};
    NelderMeadResult result;
    auto eval = [&](const Point2 &p) {
        ++result.evaluations;
        const double v = objective(p);
        return std::isnan(v) ? INFINITY : v;
    };
    for (std::size_t k = 0; k < 3; ++k) {
        value[k] = eval(vertex[k]);
    }

    auto order = [&] {
        std::array<std::size_t, 3> idx{0, 1, 2};
        // Stable so that ties keep the earlier (start) vertex as best.
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const auto v = vertex;
        const auto f = value;
        for (std::size_t k = 0; k < 3; ++k) {
            vertex[k] = v[idx[k]];
            value[k] = f[idx[k]];
        }
    };

    while (true) {
        order();
        const double diameter =
            std::max(distance(vertex[0], vertex[1]), distance(vertex[0], vertex[2]));
        if (diameter < tolerance) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= max_evaluations) {
            break;
        }
        const Point2 centroid = affine(vertex[0], vertex[1], 0.5);
        const Point2 reflected = affine(vertex[2], centroid, 2.0);
        const double f_reflected = eval(reflected);
        if (f_reflected < value[0]) {
            const Point2 expanded = affine(vertex[2], centroid, 3.0);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                vertex[2] = expanded;
                value[2] = f_expanded;
            } else {
                vertex[2] = reflected;
                value[2] = f_reflected;
            }
            continue;
        }
        if (f_reflected < value[1]) {
            vertex[2] = reflected;
            value[2] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < value[2];
        const Point2 contracted =
            outside ? affine(centroid, reflected, 0.5) : affine(centroid, vertex[2], 0.5);
        const double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : value[2])) {
            vertex[2] = contracted;
            value[2] = f_contracted;
            continue;
        }
        for (std::size_t k = 1; k < 3; ++k) {
            vertex[k] = affine(vertex[0], vertex[k], 0.5);
            value[k] = eval(vertex[k]);
        }
    }
    order();
    result.point = vertex[0];
    result.value = value[0];
    return result;
}

} // namespace pbq
