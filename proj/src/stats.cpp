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
#include "pbqaoa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pbq {

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 16;
    if (values.size() <= kLeaf) {
        double total = 0.0;
        for (double v : values) {
            total += v;
        }
        return total;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of empty range");
    }
    return pairwise_sum(values) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of empty range");
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double geometric_mean(std::span<const double> values) {
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
        logs.push_back(std::log(v));
    }
    return std::exp(mean(logs));
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("linear_fit: x and y differ in length");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw std::invalid_argument("linear_fit: need at least 3 points");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = x[k] - mx;
        const double dy = y[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("linear_fit: x has zero variance");
    }
    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (fit.intercept + fit.slope * x[k]);
        ss_res += r * r;
    }
    fit.residual_std = std::sqrt(ss_res / static_cast<double>(n - 2));
    fit.slope_stderr = fit.residual_std / std::sqrt(sxx);
    if (syy > 0.0) {
        fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
        fit.correlation = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    } else {
        fit.r2 = 1.0;
        fit.correlation = 0.0;
    }
    return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> out(values.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k + 1;
        while (end < order.size() && values[order[end]] == values[order[k]]) {
            ++end;
        }
        const double rank = 0.5 * static_cast<double>(k + end - 1);
        for (std::size_t m = k; m < end; ++m) {
            out[order[m]] = rank;
        }
        k = end;
    }
    return out;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return linear_fit(rx, ry).correlation;
}

} // namespace pbq
