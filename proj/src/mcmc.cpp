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
#include "pbqaoa/mcmc.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pbqaoa/random.hpp"
#include "pbqaoa/stats.hpp"

namespace pbq {

namespace {

double spin(std::uint64_t x, std::size_t i) { return ((x >> i) & 1U) != 0 ? 1.0 : -1.0; }

double lag_one_autocorrelation(const std::vector<double> &values) {
    if (values.size() < 3) {
        return 0.0;
    }
    const double m = mean(values);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        const double d = values[t] - m;
        den += d * d;
        if (t + 1 < values.size()) {
            num += d * (values[t + 1] - m);
        }
    }
    return den > 0.0 ? num / den : 0.0;
}

} // namespace

double acceptance_probability(double beta, double delta) {
    const double exponent = -beta * delta;
    return exponent >= 0.0 ? 1.0 : std::exp(exponent);
}

double flip_delta(const IsingProblem &problem, std::uint64_t x, std::size_t i) {
    double field = problem.fields()[i];
    for (const auto &[j, coupling] : problem.neighbours(i)) {
        field += coupling * spin(x, j);
    }
    return -2.0 * spin(x, i) * field;
}

MetropolisResult metropolis_sample(const IsingProblem &problem, double beta, std::size_t n_sweeps,
                                   std::size_t burn_in, std::uint64_t seed) {
    if (beta < 0.0 || std::isnan(beta)) {
        throw std::invalid_argument("metropolis_sample: beta must be >= 0");
    }
    if (n_sweeps == 0) {
        throw std::invalid_argument("metropolis_sample: need at least one sweep");
    }
    const std::size_t n = problem.n();
    if (n == 0 || n > 64) {
        throw std::invalid_argument("metropolis_sample: N must lie in [1, 64]");
    }
    Rng rng(seed);
    std::uint64_t x = n == 64 ? rng.next() : rng.next() & ((std::uint64_t{1} << n) - 1);

    // Local fields f_i = h_i + sum_j J_ij s_j, kept in sync with x.
    std::vector<double> field(problem.fields());
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto &[j, coupling] : problem.neighbours(i)) {
            field[i] += coupling * spin(x, j);
        }
    }
    double energy = problem.energy(x);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    MetropolisResult out;
    out.samples.reserve(n_sweeps);
    out.energies.reserve(n_sweeps);
    std::size_t accepted = 0;
    const std::size_t total = burn_in + n_sweeps;
    for (std::size_t sweep = 0; sweep < total; ++sweep) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t i : order) {
            const double s = spin(x, i);
            const double delta = -2.0 * s * field[i];
            if (delta <= 0.0 || rng.uniform() < acceptance_probability(beta, delta)) {
                x ^= std::uint64_t{1} << i;
                energy += delta;
                ++accepted;
                for (const auto &[j, coupling] : problem.neighbours(i)) {
                    field[j] -= 2.0 * coupling * s;
                }
            }
        }
        if (sweep >= burn_in) {
            out.samples.push_back(x);
            out.energies.push_back(energy);
        }
    }
    out.acceptance_rate =
        static_cast<double>(accepted) / (static_cast<double>(total) * static_cast<double>(n));
    out.energy_autocorrelation = lag_one_autocorrelation(out.energies);
    return out;
}

MixingComparison compare(double norm_J, double beta_qaoa) {
    if (!(norm_J > 0.0)) {
        throw std::invalid_argument("compare: operator norm must be positive");
    }
    MixingComparison out;
    out.norm_J = norm_J;
    out.beta_mcmc_threshold = 1.0 / norm_J;
    out.beta_qaoa = beta_qaoa;
    out.product = beta_qaoa * norm_J;
    out.above_threshold = out.product > 1.0;
    return out;
}

MixingComparison compare(const IsingProblem &problem, double beta_qaoa) {
    return compare(operator_norm(problem), beta_qaoa);
}

} // namespace pbq
