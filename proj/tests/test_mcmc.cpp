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
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pbqaoa/mcmc.hpp"
#include "pbqaoa/random.hpp"
#include "pbqaoa/stats.hpp"

using namespace pbq;

namespace {

IsingProblem ising(std::size_t n, std::uint64_t seed, double density = 0.6) {
    const Graph g = gen_gnm_graph(n, density, derive_seed(seed, {1}));
    return build_problem(Family::RandomIsing, g, {GraphKind::Gnm, density}, 1.0, seed);
}

// Standard error of the mean from 50 batch means, to absorb chain correlation.
double batch_stderr(const std::vector<double> &values) {
    constexpr std::size_t kBatches = 50;
    const std::size_t size = values.size() / kBatches;
    std::vector<double> means(kBatches);
    for (std::size_t b = 0; b < kBatches; ++b) {
        double total = 0.0;
        for (std::size_t t = b * size; t < (b + 1) * size; ++t) {
            total += values[t];
        }
        means[b] = total / static_cast<double>(size);
    }
    return stddev(means) / std::sqrt(static_cast<double>(kBatches));
}

} // namespace

TEST_CASE("acceptance rule") {
    CHECK(acceptance_probability(1.0, -3.0) == 1.0);
    CHECK(acceptance_probability(0.0, 5.0) == 1.0);
    CHECK(acceptance_probability(0.5, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("detailed balance on every single-flip pair") {
    for (std::size_t n = 2; n <= 4; ++n) {
        const IsingProblem p = ising(n, 10 + n, 1.0);
        const std::vector<double> e = oracle::energies(p);
        for (double beta : {0.0, 0.3, 1.7}) {
            for (std::uint64_t x = 0; x < e.size(); ++x) {
                for (std::size_t i = 0; i < n; ++i) {
                    const std::uint64_t y = x ^ (std::uint64_t{1} << i);
                    const double forward = std::exp(-beta * e[x]) *
                                           acceptance_probability(beta, flip_delta(p, x, i)) / n;
                    const double backward = std::exp(-beta * e[y]) *
                                            acceptance_probability(beta, flip_delta(p, y, i)) / n;
                    CHECK(std::abs(forward - backward) <= 1e-12 * std::max(forward, backward));
                }
            }
        }
    }
}

TEST_CASE("incremental energy changes") {
    const IsingProblem p = ising(12, 3);
    Rng rng(3);
    std::uint64_t x = rng.next() & 0xFFF;
    for (int step = 0; step < 2000; ++step) {
        const std::size_t i = rng.below(12);
        const std::uint64_t y = x ^ (std::uint64_t{1} << i);
        CHECK(std::abs(flip_delta(p, x, i) - (oracle::energy(p, y) - oracle::energy(p, x))) < 1e-10);
        x = y;
    }
    const MetropolisResult chain = metropolis_sample(p, 0.8, 2000, 10, 4);
    for (std::size_t t = 0; t < chain.samples.size(); t += 97) {
        CHECK(std::abs(chain.energies[t] - p.energy(chain.samples[t])) < 1e-10);
    }
}

TEST_CASE("infinite temperature magnetizations") {
    const IsingProblem p = ising(10, 5);
    const MetropolisResult chain = metropolis_sample(p, 0.0, 20000, 0, 5);
    CHECK(chain.acceptance_rate == 1.0);
    for (std::size_t i = 0; i < 10; ++i) {
        std::vector<double> m;
        for (std::uint64_t x : chain.samples) {
            m.push_back(((x >> i) & 1U) != 0 ? 1.0 : -1.0);
        }
        const double se = std::max(batch_stderr(m), 1.0 / std::sqrt(static_cast<double>(m.size())));
        CHECK(std::abs(mean(m)) <= 5.0 * se);
    }
}

TEST_CASE("single spin ratio") {
    const double delta = 1.0;
    const double beta = 0.7;
    const IsingProblem p(1, {0.0}, {delta / 2.0}, Family::RandomIsing, {GraphKind::Gnm, 0.0}, 1.0, 0);
    const MetropolisResult chain = metropolis_sample(p, beta, 100000, 100, 6);
    std::vector<double> up;
    for (std::uint64_t x : chain.samples) {
        up.push_back(static_cast<double>(x & 1U));
    }
    const double f = mean(up);
    const double ratio = (1.0 - f) / f;
    const double se = batch_stderr(up) / (f * f);
    CHECK(std::abs(ratio - std::exp(beta * delta)) <= 3.0 * se);
}

TEST_CASE("total variation against exact weights") {
    const IsingProblem p = ising(8, 8);
    const double beta = 0.5 / oracle::jacobi_norm(p);
    const std::vector<double> exact = oracle::boltzmann(oracle::energies(p), beta);
    const MetropolisResult chain = metropolis_sample(p, beta, 100000, 1000, 8);
    std::vector<double> empirical(exact.size(), 0.0);
    for (std::uint64_t x : chain.samples) {
        empirical[x] += 1.0 / static_cast<double>(chain.samples.size());
    }
    double tv = 0.0;
    for (std::size_t x = 0; x < exact.size(); ++x) {
        tv += 0.5 * std::abs(empirical[x] - exact[x]);
    }
    MESSAGE("total variation " << tv);
    CHECK(tv < 0.05);
}

TEST_CASE("energy mean at small beta") {
    for (std::size_t n : {6, 10}) {
        const IsingProblem p = ising(n, 20 + n);
        const std::vector<double> e = oracle::energies(p);
        const double beta = 0.3 / oracle::jacobi_norm(p);
        const std::vector<double> w = oracle::boltzmann(e, beta);
        double exact = 0.0;
        for (std::size_t x = 0; x < e.size(); ++x) {
            exact += w[x] * e[x];
        }
        const MetropolisResult chain = metropolis_sample(p, beta, 50000, 500, 30 + n);
        CHECK(std::abs(mean(chain.energies) - exact) <= 5.0 * batch_stderr(chain.energies));
    }
}

TEST_CASE("chains are deterministic") {
    const IsingProblem p = ising(9, 2);
    const MetropolisResult a = metropolis_sample(p, 0.4, 500, 20, 99);
    const MetropolisResult b = metropolis_sample(p, 0.4, 500, 20, 99);
    CHECK(a.samples == b.samples);
    CHECK(a.samples.size() == 500);
    CHECK(a.acceptance_rate == b.acceptance_rate);
    CHECK_THROWS_AS(metropolis_sample(p, -1.0, 10, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(metropolis_sample(p, 1.0, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("mixing comparison") {
    const MixingComparison zero = compare(3.0, 0.0);
    CHECK(zero.product == 0.0);
    CHECK_FALSE(zero.above_threshold);
    CHECK(zero.beta_mcmc_threshold == doctest::Approx(1.0 / 3.0));
    const MixingComparison hot = compare(2.0, 0.75);
    CHECK(hot.product == doctest::Approx(1.5));
    CHECK(hot.above_threshold);
    CHECK_FALSE(compare(2.0, 0.5).above_threshold);
    CHECK_THROWS_AS(compare(0.0, 1.0), std::invalid_argument);
    const IsingProblem empty(3, std::vector<double>(9, 0.0), {1.0, 0.0, 0.0}, Family::RandomIsing,
                             {GraphKind::Gnm, 0.0}, 1.0, 0);
    CHECK_THROWS_AS(compare(empty, 1.0), std::invalid_argument);
}
