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
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "pbqaoa/qaoa.hpp"
#include "pbqaoa/random.hpp"

using namespace pbq;

namespace {

constexpr double kPi = std::numbers::pi;

IsingProblem single_spin(double delta) {
    return IsingProblem(1, {0.0}, {delta / 2.0}, Family::RandomIsing, {GraphKind::Gnm, 0.0}, 1.0, 0);
}

IsingProblem random_problem(Family family, std::size_t n, std::uint64_t seed) {
    const Graph g = gen_gnm_graph(n, 0.8, seed);
    return build_problem(family, g, {GraphKind::Gnm, 0.8}, 1.0, seed);
}

} // namespace

TEST_CASE("identity angles leave the uniform superposition") {
    const IsingProblem p = random_problem(Family::QUBO, 7, 1);
    const Spectrum s = full_spectrum(p);
    for (double lambda : {-1.0, 0.0, 2.5}) {
        const std::vector<double> prob = probabilities(prepare_state(p, s, {0.0, 0.0, lambda}));
        for (double v : prob) {
            CHECK(v == doctest::Approx(1.0 / 128.0).epsilon(1e-12));
        }
        const QuantumState uniform = prepare_state(p, s, {0.0, 0.0, lambda});
        CHECK(ground_state_enhancement(uniform, s).xi == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single qubit closed form") {
    Rng rng(17);
    for (int k = 0; k < 200; ++k) {
        const double delta = 0.2 + 3.0 * rng.uniform();
        const double gamma = 4.0 * rng.uniform();
        const double theta = kPi * rng.uniform();
        const double lambda = 2.0 * kPi * (rng.uniform() - 0.5);
        const IsingProblem p = single_spin(delta);
        const Spectrum s = full_spectrum(p);
        const std::vector<double> prob = probabilities(prepare_state(p, s, {gamma, theta, lambda}));
        // Index 1 is spin up (s = +1, energy +delta/2).
        for (int spin : {-1, 1}) {
            const double expected =
                0.5 * (1.0 - spin * std::sin(theta) * std::cos(gamma * delta + lambda));
            CHECK(std::abs(prob[spin > 0 ? 1 : 0] - expected) < 1e-12);
        }
    }
}

TEST_CASE("single qubit optimum") {
    const double delta = 1.3;
    const IsingProblem p = single_spin(delta);
    const Spectrum s = full_spectrum(p);
    const QuantumState st = prepare_state(p, s, {kPi / (2.0 * delta), kPi / 2.0, -kPi / 2.0});
    const std::vector<double> prob = probabilities(st);
    CHECK(prob[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(prob[1]) < 1e-14);
    CHECK(expectation_energy(st, s) == doctest::Approx(-delta / 2.0).epsilon(1e-14));
    CHECK(ground_state_enhancement(st, s).xi == doctest::Approx(2.0).epsilon(1e-14));
    // The opposite phase amplifies the excited state.
    const std::vector<double> flipped =
        probabilities(prepare_state(p, s, {kPi / (2.0 * delta), kPi / 2.0, kPi / 2.0}));
    CHECK(flipped[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fused preparation matches the gate-by-gate circuit") {
    Rng rng(3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 2 + seed % 8;
        const IsingProblem p = random_problem(seed % 2 ? Family::QUBO : Family::RandomIsing, n, seed);
        const Spectrum s = full_spectrum(p);
        for (int k = 0; k < 4; ++k) {
            const CircuitParams params{rng.uniform(), kPi * rng.uniform(), 4.0 * rng.uniform() - 2.0};
            const QuantumState fused = prepare_state(p, s, params);
            const auto ref = oracle::circuit(s.energies, n, params.gamma, params.theta, params.lambda);
            for (std::size_t x = 0; x < ref.size(); ++x) {
                CHECK(std::abs(fused.amplitudes[x] - ref[x]) < 1e-12);
            }
        }
    }
}

TEST_CASE("norm is preserved up to 20 qubits") {
    Rng rng(8);
    for (std::size_t n : {1, 5, 12, 20}) {
        const IsingProblem p = random_problem(Family::RandomIsing, n == 1 ? 2 : n, n);
        const Spectrum s = full_spectrum(p);
        const QuantumState st = prepare_state(p, s, {rng.uniform(), kPi * rng.uniform(), rng.normal()});
        CHECK(std::abs(st.norm_squared() - 1.0) < 1e-10);
        double total = 0.0;
        for (double v : probabilities(st)) {
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-10);
        const Enhancement e = ground_state_enhancement(st, s);
        CHECK(e.xi >= 0.0);
        CHECK(e.xi <= static_cast<double>(s.size()));
    }
}

TEST_CASE("expectation values") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const IsingProblem maxcut = random_problem(Family::MaxCut, 10, seed);
        const Spectrum s = full_spectrum(maxcut);
        double brute = 0.0;
        for (double e : s.energies) {
            brute += e;
        }
        CHECK(std::abs(brute) < 1e-9);
        const QuantumState uniform = prepare_state(maxcut, s, {0.0, 0.0, 0.0});
        CHECK(std::abs(expectation_energy(uniform, s)) < 1e-12);
    }
    // At gamma = 0 and lambda = +-pi/2 every qubit has zero magnetization and
    // the state is a product, so <E> is the spectrum mean for any theta.
    const IsingProblem p = random_problem(Family::QUBO, 8, 5);
    const Spectrum s = full_spectrum(p);
    double mean = 0.0;
    for (double e : s.energies) {
        mean += e / static_cast<double>(s.size());
    }
    for (double theta : {0.3, 1.2, 2.9}) {
        for (double lambda : {-kPi / 2.0, kPi / 2.0}) {
            CHECK(expectation_energy(prepare_state(p, s, {0.0, theta, lambda}), s) ==
                  doctest::Approx(mean).epsilon(1e-12));
        }
    }
    CircuitEvaluator evaluator(s);
    const CircuitParams params{0.4, 1.1, -kPi / 2.0};
    CHECK(evaluator.energy(params) ==
          doctest::Approx(expectation_energy(prepare_state(p, s, params), s)).epsilon(1e-13));
}

TEST_CASE("lambda sign flip reflects the spectrum for h = 0") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const IsingProblem p = random_problem(Family::MaxCut, 9, seed);
        const IsingProblem q = p.scaled(-1.0);
        const Spectrum sp = full_spectrum(p);
        const Spectrum sq = full_spectrum(q);
        const auto a = probabilities(prepare_state(p, sp, {0.3, 0.9, kPi / 2.0}));
        const auto b = probabilities(prepare_state(q, sq, {0.3, 0.9, -kPi / 2.0}));
        for (std::size_t x = 0; x < a.size(); ++x) {
            CHECK(std::abs(a[x] - b[x]) < 1e-10);
        }
    }
}

TEST_CASE("degenerate ground states") {
    const IsingProblem p = random_problem(Family::MaxCut, 8, 2);
    const Spectrum s = full_spectrum(p);
    const QuantumState st = prepare_state(p, s, {0.3, 0.8, -kPi / 2.0});
    const auto prob = probabilities(st);
    const Enhancement e = ground_state_enhancement(st, s);
    const std::uint64_t partner = ~s.ground_index & (s.size() - 1);
    CHECK(e.xi == doctest::Approx(prob[s.ground_index] * 256.0));
    CHECK(e.xi_degenerate == doctest::Approx((prob[s.ground_index] + prob[partner]) * 256.0));
}

TEST_CASE("size mismatch is rejected") {
    const IsingProblem a = random_problem(Family::QUBO, 5, 1);
    const IsingProblem b = random_problem(Family::QUBO, 6, 1);
    CHECK_THROWS_AS(prepare_state(a, full_spectrum(b), {0.1, 0.1, 0.1}), std::invalid_argument);
}
