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
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "pbqaoa/angle_opt.hpp"
#include "pbqaoa/interferometer.hpp"
#include "pbqaoa/random.hpp"
#include "pbqaoa/stats.hpp"

using namespace pbq;

namespace {

constexpr double kPi = std::numbers::pi;

IsingProblem random_problem(Family family, std::size_t n, std::uint64_t seed, double density = 0.9) {
    const Graph g = gen_gnm_graph(n, density, seed);
    return build_problem(family, g, {GraphKind::Gnm, density}, 1.0, seed);
}

double binomial(int n, int k) {
    double out = 1.0;
    for (int j = 1; j <= k; ++j) {
        out *= static_cast<double>(n - k + j) / j;
    }
    return out;
}

} // namespace

TEST_CASE("reparameterized angles") {
    CHECK(std::abs(ReparamAngles::from({0.1, kPi / 2.0, 0.3}).r) < 1e-15);
    CHECK(ReparamAngles::from({0.1, 0.5, 0.3}).r == doctest::Approx(-std::log(std::tan(0.25))));
    CHECK_THROWS_AS(ReparamAngles::from({0.1, 0.0, 0.3}), std::domain_error);
    CHECK_THROWS_AS(ReparamAngles::from({0.1, kPi, 0.3}), std::domain_error);
}

TEST_CASE("interference sum for one qubit") {
    Rng rng(4);
    for (int k = 0; k < 100; ++k) {
        const double delta = 0.1 + 2.0 * rng.uniform();
        const Spectrum s = Spectrum::from_energies(1, {-delta / 2.0, delta / 2.0});
        const double gamma = 3.0 * rng.uniform();
        const double theta = kPi * rng.uniform();
        for (double lambda : {-kPi / 2.0, kPi / 2.0}) {
            for (int spin : {-1, 1}) {
                const double p = std::norm(exact_amplitude(spin > 0 ? 1 : 0, s, {gamma, theta, lambda}));
                const double expected =
                    0.5 * (1.0 - spin * std::sin(theta) * std::cos(gamma * delta + lambda));
                CHECK(std::abs(p - expected) < 1e-14);
            }
        }
        // Away from lambda = +-pi/2 the sum is not a normalized amplitude:
        // the total is 1 + sin(theta) cos(lambda) cos(gamma delta).
        const double lambda = 2.0 * kPi * rng.uniform();
        const double total = std::norm(exact_amplitude(0, s, {gamma, theta, lambda})) +
                             std::norm(exact_amplitude(1, s, {gamma, theta, lambda}));
        CHECK(total == doctest::Approx(1.0 + std::sin(theta) * std::cos(lambda) *
                                                 std::cos(gamma * delta))
                           .epsilon(1e-12));
    }
}

TEST_CASE("identity phase and quarter rotation") {
    const IsingProblem p = random_problem(Family::QUBO, 6, 3);
    const Spectrum s = full_spectrum(p);
    // The statevector concentrates on x = 0 at gamma = 0, theta = pi/2, lambda = 0.
    const auto prob = probabilities(prepare_state(p, s, {0.0, kPi / 2.0, 0.0}));
    CHECK(prob[0] == doctest::Approx(1.0).epsilon(1e-12));
    // The interference sum reproduces the statevector at lambda = -pi/2.
    const auto direct = exact_amplitudes(s, {0.0, kPi / 2.0, -kPi / 2.0});
    const auto sv = probabilities(prepare_state(p, s, {0.0, kPi / 2.0, -kPi / 2.0}));
    for (std::size_t x = 0; x < sv.size(); ++x) {
        CHECK(std::abs(std::norm(direct[x]) - sv[x]) < 1e-12);
    }
}

TEST_CASE("interference sum equals the statevector") {
    Rng rng(12);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 3 + seed;
        const IsingProblem p = random_problem(seed % 2 ? Family::QUBO : Family::RandomIsing, n, seed);
        const Spectrum s = full_spectrum(p);
        for (int k = 0; k < 5; ++k) {
            const double lambda = rng.uniform() < 0.5 ? -kPi / 2.0 : kPi / 2.0;
            const CircuitParams params{rng.uniform(), kPi * rng.uniform(), lambda};
            const auto amps = exact_amplitudes(s, params);
            const auto sv = probabilities(prepare_state(p, s, params));
            for (std::size_t x = 0; x < sv.size(); ++x) {
                CHECK(std::abs(std::norm(amps[x]) - sv[x]) < 1e-10);
            }
            const std::uint64_t x = rng.below(s.size());
            CHECK(std::abs(exact_amplitude(x, s, params) - amps[x]) < 1e-13);
        }
    }
    // Optimal angles on an N = 8 QUBO instance.
    const IsingProblem p = random_problem(Family::QUBO, 8, 21);
    const Spectrum s = full_spectrum(p);
    const OptResult opt = optimize_angles(p, s);
    const CircuitParams params{opt.gamma_opt, opt.theta_opt, kDefaultLambda};
    const auto amps = exact_amplitudes(s, params);
    const auto sv = probabilities(prepare_state(p, s, params));
    double worst = 0.0;
    for (std::size_t x = 0; x < sv.size(); ++x) {
        worst = std::max(worst, std::abs(std::norm(amps[x]) - sv[x]));
    }
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(exact_amplitude(0, Spectrum::from_energies(17, std::vector<double>(1 << 17)),
                                    params),
                    ResourceError);
}

TEST_CASE("joint distribution") {
    const IsingProblem p = random_problem(Family::MaxCut, 9, 5);
    const Spectrum s = full_spectrum(p);
    const std::size_t n = 9;
    const double unit = 1.0 / 512.0;
    for (std::uint64_t x : {std::uint64_t{0}, std::uint64_t{77}, s.ground_index}) {
        const auto points = joint_distribution(x, s);
        double total = 0.0;
        std::vector<double> marginal(n + 1, 0.0);
        double at_origin = 0.0;
        double at_far = 0.0;
        for (const JointPoint &pt : points) {
            total += pt.weight;
            marginal[pt.hamming] += pt.weight;
            if (pt.hamming == 0 && pt.energy == s.energies[x]) {
                at_origin += pt.weight;
            }
            if (pt.hamming == static_cast<int>(n) && std::abs(pt.energy - s.energies[x]) < 1e-12) {
                at_far += pt.weight;
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t h = 0; h <= n; ++h) {
            CHECK(marginal[h] == doctest::Approx(binomial(9, static_cast<int>(h)) * unit).epsilon(1e-14));
        }
        CHECK(at_origin == doctest::Approx(unit));
        // The complement sits at full distance with equal energy.
        CHECK(at_far == doctest::Approx(unit));
        CHECK(std::is_sorted(points.begin(), points.end(), [](const JointPoint &a, const JointPoint &b) {
            return a.hamming != b.hamming ? a.hamming < b.hamming : a.energy < b.energy;
        }));
    }
}

TEST_CASE("full-distribution moments") {
    const IsingProblem p = random_problem(Family::QUBO, 10, 8);
    const Spectrum s = full_spectrum(p);
    for (std::uint64_t x : {std::uint64_t{0}, std::uint64_t{300}, s.ground_index}) {
        const JointMoments m = joint_moments(x, s);
        CHECK(m.hierarchy == Hierarchy::Single);
        CHECK(m.mu_H == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(m.sigma_H == doctest::Approx(std::sqrt(10.0) / 2.0).epsilon(1e-14));
        CHECK(std::abs(m.mu_E) < 1e-12);
        CHECK(std::abs(m.rho) <= 1.0);
        const oracle::Moments ref = oracle::moments(s.energies, x);
        CHECK(m.sigma_EH == doctest::Approx(ref.sigma_eh).epsilon(1e-12));
    }
}

TEST_CASE("covariance signs at the extremes") {
    int good = 0;
    const int trials = 40;
    for (int seed = 0; seed < trials; ++seed) {
        const IsingProblem p = random_problem(Family::QUBO, 12, 100 + seed);
        const Spectrum s = full_spectrum(p);
        std::uint64_t top = 0;
        for (std::uint64_t x = 0; x < s.size(); ++x) {
            if (s.energies[x] > s.energies[top]) {
                top = x;
            }
        }
        if (joint_moments(s.ground_index, s).sigma_EH > 0.0 && joint_moments(top, s).sigma_EH < 0.0) {
            ++good;
        }
    }
    CHECK(good >= 0.95 * trials);
}

TEST_CASE("fast covariance equals brute force") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 4 + seed;
        const IsingProblem p = random_problem(seed % 2 ? Family::QUBO : Family::RandomIsing, n, seed);
        const Spectrum s = full_spectrum(p);
        const auto fast = covariance_all(s, false);
        for (std::uint64_t x = 0; x < s.size(); ++x) {
            CHECK(std::abs(fast[x] - oracle::moments(s.energies, x).sigma_eh) < 1e-9);
        }
    }
    const Spectrum flat = Spectrum::from_energies(6, std::vector<double>(64, 2.5));
    for (double v : covariance_all(flat, false)) {
        CHECK(std::abs(v) < 1e-12);
    }
    for (double v : covariance_all(flat, true)) {
        CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("split covariance equals the direct hierarchy loops") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const std::size_t n = 5 + 2 * seed;
        const IsingProblem p = random_problem(Family::MaxCut, n, seed);
        const Spectrum s = full_spectrum(p);
        const SplitCovariance split = covariance_split(s);
        const auto fast_plus = covariance_all(s, true);
        const double half = n / 2.0;
        for (std::uint64_t x = 0; x < s.size(); x += 3) {
            const auto plus = oracle::moments(s.energies, x, [&](int h) { return h <= half; });
            const auto minus = oracle::moments(s.energies, x, [&](int h) { return h > half; });
            CHECK(std::abs(split.plus[x] - plus.sigma_eh) < 1e-9);
            CHECK(std::abs(split.minus[x] - minus.sigma_eh) < 1e-9);
            CHECK(fast_plus[x] == split.plus[x]);
            CHECK(split.h0[x] == doctest::Approx(half - plus.mu_h).epsilon(1e-12));
            const HierarchyMoments hm = split_moments(x, s);
            CHECK(hm.plus.sigma_EH == doctest::Approx(split.plus[x]).epsilon(1e-9));
            CHECK(hm.minus.sigma_EH == doctest::Approx(split.minus[x]).epsilon(1e-9));
            CHECK(hm.plus.h0 == doctest::Approx(split.h0[x]).epsilon(1e-12));
            CHECK(hm.plus.hierarchy == Hierarchy::Plus);
            CHECK(hm.minus.hierarchy == Hierarchy::Minus);
        }
    }
}

TEST_CASE("unsplit covariance vanishes with flip symmetry") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const IsingProblem p = random_problem(Family::MaxCut, 11, seed);
        const Spectrum s = full_spectrum(p);
        for (double v : covariance_all(s, false)) {
            CHECK(std::abs(v) < 1e-9);
        }
    }
}

TEST_CASE("shuffled spectra have no mean covariance") {
    const IsingProblem p = random_problem(Family::QUBO, 12, 4);
    Spectrum s = full_spectrum(p);
    Rng rng(6);
    std::vector<double> e = s.energies;
    rng.shuffle(std::span<double>(e));
    const Spectrum shuffled = Spectrum::from_energies(12, e);
    const auto sigma = covariance_all(shuffled, false);
    const double se = stddev(sigma) / std::sqrt(static_cast<double>(sigma.size()));
    CHECK(std::abs(mean(sigma)) < 5.0 * se);
}

TEST_CASE("covariance law on exact input") {
    const Spectrum s = Spectrum::from_energies(3, {-3, -1, 0, 0.5, 1, 2, 4, 7});
    std::vector<double> sigma;
    for (double e : s.energies) {
        sigma.push_back(-0.1 * e);
    }
    const CovarianceLaw law = fit_covariance_law(sigma, s, {0.2, 1.0, -kPi / 2.0});
    CHECK(law.c == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(law.omega_std < 1e-12);
    CHECK(law.beta_predicted == doctest::Approx(0.02 * kPi).epsilon(1e-12));
    CHECK(law.correlation == doctest::Approx(-1.0).epsilon(1e-12));
    const Spectrum flat = Spectrum::from_energies(2, {1, 1, 1, 1});
    CHECK_THROWS_AS(fit_covariance_law(std::vector<double>{0, 1, 2, 3}, flat, {}), std::invalid_argument);
}

TEST_CASE("non-degenerate predictor") {
    JointMoments a;
    a.sigma_E = 2.0;
    a.sigma_H = 1.5;
    a.mu_H = 4.0;
    a.rho = 0.0;
    const ReparamAngles angles{0.3, -kPi / 2.0, 0.2};
    JointMoments b = a;
    b.mu_E = 0.4;
    CHECK(predict_logprob_nondegenerate(a, angles) == predict_logprob_nondegenerate(b, angles));

    const double delta = 0.37;
    JointMoments c = a;
    c.rho = 0.1;
    c.sigma_EH = c.rho * c.sigma_E * c.sigma_H;
    JointMoments d = a;
    d.sigma_EH = c.sigma_EH + delta;
    d.rho = d.sigma_EH / (d.sigma_E * d.sigma_H);
    CHECK(predict_logprob_nondegenerate(d, angles) - predict_logprob_nondegenerate(c, angles) ==
          doctest::Approx(-2.0 * angles.gamma * angles.lambda * delta).epsilon(1e-12));

    const ReparamAngles flat{0.0, -kPi / 2.0, 0.2};
    CHECK(predict_logprob_nondegenerate(c, flat) ==
          doctest::Approx(-0.04 * 4.0 - kPi * kPi / 4.0 * 2.25 -
                          2.0 * 0.2 * (-kPi / 2.0) * 0.1 * 3.0)
              .epsilon(1e-12));
}

TEST_CASE("degenerate predictor reduces to the single form") {
    JointMoments plus;
    plus.sigma_E = 1.7;
    plus.sigma_H = 1.2;
    plus.mu_H = 3.0;
    plus.h0 = 0.0;
    plus.hierarchy = Hierarchy::Plus;
    JointMoments minus = plus;
    minus.hierarchy = Hierarchy::Minus;
    const ReparamAngles angles{0.4, -kPi / 2.0, 0.3};
    const DegeneratePrediction pred = predict_logprob_degenerate(plus, minus, angles);
    JointMoments single = plus;
    single.rho = 0.0;
    CHECK(pred.log_full ==
          doctest::Approx(predict_logprob_nondegenerate(single, angles) + std::log(2.0)).epsilon(1e-12));
    CHECK(pred.y_approx == doctest::Approx(predict_logprob_nondegenerate(single, angles)).epsilon(1e-12));
}

TEST_CASE("degenerate predictor on MaxCut at optimal angles") {
    SUBCASE("dominant form tracks the full form at N = 14") {
        const IsingProblem p = random_problem(Family::MaxCut, 14, 31);
        const Spectrum s = full_spectrum(p);
        const OptResult opt = optimize_angles(p, s);
        const ReparamAngles angles = ReparamAngles::from({opt.gamma_opt, opt.theta_opt, kDefaultLambda});
        std::vector<double> rel;
        for (std::uint64_t x = 0; x < s.size(); x += 7) {
            const HierarchyMoments hm = split_moments(x, s);
            const DegeneratePrediction pred = predict_logprob_degenerate(hm.plus, hm.minus, angles);
            rel.push_back(std::abs(pred.log_full - pred.log_dominant) / std::abs(pred.log_full));
        }
        CHECK(median(rel) < 0.05);
    }
    SUBCASE("prediction ranks configurations like the exact state at N = 12") {
        const IsingProblem p = random_problem(Family::MaxCut, 12, 32);
        const Spectrum s = full_spectrum(p);
        const OptResult opt = optimize_angles(p, s);
        const CircuitParams params{opt.gamma_opt, opt.theta_opt, kDefaultLambda};
        const ReparamAngles angles = ReparamAngles::from(params);
        const auto exact = probabilities(prepare_state(p, s, params));
        std::vector<double> predicted;
        for (std::uint64_t x = 0; x < s.size(); ++x) {
            const HierarchyMoments hm = split_moments(x, s);
            predicted.push_back(predict_logprob_degenerate(hm.plus, hm.minus, angles).log_full);
        }
        CHECK(spearman(predicted, exact) >= 0.8);
    }
}

TEST_CASE("covariance caps") {
    const Spectrum big = Spectrum::from_energies(21, std::vector<double>(std::size_t{1} << 21, 0.0));
    CHECK_THROWS_AS(covariance_all(big, false), ResourceError);
    CHECK_THROWS_AS(covariance_split(big), ResourceError);
}
