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
#include "pbqaoa/angle_opt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pbqaoa/nelder_mead.hpp"
#include "pbqaoa/thermo.hpp"

namespace pbq {

double gamma_grid_max(const IsingProblem &problem) {
    const double n = static_cast<double>(problem.n());
    const double edges = static_cast<double>(problem.edges().size());
    if (edges > 0.0) {
        return 4.0 / (std::sqrt(problem.sigma2()) * std::sqrt(2.0 * edges / n));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < problem.n(); ++i) {
        total += problem.fields()[i] * problem.fields()[i];
    }
    const double rms = std::sqrt(total / n);
    if (!(rms > 0.0)) {
        throw std::invalid_argument("gamma_grid_max: problem has no nonzero coefficient");
    }
    return 4.0 / rms;
}

ThetaProfile::ThetaProfile(CircuitEvaluator &evaluator, double gamma, double lambda) {
    constexpr int kSamples = 5;
    for (int m = 0; m < kSamples; ++m) {
        const double t = 2.0 * std::numbers::pi * m / kSamples;
        const double f = evaluator.energy({gamma, t, lambda});
        coeff_[0] += f / kSamples;
        coeff_[1] += 2.0 * f * std::cos(t) / kSamples;
        coeff_[2] += 2.0 * f * std::sin(t) / kSamples;
        coeff_[3] += 2.0 * f * std::cos(2.0 * t) / kSamples;
        coeff_[4] += 2.0 * f * std::sin(2.0 * t) / kSamples;
    }
}

double ThetaProfile::operator()(double theta) const {
    return coeff_[0] + coeff_[1] * std::cos(theta) + coeff_[2] * std::sin(theta) +
           coeff_[3] * std::cos(2.0 * theta) + coeff_[4] * std::sin(2.0 * theta);
}

OptResult optimize_angles(const IsingProblem &problem, const Spectrum &spectrum, double lambda,
                          const OptOptions &options) {
    if (problem.n() != spectrum.n) {
        throw std::invalid_argument("optimize_angles: spectrum does not match problem");
    }
    if (options.grid_gamma == 0 || options.grid_theta == 0) {
        throw std::invalid_argument("optimize_angles: empty grid");
    }
    CircuitEvaluator evaluator(spectrum);
    OptResult out;
    out.gamma_max = gamma_grid_max(problem);

    const double gamma_step = out.gamma_max / static_cast<double>(options.grid_gamma);
    const double theta_step = std::numbers::pi / static_cast<double>(options.grid_theta + 1);
    double best = std::numeric_limits<double>::infinity();
    Point2 start{gamma_step, theta_step};
    std::size_t evaluations = 0;
    for (std::size_t k = 1; k <= options.grid_gamma; ++k) {
        const double gamma = gamma_step * static_cast<double>(k);
        const ThetaProfile profile(evaluator, gamma, lambda);
        evaluations += 5;
        for (std::size_t j = 1; j <= options.grid_theta; ++j) {
            const double theta = theta_step * static_cast<double>(j);
            const double e = profile(theta);
            if (e < best) {
                best = e;
                start = {gamma, theta};
            }
        }
    }

    auto objective = [&](const Point2 &p) {
        if (!(p[0] > 0.0) || !(p[1] > 0.0) || !(p[1] < std::numbers::pi)) {
            return std::numeric_limits<double>::infinity();
        }
        return evaluator.energy({p[0], p[1], lambda});
    };
    const NelderMeadResult nm = nelder_mead(objective, start, {0.5 * gamma_step, 0.5 * theta_step},
                                            options.tolerance, options.max_evaluations);
    // The first objective call is the grid optimum itself.
    out.grid_energy = objective(start);
    out.gamma_opt = nm.point[0];
    out.theta_opt = nm.point[1];
    out.energy_opt = nm.value;
    out.evaluations = evaluations + nm.evaluations + 1;
    out.converged = nm.converged;
    return out;
}

std::vector<double> sweep_grid(const OptResult &opt, SweepVariable variable, std::size_t points,
                               double max_factor) {
    if (points == 0) {
        throw std::invalid_argument("sweep_grid: need at least one point");
    }
    std::vector<double> values(points);
    const double upper = variable == SweepVariable::Gamma ? max_factor * opt.gamma_opt
                                                          : std::numbers::pi;
    const double denominator =
        variable == SweepVariable::Gamma ? static_cast<double>(points)
                                         : static_cast<double>(points + 1);
    for (std::size_t k = 0; k < points; ++k) {
        values[k] = upper * static_cast<double>(k + 1) / denominator;
    }
    return values;
}

std::vector<SweepPoint> sweep(const IsingProblem &problem, const Spectrum &spectrum,
                              const OptResult &opt, SweepVariable variable,
                              std::span<const double> values, double lambda) {
    std::vector<SweepPoint> curve;
    curve.reserve(values.size());
    for (double value : values) {
        CircuitParams params{opt.gamma_opt, opt.theta_opt, lambda};
        if (variable == SweepVariable::Gamma) {
            params.gamma = value;
        } else {
            params.theta = value;
        }
        const QuantumState state = prepare_state(problem, spectrum, params);
        const std::vector<double> p = probabilities(state);
        const BoltzmannFit fit = fit_instance(p, spectrum);
        SweepPoint point;
        point.angle = value;
        point.energy = expectation_energy(state, spectrum);
        point.beta = fit.beta;
        point.beta_stderr = fit.beta_stderr;
        point.fit_r2 = fit.r2;
        point.xi = ground_state_enhancement(state, spectrum).xi;
        curve.push_back(point);
    }
    return curve;
}

} // namespace pbq
