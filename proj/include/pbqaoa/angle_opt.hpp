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
#include <numbers>
#include <span>
#include <vector>

#include "pbqaoa/problem.hpp"
#include "pbqaoa/qaoa.hpp"

namespace pbq {

inline constexpr double kDefaultLambda = -std::numbers::pi / 2.0;

struct OptOptions {
    std::size_t grid_gamma = 32;
    std::size_t grid_theta = 32;
    /// Nelder-Mead stops once the simplex diameter drops below this.
    double tolerance = 1e-6;
    std::size_t max_evaluations = 2000;
};

struct OptResult {
    double gamma_opt = 0.0;
    double theta_opt = 0.0;
    double energy_opt = 0.0;
    /// Energy at the best grid point, evaluated directly; energy_opt never exceeds it.
    double grid_energy = 0.0;
    double gamma_max = 0.0;
    /// Number of statevector preparations (grid plus refinement).
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Upper end of the gamma grid: 4 / (sigma sqrt(2M/N)). Problems without
/// couplings fall back to 4 / rms(local field).
double gamma_grid_max(const IsingProblem &problem);

/// <E>(theta) at fixed (gamma, lambda) is a trigonometric polynomial of degree
/// two, because the rotated sigma^z is cos(theta) sigma^z + sin(theta) sigma^x
/// and E is at most quadratic in sigma^z. Five samples fix it exactly.
class ThetaProfile {
  public:
    ThetaProfile(CircuitEvaluator &evaluator, double gamma, double lambda);

    [[nodiscard]] double operator()(double theta) const;

  private:
    // a0, a1, b1, a2, b2 of a0 + a1 cos t + b1 sin t + a2 cos 2t + b2 sin 2t.
    std::array<double, 5> coeff_{};
};

/// Minimizes <E> over (gamma, theta) at fixed lambda: a grid over
/// gamma in (0, gamma_max] and theta in (0, pi), then Nelder-Mead from the
/// best grid point. Deterministic.
OptResult optimize_angles(const IsingProblem &problem, const Spectrum &spectrum,
                          double lambda = kDefaultLambda, const OptOptions &options = {});

enum class SweepVariable { Gamma, Theta };

struct SweepPoint {
    double angle = 0.0;
    double energy = 0.0;
    double beta = 0.0;
    double beta_stderr = 0.0;
    double fit_r2 = 0.0;
    double xi = 0.0;
};

/// Evenly spaced sweep values: gamma in (0, max_factor * gamma_opt] or
/// theta in (0, pi).
std::vector<double> sweep_grid(const OptResult &opt, SweepVariable variable,
                               std::size_t points, double max_factor = 4.0);

/// Varies one angle while the other stays at its optimum. Beta is fitted on
/// all 2^N points at every value, whatever the fit quality.
std::vector<SweepPoint> sweep(const IsingProblem &problem, const Spectrum &spectrum,
                              const OptResult &opt, SweepVariable variable,
                              std::span<const double> values, double lambda = kDefaultLambda);

} // namespace pbq
