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

#include <cstdint>
#include <span>
#include <vector>

#include "pbqaoa/problem.hpp"
#include "pbqaoa/qaoa.hpp"

// The single-layer circuit read as an interferometer in energy space: every
// output amplitude is a sum over all configurations weighted by their Hamming
// distance to the output and their energy phase. The joint distribution of
// (Hamming distance, energy) seen from a reference configuration fixes the
// output probabilities, and its covariance sets the effective temperature.

namespace pbq {

/// Work caps for the O(4^N)-style routines.
inline constexpr std::size_t kMaxInterferenceSpins = 16;
inline constexpr std::size_t kMaxCovarianceSpins = 20;

/// theta rewritten as cos(theta/2) = R^{1/2} e^{r/2}, sin(theta/2) = R^{1/2} e^{-r/2}.
struct ReparamAngles {
    double r = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;

    /// r = -log(tan(theta/2)); requires theta in (0, pi).
    static ReparamAngles from(const CircuitParams &params);
};

enum class Hierarchy { Single, Plus, Minus };

/// Exact moments of the (H, E) distribution seen from one reference
/// configuration. Energies are centred on the spectrum mean.
struct JointMoments {
    double mu_E = 0.0;
    double sigma_E = 0.0;
    double mu_H = 0.0;
    double sigma_H = 0.0;
    double sigma_EH = 0.0;
    double rho = 0.0;
    Hierarchy hierarchy = Hierarchy::Single;
    /// N/2 - mu_H(Plus); zero for the single hierarchy.
    double h0 = 0.0;
};

struct HierarchyMoments {
    JointMoments plus;
    JointMoments minus;
};

struct JointPoint {
    int hamming = 0;
    double energy = 0.0;
    double weight = 0.0;
};

/// Linear law sigma_EH(x) ~ -c E_x + omega.
struct CovarianceLaw {
    double c = 0.0;
    double omega_std = 0.0;
    double fit_r2 = 0.0;
    double correlation = 0.0;
    /// -2 c gamma lambda.
    double beta_predicted = 0.0;
};

/// Interference sum
///   F(x) = 2^{-N/2} sum_{x'} cos(theta/2)^{N-H} [e^{-i lambda} sin(theta/2)]^H e^{-i gamma E_x'}
/// with H the Hamming distance between x and x'. For lambda = +-pi/2 this is
/// the circuit amplitude up to a global phase; elsewhere it is not normalized.
complex_t exact_amplitude(std::uint64_t x, const Spectrum &spectrum, const CircuitParams &params);

/// exact_amplitude for every x, O(4^N).
std::vector<complex_t> exact_amplitudes(const Spectrum &spectrum, const CircuitParams &params);

/// p(H, E; x) as merged weighted points sorted by (H, E); total weight 1.
std::vector<JointPoint> joint_distribution(std::uint64_t x, const Spectrum &spectrum);

/// Moments over the whole distribution (Single hierarchy).
JointMoments joint_moments(std::uint64_t x, const Spectrum &spectrum);

/// Moments of the two hierarchies, split at H = N/2 (ties go to Plus).
HierarchyMoments split_moments(std::uint64_t x, const Spectrum &spectrum);

/// sigma_EH(x) for every x. Without `degenerate`, uses
///   sum_x' H_xx' E_x' = sum_i [x_i (S - S_i) + (1 - x_i) S_i],
/// O(N 2^N). With `degenerate`, returns the Plus-hierarchy covariance.
std::vector<double> covariance_all(const Spectrum &spectrum, bool degenerate);

struct SplitCovariance {
    std::vector<double> plus;
    std::vector<double> minus;
    std::vector<double> h0;
};

/// Plus/Minus covariances and h0 for every x from Hamming-shell sums,
/// O(N^2 2^N) time and (N + 1) 2^N doubles of memory.
SplitCovariance covariance_split(const Spectrum &spectrum);

/// Least squares of sigma_EH against raw E_x; c is the negated slope.
CovarianceLaw fit_covariance_law(std::span<const double> sigma_EH, const Spectrum &spectrum,
                                 const CircuitParams &params);

/// Y = -gamma^2 sigma_E^2 + (r^2 - lambda^2) sigma_H^2 - 2 r mu_H - 2 gamma lambda rho sigma_E sigma_H.
double predict_logprob_nondegenerate(const JointMoments &moments, const ReparamAngles &angles);

struct DegeneratePrediction {
    /// Y' + log(cos[2 h0 lambda + r gamma (rho+ + rho-) sE sH] + cosh[2 h0 r - gamma lambda (rho+ + rho-) sE sH]).
    double log_full = 0.0;
    /// Same with the cosh replaced by its dominant exponential and cos dropped.
    double log_dominant = 0.0;
    /// Y with rho = rho+, the form left after x-independent constants are dropped.
    double y_approx = 0.0;
};

/// Two-hierarchy prediction. sigma_E and sigma_H are shared by both
/// hierarchies (their average), mu_H is N/2 and rho+- = sigma_EH+- / (sE sH).
DegeneratePrediction predict_logprob_degenerate(const JointMoments &plus, const JointMoments &minus,
                                                const ReparamAngles &angles);

} // namespace pbq
