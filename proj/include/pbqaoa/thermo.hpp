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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbqaoa/problem.hpp"

namespace pbq {

/// Probabilities at or below this value are left out of log fits.
inline constexpr double kProbabilityFloor = 1e-18;
inline constexpr std::size_t kDefaultBins = 100;

/// Raised when a fit is refused because the data cannot support it.
class FitRefused : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// ln p = log_intercept - beta * E, unweighted least squares.
struct BoltzmannFit {
    double beta = 0.0;
    double log_intercept = 0.0;
    double r2 = 0.0;
    double beta_stderr = 0.0;
    double ci99_halfwidth = 0.0;
    std::size_t n_points = 0;
};

BoltzmannFit fit_instance(std::span<const double> probabilities, const Spectrum &spectrum);

/// Per-bin accumulators over energies rescaled to [0, 1].
struct EnergyBins {
    std::size_t replicas = 0;
    /// Total probability mass per bin, summed over replicas.
    std::vector<double> mass;
    /// Number of configurations per bin, summed over replicas.
    std::vector<double> count;
    /// Sum of rescaled energies of the configurations in each bin.
    std::vector<double> energy_sum;

    [[nodiscard]] std::size_t bins() const { return mass.size(); }
};

EnergyBins bin_instance(std::span<const double> probabilities, const Spectrum &spectrum,
                        std::size_t bins = kDefaultBins);

/// Sums accumulators bin by bin with pairwise summation.
EnergyBins merge_bins(std::span<const EnergyBins> parts);

/// Fits ln(mass / count) against the mean rescaled energy of each non-empty
/// bin; beta is the slope magnitude divided by `mean_span`. Refuses when more
/// than half the bins are empty.
BoltzmannFit fit_binned(const EnergyBins &bins, double mean_span);

/// Scalars kept per replica; everything the ensemble summary needs.
struct InstanceStats {
    double beta = 0.0;
    double ci99 = 0.0;
    double r2 = 0.0;
    double xi = 0.0;
    double xi_degenerate = 0.0;
    double gamma_opt = 0.0;
    double theta_opt = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
};

struct EnsembleInfo {
    Family family = Family::QUBO;
    GraphMeta graph;
    std::size_t n = 0;
    double sigma2 = 1.0;
};

struct ReplicaSummary {
    EnsembleInfo info;
    std::size_t replicas = 0;
    /// Mean per-instance beta and the 99% half-width of that mean.
    double beta_mean = 0.0;
    double beta_ci99 = 0.0;
    double beta_median = 0.0;
    /// xi is exponential in N, so the geometric mean is primary.
    double xi_geometric_mean = 0.0;
    double xi_arithmetic_mean = 0.0;
    /// 99% half-width of mean(ln xi).
    double xi_ci99 = 0.0;
    double theta_opt_mean = 0.0;
    double gamma_opt_mean = 0.0;
    /// <E_max - E_min> over replicas.
    double mean_span = 0.0;
    /// 2M / N of the sampled graphs (the degree for regular graphs).
    double mean_degree = 0.0;
    BoltzmannFit binned;
};

/// Average degree 2M/N implied by the graph ensemble.
double ensemble_mean_degree(const GraphMeta &graph, std::size_t n);

/// The binned fit is left NaN (n_points 0) when fit_binned refuses.
ReplicaSummary summarize(const EnsembleInfo &info, std::span<const InstanceStats> instances,
                         const EnergyBins &merged);

struct ReplicaInput {
    std::span<const double> probabilities;
    const Spectrum *spectrum = nullptr;
};

/// Rescale-bin-average protocol over an ensemble. Angle fields of the summary
/// are NaN since only probabilities and spectra are given.
std::pair<BoltzmannFit, ReplicaSummary> fit_replicas(std::span<const ReplicaInput> instances,
                                                      const EnsembleInfo &info,
                                                      std::size_t bins = kDefaultBins);

enum class ScalingTarget { GammaOpt, Beta, Xi };
enum class ScalingPredictor { InvSqrtNrho, InvSqrtZ, SqrtTwoToN };

/// target ~ prefactor * variable^exponent, fitted in log-log space.
struct ScalingFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
    ScalingPredictor predictor = ScalingPredictor::InvSqrtNrho;
};

/// Power-law fit on raw (variable, target) pairs; needs at least 4 points.
ScalingFit fit_power_law(std::span<const double> variable, std::span<const double> target,
                         ScalingPredictor predictor);

/// Predictor variables: sigma^2 (N-1) rho for InvSqrtNrho, sigma^2 Z for
/// InvSqrtZ, and 2^N for SqrtTwoToN. With these, the prefactor of a
/// -1/2 law is the chi constant directly.
ScalingFit fit_scaling(std::span<const ReplicaSummary> summaries, ScalingTarget target,
                       ScalingPredictor predictor);

} // namespace pbq
