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
#include "pbqaoa/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pbqaoa/stats.hpp"

namespace pbq {

BoltzmannFit fit_instance(std::span<const double> probabilities, const Spectrum &spectrum) {
    if (probabilities.size() != spectrum.size()) {
        throw std::invalid_argument("fit_instance: probabilities and spectrum differ in size");
    }
    std::vector<double> energy;
    std::vector<double> log_p;
    energy.reserve(probabilities.size());
    log_p.reserve(probabilities.size());
    for (std::size_t x = 0; x < probabilities.size(); ++x) {
        if (probabilities[x] > kProbabilityFloor) {
            energy.push_back(spectrum.energies[x]);
            log_p.push_back(std::log(probabilities[x]));
        }
    }
    if (energy.size() < 3) {
        throw FitRefused("fit_instance: fewer than 3 probabilities above the floor");
    }
    const LinearFit line = linear_fit(energy, log_p);
    BoltzmannFit fit;
    fit.beta = -line.slope;
    fit.log_intercept = line.intercept;
    fit.r2 = line.r2;
    fit.beta_stderr = line.slope_stderr;
    fit.ci99_halfwidth = kZ99 * line.slope_stderr;
    fit.n_points = line.n;
    return fit;
}

EnergyBins bin_instance(std::span<const double> probabilities, const Spectrum &spectrum,
                        std::size_t bins) {
    if (probabilities.size() != spectrum.size()) {
        throw std::invalid_argument("bin_instance: probabilities and spectrum differ in size");
    }
    if (bins == 0) {
        throw std::invalid_argument("bin_instance: need at least one bin");
    }
    const double span = spectrum.span();
    if (!(span > 0.0)) {
        throw FitRefused("bin_instance: flat spectrum cannot be rescaled");
    }
    EnergyBins out;
    out.replicas = 1;
    out.mass.assign(bins, 0.0);
    out.count.assign(bins, 0.0);
    out.energy_sum.assign(bins, 0.0);
    const double width = static_cast<double>(bins);
    for (std::size_t x = 0; x < probabilities.size(); ++x) {
        const double rescaled = (spectrum.energies[x] - spectrum.e_min) / span;
        const auto b = std::min(bins - 1, static_cast<std::size_t>(rescaled * width));
        out.mass[b] += probabilities[x];
        out.count[b] += 1.0;
        out.energy_sum[b] += rescaled;
    }
    return out;
}

EnergyBins merge_bins(std::span<const EnergyBins> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("merge_bins: nothing to merge");
    }
    const std::size_t bins = parts.front().bins();
    EnergyBins out;
    out.mass.resize(bins);
    out.count.resize(bins);
    out.energy_sum.resize(bins);
    std::vector<double> column(parts.size());
    auto reduce = [&](auto member, std::vector<double> &target) {
        for (std::size_t b = 0; b < bins; ++b) {
            for (std::size_t k = 0; k < parts.size(); ++k) {
                column[k] = (parts[k].*member)[b];
            }
            target[b] = pairwise_sum(column);
        }
    };
    for (const EnergyBins &part : parts) {
        if (part.bins() != bins) {
            throw std::invalid_argument("merge_bins: bin counts differ");
        }
        out.replicas += part.replicas;
    }
    reduce(&EnergyBins::mass, out.mass);
    reduce(&EnergyBins::count, out.count);
    reduce(&EnergyBins::energy_sum, out.energy_sum);
    return out;
}

BoltzmannFit fit_binned(const EnergyBins &bins, double mean_span) {
    std::vector<double> energy;
    std::vector<double> log_p;
    std::size_t empty = 0;
    for (std::size_t b = 0; b < bins.bins(); ++b) {
        if (bins.count[b] <= 0.0) {
            ++empty;
            continue;
        }
        const double per_state = bins.mass[b] / bins.count[b];
        if (per_state > kProbabilityFloor) {
            energy.push_back(bins.energy_sum[b] / bins.count[b]);
            log_p.push_back(std::log(per_state));
        }
    }
    if (2 * empty > bins.bins()) {
        throw FitRefused("fit_binned: " + std::to_string(empty) + " of " +
                         std::to_string(bins.bins()) + " bins are empty");
    }
    if (energy.size() < 3) {
        throw FitRefused("fit_binned: fewer than 3 usable bins");
    }
    if (!(mean_span > 0.0)) {
        throw std::invalid_argument("fit_binned: mean span must be positive");
    }
    const LinearFit line = linear_fit(energy, log_p);
    BoltzmannFit fit;
    fit.beta = -line.slope / mean_span;
    fit.log_intercept = line.intercept;
    fit.r2 = line.r2;
    fit.beta_stderr = line.slope_stderr / mean_span;
    fit.ci99_halfwidth = kZ99 * fit.beta_stderr;
    fit.n_points = line.n;
    return fit;
}

double ensemble_mean_degree(const GraphMeta &graph, std::size_t n) {
    if (graph.kind == GraphKind::Regular) {
        return graph.parameter;
    }
    return 2.0 * static_cast<double>(gnm_edge_count(n, graph.parameter)) /
           static_cast<double>(n);
}

ReplicaSummary summarize(const EnsembleInfo &info, std::span<const InstanceStats> instances,
                         const EnergyBins &merged) {
    if (instances.empty()) {
        throw std::invalid_argument("summarize: no instances");
    }
    const std::size_t count = instances.size();
    std::vector<double> beta(count);
    std::vector<double> xi(count);
    std::vector<double> log_xi(count);
    std::vector<double> theta(count);
    std::vector<double> gamma(count);
    std::vector<double> span(count);
    for (std::size_t k = 0; k < count; ++k) {
        beta[k] = instances[k].beta;
        xi[k] = instances[k].xi;
        log_xi[k] = std::log(instances[k].xi);
        theta[k] = instances[k].theta_opt;
        gamma[k] = instances[k].gamma_opt;
        span[k] = instances[k].e_max - instances[k].e_min;
    }
    const double root_n = std::sqrt(static_cast<double>(count));
    ReplicaSummary s;
    s.info = info;
    s.replicas = count;
    s.beta_mean = mean(beta);
    s.beta_ci99 = kZ99 * stddev(beta) / root_n;
    s.beta_median = median(beta);
    s.xi_geometric_mean = std::exp(mean(log_xi));
    s.xi_arithmetic_mean = mean(xi);
    s.xi_ci99 = kZ99 * stddev(log_xi) / root_n;
    s.theta_opt_mean = mean(theta);
    s.gamma_opt_mean = mean(gamma);
    s.mean_span = mean(span);
    s.mean_degree = ensemble_mean_degree(info.graph, info.n);
    try {
        s.binned = fit_binned(merged, s.mean_span);
    } catch (const FitRefused &) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.binned = {nan, nan, nan, nan, nan, 0};
    }
    return s;
}

std::pair<BoltzmannFit, ReplicaSummary> fit_replicas(std::span<const ReplicaInput> instances,
                                                      const EnsembleInfo &info,
                                                      std::size_t bins) {
    if (instances.size() < 2) {
        throw std::invalid_argument("fit_replicas: need at least 2 instances");
    }
    std::vector<InstanceStats> stats;
    std::vector<EnergyBins> parts;
    stats.reserve(instances.size());
    parts.reserve(instances.size());
    for (const ReplicaInput &input : instances) {
        const Spectrum &spectrum = *input.spectrum;
        if (spectrum.n != info.n) {
            throw std::invalid_argument("fit_replicas: instance size differs from ensemble");
        }
        const BoltzmannFit fit = fit_instance(input.probabilities, spectrum);
        const double dim = static_cast<double>(spectrum.size());
        InstanceStats s;
        s.beta = fit.beta;
        s.ci99 = fit.ci99_halfwidth;
        s.r2 = fit.r2;
        s.xi = input.probabilities[spectrum.ground_index] * dim;
        double degenerate = 0.0;
        for (std::size_t x = 0; x < spectrum.size(); ++x) {
            if (spectrum.energies[x] <= spectrum.e_min + 1e-9) {
                degenerate += input.probabilities[x];
            }
        }
        s.xi_degenerate = degenerate * dim;
        s.gamma_opt = std::numeric_limits<double>::quiet_NaN();
        s.theta_opt = std::numeric_limits<double>::quiet_NaN();
        s.e_min = spectrum.e_min;
        s.e_max = spectrum.e_max;
        stats.push_back(s);
        parts.push_back(bin_instance(input.probabilities, spectrum, bins));
    }
    const EnergyBins merged = merge_bins(parts);
    ReplicaSummary summary = summarize(info, stats, merged);
    if (summary.binned.n_points == 0) {
        // Surface the refusal reason to callers that asked for the fit itself.
        fit_binned(merged, summary.mean_span);
    }
    return {summary.binned, summary};
}

ScalingFit fit_power_law(std::span<const double> variable, std::span<const double> target,
                         ScalingPredictor predictor) {
    if (variable.size() != target.size()) {
        throw std::invalid_argument("fit_power_law: length mismatch");
    }
    if (variable.size() < 4) {
        throw std::invalid_argument("fit_power_law: need at least 4 sizes");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t k = 0; k < variable.size(); ++k) {
        if (!(variable[k] > 0.0) || !(target[k] > 0.0)) {
            throw std::invalid_argument("fit_power_law: values must be positive");
        }
        lx.push_back(std::log(variable[k]));
        ly.push_back(std::log(target[k]));
    }
    const LinearFit line = linear_fit(lx, ly);
    return {line.slope, std::exp(line.intercept), line.r2, predictor};
}

ScalingFit fit_scaling(std::span<const ReplicaSummary> summaries, ScalingTarget target,
                       ScalingPredictor predictor) {
    std::vector<double> variable;
    std::vector<double> values;
    for (const ReplicaSummary &s : summaries) {
        switch (predictor) {
        case ScalingPredictor::InvSqrtNrho:
        case ScalingPredictor::InvSqrtZ:
            variable.push_back(s.info.sigma2 * s.mean_degree);
            break;
        case ScalingPredictor::SqrtTwoToN:
            variable.push_back(std::ldexp(1.0, static_cast<int>(s.info.n)));
            break;
        }
        switch (target) {
        case ScalingTarget::GammaOpt:
            values.push_back(s.gamma_opt_mean);
            break;
        case ScalingTarget::Beta:
            values.push_back(s.beta_mean);
            break;
        case ScalingTarget::Xi:
            values.push_back(s.xi_geometric_mean);
            break;
        }
    }
    return fit_power_law(variable, values, predictor);
}

} // namespace pbq
