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
#include "pbqaoa/interferometer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pbqaoa/stats.hpp"

namespace pbq {

namespace {

void require_spins(const Spectrum &spectrum, std::size_t cap, const char *what) {
    if (spectrum.n > cap) {
        throw ResourceError(std::string(what) + ": N = " + std::to_string(spectrum.n) +
                            " exceeds the cap of " + std::to_string(cap));
    }
}

void require_index(std::uint64_t x, const Spectrum &spectrum, const char *what) {
    if (x >= spectrum.size()) {
        throw std::out_of_range(std::string(what) + ": configuration out of range");
    }
}

double spectrum_mean(const Spectrum &spectrum) { return mean(spectrum.energies); }

// Weighted moments accumulated over a subset of configurations.
struct Accumulator {
    double count = 0.0;
    double sum_h = 0.0;
    double sum_e = 0.0;
    double sum_hh = 0.0;
    double sum_ee = 0.0;
    double sum_he = 0.0;

    void add(double h, double e) {
        count += 1.0;
        sum_h += h;
        sum_e += e;
        sum_hh += h * h;
        sum_ee += e * e;
        sum_he += h * e;
    }

    [[nodiscard]] JointMoments finish(Hierarchy hierarchy) const {
        JointMoments m;
        m.hierarchy = hierarchy;
        if (count == 0.0) {
            return m;
        }
        m.mu_H = sum_h / count;
        m.mu_E = sum_e / count;
        m.sigma_H = std::sqrt(std::max(0.0, sum_hh / count - m.mu_H * m.mu_H));
        m.sigma_E = std::sqrt(std::max(0.0, sum_ee / count - m.mu_E * m.mu_E));
        m.sigma_EH = sum_he / count - m.mu_H * m.mu_E;
        const double denom = m.sigma_E * m.sigma_H;
        m.rho = denom > 0.0 ? m.sigma_EH / denom : 0.0;
        return m;
    }
};

// Binomial coefficients C(n, k) for k = 0..n as doubles (exact up to n = 60).
std::vector<double> binomial_row(std::size_t n) {
    std::vector<double> row(n + 1, 1.0);
    for (std::size_t k = 1; k <= n; ++k) {
        row[k] = row[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k);
    }
    return row;
}

} // namespace

ReparamAngles ReparamAngles::from(const CircuitParams &params) {
    if (!(params.theta > 0.0) || !(params.theta < std::numbers::pi)) {
        throw std::domain_error("ReparamAngles: theta must lie in (0, pi)");
    }
    return {-std::log(std::tan(0.5 * params.theta)), params.lambda, params.gamma};
}

complex_t exact_amplitude(std::uint64_t x, const Spectrum &spectrum, const CircuitParams &params) {
    require_spins(spectrum, kMaxInterferenceSpins, "exact_amplitude");
    require_index(x, spectrum, "exact_amplitude");
    const std::size_t n = spectrum.n;
    const double c = std::cos(0.5 * params.theta);
    const complex_t s = std::polar(1.0, -params.lambda) * std::sin(0.5 * params.theta);
    std::vector<complex_t> shell(n + 1);
    for (std::size_t h = 0; h <= n; ++h) {
        shell[h] = std::pow(c, static_cast<double>(n - h)) * std::pow(s, static_cast<int>(h));
    }
    complex_t total = 0.0;
    for (std::uint64_t y = 0; y < spectrum.size(); ++y) {
        total += shell[std::popcount(x ^ y)] * std::polar(1.0, -params.gamma * spectrum.energies[y]);
    }
    return total * std::pow(2.0, -0.5 * static_cast<double>(n));
}

std::vector<complex_t> exact_amplitudes(const Spectrum &spectrum, const CircuitParams &params) {
    require_spins(spectrum, kMaxInterferenceSpins, "exact_amplitudes");
    const std::size_t n = spectrum.n;
    const double c = std::cos(0.5 * params.theta);
    const complex_t s = std::polar(1.0, -params.lambda) * std::sin(0.5 * params.theta);
    std::vector<complex_t> shell(n + 1);
    for (std::size_t h = 0; h <= n; ++h) {
        shell[h] = std::pow(c, static_cast<double>(n - h)) * std::pow(s, static_cast<int>(h));
    }
    std::vector<complex_t> phase(spectrum.size());
    for (std::uint64_t y = 0; y < spectrum.size(); ++y) {
        phase[y] = std::polar(1.0, -params.gamma * spectrum.energies[y]);
    }
    const double norm = std::pow(2.0, -0.5 * static_cast<double>(n));
    std::vector<complex_t> out(spectrum.size());
    for (std::uint64_t x = 0; x < spectrum.size(); ++x) {
        complex_t total = 0.0;
        for (std::uint64_t y = 0; y < spectrum.size(); ++y) {
            total += shell[std::popcount(x ^ y)] * phase[y];
        }
        out[x] = total * norm;
    }
    return out;
}

std::vector<JointPoint> joint_distribution(std::uint64_t x, const Spectrum &spectrum) {
    require_spins(spectrum, kMaxCovarianceSpins, "joint_distribution");
    require_index(x, spectrum, "joint_distribution");
    const double weight = 1.0 / static_cast<double>(spectrum.size());
    std::vector<JointPoint> points(spectrum.size());
    for (std::uint64_t y = 0; y < spectrum.size(); ++y) {
        points[y] = {std::popcount(x ^ y), spectrum.energies[y], weight};
    }
    std::sort(points.begin(), points.end(), [](const JointPoint &a, const JointPoint &b) {
        return a.hamming != b.hamming ? a.hamming < b.hamming : a.energy < b.energy;
    });
    std::vector<JointPoint> merged;
    for (const JointPoint &p : points) {
        if (!merged.empty() && merged.back().hamming == p.hamming &&
            merged.back().energy == p.energy) {
            merged.back().weight += p.weight;
        } else {
            merged.push_back(p);
        }
    }
    return merged;
}

JointMoments joint_moments(std::uint64_t x, const Spectrum &spectrum) {
    require_spins(spectrum, kMaxCovarianceSpins, "joint_moments");
    require_index(x, spectrum, "joint_moments");
    const double centre = spectrum_mean(spectrum);
    Accumulator acc;
    for (std::uint64_t y = 0; y < spectrum.size(); ++y) {
        acc.add(static_cast<double>(std::popcount(x ^ y)), spectrum.energies[y] - centre);
    }
    return acc.finish(Hierarchy::Single);
}

HierarchyMoments split_moments(std::uint64_t x, const Spectrum &spectrum) {
    require_spins(spectrum, kMaxCovarianceSpins, "split_moments");
    require_index(x, spectrum, "split_moments");
    const double centre = spectrum_mean(spectrum);
    const double half = 0.5 * static_cast<double>(spectrum.n);
    Accumulator plus;
    Accumulator minus;
    for (std::uint64_t y = 0; y < spectrum.size(); ++y) {
        const double h = static_cast<double>(std::popcount(x ^ y));
        (h <= half ? plus : minus).add(h, spectrum.energies[y] - centre);
    }
    HierarchyMoments out{plus.finish(Hierarchy::Plus), minus.finish(Hierarchy::Minus)};
    out.plus.h0 = half - out.plus.mu_H;
    out.minus.h0 = out.plus.h0;
    return out;
}

std::vector<double> covariance_all(const Spectrum &spectrum, bool degenerate) {
    require_spins(spectrum, kMaxCovarianceSpins, "covariance_all");
    if (degenerate) {
        return covariance_split(spectrum).plus;
    }
    const std::size_t n = spectrum.n;
    const std::uint64_t dim = spectrum.size();
    const double inv = 1.0 / static_cast<double>(dim);
    const double total = pairwise_sum(spectrum.energies);
    std::vector<double> bit_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::uint64_t y = 0; y < dim; ++y) {
            if ((y >> i) & 1U) {
                acc += spectrum.energies[y];
            }
        }
        bit_sum[i] = acc;
    }
    // Terms that do not depend on x: sum_i S_i for x = 0.
    double base = 0.0;
    for (double v : bit_sum) {
        base += v;
    }
    const double mean_e = total * inv;
    const double mean_h = 0.5 * static_cast<double>(n);
    std::vector<double> out(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
        double he = base;
        for (std::size_t i = 0; i < n; ++i) {
            if ((x >> i) & 1U) {
                he += total - 2.0 * bit_sum[i];
            }
        }
        out[x] = he * inv - mean_h * mean_e;
    }
    return out;
}

SplitCovariance covariance_split(const Spectrum &spectrum) {
    require_spins(spectrum, kMaxCovarianceSpins, "covariance_split");
    const std::size_t n = spectrum.n;
    const std::size_t width = n + 1;
    const std::uint64_t dim = spectrum.size();
    // shell[x * width + k] = sum of E_y over y at Hamming distance k from x.
    // Built one bit at a time: after processing bits 0..b-1, the distance is
    // counted on those bits only.
    std::vector<double> shell(dim * width, 0.0);
    for (std::uint64_t x = 0; x < dim; ++x) {
        shell[x * width] = spectrum.energies[x];
    }
    std::vector<double> a(width);
    std::vector<double> b(width);
    for (std::size_t bit = 0; bit < n; ++bit) {
        const std::uint64_t mask = std::uint64_t{1} << bit;
        for (std::uint64_t x = 0; x < dim; ++x) {
            if (x & mask) {
                continue;
            }
            double *sx = &shell[x * width];
            double *sy = &shell[(x | mask) * width];
            std::copy(sx, sx + width, a.begin());
            std::copy(sy, sy + width, b.begin());
            for (std::size_t k = 1; k <= bit + 1; ++k) {
                sx[k] = a[k] + b[k - 1];
                sy[k] = b[k] + a[k - 1];
            }
        }
    }

    const double centre = spectrum_mean(spectrum);
    const std::vector<double> binom = binomial_row(n);
    const double half = 0.5 * static_cast<double>(n);
    double count_plus = 0.0;
    double sum_h_plus = 0.0;
    double count_minus = 0.0;
    double sum_h_minus = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (static_cast<double>(k) <= half) {
            count_plus += binom[k];
            sum_h_plus += static_cast<double>(k) * binom[k];
        } else {
            count_minus += binom[k];
            sum_h_minus += static_cast<double>(k) * binom[k];
        }
    }
    const double mu_h_plus = sum_h_plus / count_plus;
    const double mu_h_minus = count_minus > 0.0 ? sum_h_minus / count_minus : 0.0;

    SplitCovariance out;
    out.plus.resize(dim);
    out.minus.resize(dim);
    out.h0.assign(dim, half - mu_h_plus);
    for (std::uint64_t x = 0; x < dim; ++x) {
        const double *sx = &shell[x * width];
        double e_plus = 0.0;
        double he_plus = 0.0;
        double e_minus = 0.0;
        double he_minus = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double e = sx[k] - centre * binom[k];
            if (static_cast<double>(k) <= half) {
                e_plus += e;
                he_plus += static_cast<double>(k) * e;
            } else {
                e_minus += e;
                he_minus += static_cast<double>(k) * e;
            }
        }
        out.plus[x] = he_plus / count_plus - mu_h_plus * (e_plus / count_plus);
        out.minus[x] =
            count_minus > 0.0 ? he_minus / count_minus - mu_h_minus * (e_minus / count_minus) : 0.0;
    }
    return out;
}

CovarianceLaw fit_covariance_law(std::span<const double> sigma_EH, const Spectrum &spectrum,
                                 const CircuitParams &params) {
    if (sigma_EH.size() != spectrum.size()) {
        throw std::invalid_argument("fit_covariance_law: size mismatch");
    }
    const LinearFit fit = linear_fit(spectrum.energies, sigma_EH);
    CovarianceLaw law;
    law.c = -fit.slope;
    law.omega_std = fit.residual_std;
    law.fit_r2 = fit.r2;
    law.correlation = fit.correlation;
    law.beta_predicted = -2.0 * law.c * params.gamma * params.lambda;
    return law;
}

double predict_logprob_nondegenerate(const JointMoments &m, const ReparamAngles &a) {
    return -a.gamma * a.gamma * m.sigma_E * m.sigma_E +
           (a.r * a.r - a.lambda * a.lambda) * m.sigma_H * m.sigma_H - 2.0 * a.r * m.mu_H -
           2.0 * a.gamma * a.lambda * m.rho * m.sigma_E * m.sigma_H;
}

DegeneratePrediction predict_logprob_degenerate(const JointMoments &plus, const JointMoments &minus,
                                                const ReparamAngles &a) {
    const double sigma_e = 0.5 * (plus.sigma_E + minus.sigma_E);
    const double sigma_h = 0.5 * (plus.sigma_H + minus.sigma_H);
    const double mu_h = plus.mu_H + plus.h0;
    const double h0 = plus.h0;
    const double scale = sigma_e * sigma_h;
    const double rho_plus = scale > 0.0 ? plus.sigma_EH / scale : 0.0;
    const double rho_minus = scale > 0.0 ? minus.sigma_EH / scale : 0.0;
    const double rho_sum = rho_plus + rho_minus;

    const double base = -a.gamma * a.gamma * sigma_e * sigma_e +
                        (a.r * a.r - a.lambda * a.lambda) * sigma_h * sigma_h - 2.0 * a.r * mu_h;
    const double y_prime = base + a.gamma * a.lambda * (rho_minus - rho_plus) * scale;
    const double beta_prime = -a.gamma * a.lambda * scale;

    DegeneratePrediction out;
    out.log_full = y_prime + std::log(std::cos(2.0 * h0 * a.lambda + a.r * a.gamma * rho_sum * scale) +
                                      std::cosh(2.0 * h0 * a.r + beta_prime * rho_sum));
    out.log_dominant = y_prime + beta_prime * rho_sum + 2.0 * h0 * a.r - std::numbers::ln2;
    out.y_approx = base - 2.0 * a.gamma * a.lambda * rho_plus * scale;
    return out;
}

} // namespace pbq
