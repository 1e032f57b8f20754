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

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "pbqaoa/problem.hpp"

namespace pbq {

using complex_t = std::complex<double>;

/// Angles of the single-layer circuit R_y(theta)^N U_1(lambda)^N e^{-i gamma E} H^N.
struct CircuitParams {
    double gamma = 0.0;
    double theta = 0.0;
    double lambda = 0.0;
};

/// Dense statevector; amplitude index is the configuration integer.
struct QuantumState {
    std::size_t n = 0;
    std::vector<complex_t> amplitudes;

    [[nodiscard]] double norm_squared() const;
};

/// Exact statevector of the single-layer circuit.
///
/// Pauli operators act on the spin variable s = 2 bit - 1, so sigma^z |x> = s |x>
/// and the energy operator is diagonal with entries E_x. Concretely:
///   - U_1(lambda) contributes the phase exp(-i lambda/2 * sum_i s_i),
///   - R_y(theta) mixes, per qubit, (a_up, a_down) -> (c a_up - s a_down,
///     s a_up + c a_down) with c = cos(theta/2), s = sin(theta/2), where
///     "up" is bit 1.
/// The diagonal factors are fused into one pass; the R_y layer is N pairwise
/// sweeps, O(N 2^N) overall.
QuantumState prepare_state(const Spectrum &spectrum, const CircuitParams &params);

/// Same, with a size check against the problem the spectrum came from.
QuantumState prepare_state(const IsingProblem &problem, const Spectrum &spectrum,
                           const CircuitParams &params);

std::vector<double> probabilities(const QuantumState &state);

double expectation_energy(const QuantumState &state, const Spectrum &spectrum);

struct Enhancement {
    /// p[ground_index] * 2^N.
    double xi = 0.0;
    /// Summed probability of every configuration within 1e-9 of e_min, times 2^N.
    double xi_degenerate = 0.0;
};

Enhancement ground_state_enhancement(const QuantumState &state, const Spectrum &spectrum);

/// Reusable buffer for repeated energy evaluations at fixed spectrum.
class CircuitEvaluator {
  public:
    explicit CircuitEvaluator(const Spectrum &spectrum);

    /// <E> for the given angles. Not thread-safe (shares one buffer).
    double energy(const CircuitParams &params);

    [[nodiscard]] const Spectrum &spectrum() const { return *spectrum_; }

  private:
    const Spectrum *spectrum_;
    std::vector<int> spin_sum_;
    QuantumState state_;
};

/// Writes `<prefix>.bin` (2^N little-endian (re, im) double pairs) and
/// `<prefix>.json` (n, params, problem seed).
void write_state_dump(const std::filesystem::path &prefix, const QuantumState &state,
                      const CircuitParams &params, std::uint64_t problem_seed);

QuantumState read_state_dump(const std::filesystem::path &prefix);

} // namespace pbq
