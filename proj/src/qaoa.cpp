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
#include "pbqaoa/qaoa.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "pbqaoa/io.hpp"

namespace pbq {

namespace {

std::vector<int> spin_sums(std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<int> sums(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        sums[x] = 2 * std::popcount(x) - static_cast<int>(n);
    }
    return sums;
}

void fill_state(const Spectrum &spectrum, const std::vector<int> &spin_sum,
                const CircuitParams &params, QuantumState &state) {
    const std::size_t n = spectrum.n;
    const std::size_t dim = spectrum.size();
    state.n = n;
    state.amplitudes.resize(dim);
    complex_t *amp = state.amplitudes.data();

    const double scale = std::pow(2.0, -0.5 * static_cast<double>(n));
    const double half_lambda = 0.5 * params.lambda;
    const double *energy = spectrum.energies.data();
    for (std::size_t x = 0; x < dim; ++x) {
        const double phase = -(params.gamma * energy[x] + half_lambda * spin_sum[x]);
        amp[x] = complex_t(scale * std::cos(phase), scale * std::sin(phase));
    }

    const double c = std::cos(0.5 * params.theta);
    const double s = std::sin(0.5 * params.theta);
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t stride = std::size_t{1} << q;
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            complex_t *down = amp + base;
            complex_t *up = down + stride;
            for (std::size_t k = 0; k < stride; ++k) {
                const complex_t a_up = up[k];
                const complex_t a_down = down[k];
                up[k] = c * a_up - s * a_down;
                down[k] = s * a_up + c * a_down;
            }
        }
    }
}

void check_sizes(const QuantumState &state, const Spectrum &spectrum) {
    if (state.amplitudes.size() != spectrum.size()) {
        throw std::invalid_argument("state and spectrum sizes differ");
    }
}

} // namespace

double QuantumState::norm_squared() const {
    double total = 0.0;
    for (const complex_t &a : amplitudes) {
        total += std::norm(a);
    }
    return total;
}

QuantumState prepare_state(const Spectrum &spectrum, const CircuitParams &params) {
    if (spectrum.n > kMaxSpins) {
        throw ResourceError("prepare_state: n exceeds the 26-qubit cap");
    }
    QuantumState state;
    fill_state(spectrum, spin_sums(spectrum.n), params, state);
    return state;
}

QuantumState prepare_state(const IsingProblem &problem, const Spectrum &spectrum,
                           const CircuitParams &params) {
    if (problem.n() != spectrum.n || spectrum.size() != (std::size_t{1} << problem.n())) {
        throw std::invalid_argument("prepare_state: spectrum does not match problem");
    }
    return prepare_state(spectrum, params);
}

std::vector<double> probabilities(const QuantumState &state) {
    std::vector<double> p(state.amplitudes.size());
    for (std::size_t x = 0; x < p.size(); ++x) {
        p[x] = std::norm(state.amplitudes[x]);
    }
    return p;
}

double expectation_energy(const QuantumState &state, const Spectrum &spectrum) {
    check_sizes(state, spectrum);
    double total = 0.0;
    for (std::size_t x = 0; x < spectrum.size(); ++x) {
        total += std::norm(state.amplitudes[x]) * spectrum.energies[x];
    }
    return total;
}

Enhancement ground_state_enhancement(const QuantumState &state, const Spectrum &spectrum) {
    check_sizes(state, spectrum);
    const double dim = static_cast<double>(spectrum.size());
    Enhancement out;
    out.xi = std::norm(state.amplitudes[spectrum.ground_index]) * dim;
    double degenerate = 0.0;
    for (std::size_t x = 0; x < spectrum.size(); ++x) {
        if (spectrum.energies[x] <= spectrum.e_min + 1e-9) {
            degenerate += std::norm(state.amplitudes[x]);
        }
    }
    out.xi_degenerate = degenerate * dim;
    return out;
}

CircuitEvaluator::CircuitEvaluator(const Spectrum &spectrum)
    : spectrum_(&spectrum), spin_sum_(spin_sums(spectrum.n)) {
    if (spectrum.n > kMaxSpins) {
        throw ResourceError("CircuitEvaluator: n exceeds the 26-qubit cap");
    }
}

double CircuitEvaluator::energy(const CircuitParams &params) {
    fill_state(*spectrum_, spin_sum_, params, state_);
    return expectation_energy(state_, *spectrum_);
}

void write_state_dump(const std::filesystem::path &prefix, const QuantumState &state,
                      const CircuitParams &params, std::uint64_t problem_seed) {
    std::string bytes(state.amplitudes.size() * 2 * sizeof(double), '\0');
    char *out = bytes.data();
    for (const complex_t &a : state.amplitudes) {
        for (double part : {a.real(), a.imag()}) {
            auto raw = std::bit_cast<std::uint64_t>(part);
            if constexpr (std::endian::native == std::endian::big) {
                raw = __builtin_bswap64(raw);
            }
            std::memcpy(out, &raw, sizeof(raw));
            out += sizeof(raw);
        }
    }
    auto bin = prefix;
    bin += ".bin";
    write_file_atomic(bin, bytes);

    nlohmann::json header;
    header["n"] = state.n;
    header["params"] = {{"gamma", params.gamma}, {"theta", params.theta}, {"lambda", params.lambda}};
    header["problem_seed"] = problem_seed;
    header["layout"] = "little-endian float64 (re, im) pairs, index = configuration integer";
    auto json_path = prefix;
    json_path += ".json";
    write_file_atomic(json_path, header.dump(2) + "\n");
}

QuantumState read_state_dump(const std::filesystem::path &prefix) {
    auto json_path = prefix;
    json_path += ".json";
    const auto header = nlohmann::json::parse(read_file(json_path));
    QuantumState state;
    state.n = header.at("n").get<std::size_t>();
    auto bin = prefix;
    bin += ".bin";
    const std::string bytes = read_file(bin);
    const std::size_t dim = std::size_t{1} << state.n;
    if (bytes.size() != dim * 2 * sizeof(double)) {
        throw std::runtime_error("state dump: size does not match header");
    }
    state.amplitudes.resize(dim);
    const char *in = bytes.data();
    for (std::size_t x = 0; x < dim; ++x) {
        double parts[2];
        for (double &part : parts) {
            std::uint64_t raw = 0;
            std::memcpy(&raw, in, sizeof(raw));
            in += sizeof(raw);
            if constexpr (std::endian::native == std::endian::big) {
                raw = __builtin_bswap64(raw);
            }
            part = std::bit_cast<double>(raw);
        }
        state.amplitudes[x] = complex_t(parts[0], parts[1]);
    }
    return state;
}

} // namespace pbq
