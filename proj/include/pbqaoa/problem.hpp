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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbq {

/// Thrown when a request exceeds a hard size cap (memory or O(4^N) work).
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Largest spin count for which a dense spectrum/statevector is built.
inline constexpr std::size_t kMaxSpins = 26;

struct Edge {
    std::size_t i;
    std::size_t j;
    friend bool operator==(const Edge &, const Edge &) = default;
};

/// Simple undirected graph. Edges satisfy i < j and are sorted.
struct Graph {
    std::size_t n = 0;
    std::vector<Edge> edges;

    [[nodiscard]] std::vector<std::size_t> degrees() const;
};

enum class Family { QUBO, MaxCut, RandomIsing };
enum class GraphKind { Gnm, Regular };

/// How the interaction graph was sampled. `parameter` is the density for
/// Gnm graphs and the degree for regular graphs.
struct GraphMeta {
    GraphKind kind = GraphKind::Gnm;
    double parameter = 0.0;
    friend bool operator==(const GraphMeta &, const GraphMeta &) = default;
};

std::string_view to_string(Family family);
std::string_view to_string(GraphKind kind);
Family parse_family(std::string_view name);
GraphKind parse_graph_kind(std::string_view name);

/// Ising energy E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i with s = 2x - 1.
///
/// J is stored dense and row-major; `edges` lists the nonzero pattern so that
/// sparse loops do not scan the full matrix.
class IsingProblem {
  public:
    IsingProblem() = default;
    IsingProblem(std::size_t n, std::vector<double> couplings, std::vector<double> fields,
                 Family family, GraphMeta graph, double sigma2, std::uint64_t seed);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] double J(std::size_t i, std::size_t j) const { return J_[i * n_ + j]; }
    [[nodiscard]] const std::vector<double> &couplings() const { return J_; }
    [[nodiscard]] const std::vector<double> &fields() const { return h_; }
    [[nodiscard]] const std::vector<Edge> &edges() const { return edges_; }
    [[nodiscard]] Family family() const { return family_; }
    [[nodiscard]] const GraphMeta &graph() const { return graph_; }
    [[nodiscard]] double sigma2() const { return sigma2_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    /// Neighbours of spin i together with J_ij.
    [[nodiscard]] const std::vector<std::pair<std::size_t, double>> &
    neighbours(std::size_t i) const {
        return adjacency_[i];
    }

    /// True when every field is exactly zero (global spin-flip symmetry).
    [[nodiscard]] bool has_flip_symmetry() const;

    /// Energy of configuration x (bit i of x is spin i, s_i = 2 bit - 1).
    [[nodiscard]] double energy(std::uint64_t x) const;

    /// Copy with every coefficient multiplied by `factor`.
    [[nodiscard]] IsingProblem scaled(double factor) const;

  private:
    std::size_t n_ = 0;
    std::vector<double> J_;
    std::vector<double> h_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
    Family family_ = Family::QUBO;
    GraphMeta graph_;
    double sigma2_ = 1.0;
    std::uint64_t seed_ = 0;
};

/// Energies of all 2^n configurations.
struct Spectrum {
    std::size_t n = 0;
    std::vector<double> energies;
    double e_min = 0.0;
    double e_max = 0.0;
    std::uint64_t ground_index = 0;

    [[nodiscard]] std::size_t size() const { return energies.size(); }
    [[nodiscard]] double span() const { return e_max - e_min; }

    /// Builds a spectrum (extremes, ground index) from raw energies.
    static Spectrum from_energies(std::size_t n, std::vector<double> energies);
};

/// Number of edges of a G(n, M) graph at the given density:
/// ceil(density * n (n - 1) / 2), with products within 1e-9 of an integer
/// treated as that integer.
std::size_t gnm_edge_count(std::size_t n, double density);

Graph gen_gnm_graph(std::size_t n, double density, std::uint64_t seed);

/// Random regular graph via the pairing model; retries up to 1000 times.
Graph gen_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed);

IsingProblem build_problem(Family family, const Graph &graph, GraphMeta meta, double sigma2,
                           std::uint64_t seed);

/// Full spectrum by Gray-code enumeration, O(n 2^n).
Spectrum full_spectrum(const IsingProblem &problem);

/// Spectral norm of J (largest absolute eigenvalue).
double operator_norm(const IsingProblem &problem);

} // namespace pbq
