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
#include "pbqaoa/problem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "pbqaoa/random.hpp"

namespace pbq {

namespace {

// Stream tags so graph and coefficient draws never share a generator state.
constexpr std::uint64_t kCouplingStream = 0xC0FFEE01ULL;
constexpr std::uint64_t kFieldStream = 0xC0FFEE02ULL;

// Gray-code walks re-anchor on an exact evaluation this often.
constexpr std::uint64_t kResyncPeriod = 4096;

} // namespace

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> deg(n, 0);
    for (const Edge &e : edges) {
        ++deg[e.i];
        ++deg[e.j];
    }
    return deg;
}

std::string_view to_string(Family family) {
    switch (family) {
    case Family::QUBO:
        return "qubo";
    case Family::MaxCut:
        return "maxcut";
    case Family::RandomIsing:
        return "ising";
    }
    return "unknown";
}

std::string_view to_string(GraphKind kind) {
    return kind == GraphKind::Gnm ? "gnm" : "regular";
}

Family parse_family(std::string_view name) {
    if (name == "qubo") {
        return Family::QUBO;
    }
    if (name == "maxcut" || name == "sk") {
        return Family::MaxCut;
    }
    if (name == "ising" || name == "random_ising" || name == "randomising") {
        return Family::RandomIsing;
    }
    throw std::invalid_argument("unknown problem family: " + std::string(name));
}

GraphKind parse_graph_kind(std::string_view name) {
    if (name == "gnm") {
        return GraphKind::Gnm;
    }
    if (name == "regular") {
        return GraphKind::Regular;
    }
    throw std::invalid_argument("unknown graph type: " + std::string(name));
}

IsingProblem::IsingProblem(std::size_t n, std::vector<double> couplings,
                           std::vector<double> fields, Family family, GraphMeta graph,
                           double sigma2, std::uint64_t seed)
    : n_(n), J_(std::move(couplings)), h_(std::move(fields)), adjacency_(n), family_(family),
      graph_(graph), sigma2_(sigma2), seed_(seed) {
    if (J_.size() != n_ * n_ || h_.size() != n_) {
        throw std::invalid_argument("IsingProblem: coupling/field sizes do not match n");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (J_[i * n_ + i] != 0.0) {
            throw std::invalid_argument("IsingProblem: J must have a zero diagonal");
        }
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = J_[i * n_ + j];
            if (v != J_[j * n_ + i]) {
                throw std::invalid_argument("IsingProblem: J must be symmetric");
            }
            if (v != 0.0) {
                edges_.push_back({i, j});
                adjacency_[i].emplace_back(j, v);
                adjacency_[j].emplace_back(i, v);
            }
        }
    }
}

bool IsingProblem::has_flip_symmetry() const {
    return std::all_of(h_.begin(), h_.end(), [](double v) { return v == 0.0; });
}

double IsingProblem::energy(std::uint64_t x) const {
    double e = 0.0;
    for (const Edge &edge : edges_) {
        const bool same = ((x >> edge.i) & 1U) == ((x >> edge.j) & 1U);
        e += same ? J_[edge.i * n_ + edge.j] : -J_[edge.i * n_ + edge.j];
    }
    for (std::size_t i = 0; i < n_; ++i) {
        e += ((x >> i) & 1U) != 0U ? h_[i] : -h_[i];
    }
    return e;
}

IsingProblem IsingProblem::scaled(double factor) const {
    std::vector<double> J = J_;
    std::vector<double> h = h_;
    for (double &v : J) {
        v *= factor;
    }
    for (double &v : h) {
        v *= factor;
    }
    return IsingProblem(n_, std::move(J), std::move(h), family_, graph_,
                        sigma2_ * factor * factor, seed_);
}

Spectrum Spectrum::from_energies(std::size_t n, std::vector<double> energies) {
    if (energies.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("Spectrum: expected 2^n energies");
    }
    Spectrum s;
    s.n = n;
    s.energies = std::move(energies);
    const auto [lo, hi] = std::minmax_element(s.energies.begin(), s.energies.end());
    // minmax_element returns the first minimum, matching the tie-break rule.
    s.e_min = *lo;
    s.e_max = *hi;
    s.ground_index = static_cast<std::uint64_t>(lo - s.energies.begin());
    return s;
}

std::size_t gnm_edge_count(std::size_t n, double density) {
    if (!(density >= 0.0 && density <= 1.0)) {
        throw std::invalid_argument("gnm: density must lie in [0, 1]");
    }
    const std::size_t pairs = n * (n - 1) / 2;
    const double target = density * static_cast<double>(pairs);
    const double nearest = std::round(target);
    const double count = std::abs(target - nearest) < 1e-9 ? nearest : std::ceil(target);
    return std::min(pairs, static_cast<std::size_t>(count));
}

Graph gen_gnm_graph(std::size_t n, double density, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("gnm: need at least two vertices");
    }
    const std::size_t m = gnm_edge_count(n, density);
    std::vector<Edge> candidates;
    candidates.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            candidates.push_back({i, j});
        }
    }
    // Partial Fisher-Yates: the first m slots become a uniform m-subset.
    Rng rng(seed);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t pick = k + rng.below(candidates.size() - k);
        std::swap(candidates[k], candidates[pick]);
    }
    Graph g{n, {candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m)}};
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge &a, const Edge &b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    return g;
}

Graph gen_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed) {
    if (degree == 0 || degree >= n) {
        throw std::invalid_argument("regular graph: need 0 < degree < n");
    }
    if ((n * degree) % 2 != 0) {
        throw std::invalid_argument("regular graph: r*n must be even");
    }
    constexpr int kMaxAttempts = 1000;
    Rng rng(seed);
    std::vector<std::size_t> stubs;
    stubs.reserve(n * degree);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        stubs.clear();
        for (std::size_t v = 0; v < n; ++v) {
            stubs.insert(stubs.end(), degree, v);
        }
        rng.shuffle(std::span<std::size_t>(stubs));
        std::set<std::pair<std::size_t, std::size_t>> seen;
        bool simple = true;
        for (std::size_t k = 0; k < stubs.size(); k += 2) {
            const std::size_t a = std::min(stubs[k], stubs[k + 1]);
            const std::size_t b = std::max(stubs[k], stubs[k + 1]);
            if (a == b || !seen.emplace(a, b).second) {
                simple = false;
                break;
            }
        }
        if (simple) {
            Graph g{n, {}};
            g.edges.reserve(seen.size());
            for (const auto &[a, b] : seen) {
                g.edges.push_back({a, b});
            }
            return g;
        }
    }
    throw std::runtime_error("regular graph: pairing model failed after 1000 attempts");
}

IsingProblem build_problem(Family family, const Graph &graph, GraphMeta meta, double sigma2,
                           std::uint64_t seed) {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("build_problem: sigma2 must be positive");
    }
    const std::size_t n = graph.n;
    const double sigma = std::sqrt(sigma2);
    std::vector<double> J(n * n, 0.0);
    std::vector<double> h(n, 0.0);

    Rng coupling_rng(derive_seed(seed, {kCouplingStream}));
    for (const Edge &e : graph.edges) {
        if (!(e.i < e.j && e.j < n)) {
            throw std::invalid_argument("build_problem: malformed edge");
        }
        double q = sigma * coupling_rng.normal();
        // An exact zero would silently drop the edge from the pattern.
        while (q == 0.0) {
            q = sigma * coupling_rng.normal();
        }
        J[e.i * n + e.j] = q;
        J[e.j * n + e.i] = q;
    }

    switch (family) {
    case Family::QUBO:
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                h[i] += J[i * n + j];
            }
        }
        break;
    case Family::MaxCut:
        break;
    case Family::RandomIsing: {
        Rng field_rng(derive_seed(seed, {kFieldStream}));
        for (double &v : h) {
            v = sigma * field_rng.normal();
        }
        break;
    }
    }
    return IsingProblem(n, std::move(J), std::move(h), family, meta, sigma2, seed);
}

Spectrum full_spectrum(const IsingProblem &problem) {
    const std::size_t n = problem.n();
    if (n > kMaxSpins) {
        throw ResourceError("full_spectrum: n exceeds the 26-spin cap");
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<double> energies(dim);

    std::vector<int> spin(n, -1);
    std::vector<double> field(n);
    auto resync = [&](std::uint64_t x) {
        for (std::size_t i = 0; i < n; ++i) {
            spin[i] = ((x >> i) & 1U) != 0U ? 1 : -1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double f = problem.fields()[i];
            for (const auto &[j, v] : problem.neighbours(i)) {
                f += v * spin[j];
            }
            field[i] = f;
        }
        return problem.energy(x);
    };

    double e = resync(0);
    energies[0] = e;
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < dim; ++k) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(k));
        gray ^= std::uint64_t{1} << bit;
        if (k % kResyncPeriod == 0) {
            e = resync(gray);
        } else {
            // Flipping s_b changes E by -2 s_b L_b, with L_b its local field.
            e -= 2.0 * spin[bit] * field[bit];
            spin[bit] = -spin[bit];
            for (const auto &[j, v] : problem.neighbours(bit)) {
                field[j] += 2.0 * v * spin[bit];
            }
        }
        energies[gray] = e;
    }
    return Spectrum::from_energies(n, std::move(energies));
}

double operator_norm(const IsingProblem &problem) {
    const std::size_t n = problem.n();
    if (n == 0) {
        return 0.0;
    }
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        J(problem.couplings().data(), size, size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("operator_norm: eigensolver did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace pbq
