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
#include <vector>

#include "pbqaoa/problem.hpp"

namespace pbq {

struct MixingComparison {
    double norm_J = 0.0;
    /// 1 / norm_J: below this inverse temperature Metropolis provably mixes fast.
    double beta_mcmc_threshold = 0.0;
    double beta_qaoa = 0.0;
    /// beta_qaoa * norm_J.
    double product = 0.0;
    /// product > 1, i.e. outside the guaranteed-fast regime. Not a hardness proof.
    bool above_threshold = false;
};

struct MetropolisResult {
    /// One configuration per recorded sweep.
    std::vector<std::uint64_t> samples;
    std::vector<double> energies;
    /// Accepted / proposed over all sweeps, burn-in included.
    double acceptance_rate = 0.0;
    /// Lag-1 autocorrelation of the recorded energies; reported, not corrected for.
    double energy_autocorrelation = 0.0;
};

/// min(1, exp(-beta * delta)).
double acceptance_probability(double beta, double delta);

/// Energy change when spin i of x flips, from the neighbours of i only.
double flip_delta(const IsingProblem &problem, std::uint64_t x, std::size_t i);

/// Single-site Metropolis with a fresh random spin order each sweep. Starts
/// from a uniform random configuration, runs `burn_in` sweeps, then records
/// the configuration after each of `n_sweeps` sweeps. Deterministic in seed.
MetropolisResult metropolis_sample(const IsingProblem &problem, double beta, std::size_t n_sweeps,
                                   std::size_t burn_in, std::uint64_t seed);

MixingComparison compare(double norm_J, double beta_qaoa);

/// Uses operator_norm(problem).
MixingComparison compare(const IsingProblem &problem, double beta_qaoa);

} // namespace pbq
