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
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "pbqaoa/angle_opt.hpp"
#include "pbqaoa/problem.hpp"
#include "pbqaoa/thermo.hpp"

namespace pbq {

/// Environment variable naming the default output directory.
inline constexpr const char *kOutputDirEnv = "PBQAOA_OUTPUT_DIR";

/// Process exit codes shared by the pipeline and the command line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitPartial = 2, kExitAborted = 3 };

/// Fraction of failed replicas above which an ensemble is aborted.
inline constexpr double kMaxFailureFraction = 0.1;

struct ExperimentConfig {
    Family family = Family::QUBO;
    GraphMeta graph{GraphKind::Gnm, 0.9};
    std::vector<std::size_t> n_list;
    double sigma2 = 1.0;
    std::size_t replicas = 1;
    std::uint64_t master_seed = 0;
    double lambda = kDefaultLambda;
    std::size_t bin_count = kDefaultBins;
    std::filesystem::path output_dir;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t workers = 0;
    /// Fit the covariance law per replica (needs N <= 20).
    bool covariance = true;
    OptOptions optimizer;

    void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig &config);
/// The output directory is not part of the echo and is left empty.
ExperimentConfig config_from_json(const nlohmann::json &doc);

/// hash(master_seed, family, n, replica); stable across versions.
std::uint64_t replica_seed(std::uint64_t master_seed, Family family, std::size_t n,
                           std::size_t replica);

/// Everything kept per successful replica.
struct ReplicaRecord {
    std::size_t replica = 0;
    std::uint64_t seed = 0;
    InstanceStats stats;
    double energy_opt = 0.0;
    double norm_J = 0.0;
    double product = 0.0;
    double cov_c = 0.0;
    double cov_r2 = 0.0;
    double cov_correlation = 0.0;
    double beta_predicted = 0.0;
    EnergyBins bins;
};

struct ReplicaFailure {
    std::size_t n = 0;
    std::size_t replica = 0;
    std::uint64_t seed = 0;
    std::string error;
};

/// The problem instance of one replica, rebuilt from the seeds alone.
IsingProblem replica_problem(const ExperimentConfig &config, std::size_t n, std::size_t replica);

/// One replica end to end: problem, spectrum, angles, state, fits,
/// covariance law and mixing comparison.
ReplicaRecord run_replica(const ExperimentConfig &config, std::size_t n, std::size_t replica);

struct EnsembleResult {
    EnsembleInfo info;
    std::vector<ReplicaRecord> records;
    std::size_t failures = 0;
    bool aborted = false;
    /// Present when not aborted.
    ReplicaSummary summary;
};

struct PipelineResult {
    std::vector<EnsembleResult> ensembles;
    std::vector<ReplicaFailure> failures;
    /// Empty when fewer than four sizes completed.
    nlohmann::json scaling;
    int exit_code = kExitOk;
};

/// Runs every (n, replica), writes per-ensemble record files, then derives the
/// summaries with analyze_directory. Files are written atomically.
PipelineResult run_pipeline(const ExperimentConfig &config);

/// Rebuilds summaries, scaling fits, binned tables and the manifest from the
/// record files in `dir`.
PipelineResult analyze_directory(const std::filesystem::path &dir);

/// Output directory from the flag, else the environment, else "results".
std::filesystem::path default_output_dir(const std::string &flag_value);

nlohmann::json summary_to_json(const ReplicaSummary &summary);
nlohmann::json scaling_to_json(const ScalingFit &fit);

} // namespace pbq
