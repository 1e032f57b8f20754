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
#include "pbqaoa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "pbqaoa/interferometer.hpp"
#include "pbqaoa/io.hpp"
#include "pbqaoa/mcmc.hpp"
#include "pbqaoa/qaoa.hpp"
#include "pbqaoa/random.hpp"

#ifndef PBQAOA_VERSION
#define PBQAOA_VERSION "unknown"
#endif

namespace pbq {

namespace {

constexpr std::uint64_t kGraphTag = 0x6A7A9E01;

const std::vector<std::string> kReplicaColumns{
    "replica", "seed",     "beta",         "ci99",   "r2",    "xi",
    "xi_degenerate", "gamma_opt", "theta_opt", "e_min", "e_max", "energy_opt",
    "norm_J",  "product",  "cov_c",        "cov_r2", "cov_correlation", "beta_predicted"};

std::string file_name(const char *stem, std::size_t n) {
    return std::string(stem) + "_n" + std::to_string(n) + ".csv";
}

nlohmann::json graph_to_json(const GraphMeta &graph) {
    nlohmann::json doc;
    doc["type"] = std::string(to_string(graph.kind));
    if (graph.kind == GraphKind::Gnm) {
        doc["density"] = graph.parameter;
    } else {
        doc["degree"] = static_cast<std::size_t>(graph.parameter);
    }
    return doc;
}

GraphMeta graph_from_json(const nlohmann::json &doc) {
    GraphMeta meta;
    meta.kind = parse_graph_kind(doc.at("type").get<std::string>());
    meta.parameter = meta.kind == GraphKind::Gnm ? doc.at("density").get<double>()
                                                 : doc.at("degree").get<double>();
    return meta;
}

std::string clean_message(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

std::vector<std::string> record_row(const ReplicaRecord &r) {
    const InstanceStats &s = r.stats;
    return {std::to_string(r.replica), std::to_string(r.seed), format_double(s.beta),
            format_double(s.ci99),     format_double(s.r2),    format_double(s.xi),
            format_double(s.xi_degenerate), format_double(s.gamma_opt),
            format_double(s.theta_opt), format_double(s.e_min), format_double(s.e_max),
            format_double(r.energy_opt), format_double(r.norm_J), format_double(r.product),
            format_double(r.cov_c),    format_double(r.cov_r2), format_double(r.cov_correlation),
            format_double(r.beta_predicted)};
}

ReplicaRecord record_from_row(const CsvTable &table, const std::vector<std::string> &row) {
    auto get = [&](const char *name) { return parse_double(row.at(table.column(name))); };
    ReplicaRecord r;
    r.replica = std::stoull(row.at(table.column("replica")));
    r.seed = std::stoull(row.at(table.column("seed")));
    r.stats.beta = get("beta");
    r.stats.ci99 = get("ci99");
    r.stats.r2 = get("r2");
    r.stats.xi = get("xi");
    r.stats.xi_degenerate = get("xi_degenerate");
    r.stats.gamma_opt = get("gamma_opt");
    r.stats.theta_opt = get("theta_opt");
    r.stats.e_min = get("e_min");
    r.stats.e_max = get("e_max");
    r.energy_opt = get("energy_opt");
    r.norm_J = get("norm_J");
    r.product = get("product");
    r.cov_c = get("cov_c");
    r.cov_r2 = get("cov_r2");
    r.cov_correlation = get("cov_correlation");
    r.beta_predicted = get("beta_predicted");
    return r;
}

void write_records(const std::filesystem::path &dir, std::size_t n,
                   const std::vector<ReplicaRecord> &records) {
    CsvTable replicas{kReplicaColumns, {}};
    CsvTable bins{{"replica", "bin", "mass", "count", "energy_sum"}, {}};
    CsvTable mcmc{{"seed", "N", "norm_J", "beta_qaoa", "product", "threshold"}, {}};
    for (const ReplicaRecord &r : records) {
        replicas.rows.push_back(record_row(r));
        for (std::size_t b = 0; b < r.bins.bins(); ++b) {
            bins.rows.push_back({std::to_string(r.replica), std::to_string(b),
                                 format_double(r.bins.mass[b]), format_double(r.bins.count[b]),
                                 format_double(r.bins.energy_sum[b])});
        }
        mcmc.rows.push_back({std::to_string(r.seed), std::to_string(n), format_double(r.norm_J),
                             format_double(r.stats.beta), format_double(r.product),
                             format_double(1.0 / r.norm_J)});
    }
    write_file_atomic(dir / file_name("replicas", n), replicas.to_string());
    write_file_atomic(dir / file_name("bins", n), bins.to_string());
    write_file_atomic(dir / file_name("mcmc", n), mcmc.to_string());
}

std::vector<ReplicaRecord> read_records(const std::filesystem::path &dir, std::size_t n,
                                        std::size_t bin_count) {
    const CsvTable replicas = CsvTable::parse(read_file(dir / file_name("replicas", n)));
    const CsvTable bins = CsvTable::parse(read_file(dir / file_name("bins", n)));
    std::vector<ReplicaRecord> records;
    std::map<std::size_t, std::size_t> position;
    for (const auto &row : replicas.rows) {
        records.push_back(record_from_row(replicas, row));
        ReplicaRecord &r = records.back();
        r.bins.replicas = 1;
        r.bins.mass.assign(bin_count, 0.0);
        r.bins.count.assign(bin_count, 0.0);
        r.bins.energy_sum.assign(bin_count, 0.0);
        position[r.replica] = records.size() - 1;
    }
    const std::size_t c_replica = bins.column("replica");
    const std::size_t c_bin = bins.column("bin");
    for (const auto &row : bins.rows) {
        const auto it = position.find(std::stoull(row.at(c_replica)));
        const std::size_t b = std::stoull(row.at(c_bin));
        if (it == position.end() || b >= bin_count) {
            throw std::runtime_error("analyze: bin row does not match any replica record");
        }
        EnergyBins &target = records[it->second].bins;
        target.mass[b] = parse_double(row.at(bins.column("mass")));
        target.count[b] = parse_double(row.at(bins.column("count")));
        target.energy_sum[b] = parse_double(row.at(bins.column("energy_sum")));
    }
    return records;
}

CsvTable binned_table(const EnergyBins &bins, const ReplicaSummary &summary) {
    CsvTable table{{"bin", "energy", "count", "mass", "mean_probability", "log_probability",
                    "fit_log_probability"},
                   {}};
    const double slope = -summary.binned.beta * summary.mean_span;
    for (std::size_t b = 0; b < bins.bins(); ++b) {
        if (bins.count[b] <= 0.0) {
            continue;
        }
        const double energy = bins.energy_sum[b] / bins.count[b];
        const double p = bins.mass[b] / bins.count[b];
        table.rows.push_back({std::to_string(b), format_double(energy),
                              format_double(bins.count[b]), format_double(bins.mass[b]),
                              format_double(p), format_double(p > 0.0 ? std::log(p) : -INFINITY),
                              format_double(summary.binned.log_intercept + slope * energy)});
    }
    return table;
}

std::string dump_json(const nlohmann::json &doc) { return doc.dump(2) + "\n"; }

} // namespace

void ExperimentConfig::validate() const {
    if (n_list.empty()) {
        throw std::invalid_argument("config: no sizes given");
    }
    for (std::size_t n : n_list) {
        if (n < 2 || n > kMaxSpins) {
            throw std::invalid_argument("config: size " + std::to_string(n) +
                                        " outside [2, " + std::to_string(kMaxSpins) + "]");
        }
        if (covariance && n > kMaxCovarianceSpins) {
            throw std::invalid_argument("config: covariance law needs N <= " +
                                        std::to_string(kMaxCovarianceSpins) +
                                        "; disable it for larger sizes");
        }
    }
    if (replicas < 1) {
        throw std::invalid_argument("config: replicas must be >= 1");
    }
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("config: sigma2 must be positive");
    }
    if (bin_count < 1) {
        throw std::invalid_argument("config: bin count must be >= 1");
    }
}

nlohmann::json config_to_json(const ExperimentConfig &config) {
    nlohmann::json doc;
    doc["family"] = std::string(to_string(config.family));
    doc["graph"] = graph_to_json(config.graph);
    doc["n_list"] = config.n_list;
    doc["sigma2"] = config.sigma2;
    doc["replicas"] = config.replicas;
    doc["master_seed"] = config.master_seed;
    doc["lambda"] = config.lambda;
    doc["bin_count"] = config.bin_count;
    doc["covariance"] = config.covariance;
    doc["optimizer"] = {{"grid_gamma", config.optimizer.grid_gamma},
                        {"grid_theta", config.optimizer.grid_theta},
                        {"tolerance", config.optimizer.tolerance},
                        {"max_evaluations", config.optimizer.max_evaluations}};
    return doc;
}

ExperimentConfig config_from_json(const nlohmann::json &doc) {
    ExperimentConfig config;
    config.family = parse_family(doc.at("family").get<std::string>());
    config.graph = graph_from_json(doc.at("graph"));
    config.n_list = doc.at("n_list").get<std::vector<std::size_t>>();
    config.sigma2 = doc.at("sigma2").get<double>();
    config.replicas = doc.at("replicas").get<std::size_t>();
    config.master_seed = doc.at("master_seed").get<std::uint64_t>();
    config.lambda = doc.at("lambda").get<double>();
    config.bin_count = doc.at("bin_count").get<std::size_t>();
    config.covariance = doc.at("covariance").get<bool>();
    const auto &opt = doc.at("optimizer");
    config.optimizer.grid_gamma = opt.at("grid_gamma").get<std::size_t>();
    config.optimizer.grid_theta = opt.at("grid_theta").get<std::size_t>();
    config.optimizer.tolerance = opt.at("tolerance").get<double>();
    config.optimizer.max_evaluations = opt.at("max_evaluations").get<std::size_t>();
    return config;
}

std::uint64_t replica_seed(std::uint64_t master_seed, Family family, std::size_t n,
                           std::size_t replica) {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(family), n, replica});
}

IsingProblem replica_problem(const ExperimentConfig &config, std::size_t n, std::size_t replica) {
    const std::uint64_t seed = replica_seed(config.master_seed, config.family, n, replica);
    const std::uint64_t graph_seed = derive_seed(seed, {kGraphTag});
    const Graph graph =
        config.graph.kind == GraphKind::Gnm
            ? gen_gnm_graph(n, config.graph.parameter, graph_seed)
            : gen_regular_graph(n, static_cast<std::size_t>(config.graph.parameter), graph_seed);
    return build_problem(config.family, graph, config.graph, config.sigma2, seed);
}

ReplicaRecord run_replica(const ExperimentConfig &config, std::size_t n, std::size_t replica) {
    ReplicaRecord record;
    record.replica = replica;
    record.seed = replica_seed(config.master_seed, config.family, n, replica);
    const IsingProblem problem = replica_problem(config, n, replica);
    const Spectrum spectrum = full_spectrum(problem);
    const OptResult opt = optimize_angles(problem, spectrum, config.lambda, config.optimizer);
    const CircuitParams params{opt.gamma_opt, opt.theta_opt, config.lambda};
    const QuantumState state = prepare_state(problem, spectrum, params);
    const std::vector<double> p = probabilities(state);
    const BoltzmannFit fit = fit_instance(p, spectrum);
    const Enhancement enhancement = ground_state_enhancement(state, spectrum);

    InstanceStats &s = record.stats;
    s.beta = fit.beta;
    s.ci99 = fit.ci99_halfwidth;
    s.r2 = fit.r2;
    s.xi = enhancement.xi;
    s.xi_degenerate = enhancement.xi_degenerate;
    s.gamma_opt = opt.gamma_opt;
    s.theta_opt = opt.theta_opt;
    s.e_min = spectrum.e_min;
    s.e_max = spectrum.e_max;
    record.energy_opt = opt.energy_opt;
    record.bins = bin_instance(p, spectrum, config.bin_count);

    const MixingComparison mixing = compare(problem, fit.beta);
    record.norm_J = mixing.norm_J;
    record.product = mixing.product;

    if (config.covariance) {
        const std::vector<double> sigma =
            covariance_all(spectrum, problem.has_flip_symmetry());
        const CovarianceLaw law = fit_covariance_law(sigma, spectrum, params);
        record.cov_c = law.c;
        record.cov_r2 = law.fit_r2;
        record.cov_correlation = law.correlation;
        record.beta_predicted = law.beta_predicted;
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        record.cov_c = record.cov_r2 = record.cov_correlation = record.beta_predicted = nan;
    }
    return record;
}

std::filesystem::path default_output_dir(const std::string &flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "results";
}

PipelineResult run_pipeline(const ExperimentConfig &config) {
    config.validate();
    const std::filesystem::path dir = config.output_dir;
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "config.json", dump_json(config_to_json(config)));

    struct Job {
        std::size_t n;
        std::size_t replica;
    };
    std::vector<Job> jobs;
    for (std::size_t n : config.n_list) {
        for (std::size_t r = 0; r < config.replicas; ++r) {
            jobs.push_back({n, r});
        }
    }
    std::vector<std::optional<ReplicaRecord>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                results[k] = run_replica(config, jobs[k].n, jobs[k].replica);
            } catch (const std::exception &e) {
                errors[k] = e.what();
                const std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "replica " << jobs[k].replica << " at N=" << jobs[k].n
                          << " failed: " << e.what() << "\n";
            }
        }
    };
    std::size_t workers = config.workers;
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread &t : pool) {
        t.join();
    }

    CsvTable failures{{"n", "replica", "seed", "error"}, {}};
    for (std::size_t n : config.n_list) {
        std::vector<ReplicaRecord> records;
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            if (jobs[k].n != n) {
                continue;
            }
            if (results[k]) {
                records.push_back(std::move(*results[k]));
            } else {
                failures.rows.push_back(
                    {std::to_string(n), std::to_string(jobs[k].replica),
                     std::to_string(replica_seed(config.master_seed, config.family, n,
                                                 jobs[k].replica)),
                     clean_message(errors[k])});
            }
        }
        write_records(dir, n, records);
    }
    write_file_atomic(dir / "failures.csv", failures.to_string());
    return analyze_directory(dir);
}

nlohmann::json summary_to_json(const ReplicaSummary &s) {
    nlohmann::json doc;
    doc["family"] = std::string(to_string(s.info.family));
    doc["graph"] = graph_to_json(s.info.graph);
    doc["n"] = s.info.n;
    doc["sigma2"] = s.info.sigma2;
    doc["replicas"] = s.replicas;
    doc["beta_mean"] = s.beta_mean;
    doc["beta_ci99"] = s.beta_ci99;
    doc["beta_median"] = s.beta_median;
    doc["xi_geometric_mean"] = s.xi_geometric_mean;
    doc["xi_arithmetic_mean"] = s.xi_arithmetic_mean;
    doc["xi_ci99_log"] = s.xi_ci99;
    doc["theta_opt_mean"] = s.theta_opt_mean;
    doc["gamma_opt_mean"] = s.gamma_opt_mean;
    doc["mean_span"] = s.mean_span;
    doc["mean_degree"] = s.mean_degree;
    doc["binned"] = {{"beta", s.binned.beta},
                     {"ci99", s.binned.ci99_halfwidth},
                     {"stderr", s.binned.beta_stderr},
                     {"r2", s.binned.r2},
                     {"log_intercept", s.binned.log_intercept},
                     {"n_points", s.binned.n_points}};
    return doc;
}

nlohmann::json scaling_to_json(const ScalingFit &fit) {
    const char *name = fit.predictor == ScalingPredictor::InvSqrtNrho ? "inv_sqrt_n_rho"
                       : fit.predictor == ScalingPredictor::InvSqrtZ  ? "inv_sqrt_z"
                                                                      : "sqrt_two_to_n";
    return {{"predictor", name},
            {"exponent", fit.exponent},
            {"prefactor", fit.prefactor},
            {"r2", fit.r2}};
}

PipelineResult analyze_directory(const std::filesystem::path &dir) {
    const ExperimentConfig config = config_from_json(nlohmann::json::parse(read_file(dir / "config.json")));
    const CsvTable failures = CsvTable::parse(read_file(dir / "failures.csv"));

    PipelineResult result;
    for (const auto &row : failures.rows) {
        result.failures.push_back({std::stoull(row.at(0)), std::stoull(row.at(1)),
                                   std::stoull(row.at(2)), row.at(3)});
    }

    nlohmann::json summaries = nlohmann::json::array();
    std::vector<ReplicaSummary> complete;
    std::vector<std::size_t> aborted;
    std::size_t instances = 0;
    for (std::size_t n : config.n_list) {
        EnsembleResult ensemble;
        ensemble.info = {config.family, config.graph, n, config.sigma2};
        ensemble.records = read_records(dir, n, config.bin_count);
        instances += ensemble.records.size();
        ensemble.failures = static_cast<std::size_t>(
            std::count_if(result.failures.begin(), result.failures.end(),
                          [n](const ReplicaFailure &f) { return f.n == n; }));
        ensemble.aborted = ensemble.records.empty() ||
                           static_cast<double>(ensemble.failures) >
                               kMaxFailureFraction * static_cast<double>(config.replicas);
        if (ensemble.aborted) {
            aborted.push_back(n);
        } else {
            std::vector<InstanceStats> stats;
            std::vector<EnergyBins> parts;
            for (const ReplicaRecord &r : ensemble.records) {
                stats.push_back(r.stats);
                parts.push_back(r.bins);
            }
            const EnergyBins merged = merge_bins(parts);
            ensemble.summary = summarize(ensemble.info, stats, merged);
            summaries.push_back(summary_to_json(ensemble.summary));
            write_file_atomic(dir / file_name("binned", n),
                              binned_table(merged, ensemble.summary).to_string());
            complete.push_back(ensemble.summary);
        }
        result.ensembles.push_back(std::move(ensemble));
    }
    write_file_atomic(dir / "summary.json", dump_json(summaries));

    result.scaling = nlohmann::json::object();
    if (complete.size() >= 4) {
        const ScalingPredictor degree_predictor = config.graph.kind == GraphKind::Gnm
                                                      ? ScalingPredictor::InvSqrtNrho
                                                      : ScalingPredictor::InvSqrtZ;
        const std::pair<const char *, std::pair<ScalingTarget, ScalingPredictor>> targets[] = {
            {"gamma_opt", {ScalingTarget::GammaOpt, degree_predictor}},
            {"beta", {ScalingTarget::Beta, degree_predictor}},
            {"xi", {ScalingTarget::Xi, ScalingPredictor::SqrtTwoToN}}};
        for (const auto &[name, choice] : targets) {
            try {
                result.scaling[name] = scaling_to_json(fit_scaling(complete, choice.first, choice.second));
            } catch (const std::invalid_argument &e) {
                result.scaling[name] = {{"error", e.what()}};
            }
        }
    }
    write_file_atomic(dir / "scaling.json", dump_json(result.scaling));

    if (!aborted.empty()) {
        result.exit_code = kExitAborted;
    } else if (!result.failures.empty()) {
        result.exit_code = kExitPartial;
    }

    nlohmann::json manifest;
    manifest["code_version"] = PBQAOA_VERSION;
    manifest["config"] = config_to_json(config);
    manifest["instances"] = instances;
    manifest["ensembles"] = complete.size();
    manifest["aborted_sizes"] = aborted;
    manifest["fit_settings"] = {{"weighting", "unweighted"},
                                {"probability_floor", kProbabilityFloor},
                                {"bins", config.bin_count},
                                {"ci_level", 0.99}};
    nlohmann::json failed = nlohmann::json::array();
    for (const ReplicaFailure &f : result.failures) {
        failed.push_back({{"n", f.n}, {"replica", f.replica}, {"seed", f.seed}, {"error", f.error}});
    }
    manifest["failures"] = failed;
    manifest["exit_code"] = result.exit_code;
    std::vector<std::string> names;
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            names.push_back(entry.path().filename().string());
        }
    }
    if (std::find(names.begin(), names.end(), "manifest.json") == names.end()) {
        names.push_back("manifest.json");
    }
    std::sort(names.begin(), names.end());
    manifest["files"] = names;
    write_file_atomic(dir / "manifest.json", dump_json(manifest));
    return result;
}

} // namespace pbq
