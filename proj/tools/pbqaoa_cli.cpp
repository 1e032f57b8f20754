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
// Command line front end: problem generation, single-instance tools and the
// replica pipeline. Exit codes: 0 ok, 1 usage or input error, 2 partial
// failure, 3 aborted ensemble.

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pbqaoa/angle_opt.hpp"
#include "pbqaoa/interferometer.hpp"
#include "pbqaoa/io.hpp"
#include "pbqaoa/mcmc.hpp"
#include "pbqaoa/pipeline.hpp"
#include "pbqaoa/problem.hpp"
#include "pbqaoa/qaoa.hpp"
#include "pbqaoa/thermo.hpp"

namespace {

using namespace pbq;

// "gnm:0.9" or "regular:4".
GraphMeta parse_graph(const std::string &text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--graph", "expected gnm:<density> or regular:<degree>");
    }
    GraphMeta meta;
    try {
        meta.kind = parse_graph_kind(text.substr(0, colon));
        meta.parameter = parse_double(text.substr(colon + 1));
    } catch (const std::exception &e) {
        throw CLI::ValidationError("--graph", e.what());
    }
    return meta;
}

void emit(const std::string &path, const std::string &contents) {
    if (path.empty() || path == "-") {
        std::cout << contents;
    } else {
        write_file_atomic(path, contents);
    }
}

nlohmann::json fit_json(const BoltzmannFit &fit) {
    return {{"beta", fit.beta},
            {"ci99", fit.ci99_halfwidth},
            {"stderr", fit.beta_stderr},
            {"r2", fit.r2},
            {"log_intercept", fit.log_intercept},
            {"n_points", fit.n_points}};
}

struct AngleFlags {
    std::string angles_file;
    std::optional<double> gamma;
    std::optional<double> theta;
    double lambda = kDefaultLambda;

    void add(CLI::App *cmd) {
        cmd->add_option("--angles", angles_file, "Angles JSON written by `optimize`");
        cmd->add_option("--gamma", gamma, "Phase angle gamma (overrides --angles)");
        cmd->add_option("--theta", theta, "Mixing angle theta in (0, pi) (overrides --angles)");
        cmd->add_option("--lambda", lambda, "Direction phase lambda")->capture_default_str();
    }

    CircuitParams resolve() const {
        CircuitParams params{0.0, 0.0, lambda};
        bool have_gamma = false;
        bool have_theta = false;
        if (!angles_file.empty()) {
            const auto doc = nlohmann::json::parse(read_file(angles_file));
            params.gamma = doc.at("gamma").get<double>();
            params.theta = doc.at("theta").get<double>();
            params.lambda = doc.at("lambda").get<double>();
            have_gamma = have_theta = true;
        }
        if (gamma) {
            params.gamma = *gamma;
            have_gamma = true;
        }
        if (theta) {
            params.theta = *theta;
            have_theta = true;
        }
        if (!have_gamma || !have_theta) {
            throw CLI::ValidationError("angles", "give --angles or both --gamma and --theta");
        }
        return params;
    }
};

nlohmann::json opt_json(const OptResult &opt, double lambda) {
    return {{"gamma", opt.gamma_opt},     {"theta", opt.theta_opt},
            {"lambda", lambda},           {"energy_opt", opt.energy_opt},
            {"grid_energy", opt.grid_energy}, {"gamma_max", opt.gamma_max},
            {"evaluations", opt.evaluations}, {"converged", opt.converged}};
}

void add_optimizer_flags(CLI::App *cmd, OptOptions &options) {
    cmd->add_option("--grid-gamma", options.grid_gamma, "Gamma grid points")->capture_default_str();
    cmd->add_option("--grid-theta", options.grid_theta, "Theta grid points")->capture_default_str();
    cmd->add_option("--tolerance", options.tolerance, "Nelder-Mead simplex tolerance")
        ->capture_default_str();
    cmd->add_option("--max-evals", options.max_evaluations, "Nelder-Mead evaluation budget")
        ->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Exact single-layer QAOA pseudo-Boltzmann state simulator"};
    app.require_subcommand(1);

    // generate
    auto *generate = app.add_subcommand("generate", "Generate one problem instance as JSON");
    std::string gen_family = "qubo";
    std::string gen_graph = "gnm:0.9";
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    double gen_sigma2 = 1.0;
    std::string gen_out;
    generate->add_option("--family", gen_family, "qubo, maxcut or ising")->capture_default_str();
    generate->add_option("--graph", gen_graph, "gnm:<density> or regular:<degree>")
        ->capture_default_str();
    generate->add_option("--n", gen_n, "Number of spins")->required();
    generate->add_option("--seed", gen_seed, "Instance seed")->capture_default_str();
    generate->add_option("--sigma2", gen_sigma2, "Coefficient variance")->capture_default_str();
    generate->add_option("--out", gen_out, "Output file (stdout if omitted)");

    // optimize
    auto *optimize = app.add_subcommand("optimize", "Find the angles minimizing <E>");
    std::string opt_problem;
    double opt_lambda = kDefaultLambda;
    OptOptions opt_options;
    std::string opt_out;
    optimize->add_option("--problem", opt_problem, "Problem JSON")->required();
    optimize->add_option("--lambda", opt_lambda, "Direction phase lambda")->capture_default_str();
    add_optimizer_flags(optimize, opt_options);
    optimize->add_option("--out", opt_out, "Angles JSON (stdout if omitted)");

    // simulate
    auto *simulate = app.add_subcommand("simulate", "Prepare the state and fit a Boltzmann law");
    std::string sim_problem;
    AngleFlags sim_angles;
    std::string sim_dump;
    std::string sim_probabilities;
    std::string sim_out;
    simulate->add_option("--problem", sim_problem, "Problem JSON")->required();
    sim_angles.add(simulate);
    simulate->add_option("--dump", sim_dump, "Write <prefix>.bin and <prefix>.json state dump");
    simulate->add_option("--probabilities", sim_probabilities,
                         "CSV of x, energy, probability for every configuration");
    simulate->add_option("--out", sim_out, "Fit JSON (stdout if omitted)");

    // analyze
    auto *analyze = app.add_subcommand("analyze", "Recompute summaries from a replicate directory");
    std::string an_dir;
    analyze->add_option("--dir", an_dir, "Output directory of `replicate`")->required();

    // covariance
    auto *covariance = app.add_subcommand("covariance", "Per-configuration covariance sigma_EH");
    std::string cov_problem;
    std::string cov_out;
    AngleFlags cov_angles;
    std::string cov_mode = "auto";
    covariance->add_option("--problem", cov_problem, "Problem JSON")->required();
    covariance->add_option("--out", cov_out, "CSV output (stdout if omitted)");
    covariance->add_option("--mode", cov_mode,
                           "auto, single or split (split adds the two hierarchies and h0)")
        ->check(CLI::IsMember({"auto", "single", "split"}))
        ->capture_default_str();
    cov_angles.add(covariance);
    std::string cov_law_out;
    covariance->add_option("--law", cov_law_out,
                           "Also fit the linear law at the given angles and write it as JSON");

    // mcmc-compare
    auto *mcmc = app.add_subcommand("mcmc-compare", "Compare beta_QAOA with the MCMC threshold");
    std::string mc_problem;
    std::optional<double> mc_beta;
    double mc_lambda = kDefaultLambda;
    std::string mc_out;
    std::size_t mc_sweeps = 0;
    std::size_t mc_burn_in = 1000;
    std::uint64_t mc_seed = 0;
    double mc_sample_factor = 0.5;
    mcmc->add_option("--problem", mc_problem, "Problem JSON")->required();
    mcmc->add_option("--beta", mc_beta,
                     "beta_QAOA; when omitted the angles are optimized and beta is fitted");
    mcmc->add_option("--lambda", mc_lambda, "Direction phase for the optimization")
        ->capture_default_str();
    mcmc->add_option("--out", mc_out, "CSV output (stdout if omitted)");
    mcmc->add_option("--sweeps", mc_sweeps,
                     "Also run Metropolis for this many recorded sweeps and report it on stderr");
    mcmc->add_option("--burn-in", mc_burn_in, "Metropolis burn-in sweeps")->capture_default_str();
    mcmc->add_option("--mcmc-seed", mc_seed, "Metropolis seed")->capture_default_str();
    mcmc->add_option("--sample-factor", mc_sample_factor,
                     "Metropolis runs at this multiple of the threshold 1/||J||")
        ->capture_default_str();

    // replicate
    auto *replicate = app.add_subcommand("replicate", "Run the full replica pipeline");
    ExperimentConfig config;
    std::string rep_family = "qubo";
    std::string rep_graph = "gnm:0.9";
    std::string rep_out;
    bool rep_no_covariance = false;
    replicate->add_option("--family", rep_family, "qubo, maxcut or ising")->capture_default_str();
    replicate->add_option("--graph", rep_graph, "gnm:<density> or regular:<degree>")
        ->capture_default_str();
    replicate->add_option("--n", config.n_list, "Sizes, comma separated")
        ->required()
        ->delimiter(',');
    replicate->add_option("--sigma2", config.sigma2, "Coefficient variance")->capture_default_str();
    replicate->add_option("--replicas", config.replicas, "Replicas per size")
        ->capture_default_str();
    replicate->add_option("--seed", config.master_seed, "Master seed")->capture_default_str();
    replicate->add_option("--lambda", config.lambda, "Direction phase")->capture_default_str();
    replicate->add_option("--bins", config.bin_count, "Energy bins")->capture_default_str();
    replicate->add_option("--workers", config.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
    replicate->add_option("--out", rep_out,
                          std::string("Output directory (default $") + kOutputDirEnv +
                              " or ./results)");
    replicate->add_flag("--no-covariance", rep_no_covariance, "Skip the per-replica covariance law");
    add_optimizer_flags(replicate, config.optimizer);

    // sweep
    auto *sweep_cmd = app.add_subcommand("sweep", "Beta along one angle with the other at its optimum");
    std::string sw_problem;
    std::string sw_fix = "theta";
    std::size_t sw_points = 24;
    double sw_max_factor = 4.0;
    double sw_lambda = kDefaultLambda;
    std::string sw_out;
    OptOptions sw_options;
    sweep_cmd->add_option("--problem", sw_problem, "Problem JSON")->required();
    sweep_cmd->add_option("--fix", sw_fix, "Angle held at its optimum: theta (vary gamma) or gamma")
        ->check(CLI::IsMember({"theta", "gamma"}))
        ->capture_default_str();
    sweep_cmd->add_option("--points", sw_points, "Sweep points")->capture_default_str();
    sweep_cmd->add_option("--max-factor", sw_max_factor, "Gamma sweep reaches this times gamma_opt")
        ->capture_default_str();
    sweep_cmd->add_option("--lambda", sw_lambda, "Direction phase")->capture_default_str();
    sweep_cmd->add_option("--out", sw_out, "CSV output (stdout if omitted)");
    add_optimizer_flags(sweep_cmd, sw_options);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) {
            const GraphMeta meta = parse_graph(gen_graph);
            const Family family = parse_family(gen_family);
            const Graph graph = meta.kind == GraphKind::Gnm
                                    ? gen_gnm_graph(gen_n, meta.parameter, gen_seed)
                                    : gen_regular_graph(gen_n,
                                                        static_cast<std::size_t>(meta.parameter),
                                                        gen_seed);
            const IsingProblem problem = build_problem(family, graph, meta, gen_sigma2, gen_seed);
            emit(gen_out, problem_to_json(problem).dump(2) + "\n");
        } else if (optimize->parsed()) {
            const IsingProblem problem = read_problem(opt_problem);
            const Spectrum spectrum = full_spectrum(problem);
            const OptResult opt = optimize_angles(problem, spectrum, opt_lambda, opt_options);
            emit(opt_out, opt_json(opt, opt_lambda).dump(2) + "\n");
        } else if (simulate->parsed()) {
            const IsingProblem problem = read_problem(sim_problem);
            const Spectrum spectrum = full_spectrum(problem);
            const CircuitParams params = sim_angles.resolve();
            const QuantumState state = prepare_state(problem, spectrum, params);
            const std::vector<double> p = probabilities(state);
            const Enhancement enhancement = ground_state_enhancement(state, spectrum);
            nlohmann::json doc;
            doc["params"] = {{"gamma", params.gamma}, {"theta", params.theta},
                             {"lambda", params.lambda}};
            doc["energy"] = expectation_energy(state, spectrum);
            doc["xi"] = enhancement.xi;
            doc["xi_degenerate"] = enhancement.xi_degenerate;
            doc["fit"] = fit_json(fit_instance(p, spectrum));
            if (!sim_dump.empty()) {
                write_state_dump(sim_dump, state, params, problem.seed());
            }
            if (!sim_probabilities.empty()) {
                CsvTable table{{"x", "energy", "probability"}, {}};
                for (std::size_t x = 0; x < p.size(); ++x) {
                    table.rows.push_back({std::to_string(x), format_double(spectrum.energies[x]),
                                          format_double(p[x])});
                }
                write_file_atomic(sim_probabilities, table.to_string());
            }
            emit(sim_out, doc.dump(2) + "\n");
        } else if (analyze->parsed()) {
            const PipelineResult result = analyze_directory(an_dir);
            std::cout << read_file(std::filesystem::path(an_dir) / "summary.json");
            return result.exit_code;
        } else if (covariance->parsed()) {
            const IsingProblem problem = read_problem(cov_problem);
            const Spectrum spectrum = full_spectrum(problem);
            const bool split =
                cov_mode == "split" || (cov_mode == "auto" && problem.has_flip_symmetry());
            CsvTable table{{"x", "E_x", "E_rescaled", "sigma_EH"}, {}};
            std::vector<double> sigma;
            SplitCovariance parts;
            if (split) {
                parts = covariance_split(spectrum);
                sigma = parts.plus;
                table.header.insert(table.header.end(), {"sigma_EH_plus", "sigma_EH_minus", "h0"});
            } else {
                sigma = covariance_all(spectrum, false);
            }
            const double span = spectrum.span();
            for (std::size_t x = 0; x < spectrum.size(); ++x) {
                const double e = spectrum.energies[x];
                std::vector<std::string> row{std::to_string(x), format_double(e),
                                             format_double(span > 0.0 ? (e - spectrum.e_min) / span
                                                                      : 0.0),
                                             format_double(sigma[x])};
                if (split) {
                    row.push_back(format_double(parts.plus[x]));
                    row.push_back(format_double(parts.minus[x]));
                    row.push_back(format_double(parts.h0[x]));
                }
                table.rows.push_back(std::move(row));
            }
            emit(cov_out, table.to_string());
            if (!cov_law_out.empty()) {
                const CovarianceLaw law =
                    fit_covariance_law(sigma, spectrum, cov_angles.resolve());
                const nlohmann::json doc{{"c", law.c},
                                         {"omega_std", law.omega_std},
                                         {"r2", law.fit_r2},
                                         {"correlation", law.correlation},
                                         {"beta_predicted", law.beta_predicted}};
                emit(cov_law_out, doc.dump(2) + "\n");
            }
        } else if (mcmc->parsed()) {
            const IsingProblem problem = read_problem(mc_problem);
            double beta = 0.0;
            if (mc_beta) {
                beta = *mc_beta;
            } else {
                const Spectrum spectrum = full_spectrum(problem);
                const OptResult opt = optimize_angles(problem, spectrum, mc_lambda);
                const QuantumState state =
                    prepare_state(problem, spectrum, {opt.gamma_opt, opt.theta_opt, mc_lambda});
                beta = fit_instance(probabilities(state), spectrum).beta;
            }
            const MixingComparison cmp = compare(problem, beta);
            CsvTable table{{"seed", "N", "norm_J", "beta_qaoa", "product", "threshold"}, {}};
            table.rows.push_back({std::to_string(problem.seed()), std::to_string(problem.n()),
                                  format_double(cmp.norm_J), format_double(cmp.beta_qaoa),
                                  format_double(cmp.product),
                                  format_double(cmp.beta_mcmc_threshold)});
            emit(mc_out, table.to_string());
            if (mc_sweeps > 0) {
                const double sample_beta = mc_sample_factor * cmp.beta_mcmc_threshold;
                const MetropolisResult run =
                    metropolis_sample(problem, sample_beta, mc_sweeps, mc_burn_in, mc_seed);
                std::cerr << "metropolis beta=" << format_double(sample_beta)
                          << " acceptance=" << format_double(run.acceptance_rate)
                          << " lag1_energy_autocorrelation="
                          << format_double(run.energy_autocorrelation) << "\n";
            }
        } else if (replicate->parsed()) {
            config.family = parse_family(rep_family);
            config.graph = parse_graph(rep_graph);
            config.covariance = !rep_no_covariance;
            config.output_dir = default_output_dir(rep_out);
            const PipelineResult result = run_pipeline(config);
            std::cout << read_file(config.output_dir / "summary.json");
            return result.exit_code;
        } else if (sweep_cmd->parsed()) {
            const IsingProblem problem = read_problem(sw_problem);
            const Spectrum spectrum = full_spectrum(problem);
            const OptResult opt = optimize_angles(problem, spectrum, sw_lambda, sw_options);
            const SweepVariable variable =
                sw_fix == "theta" ? SweepVariable::Gamma : SweepVariable::Theta;
            const std::vector<double> values = sweep_grid(opt, variable, sw_points, sw_max_factor);
            const std::vector<SweepPoint> curve =
                sweep(problem, spectrum, opt, variable, values, sw_lambda);
            CsvTable table{{"angle", "energy", "beta", "beta_stderr", "fit_r2", "xi"}, {}};
            for (const SweepPoint &pt : curve) {
                table.rows.push_back({format_double(pt.angle), format_double(pt.energy),
                                      format_double(pt.beta), format_double(pt.beta_stderr),
                                      format_double(pt.fit_r2), format_double(pt.xi)});
            }
            emit(sw_out, table.to_string());
        }
    } catch (const CLI::ValidationError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
