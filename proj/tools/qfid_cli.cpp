// Copyright 2026 The qfid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qfid: fidelity estimation experiments from the command line.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfid/errors.hpp"
#include "qfid/harness.hpp"
#include "qfid/pipeline.hpp"
#include "qfid/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;

// Errors in how the run was specified (as opposed to failures while running).
struct ConfigProblem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string sim_level = "circuit-pe";
    int qubit_budget = qfid::kDefaultQubitBudget;
    std::string output;
    std::string config;
};

struct Overrides {
    std::optional<double> kappa_sigma;
    std::optional<int> t_sigma;
    std::optional<double> kappa;
    std::optional<int> t;
    std::optional<std::int64_t> M;
    std::string qae_mode = "exact";
    std::optional<double> bound_constant;
    std::optional<int> unitary_qubit_limit;
    double perturbation = 0.0;
};

struct EstimateArgs {
    std::optional<int> n;
    std::optional<int> rank_rho;
    std::optional<int> rank_sigma;
    std::optional<double> eps;
    std::string mode = "practical";
    std::string load_rho;
    std::string load_sigma;
    std::string dump_rho;
    std::string dump_sigma;
    Overrides params;
};

struct SweepArgs {
    int n = 1;
    int rank_rho = 1;
    int rank_sigma = 1;
    int trials = 1;
    std::vector<double> kappa_sigma{16.0};
    std::vector<int> t_sigma{256};
    std::vector<double> kappa{64.0};
    std::vector<int> t{4096};
    std::vector<std::int64_t> M{16};
    std::string qae_mode = "exact";
    double bound_constant = 1.0;
    int unitary_qubit_limit = qfid::kDefaultUnitaryQubitLimit;
};

struct CoeffsArgs {
    double lambda = 0.0;
    int t = 8;
    std::optional<long long> T;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--kappa-sigma", o.kappa_sigma, "kappa for the sqrt(sigma) stage");
    cmd->add_option("--t-sigma", o.t_sigma, "t for the sqrt(sigma) stage");
    cmd->add_option("--kappa", o.kappa, "kappa for the final stage");
    cmd->add_option("--t", o.t, "t for the final stage");
    cmd->add_option("--M", o.M, "amplitude-estimation grid size");
    cmd->add_option("--qae-mode", o.qae_mode, "exact | sample")->capture_default_str();
    cmd->add_option("--bound-constant", o.bound_constant, "constant in the analytic bound");
    cmd->add_option("--unitary-qubit-limit", o.unitary_qubit_limit,
                    "widest W_sigma assembled as an explicit unitary");
    cmd->add_option("--perturbation", o.perturbation,
                    "operator-norm error per controlled exponential (circuit-pe-perturbed)");
}

qfid::SimLevel sim_level(const Globals& g) {
    try {
        return qfid::parse_sim_level(g.sim_level);
    } catch (const qfid::InvalidParams& e) {
        throw ConfigProblem(std::string("--sim-level: ") + e.what());
    }
}

qfid::QaeMode qae_mode(const std::string& text) {
    try {
        return qfid::parse_qae_mode(text);
    } catch (const qfid::InvalidParams& e) {
        throw ConfigProblem(std::string("--qae-mode: ") + e.what());
    }
}

void write_output(const Globals& g, const std::string& text) {
    std::cout << text;
    if (!g.output.empty()) {
        std::ofstream f(g.output, std::ios::binary);
        if (!f) {
            throw qfid::Error("cannot write " + g.output);
        }
        f << text;
    }
}

qfid::Purification load_preparation(const std::string& path) {
    const nlohmann::json j = qfid::load_json(path);
    if (j.value("kind", "") == "purification") {
        return qfid::purification_from_json(j);
    }
    const qfid::DensityOperator rho = qfid::density_from_json(j);
    return qfid::purify(rho, qfid::ceil_log2(rho.rank()));
}

int cmd_estimate(const Globals& g, const EstimateArgs& a) {
    const qfid::SimLevel level = sim_level(g);
    qfid::Instance inst;
    if (!a.load_rho.empty() || !a.load_sigma.empty()) {
        if (a.load_rho.empty() || a.load_sigma.empty()) {
            throw ConfigProblem(a.load_rho.empty() ? "--load-rho is required with --load-sigma"
                                                   : "--load-sigma is required with --load-rho");
        }
        inst = qfid::Instance{load_preparation(a.load_rho), load_preparation(a.load_sigma)};
    } else {
        for (const auto& [key, value] : {std::pair{"--n", a.n}, std::pair{"--rank-rho", a.rank_rho},
                                         std::pair{"--rank-sigma", a.rank_sigma}}) {
            if (!value) {
                throw ConfigProblem(std::string(key) + " is required (or --load-rho/--load-sigma)");
            }
        }
        inst = qfid::make_instance(qfid::InstanceSpec{*a.n, *a.rank_rho, *a.rank_sigma, g.seed});
    }
    if (!a.dump_rho.empty()) {
        qfid::save_json(a.dump_rho, qfid::to_json(inst.rho));
    }
    if (!a.dump_sigma.empty()) {
        qfid::save_json(a.dump_sigma, qfid::to_json(inst.sigma));
    }

    const Overrides& o = a.params;
    qfid::PipelineParams p;
    if (a.eps) {
        qfid::ParamMode mode;
        try {
            mode = qfid::parse_param_mode(a.mode);
        } catch (const qfid::InvalidParams& e) {
            throw ConfigProblem(std::string("--mode: ") + e.what());
        }
        const int r_rho = qfid::DensityOperator::from_matrix(inst.rho.prepared_density(), 1e-8).rank();
        const int r_sigma = qfid::DensityOperator::from_matrix(inst.sigma.prepared_density(), 1e-8).rank();
        p = qfid::select_params(std::min(r_rho, r_sigma), *a.eps, mode, level);
    } else {
        const std::pair<const char*, bool> needed[] = {{"--kappa-sigma", o.kappa_sigma.has_value()},
                                                       {"--t-sigma", o.t_sigma.has_value()},
                                                       {"--kappa", o.kappa.has_value()},
                                                       {"--t", o.t.has_value()},
                                                       {"--M", o.M.has_value()}};
        for (const auto& [key, present] : needed) {
            if (!present) {
                throw ConfigProblem(std::string(key) + " is required when --eps is not given");
            }
        }
    }
    if (o.kappa_sigma) p.kappa_sigma = *o.kappa_sigma;
    if (o.t_sigma) p.t_sigma = *o.t_sigma;
    if (o.kappa) p.kappa = *o.kappa;
    if (o.t) p.t = *o.t;
    if (o.M) p.qae.M = *o.M;
    if (o.bound_constant) p.bound_constant = *o.bound_constant;
    if (o.unitary_qubit_limit) p.unitary_qubit_limit = *o.unitary_qubit_limit;
    p.qae.mode = qae_mode(o.qae_mode);
    p.qae.seed = g.seed;
    p.sim_level = level;
    p.qubit_budget = g.qubit_budget;
    p.perturbation = o.perturbation;

    const qfid::EstimationReport report = qfid::estimate_fidelity(inst.rho, inst.sigma, p);
    write_output(g, qfid::to_json(report).dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const Globals& g, const SweepArgs& a) {
    qfid::SweepSpec spec;
    spec.n = a.n;
    spec.rank_rho = a.rank_rho;
    spec.rank_sigma = a.rank_sigma;
    spec.seed_base = g.seed;
    spec.trials = a.trials;
    spec.kappa_sigma = a.kappa_sigma;
    spec.t_sigma = a.t_sigma;
    spec.kappa = a.kappa;
    spec.t = a.t;
    spec.M = a.M;
    spec.sim_level = sim_level(g);
    spec.qae_mode = qae_mode(a.qae_mode);
    spec.bound_constant = a.bound_constant;
    spec.qubit_budget = g.qubit_budget;
    spec.unitary_qubit_limit = a.unitary_qubit_limit;
    spec.jobs = g.jobs;
    try {
        spec.validate();
    } catch (const qfid::InvalidParams& e) {
        throw ConfigProblem(e.what());
    }
    if (g.output.empty()) {
        qfid::run_sweep(spec, std::cout);
        return kExitOk;
    }
    std::ofstream f(g.output, std::ios::binary);
    if (!f) {
        throw qfid::Error("cannot write " + g.output);
    }
    qfid::run_sweep(spec, f);
    return kExitOk;
}

int cmd_verify(const Globals& g, const std::string& suite) {
    std::vector<qfid::Check> checks;
    try {
        checks = qfid::run_verify(suite, g.seed);
    } catch (const qfid::UnknownSuite& e) {
        throw ConfigProblem(e.what());
    }
    std::ostringstream text;
    const bool ok = qfid::print_checks(checks, text);
    write_output(g, text.str());
    return ok ? kExitOk : kExitRuntime;
}

int cmd_coeffs(const Globals& g, const CoeffsArgs& a) {
    qfid::SqrtParams params;
    try {
        params = qfid::SqrtParams::make(4.0, a.t);
    } catch (const qfid::InvalidParams& e) {
        throw ConfigProblem(std::string("--t: ") + e.what());
    }
    if (a.T && *a.T != params.grid_size()) {
        throw ConfigProblem("--T must equal 2^ceil(log2 t) = " + std::to_string(params.grid_size()));
    }
    std::ostringstream text;
    qfid::write_coeffs(qfid::coeffs_table(a.lambda, params), text);
    write_output(g, text.str());
    return kExitOk;
}

bool on_command_line(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) {
            return true;
        }
    }
    return false;
}

// Splices flat key=value config entries into the argument list for every
// option not already given on the command line, so explicit flags win.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::size_t sub_pos = args.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < args.size() && sub == nullptr; ++i) {
        for (CLI::App* candidate : app.get_subcommands({})) {
            if (candidate->get_name() == args[i]) {
                sub = candidate;
                sub_pos = i;
                break;
            }
        }
    }
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::Error& e) {
        throw ConfigProblem(std::string("--config: ") + e.what());
    }
    std::vector<std::string> global_extra;
    std::vector<std::string> sub_extra;
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") {
            continue;  // section markers
        }
        const std::string flag = "--" + item.name;
        if (flag == "--config") {
            throw ConfigProblem("config key 'config' cannot nest another file");
        }
        CLI::Option* opt = app.get_option_no_throw(flag);
        auto* target = &global_extra;
        if (opt == nullptr && sub != nullptr) {
            opt = sub->get_option_no_throw(flag);
            target = &sub_extra;
        }
        if (opt == nullptr) {
            throw ConfigProblem("unknown config key '" + item.name + "'");
        }
        if (on_command_line(args, flag)) {
            continue;
        }
        target->push_back(flag);
        for (const auto& v : item.inputs) {
            target->push_back(v);
        }
    }
    std::vector<std::string> merged(args.begin(), args.begin() + static_cast<long>(sub_pos));
    merged.insert(merged.end(), global_extra.begin(), global_extra.end());
    merged.insert(merged.end(), args.begin() + static_cast<long>(sub_pos), args.end());
    merged.insert(merged.end(), sub_extra.begin(), sub_extra.end());
    return merged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum fidelity estimation via square-root block-encodings"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals g;
    app.add_option("--seed", g.seed, "base seed")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads for sweeps")->capture_default_str();
    app.add_option("--sim-level", g.sim_level,
                   "ideal-spectral | circuit-pe | circuit-pe-perturbed")
        ->capture_default_str();
    app.add_option("--qubit-budget", g.qubit_budget, "largest simulated register")
        ->capture_default_str();
    app.add_option("--output", g.output, "also write the result to this file");
    app.add_option("--config", g.config, "flat key = value file; flags win");

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand("estimate", "estimate F(rho, sigma) once");
    estimate->add_option("--n", est.n, "qubits");
    estimate->add_option("--rank-rho", est.rank_rho, "rank of the random rho");
    estimate->add_option("--rank-sigma", est.rank_sigma, "rank of the random sigma");
    estimate->add_option("--eps", est.eps, "target accuracy for parameter selection");
    estimate->add_option("--mode", est.mode, "paper | practical")->capture_default_str();
    estimate->add_option("--load-rho", est.load_rho, "state file for rho");
    estimate->add_option("--load-sigma", est.load_sigma, "state file for sigma");
    estimate->add_option("--dump-rho", est.dump_rho, "write the prepared rho here");
    estimate->add_option("--dump-sigma", est.dump_sigma, "write the prepared sigma here");
    add_overrides(estimate, est.params);

    SweepArgs sw;
    CLI::App* sweep = app.add_subcommand("sweep", "grid of estimations to CSV");
    sweep->add_option("--n", sw.n)->capture_default_str();
    sweep->add_option("--rank-rho", sw.rank_rho)->capture_default_str();
    sweep->add_option("--rank-sigma", sw.rank_sigma)->capture_default_str();
    sweep->add_option("--trials", sw.trials, "trials per cell; seed = --seed + trial")
        ->capture_default_str();
    sweep->add_option("--kappa-sigma", sw.kappa_sigma)->delimiter(',')->capture_default_str();
    sweep->add_option("--t-sigma", sw.t_sigma)->delimiter(',')->capture_default_str();
    sweep->add_option("--kappa", sw.kappa)->delimiter(',')->capture_default_str();
    sweep->add_option("--t", sw.t)->delimiter(',')->capture_default_str();
    sweep->add_option("--M", sw.M)->delimiter(',')->capture_default_str();
    sweep->add_option("--qae-mode", sw.qae_mode)->capture_default_str();
    sweep->add_option("--bound-constant", sw.bound_constant)->capture_default_str();
    sweep->add_option("--unitary-qubit-limit", sw.unitary_qubit_limit)->capture_default_str();

    std::string suite = "all";
    CLI::App* verify = app.add_subcommand("verify", "run lemma verification suites");
    verify->add_option("suite", suite, "suite name or 'all'")->capture_default_str();

    CoeffsArgs co;
    CLI::App* coeffs = app.add_subcommand("coeffs", "phase-estimation amplitude table");
    coeffs->add_option("--lambda", co.lambda, "eigenvalue")->required();
    coeffs->add_option("--t", co.t, "evolution-time scale (>= 6)")->required();
    coeffs->add_option("--T", co.T, "grid size; must be 2^ceil(log2 t)");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(app, std::move(args));
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return kExitConfig;
        }
        if (g.jobs < 1) {
            throw ConfigProblem("--jobs must be at least 1");
        }
        if (*estimate) return cmd_estimate(g, est);
        if (*sweep) return cmd_sweep(g, sw);
        if (*verify) return cmd_verify(g, suite);
        if (*coeffs) return cmd_coeffs(g, co);
        return kExitConfig;
    } catch (const ConfigProblem& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qfid::InfeasibleParams& e) {
        std::cerr << "infeasible parameters: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
