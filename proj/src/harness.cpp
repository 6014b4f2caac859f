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

#include "qfid/harness.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "qfid/errors.hpp"

namespace qfid {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

Instance instance_from_states(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.qubits() != sigma.qubits()) {
        throw DimensionMismatch("rho and sigma act on different registers");
    }
    return Instance{purify(rho, ceil_log2(rho.rank())), purify(sigma, ceil_log2(sigma.rank()))};
}

Instance make_instance(const InstanceSpec& spec) {
    const DensityOperator rho = random_density(spec.n, spec.rank_rho, derive_seed(spec.seed, 1));
    const DensityOperator sigma = random_density(spec.n, spec.rank_sigma, derive_seed(spec.seed, 2));
    return instance_from_states(rho, sigma);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void SweepSpec::validate() const {
    if (kappa_sigma.empty() || t_sigma.empty() || kappa.empty() || t.empty() || M.empty()) {
        throw InvalidParams("sweep grid has an empty axis");
    }
    if (trials < 1) {
        throw InvalidParams("sweep needs at least one trial per cell");
    }
    if (jobs < 1) {
        throw InvalidParams("--jobs must be at least 1");
    }
    for (std::size_t c = 0; c < cell_count(); ++c) {
        cell_params(c, 0).validate();
    }
}

std::size_t SweepSpec::cell_count() const {
    return kappa_sigma.size() * t_sigma.size() * kappa.size() * t.size() * M.size();
}

PipelineParams SweepSpec::cell_params(std::size_t cell, std::uint64_t seed) const {
    PipelineParams p;
    std::size_t c = cell;
    auto take = [&c](std::size_t size) {
        const std::size_t i = c % size;
        c /= size;
        return i;
    };
    p.qae = QaeParams{M[take(M.size())], qae_mode, seed};
    p.t = t[take(t.size())];
    p.kappa = kappa[take(kappa.size())];
    p.t_sigma = t_sigma[take(t_sigma.size())];
    p.kappa_sigma = kappa_sigma[take(kappa_sigma.size())];
    p.sim_level = sim_level;
    p.bound_constant = bound_constant;
    p.qubit_budget = qubit_budget;
    p.unitary_qubit_limit = unitary_qubit_limit;
    return p;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns{
        "cell",          "trial",       "seed",          "n",          "rank_rho",
        "rank_sigma",    "kappa_sigma", "t_sigma",       "kappa",      "t",
        "M",             "sim_level",   "qae_mode",      "x",          "x_tilde",
        "estimate",      "exact_fidelity", "abs_error",  "analytic_bound", "queries_rho",
        "queries_sigma", "swapped"};
    return columns;
}

std::string csv_header() {
    std::string out;
    for (const auto& c : csv_columns()) {
        out += out.empty() ? c : "," + c;
    }
    return out;
}

std::string csv_row(std::size_t cell, int trial, const InstanceSpec& instance,
                    const EstimationReport& r) {
    const std::pair<const char*, double> numeric[] = {
        {"kappa_sigma", r.params.kappa_sigma}, {"kappa", r.params.kappa}, {"x", r.x},
        {"x_tilde", r.x_tilde}, {"estimate", r.estimate}, {"exact_fidelity", r.exact_fidelity},
        {"abs_error", r.abs_error}, {"analytic_bound", r.analytic_bound}};
    for (const auto& [name, value] : numeric) {
        if (!std::isfinite(value)) {
            throw Error(std::string("non-finite value in column ") + name + " (cell " +
                        std::to_string(cell) + ", trial " + std::to_string(trial) + ")");
        }
    }
    std::ostringstream s;
    s << cell << ',' << trial << ',' << instance.seed << ',' << instance.n << ','
      << instance.rank_rho << ',' << instance.rank_sigma << ','
      << format_double(r.params.kappa_sigma) << ',' << r.params.t_sigma << ','
      << format_double(r.params.kappa) << ',' << r.params.t << ',' << r.params.qae.M << ','
      << to_string(r.params.sim_level) << ',' << to_string(r.params.qae.mode) << ','
      << format_double(r.x) << ',' << format_double(r.x_tilde) << ','
      << format_double(r.estimate) << ',' << format_double(r.exact_fidelity) << ','
      << format_double(r.abs_error) << ',' << format_double(r.analytic_bound) << ','
      << r.queries_rho << ',' << r.queries_sigma << ',' << (r.swapped ? 1 : 0);
    return s.str();
}

namespace {

std::string run_cell(const SweepSpec& spec, std::size_t cell) {
    std::string rows;
    for (int trial = 0; trial < spec.trials; ++trial) {
        const InstanceSpec inst{spec.n, spec.rank_rho, spec.rank_sigma,
                                spec.seed_base + static_cast<std::uint64_t>(trial)};
        const Instance instance = make_instance(inst);
        const EstimationReport report =
            estimate_fidelity(instance.rho, instance.sigma, spec.cell_params(cell, inst.seed));
        rows += csv_row(cell, trial, inst, report);
        rows += '\n';
    }
    return rows;
}

}  // namespace

void run_sweep(const SweepSpec& spec, std::ostream& out) {
    spec.validate();
    const std::size_t cells = spec.cell_count();
    std::vector<std::string> rows(cells);
    std::vector<std::exception_ptr> errors(cells);
    std::vector<char> done(cells, 0);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= cells || abort.load()) {
                return;
            }
            std::string text;
            std::exception_ptr err;
            try {
                text = run_cell(spec, c);
            } catch (...) {
                err = std::current_exception();
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                rows[c] = std::move(text);
                errors[c] = err;
                done[c] = 1;
            }
            cv.notify_all();
        }
    };
    const int threads = static_cast<int>(std::min<std::size_t>(spec.jobs, cells));
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) {
        pool.emplace_back(worker);
    }

    out << csv_header() << '\n';
    std::exception_ptr failure;
    for (std::size_t c = 0; c < cells; ++c) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return done[c] != 0; });
        if (errors[c]) {
            failure = errors[c];
            abort = true;
            break;
        }
        out << rows[c];
        rows[c].clear();
    }
    out.flush();
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double tail_bound(double delta, Index grid_size) {
    const double pi = std::numbers::pi;
    const double T = static_cast<double>(grid_size);
    return 3.0 * std::sqrt(2.0) * pi * pi * pi / (T * T * delta * delta);
}

std::vector<CoeffRow> coeffs_table(double lambda, const SqrtParams& params) {
    const double pi = std::numbers::pi;
    const Index grid = params.grid_size();
    std::vector<CoeffRow> rows;
    for (Index k = 0; k < grid; ++k) {
        CoeffRow row;
        row.k = k;
        row.delta = pe_phase_offset(lambda, k, params);
        row.closed = pe_coefficient(lambda, k, params);
        row.direct = pe_coefficient_sum(lambda, k, params);
        row.difference = std::abs(row.closed - row.direct);
        // The amplitude is 2 pi-periodic in delta; the bound is stated for the
        // principal value.
        row.principal_delta = std::remainder(row.delta, 2.0 * pi);
        row.has_tail_bound = std::abs(row.principal_delta) > 2.0 * pi / static_cast<double>(grid);
        if (row.has_tail_bound) {
            row.tail_bound = tail_bound(row.principal_delta, grid);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_coeffs(const std::vector<CoeffRow>& rows, std::ostream& out) {
    out << "k,delta,principal_delta,closed_re,closed_im,direct_re,direct_im,abs_difference,abs_alpha,tail_bound\n";
    for (const auto& r : rows) {
        out << r.k << ',' << format_double(r.delta) << ',' << format_double(r.principal_delta) << ','
            << format_double(r.closed.real()) << ','
            << format_double(r.closed.imag()) << ',' << format_double(r.direct.real()) << ','
            << format_double(r.direct.imag()) << ',' << format_double(r.difference) << ','
            << format_double(std::abs(r.closed)) << ','
            << (r.has_tail_bound ? format_double(r.tail_bound) : std::string("-")) << '\n';
    }
}

}  // namespace qfid
