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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qfid/pipeline.hpp"
#include "qfid/state.hpp"

namespace qfid {

struct InstanceSpec {
    int n = 1;
    int rank_rho = 1;
    int rank_sigma = 1;
    std::uint64_t seed = 0;
};

struct Instance {
    Purification rho;
    Purification sigma;
};

/// Seeds for rho and sigma are derived from `spec.seed`; purifications use
/// ceil(log2 rank) garbage qubits.
Instance make_instance(const InstanceSpec& spec);
Instance instance_from_states(const DensityOperator& rho, const DensityOperator& sigma);

/// Independent 64-bit seed for stream `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// "%.17g".
std::string format_double(double v);

struct SweepSpec {
    int n = 1;
    int rank_rho = 1;
    int rank_sigma = 1;
    std::uint64_t seed_base = 0;
    int trials = 1;
    std::vector<double> kappa_sigma{16.0};
    std::vector<int> t_sigma{256};
    std::vector<double> kappa{64.0};
    std::vector<int> t{4096};
    std::vector<std::int64_t> M{16};
    SimLevel sim_level = SimLevel::CircuitPe;
    QaeMode qae_mode = QaeMode::Exact;
    double bound_constant = 1.0;
    int qubit_budget = kDefaultQubitBudget;
    int unitary_qubit_limit = kDefaultUnitaryQubitLimit;
    int jobs = 1;

    void validate() const;
    std::size_t cell_count() const;
    /// Parameters of cell `cell` (kappa_sigma outermost, M innermost).
    PipelineParams cell_params(std::size_t cell, std::uint64_t seed) const;
};

/// Fixed CSV header; one column per field of `csv_row`.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(std::size_t cell, int trial, const InstanceSpec& instance,
                    const EstimationReport& report);

/// Runs every (cell, trial), writing rows to `out` in cell order. Rows of
/// completed cells are flushed before an error (including non-finite values)
/// is rethrown.
void run_sweep(const SweepSpec& spec, std::ostream& out);

struct CoeffRow {
    Index k = 0;
    double delta = 0.0;
    double principal_delta = 0.0;  // delta reduced to [-pi, pi]
    Complex closed;
    Complex direct;
    double difference = 0.0;
    bool has_tail_bound = false;
    double tail_bound = 0.0;
};

/// Phase-estimation amplitudes of one eigenvalue over the whole grid.
std::vector<CoeffRow> coeffs_table(double lambda, const SqrtParams& params);
void write_coeffs(const std::vector<CoeffRow>& rows, std::ostream& out);

/// 3 sqrt(2) pi^3 / (T^2 delta^2).
double tail_bound(double delta, Index grid_size);

}  // namespace qfid
