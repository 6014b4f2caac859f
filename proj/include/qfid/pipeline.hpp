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
#include <string>
#include <string_view>

#include <json.hpp>

#include "qfid/amplitude_estimation.hpp"
#include "qfid/block_encoding.hpp"
#include "qfid/sqrt_extractor.hpp"
#include "qfid/state.hpp"

namespace qfid {

inline constexpr std::int64_t kCircuitTCeiling = std::int64_t{1} << 20;
inline constexpr std::int64_t kIdealTCeiling = std::int64_t{1} << 30;
inline constexpr int kDefaultUnitaryQubitLimit = 10;

inline const std::string kSigmaPrefix = "sigma.";

struct PipelineParams {
    double kappa_sigma = 16.0;
    int t_sigma = 256;
    double kappa = 64.0;
    int t = 4096;
    QaeParams qae;
    SimLevel sim_level = SimLevel::CircuitPe;
    double bound_constant = 1.0;
    double perturbation = 0.0;  // only used at circuit-pe-perturbed
    int qubit_budget = kDefaultQubitBudget;
    // W_sigma is assembled as an explicit unitary only up to this width.
    int unitary_qubit_limit = kDefaultUnitaryQubitLimit;

    /// Checks kappa >= 1, t >= 6 for both stages and the QAE parameters.
    void validate() const;
    SqrtParams sigma_stage() const;
    SqrtParams eta_stage() const;
};

/// W_sigma: an encoding of sqrt(sigma) / (4 sqrt(kappa_sigma)).
///
/// When the Lemma-style unitary fits in `unitary_qubit_limit` qubits the
/// carrier is that unitary; otherwise it is the extraction output itself,
/// which has the same top-left block.
struct SigmaStage {
    SqrtOutput sqrt;
    EncodedOperator w_sigma;
    bool assembled = false;
    ComplexMatrix block;                  // <0|W_sigma|0> on the system
    std::int64_t sigma_queries_per_v = 0;  // O_sigma queries per V_sigma use
};

SigmaStage build_w_sigma(const Purification& sigma_prep, const PipelineParams& params);

/// eta and its top-left block B rho B^+ ~ sqrt(sigma) rho sqrt(sigma) / (16 kappa_sigma).
///
/// The full route applies the assembled W_sigma to the prepared rho. The
/// compressed route keeps only what the next stage can observe: the carrier
/// A (x) |0><0| + (1 - tr A) |0><0| (x) |1><1| on [system][encoding], which
/// has the same block and hence the same downstream amplitudes.
struct EtaStage {
    Purification purification;
    DensityOperator density;
    ComplexMatrix block;
    bool full_register = false;
    double lemma_error = 0.0;  // ||block - sqrt(s) rho sqrt(s) / (16 kappa_sigma)||
};

EtaStage build_eta(const Purification& rho_prep, const SigmaStage& sigma,
                   const ComplexMatrix& sigma_matrix, const PipelineParams& params);

struct EstimationReport {
    double estimate = 0.0;
    double exact_fidelity = 0.0;
    double abs_error = 0.0;
    double analytic_bound = 0.0;
    double x_tilde = 0.0;
    double x = 0.0;
    int rank_r = 0;
    std::int64_t queries_rho = 0;
    std::int64_t queries_sigma = 0;
    PipelineParams params;
    std::uint64_t seed = 0;

    bool swapped = false;
    std::string sigma_stage_level;
    std::string eta_stage_level;
    bool w_sigma_assembled = false;
    bool eta_full_register = false;
    double eps_sigma = 0.0;
    double eps_eta_sqrt = 0.0;
    double eta_lemma_error = 0.0;
    double eta_lemma_bound = 0.0;  // bound_constant * (ks^-3/2 + ks^1/2/ts + ks^2/ts^2)
    double delta = 0.0;            // QAE radius at the measured x
    double delta_tilde = 0.0;      // QAE radius at x_tilde
};

EstimationReport estimate_fidelity(const Purification& rho_prep, const Purification& sigma_prep,
                                   const PipelineParams& params);

/// Analytic error bound for the final estimate with QAE radius `delta`.
double analytic_error_bound(const PipelineParams& params, int r, double delta);

nlohmann::ordered_json to_json(const EstimationReport& report);

enum class ParamMode { Paper, Practical };
ParamMode parse_param_mode(std::string_view text);

/// Literal parameter formulas with unit constants, before any feasibility check.
struct PaperParams {
    double kappa_sigma = 0.0;
    double t_sigma = 0.0;
    double kappa = 0.0;
    double t = 0.0;
    double delta = 0.0;
    double M = 0.0;
};

PaperParams paper_params(int r, double eps);

/// Paper mode: the formulas above, rounded up (M to a power of two); throws
/// InfeasibleParams past the t ceiling for `level`. Practical mode: the
/// search described in the README, always within the ceiling.
PipelineParams select_params(int r, double eps, ParamMode mode,
                             SimLevel level = SimLevel::CircuitPe);

struct WeylCheck {
    double difference = 0.0;  // |tr sqrt(block) - tr sqrt(target)|
    double bound = 0.0;       // r sqrt(3 ||block - target||)
    bool holds = false;
};

WeylCheck weyl_trace_bound_check(const ComplexMatrix& eta_block, const ComplexMatrix& target,
                                 int r);

}  // namespace qfid
