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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qfid/block_encoding.hpp"
#include "qfid/linalg.hpp"
#include "qfid/state.hpp"

namespace qfid {

inline const std::string kPe = "pe";
inline const std::string kFlag = "flag";

enum class SimLevel {
    IdealSpectral,       // perfect phase estimation, applied on the exact spectrum
    CircuitPe,           // full phase-estimation circuit with exact exponentials
    CircuitPePerturbed,  // as above, each controlled exponential perturbed
};

std::string to_string(SimLevel level);
SimLevel parse_sim_level(std::string_view text);

/// Parameters of the square-root extraction.
///
/// `t` is the evolution-time scale; the phase register has l = ceil(log2 t)
/// qubits and T = 2^l grid points.
struct SqrtParams {
    double kappa = 1.0;
    int t = 8;
    SimLevel level = SimLevel::CircuitPe;
    double perturbation = 0.0;
    std::uint64_t perturbation_seed = 0;

    static SqrtParams make(double kappa, int t, SimLevel level = SimLevel::CircuitPe,
                           double perturbation = 0.0, std::uint64_t perturbation_seed = 0);

    int pe_qubits() const;
    Index grid_size() const;
};

/// sqrt(2/T) sin(pi (tau + 1/2) / T) for tau = 0..T-1.
RealVector sine_state(Index grid_size);

/// Piecewise filter: 1/2 k^{-1/4} lambda^{-1/4} on [1/k, 1], constant above,
/// a quarter sine ramp on [1/(2k), 1/k) and zero below.
double filter_f(double lambda, double kappa);

/// |h(lambda)> = f |0> + sqrt(1 - f^2) |1>.
Eigen::Vector2d h_state(double lambda, double kappa);

/// Eigenvalue of A read off grid point k.
double grid_eigenvalue(Index k, const SqrtParams& params);

/// Rotation taking |0> to |h(grid_eigenvalue(k))>.
Eigen::Matrix2d rotation_gate(Index k, const SqrtParams& params);

/// (t / 3T) lambda + 2 pi / 3 - 2 pi k / T.
double pe_phase_offset(double lambda, Index k, const SqrtParams& params);

/// Amplitude of grid point k after sine-window phase estimation of an
/// eigenvalue lambda, from the closed form. Within 1e-4 of the removable
/// singularities the finite sum is used instead.
Complex pe_coefficient(double lambda, Index k, const SqrtParams& params);

/// The same amplitude from the defining T-term sum.
Complex pe_coefficient_sum(double lambda, Index k, const SqrtParams& params);

/// Controlled-U_A uses charged for simulating exp(i A s) to unit precision.
std::int64_t hamiltonian_step_cost(double evolution_time);

/// Evolution time of each binary phase-estimation step, least significant first.
std::vector<double> pe_step_times(const SqrtParams& params);

/// Preparer queries for one application of the extraction circuit: one for
/// state preparation plus two per controlled-U_A in the forward and the
/// uncomputing phase estimation.
std::int64_t queries_per_use(const SqrtParams& params);

/// State-vector simulation of U = U2^+ U3^+ U4 U3 U2 U1 on
/// [purification segments...][pe][flag].
class SqrtCircuit {
   public:
    SqrtCircuit(const Purification& p, const SqrtParams& params);

    const RegisterLayout& layout() const { return layout_; }
    const SqrtParams& params() const { return params_; }
    /// The operator being square-rooted, reconstructed from the purification.
    const ComplexMatrix& encoded_operator() const { return a_; }

    /// Applies the full circuit in place; returns the preparer queries used.
    std::int64_t apply(ComplexVector& state) const;
    /// U|0...0>, starting from the purification's prepared vector.
    ComplexVector prepare(std::int64_t* queries = nullptr) const;
    /// Dense unitary; needs the purification's preparer.
    ComplexMatrix unitary(int qubit_budget = kDefaultQubitBudget) const;

   private:
    void apply_window(ComplexVector& state) const;
    std::int64_t apply_controlled_phase(ComplexVector& state, bool adjoint) const;
    void apply_fourier(ComplexVector& state, bool inverse) const;
    void apply_rotations(ComplexVector& state) const;

    Purification purification_;
    SqrtParams params_;
    RegisterLayout layout_;
    ComplexMatrix a_;
    Index grid_ = 0;
    Index system_dim_ = 0;
    Index below_system_ = 0;  // dimension of the purification qubits after the system
    RealVector window_reflector_;
    std::vector<ComplexMatrix> powers_;     // controlled unitary for each tau
    std::vector<Eigen::Matrix2d> rotations_;
    std::int64_t queries_per_phase_pass_ = 0;
};

/// Result of square-root extraction.
///
/// `encoding` is a (4 sqrt(kappa), a + l + 1, eps)-block-encoding of sqrt(A)
/// with the measured eps. Its carrier is the output purification (kind Pure)
/// or, for the density route, the output density operator.
struct SqrtOutput {
    SimLevel level = SimLevel::IdealSpectral;
    SqrtParams params;
    ComplexMatrix a_operator;
    EncodedOperator encoding;
    std::int64_t queries_per_use = 0;
    std::shared_ptr<const SqrtCircuit> circuit;

    const RegisterLayout& layout() const { return encoding.layout; }
    bool has_state() const { return encoding.kind == CarrierKind::Pure; }
    ComplexVector state() const;
    /// <0|_{a,l,1} rho_out |0>_{a,l,1} on the system register.
    ComplexMatrix block() const { return encoding.block(); }
    /// ||block - sqrt(A) / (4 sqrt(kappa))||, the encoding error before scaling.
    double block_deviation() const { return encoding.error() / encoding.spec.alpha; }
    /// Probability of finding every encoding ancilla in |0>.
    double amplitude() const;
    /// Weight of |0>_l in the reduced state of the phase register.
    double pe_zero_weight() const;
    ComplexMatrix unitary(int qubit_budget = kDefaultQubitBudget) const;
};

/// Runs the phase-estimation circuit (circuit-pe or circuit-pe-perturbed).
SqrtOutput build_sqrt_unitary(const Purification& p, const SqrtParams& params,
                              int qubit_budget = kDefaultQubitBudget);

/// Output of perfect phase estimation, sum_j sqrt(lambda_j) |u_j>..|0>_l|h(lambda_j)>.
/// Its block deviation is at most 1/(4 kappa); construction checks this.
/// With `materialize_pe` unset the phase register (identically |0>) is kept
/// as a zero-qubit segment.
SqrtOutput ideal_sqrt_state(const Purification& p, const SqrtParams& params,
                            bool materialize_pe = false);

/// Density-operator route for a carrier on `layout` (a system segment plus
/// optional encoding ancillas, no garbage).
SqrtOutput ideal_sqrt_state(const DensityOperator& rho, const RegisterLayout& layout,
                            const SqrtParams& params);

/// Circuit simulation when the register fits in `qubit_budget`, ideal
/// spectral output otherwise or when requested.
SqrtOutput build_sqrt(const Purification& p, const SqrtParams& params,
                      int qubit_budget = kDefaultQubitBudget);

/// Register width of the circuit for `p`: purification qubits + l + 1.
int sqrt_register_qubits(const Purification& p, const SqrtParams& params);

}  // namespace qfid
