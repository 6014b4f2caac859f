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

#include <string>
#include <vector>

#include "qfid/linalg.hpp"
#include "qfid/state.hpp"

namespace qfid {

inline constexpr int kDefaultQubitBudget = 14;

// Prefix of the segments added by the purification-to-unitary construction,
// which hold a copy of the preparer's whole register.
inline const std::string kPurifierPrefix = "purifier.";

/// (alpha, a, epsilon) of an alpha-scaled block-encoding with a ancilla
/// qubits and operator-norm error epsilon.
struct BlockEncodingSpec {
    double alpha = 1.0;
    int ancilla_qubits = 0;
    double epsilon = 0.0;

    static BlockEncodingSpec make(double alpha, int ancilla_qubits, double epsilon);
};

/// How a carrier matrix encodes its block.
enum class CarrierKind {
    Unitary,  // block of a unitary operator
    Density,  // block of a density operator
    Pure,     // column vector; the density operator is tr_garbage(|v><v|)
};

/// A carrier together with the register roles that define its block.
///
/// `system` names the segments the target acts on; `garbage` names segments
/// traced out first (density and pure carriers only); every other segment is
/// an encoding ancilla projected onto |0>.
struct EncodedOperator {
    CarrierKind kind = CarrierKind::Unitary;
    ComplexMatrix carrier;
    RegisterLayout layout;
    std::vector<std::string> system;
    std::vector<std::string> garbage;
    BlockEncodingSpec spec;
    ComplexMatrix target;

    /// Validates the roles and re-checks the encoding error against `spec`.
    static EncodedOperator make(CarrierKind kind, ComplexMatrix carrier, RegisterLayout layout,
                                std::vector<std::string> system, std::vector<std::string> garbage,
                                BlockEncodingSpec spec, ComplexMatrix target);

    std::vector<std::string> encoding_segments() const;
    /// The unscaled block <0|_enc carrier |0>_enc acting on `system`.
    ComplexMatrix block() const;
    double error() const;
};

ComplexMatrix encoded_block(CarrierKind kind, const ComplexMatrix& carrier,
                            const RegisterLayout& layout, const std::vector<std::string>& system,
                            const std::vector<std::string>& garbage);

/// ||alpha * <0|_a carrier |0>_a - target|| with the first layout segment as
/// the system and the trailing segments as encoding ancillas.
double be_error(const ComplexMatrix& carrier, const RegisterLayout& layout,
                const ComplexMatrix& target, double alpha);

double be_error(CarrierKind kind, const ComplexMatrix& carrier, const RegisterLayout& layout,
                const std::vector<std::string>& system, const std::vector<std::string>& garbage,
                const ComplexMatrix& target, double alpha);

/// Sum_{j,k} |k, j><j, k| on 2m qubits.
ComplexMatrix swap_registers(int m_qubits, int qubit_budget = kDefaultQubitBudget);

/// Builds (I (x) V^dagger)(SWAP (x) I_g)(I (x) V) from a purification prepared
/// by V, where the prepared register has m qubits and the garbage g.
///
/// The result acts on [prepared segments...][purifier.<segment> for every
/// segment of the purification], with V applied to the purifier copy and the
/// SWAP exchanging each prepared segment with its copy. It is a
/// (1, m + g, 0)-block-encoding of tr_garbage(V|0><0|V^dagger).
EncodedOperator purification_to_unitary_be(const Purification& p,
                                           int qubit_budget = kDefaultQubitBudget);

}  // namespace qfid
