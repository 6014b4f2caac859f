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

#include "qfid/block_encoding.hpp"

#include <algorithm>
#include <set>

namespace qfid {

BlockEncodingSpec BlockEncodingSpec::make(double alpha, int ancilla_qubits, double epsilon) {
    if (!(alpha > 0.0)) {
        throw InvalidParams("block-encoding scale must be positive");
    }
    if (ancilla_qubits < 0 || !(epsilon >= 0.0)) {
        throw InvalidParams("block-encoding ancilla count and error must be nonnegative");
    }
    return BlockEncodingSpec{alpha, ancilla_qubits, epsilon};
}

namespace {

void check_roles(CarrierKind kind, const ComplexMatrix& carrier, const RegisterLayout& layout,
                 const std::vector<std::string>& system, const std::vector<std::string>& garbage) {
    std::set<std::string> seen;
    for (const auto& name : system) {
        (void)layout.segment(name);
        if (!seen.insert(name).second) {
            throw InvalidParams("segment '" + name + "' listed twice");
        }
    }
    for (const auto& name : garbage) {
        (void)layout.segment(name);
        if (!seen.insert(name).second) {
            throw InvalidParams("segment '" + name + "' is both system and garbage");
        }
    }
    if (kind == CarrierKind::Unitary && !garbage.empty()) {
        throw InvalidParams("a unitary carrier has no garbage to trace out");
    }
    const Index dim = layout.dimension();
    const bool shape_ok = kind == CarrierKind::Pure
                              ? (carrier.rows() == dim && carrier.cols() == 1)
                              : (carrier.rows() == dim && carrier.cols() == dim);
    if (!shape_ok) {
        throw DimensionMismatch("carrier shape does not match a " +
                                std::to_string(layout.total_qubits()) + "-qubit layout");
    }
}

}  // namespace

ComplexMatrix encoded_block(CarrierKind kind, const ComplexMatrix& carrier,
                            const RegisterLayout& layout, const std::vector<std::string>& system,
                            const std::vector<std::string>& garbage) {
    check_roles(kind, carrier, layout, system, garbage);
    std::vector<std::string> kept = layout.complement(garbage);
    std::vector<std::string> encoding;
    for (const auto& name : kept) {
        if (std::find(system.begin(), system.end(), name) == system.end()) {
            encoding.push_back(name);
        }
    }
    switch (kind) {
        case CarrierKind::Unitary:
            return project_zero(carrier, layout, encoding);
        case CarrierKind::Density: {
            const ComplexMatrix traced = partial_trace(carrier, layout, kept);
            return project_zero(traced, layout.restricted(kept), encoding);
        }
        case CarrierKind::Pure: {
            const ComplexVector projected = project_zero(ComplexVector(carrier.col(0)), layout, encoding);
            const auto rest = layout.complement(encoding);
            return reduced_density(projected, layout.restricted(rest), system);
        }
    }
    throw Error("unreachable carrier kind");
}

double be_error(CarrierKind kind, const ComplexMatrix& carrier, const RegisterLayout& layout,
                const std::vector<std::string>& system, const std::vector<std::string>& garbage,
                const ComplexMatrix& target, double alpha) {
    const ComplexMatrix block = encoded_block(kind, carrier, layout, system, garbage);
    if (block.rows() != target.rows() || block.cols() != target.cols()) {
        throw DimensionMismatch("target has shape " + std::to_string(target.rows()) + "x" +
                                std::to_string(target.cols()) + " but the encoded block is " +
                                std::to_string(block.rows()) + "x" + std::to_string(block.cols()));
    }
    return operator_norm(alpha * block - target);
}

double be_error(const ComplexMatrix& carrier, const RegisterLayout& layout,
                const ComplexMatrix& target, double alpha) {
    if (layout.segments().empty()) {
        throw DimensionMismatch("be_error: empty layout");
    }
    const CarrierKind kind = carrier.cols() == 1 && layout.dimension() != 1 ? CarrierKind::Pure
                                                                             : CarrierKind::Unitary;
    return be_error(kind, carrier, layout, {layout.segments().front().name}, {}, target, alpha);
}

EncodedOperator EncodedOperator::make(CarrierKind kind, ComplexMatrix carrier,
                                      RegisterLayout layout, std::vector<std::string> system,
                                      std::vector<std::string> garbage, BlockEncodingSpec spec,
                                      ComplexMatrix target) {
    EncodedOperator out{kind,
                        std::move(carrier),
                        std::move(layout),
                        std::move(system),
                        std::move(garbage),
                        BlockEncodingSpec::make(spec.alpha, spec.ancilla_qubits, spec.epsilon),
                        std::move(target)};
    const double err = out.error();
    if (err > out.spec.epsilon + 1e-9) {
        throw InvalidState("block-encoding error " + std::to_string(err) +
                           " exceeds the declared epsilon " + std::to_string(out.spec.epsilon));
    }
    return out;
}

std::vector<std::string> EncodedOperator::encoding_segments() const {
    std::vector<std::string> out;
    for (const auto& s : layout.segments()) {
        const bool sys = std::find(system.begin(), system.end(), s.name) != system.end();
        const bool gar = std::find(garbage.begin(), garbage.end(), s.name) != garbage.end();
        if (!sys && !gar) {
            out.push_back(s.name);
        }
    }
    return out;
}

ComplexMatrix EncodedOperator::block() const {
    return encoded_block(kind, carrier, layout, system, garbage);
}

double EncodedOperator::error() const {
    return be_error(kind, carrier, layout, system, garbage, target, spec.alpha);
}

ComplexMatrix swap_registers(int m_qubits, int qubit_budget) {
    if (m_qubits < 1) {
        throw InvalidParams("swap_registers needs at least one qubit per side");
    }
    if (2 * m_qubits > qubit_budget) {
        throw RegisterTooLarge("SWAP on " + std::to_string(2 * m_qubits) +
                               " qubits exceeds the budget of " + std::to_string(qubit_budget));
    }
    const Index half = Index{1} << m_qubits;
    ComplexMatrix s = ComplexMatrix::Zero(half * half, half * half);
    for (Index j = 0; j < half; ++j) {
        for (Index k = 0; k < half; ++k) {
            s(k * half + j, j * half + k) = 1.0;
        }
    }
    return s;
}

EncodedOperator purification_to_unitary_be(const Purification& p, int qubit_budget) {
    if (!p.has_preparer()) {
        throw InvalidParams("purification_to_unitary_be needs a materialized preparer");
    }
    const auto prepared = p.prepared_segments();
    std::vector<Segment> segs;
    for (const auto& name : prepared) {
        segs.push_back(p.layout.segment(name));
    }
    std::vector<std::string> copies;
    for (const auto& s : p.layout.segments()) {
        segs.push_back({kPurifierPrefix + s.name, s.qubits});
        copies.push_back(kPurifierPrefix + s.name);
    }
    RegisterLayout layout(std::move(segs));
    if (layout.total_qubits() > qubit_budget) {
        throw RegisterTooLarge("purification-to-unitary register of " +
                               std::to_string(layout.total_qubits()) +
                               " qubits exceeds the budget of " + std::to_string(qubit_budget));
    }

    const Index dim = layout.dimension();
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    apply_on_segments(u, layout, copies, p.preparer);

    // SWAP each prepared segment with its copy.
    std::vector<Index> perm(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) {
        Index j = i;
        for (const auto& name : prepared) {
            const int q = layout.qubits(name);
            const Index mask = (Index{1} << q) - 1;
            const int sa = layout.shift(name);
            const int sb = layout.shift(kPurifierPrefix + name);
            const Index va = (i >> sa) & mask;
            const Index vb = (i >> sb) & mask;
            j &= ~((mask << sa) | (mask << sb));
            j |= (va << sb) | (vb << sa);
        }
        perm[static_cast<std::size_t>(i)] = j;
    }
    ComplexMatrix swapped(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        swapped.row(perm[static_cast<std::size_t>(i)]) = u.row(i);
    }
    apply_on_segments(swapped, layout, copies, p.preparer.adjoint());

    int ancillas = 0;
    for (const auto& name : copies) {
        ancillas += layout.qubits(name);
    }
    return EncodedOperator::make(CarrierKind::Unitary, std::move(swapped), std::move(layout),
                                 prepared, {}, BlockEncodingSpec{1.0, ancillas, 0.0},
                                 p.prepared_density());
}

}  // namespace qfid
