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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qfid/block_encoding.hpp"
#include "qfid/errors.hpp"

namespace qfid {
namespace {

DensityOperator pure_zero(int qubits) {
    const Index dim = Index{1} << qubits;
    const ComplexVector v = basis_state(dim, 0);
    return DensityOperator::from_matrix(v * v.adjoint());
}

// (I (x) P^dagger) SWAP_{system, copy} (I (x) P), written over [system][copy of the
// purification layout] with the swap built from decoded basis labels.
ComplexMatrix lemma_unitary(const Purification& p) {
    const int n = p.layout.qubits(kSystem);
    const int b = p.layout.qubits(kGarbage);
    const RegisterLayout l{{"s", n}, {"cs", n}, {"cg", b}};
    ComplexMatrix swap = ComplexMatrix::Zero(l.dimension(), l.dimension());
    for (Index i = 0; i < l.dimension(); ++i) {
        const auto d = oracle::decode(i, l);
        const Index j = (((d.at("cs") << n) | d.at("s")) << b) | d.at("cg");
        swap(j, i) = 1.0;
    }
    const ComplexMatrix lift = oracle::kron(identity(Index{1} << n), p.preparer);
    return lift.adjoint() * swap * lift;
}

TEST(BlockEncodingSpec, Validation) {
    EXPECT_NO_THROW(BlockEncodingSpec::make(1.0, 0, 0.0));
    EXPECT_THROW(BlockEncodingSpec::make(0.0, 0, 0.0), InvalidParams);
    EXPECT_THROW(BlockEncodingSpec::make(1.0, 0, -1e-3), InvalidParams);
}

TEST(BeError, StateEncodesItself) {
    const DensityOperator sigma = random_density(2, 3, 1);
    const RegisterLayout l{{kSystem, 2}};
    EXPECT_NEAR(be_error(sigma.matrix(), l, sigma.matrix(), 1.0), 0.0, 1e-15);
}

TEST(BeError, IdentityBlock) {
    const RegisterLayout l{{kSystem, 1}, {kEncoding, 1}};
    EXPECT_NEAR(be_error(identity(4), l, identity(2), 1.0), 0.0, 1e-15);
    EXPECT_NEAR(be_error(identity(4), l, identity(2), 2.0), 1.0, 1e-15);
    EXPECT_THROW(be_error(identity(4), l, identity(4), 1.0), DimensionMismatch);
}

TEST(BeError, BlockMatchesIndexSlicing) {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 2; ++n) {
        for (int a = 1; a + n <= 4; ++a) {
            const RegisterLayout l{{kSystem, n}, {kEncoding, a}};
            const ComplexMatrix u = expm_i(oracle::random_hermitian(l.dimension(), rng), 1.0);
            const ComplexMatrix block =
                encoded_block(CarrierKind::Unitary, u, l, {kSystem}, {});
            const ComplexMatrix expect = oracle::slice_block(u, l, {kEncoding});
            EXPECT_LT((block - expect).norm(), 1e-14);
            const ComplexMatrix target = oracle::random_hermitian(Index{1} << n, rng);
            EXPECT_NEAR(be_error(u, l, target, 1.7), operator_norm(1.7 * expect - target), 1e-12);
        }
    }
}

TEST(BeError, DensityAndPureCarriersAgree) {
    const DensityOperator rho = random_density(3, 5, 4);
    const RegisterLayout carrier{{kSystem, 2}, {kEncoding, 1}};
    const Purification p = purify(rho, carrier, 3);
    const ComplexMatrix from_pure =
        encoded_block(CarrierKind::Pure, p.state, p.layout, {kSystem}, {kGarbage});
    const ComplexMatrix from_density =
        encoded_block(CarrierKind::Density, rho.matrix(), carrier, {kSystem}, {});
    EXPECT_LT((from_pure - from_density).norm(), 1e-12);
    EXPECT_LT((from_density - oracle::slice_block(rho.matrix(), carrier, {kEncoding})).norm(),
              1e-14);
}

TEST(EncodedOperator, RevalidatesOnConstruction) {
    const RegisterLayout l{{kSystem, 1}, {kEncoding, 1}};
    EXPECT_NO_THROW(EncodedOperator::make(CarrierKind::Unitary, identity(4), l, {kSystem}, {},
                                          BlockEncodingSpec::make(1.0, 1, 0.0), identity(2)));
    EXPECT_THROW(EncodedOperator::make(CarrierKind::Unitary, identity(4), l, {kSystem}, {},
                                       BlockEncodingSpec::make(0.5, 1, 0.1), identity(2)),
                 InvalidState);
}

TEST(SwapRegisters, Examples) {
    const ComplexMatrix s1 = swap_registers(1);
    EXPECT_LT((s1 * basis_state(4, 1) - basis_state(4, 2)).norm(), 1e-15);  // |01> -> |10>
    ComplexMatrix expect(4, 4);
    expect << 1, 0, 0, 0,
              0, 0, 1, 0,
              0, 1, 0, 0,
              0, 0, 0, 1;
    EXPECT_EQ(s1, expect);
    const ComplexMatrix s2 = swap_registers(2);
    EXPECT_EQ(s2 * s2, identity(16));
    EXPECT_THROW(swap_registers(8), RegisterTooLarge);
    EXPECT_THROW(swap_registers(0), InvalidParams);
}

TEST(SwapRegisters, ExchangesRandomProductStates) {
    std::mt19937_64 rng(5);
    const ComplexVector a = oracle::random_unit(4, rng), b = oracle::random_unit(4, rng);
    const ComplexVector got = swap_registers(2) * tensor(a, b);
    EXPECT_LT((got - tensor(b, a)).norm(), 1e-14);
}

TEST(PurificationToUnitary, PureZeroState) {
    const Purification p = purify(pure_zero(1), 1);
    const EncodedOperator e = purification_to_unitary_be(p);
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    EXPECT_LT((e.block() - expect).norm(), 1e-12);
    EXPECT_DOUBLE_EQ(e.spec.alpha, 1.0);
    EXPECT_DOUBLE_EQ(e.spec.epsilon, 0.0);
}

TEST(PurificationToUnitary, MaximallyMixed) {
    const DensityOperator mixed = DensityOperator::from_matrix(0.5 * identity(2));
    const Purification p = purify(mixed, 1);
    const EncodedOperator e = purification_to_unitary_be(p);
    EXPECT_LE(operator_norm(e.block() - 0.5 * identity(2)), 1e-10);
    EXPECT_LE(unitarity_defect(e.carrier), 1e-10);
}

TEST(PurificationToUnitary, ExactOnRandomStatesAndMatchesLemmaFormula) {
    for (int i = 0; i < 12; ++i) {
        const int n = 1 + i % 2;
        const int r = 1 + i % (1 << n);
        const DensityOperator rho = random_density(n, r, 60 + i);
        const Purification p = purify(rho, ceil_log2(r));
        const EncodedOperator e = purification_to_unitary_be(p);
        EXPECT_LE(e.error(), 1e-9);
        EXPECT_LE(unitarity_defect(e.carrier), 1e-10);
        EXPECT_EQ(e.spec.ancilla_qubits, e.layout.total_qubits() - n);
        EXPECT_LE(operator_norm(e.carrier - lemma_unitary(p)), 1e-12);
        const auto enc = e.encoding_segments();
        EXPECT_LT((e.block() - oracle::slice_block(e.carrier, e.layout, enc)).norm(), 1e-14);
    }
}

TEST(PurificationToUnitary, RespectsQubitBudget) {
    const Purification p = purify(random_density(3, 8, 1), 3);
    EXPECT_THROW(purification_to_unitary_be(p, 8), RegisterTooLarge);
}

}  // namespace
}  // namespace qfid
