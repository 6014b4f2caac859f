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
#include <string>

#include <json.hpp>

#include "qfid/linalg.hpp"

namespace qfid {

inline constexpr double kRankThreshold = 1e-9;

// Segment names shared by every module.
inline const std::string kSystem = "system";
inline const std::string kEncoding = "encoding";
inline const std::string kGarbage = "garbage";

/// Hermitian, positive semidefinite, unit-trace matrix on a qubit register.
/// Validated on construction; the eigendecomposition is computed once and kept.
class DensityOperator {
   public:
    /// Validates `m` and rejects it with InvalidState when it is not a density
    /// operator within `tol`.
    static DensityOperator from_matrix(const ComplexMatrix& m, double tol = kHermitianTol);

    const ComplexMatrix& matrix() const { return matrix_; }
    const HermitianEigen& eigen() const { return eigen_; }
    int qubits() const { return qubits_; }
    Index dimension() const { return matrix_.rows(); }
    /// Number of eigenvalues above kRankThreshold.
    int rank() const { return rank_; }

   private:
    DensityOperator() = default;

    ComplexMatrix matrix_;
    HermitianEigen eigen_;
    int qubits_ = 0;
    int rank_ = 0;
};

/// A state-preparation unitary and the pure state it prepares from |0...0>.
///
/// The segment named "garbage" is traced out to recover the mixed state; every
/// other segment belongs to the prepared operator. `preparer` may be empty when
/// only the prepared vector is materialized (large nested circuits).
struct Purification {
    ComplexMatrix preparer;
    RegisterLayout layout;
    ComplexVector state;

    bool has_preparer() const { return preparer.size() != 0; }
    /// Segments that survive tracing out the garbage, in layout order.
    std::vector<std::string> prepared_segments() const;
    /// tr_garbage(|state><state|).
    ComplexMatrix prepared_density() const;
};

int ceil_log2(Index n);

DensityOperator random_density(int qubits, int rank, std::uint64_t seed);

/// Purifies `rho` with `ancilla_qubits` garbage qubits appended after the
/// system register: state = sum_j sqrt(lambda_j) |u_j>|j>.
Purification purify(const DensityOperator& rho, int ancilla_qubits);

/// Same, for a density operator living on a multi-segment register (for
/// instance a system plus encoding ancillas).
Purification purify(const DensityOperator& rho, const RegisterLayout& carrier_layout,
                    int ancilla_qubits);

double fidelity_exact(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

// Text serialization: {"kind": ..., "dim": d, "entries": [[re, im], ...]} with
// entries in row-major order.
nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const DensityOperator& rho);
nlohmann::ordered_json to_json(const Purification& p);
DensityOperator density_from_json(const nlohmann::json& j);
Purification purification_from_json(const nlohmann::json& j);

void save_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace qfid
