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

#include "qfid/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace qfid {

DensityOperator DensityOperator::from_matrix(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols() || !is_power_of_two(m.rows())) {
        throw InvalidState("density operator must be square with power-of-two dimension");
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol) {
        throw InvalidState("density operator is not Hermitian (defect " + std::to_string(defect) +
                           ")");
    }
    DensityOperator out;
    out.matrix_ = 0.5 * (m + m.adjoint());
    out.eigen_ = eig_hermitian(out.matrix_, tol);
    out.qubits_ = log2_exact(m.rows());
    const double trace = out.matrix_.trace().real();
    if (std::abs(trace - 1.0) > tol) {
        throw InvalidState("density operator trace is " + std::to_string(trace));
    }
    const double smallest = out.eigen_.values.minCoeff();
    if (smallest < -tol) {
        throw InvalidState("density operator has eigenvalue " + std::to_string(smallest));
    }
    out.rank_ = static_cast<int>((out.eigen_.values.array() > kRankThreshold).count());
    return out;
}

std::vector<std::string> Purification::prepared_segments() const {
    std::vector<std::string> out;
    for (const auto& s : layout.segments()) {
        if (s.name != kGarbage) {
            out.push_back(s.name);
        }
    }
    return out;
}

ComplexMatrix Purification::prepared_density() const {
    return reduced_density(state, layout, prepared_segments());
}

int ceil_log2(Index n) {
    int k = 0;
    while ((Index{1} << k) < n) {
        ++k;
    }
    return k;
}

DensityOperator random_density(int qubits, int rank, std::uint64_t seed) {
    if (qubits < 1 || qubits > 14) {
        throw InvalidParams("random_density: qubit count must be in [1, 14]");
    }
    const Index dim = Index{1} << qubits;
    if (rank < 1 || rank > dim) {
        throw RankOutOfRange("rank " + std::to_string(rank) + " outside [1, " +
                             std::to_string(dim) + "]");
    }
    std::mt19937_64 rng(seed);

    // Haar-distributed eigenbasis: QR of a Gaussian matrix with R's diagonal
    // phases folded back into Q.
    const ComplexMatrix g = random_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) {
            q.col(j) *= d / std::abs(d);
        }
    }

    // Normalized exponential weights (a flat Dirichlet draw) on the first
    // `rank` directions, redrawn while any weight is too small to count
    // towards the numerical rank.
    std::exponential_distribution<double> expo(1.0);
    RealVector weights(rank);
    do {
        for (int k = 0; k < rank; ++k) {
            weights(k) = expo(rng);
        }
        weights /= weights.sum();
    } while (weights.minCoeff() < 1e-6);

    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < rank; ++k) {
        rho += weights(k) * (q.col(k) * q.col(k).adjoint());
    }
    return DensityOperator::from_matrix(rho);
}

Purification purify(const DensityOperator& rho, int ancilla_qubits) {
    return purify(rho, RegisterLayout{{kSystem, rho.qubits()}}, ancilla_qubits);
}

Purification purify(const DensityOperator& rho, const RegisterLayout& carrier_layout,
                    int ancilla_qubits) {
    if (carrier_layout.total_qubits() != rho.qubits()) {
        throw DimensionMismatch("purify: layout does not match the state's qubit count");
    }
    if (carrier_layout.contains(kGarbage)) {
        throw InvalidParams("purify: carrier layout already has a garbage segment");
    }
    const int needed = ceil_log2(rho.rank());
    if (ancilla_qubits < needed) {
        throw InsufficientAncilla("rank " + std::to_string(rho.rank()) + " needs " +
                                  std::to_string(needed) + " ancilla qubits, got " +
                                  std::to_string(ancilla_qubits));
    }
    Purification p;
    p.layout = carrier_layout.appended(Segment{kGarbage, ancilla_qubits});
    const Index anc_dim = Index{1} << ancilla_qubits;
    const auto& eig = rho.eigen();
    p.state = ComplexVector::Zero(p.layout.dimension());
    for (int j = 0; j < rho.rank(); ++j) {
        const double weight = std::sqrt(std::max(eig.values(j), 0.0));
        for (Index s = 0; s < rho.dimension(); ++s) {
            p.state(s * anc_dim + j) = weight * eig.vectors(s, j);
        }
    }
    p.state.normalize();
    p.preparer = complete_unitary(p.state);
    return p;
}

namespace {

void require_same_register(const DensityOperator& a, const DensityOperator& b) {
    if (a.qubits() != b.qubits()) {
        throw DimensionMismatch("states act on " + std::to_string(a.qubits()) + " and " +
                                std::to_string(b.qubits()) + " qubits");
    }
}

}  // namespace

namespace {

// Eigenvectors scaled by sqrt(eigenvalue), restricted to eigenvalues above the
// rounding floor, so F = ||L_rho^+ L_sigma||_1 never takes square roots of noise.
ComplexMatrix support_factor(const DensityOperator& rho) {
    constexpr double kNoiseFloor = 1e-14;
    const auto& eig = rho.eigen();
    Index kept = 0;
    while (kept < eig.values.size() && eig.values(kept) > kNoiseFloor) {
        ++kept;
    }
    ComplexMatrix out(rho.dimension(), std::max<Index>(kept, 1));
    out.setZero();
    for (Index j = 0; j < kept; ++j) {
        out.col(j) = eig.vectors.col(j) * std::sqrt(eig.values(j));
    }
    return out;
}

}  // namespace

double fidelity_exact(const DensityOperator& rho, const DensityOperator& sigma) {
    require_same_register(rho, sigma);
    const ComplexMatrix overlap = support_factor(rho).adjoint() * support_factor(sigma);
    return Eigen::JacobiSVD<ComplexMatrix>(overlap).singularValues().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    require_same_register(rho, sigma);
    return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            entries.push_back({m(i, j).real(), m(i, j).imag()});
        }
    }
    nlohmann::ordered_json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["entries"] = std::move(entries);
    return out;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    try {
        const Index rows = j.at("rows").get<Index>();
        const Index cols = j.at("cols").get<Index>();
        const auto& entries = j.at("entries");
        if (rows < 0 || cols < 0 || static_cast<Index>(entries.size()) != rows * cols) {
            throw FormatError("matrix entry count does not match rows*cols");
        }
        ComplexMatrix m(rows, cols);
        for (Index k = 0; k < rows * cols; ++k) {
            const auto& e = entries.at(static_cast<std::size_t>(k));
            m(k / cols, k % cols) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed matrix: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const DensityOperator& rho) {
    nlohmann::ordered_json out;
    out["kind"] = "density";
    out["qubits"] = rho.qubits();
    out["dim"] = rho.dimension();
    out["matrix"] = matrix_to_json(rho.matrix());
    return out;
}

nlohmann::ordered_json to_json(const Purification& p) {
    nlohmann::ordered_json out;
    out["kind"] = "purification";
    nlohmann::ordered_json layout = nlohmann::ordered_json::array();
    for (const auto& s : p.layout.segments()) {
        layout.push_back({{"name", s.name}, {"qubits", s.qubits}});
    }
    out["layout"] = std::move(layout);
    out["dim"] = p.layout.dimension();
    out["state"] = matrix_to_json(p.state);
    out["preparer"] = p.has_preparer() ? matrix_to_json(p.preparer) : nlohmann::ordered_json();
    return out;
}

DensityOperator density_from_json(const nlohmann::json& j) {
    try {
        if (j.at("kind").get<std::string>() != "density") {
            throw FormatError("expected kind \"density\"");
        }
        return DensityOperator::from_matrix(matrix_from_json(j.at("matrix")));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed density operator: ") + e.what());
    }
}

Purification purification_from_json(const nlohmann::json& j) {
    try {
        if (j.at("kind").get<std::string>() != "purification") {
            throw FormatError("expected kind \"purification\"");
        }
        std::vector<Segment> segs;
        for (const auto& s : j.at("layout")) {
            segs.push_back({s.at("name").get<std::string>(), s.at("qubits").get<int>()});
        }
        Purification p;
        p.layout = RegisterLayout(std::move(segs));
        p.state = matrix_from_json(j.at("state"));
        if (p.state.size() != p.layout.dimension()) {
            throw FormatError("purification state does not match its layout");
        }
        if (!j.at("preparer").is_null()) {
            p.preparer = matrix_from_json(j.at("preparer"));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed purification: ") + e.what());
    }
}

void save_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(1) << '\n';
}

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

}  // namespace qfid
