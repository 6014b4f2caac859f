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

#include "qfid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qfid {

RegisterLayout::RegisterLayout(std::initializer_list<Segment> segments)
    : RegisterLayout(std::vector<Segment>(segments)) {}

RegisterLayout::RegisterLayout(std::vector<Segment> segments) : segments_(std::move(segments)) {
    std::set<std::string> seen;
    for (const auto& s : segments_) {
        if (s.qubits < 0) {
            throw InvalidParams("segment '" + s.name + "' has a negative qubit count");
        }
        if (!seen.insert(s.name).second) {
            throw InvalidParams("duplicate segment name '" + s.name + "'");
        }
        total_qubits_ += s.qubits;
    }
    if (total_qubits_ > 62) {
        throw RegisterTooLarge("register of " + std::to_string(total_qubits_) + " qubits");
    }
}

bool RegisterLayout::contains(const std::string& name) const {
    return std::any_of(segments_.begin(), segments_.end(),
                       [&](const Segment& s) { return s.name == name; });
}

const Segment& RegisterLayout::segment(const std::string& name) const {
    for (const auto& s : segments_) {
        if (s.name == name) {
            return s;
        }
    }
    throw UnknownSegment("unknown segment '" + name + "'");
}

int RegisterLayout::shift(const std::string& name) const {
    int after = total_qubits_;
    for (const auto& s : segments_) {
        after -= s.qubits;
        if (s.name == name) {
            return after;
        }
    }
    throw UnknownSegment("unknown segment '" + name + "'");
}

RegisterLayout RegisterLayout::appended(Segment extra) const {
    auto segs = segments_;
    segs.push_back(std::move(extra));
    return RegisterLayout(std::move(segs));
}

RegisterLayout RegisterLayout::appended(const RegisterLayout& extra) const {
    auto segs = segments_;
    segs.insert(segs.end(), extra.segments_.begin(), extra.segments_.end());
    return RegisterLayout(std::move(segs));
}

RegisterLayout RegisterLayout::restricted(std::span<const std::string> names) const {
    for (const auto& n : names) {
        (void)segment(n);
    }
    std::vector<Segment> segs;
    for (const auto& s : segments_) {
        if (std::find(names.begin(), names.end(), s.name) != names.end()) {
            segs.push_back(s);
        }
    }
    return RegisterLayout(std::move(segs));
}

std::vector<std::string> RegisterLayout::complement(std::span<const std::string> names) const {
    for (const auto& n : names) {
        (void)segment(n);
    }
    std::vector<std::string> out;
    for (const auto& s : segments_) {
        if (std::find(names.begin(), names.end(), s.name) == names.end()) {
            out.push_back(s.name);
        }
    }
    return out;
}

namespace {

// Full-register index contribution of every value of the sub-register formed
// by `names` (first name most significant).
std::vector<Index> scatter_table(const RegisterLayout& layout, std::span<const std::string> names) {
    int width = 0;
    for (const auto& n : names) {
        width += layout.qubits(n);
    }
    std::vector<Index> table(Index{1} << width, 0);
    for (Index v = 0; v < static_cast<Index>(table.size()); ++v) {
        Index rest = v;
        Index full = 0;
        for (auto it = names.rbegin(); it != names.rend(); ++it) {
            const int q = layout.qubits(*it);
            const Index mask = (Index{1} << q) - 1;
            full |= (rest & mask) << layout.shift(*it);
            rest >>= q;
        }
        table[v] = full;
    }
    return table;
}

std::vector<std::string> in_layout_order(const RegisterLayout& layout,
                                         std::span<const std::string> names) {
    std::vector<std::string> out;
    const RegisterLayout sub = layout.restricted(names);
    for (const auto& s : sub.segments()) {
        out.push_back(s.name);
    }
    return out;
}

void require_square(const ComplexMatrix& m, Index dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw DimensionMismatch(std::string(what) + ": expected a " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()));
    }
}

}  // namespace

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Index n) {
    if (!is_power_of_two(n)) {
        throw NotPowerOfTwo(std::to_string(n) + " is not a power of two");
    }
    int k = 0;
    while ((Index{1} << k) < n) {
        ++k;
    }
    return k;
}

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("hermiticity_defect: matrix is not square");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexVector basis_state(Index dim, Index index) {
    if (index < 0 || index >= dim) {
        throw IndexOutOfRange("basis index " + std::to_string(index) + " outside dimension " +
                              std::to_string(dim));
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol) {
    const double defect = hermiticity_defect(m);
    if (defect > tol) {
        throw NotHermitian("matrix deviates from Hermitian by " + std::to_string(defect));
    }
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver failed to converge");
    }
    const Index n = h.rows();
    HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
    for (Index j = 0; j < n; ++j) {
        out.values(j) = solver.eigenvalues()(n - 1 - j);
        out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    return out;
}

ComplexMatrix matrix_func(const HermitianEigen& eig, const std::function<double(double)>& f,
                          bool clamp_negative, double tol) {
    const Index n = eig.values.size();
    RealVector mapped(n);
    for (Index j = 0; j < n; ++j) {
        double lambda = eig.values(j);
        if (clamp_negative) {
            if (lambda < -tol) {
                throw NegativeEigenvalue("eigenvalue " + std::to_string(lambda) +
                                         " below -" + std::to_string(tol));
            }
            lambda = std::max(lambda, 0.0);
        }
        mapped(j) = f(lambda);
    }
    return eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix matrix_func(const ComplexMatrix& m, const std::function<double(double)>& f,
                          bool clamp_negative, double tol) {
    return matrix_func(eig_hermitian(m, tol), f, clamp_negative, tol);
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& m, double tol) {
    return matrix_func(m, [](double x) { return std::sqrt(x); }, true, tol);
}

ComplexMatrix expm_i(const HermitianEigen& eig, double s) {
    const Index n = eig.values.size();
    ComplexVector phases(n);
    for (Index j = 0; j < n; ++j) {
        phases(j) = std::polar(1.0, s * eig.values(j));
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix expm_i(const ComplexMatrix& m, double s) { return expm_i(eig_hermitian(m), s); }

ComplexMatrix partial_trace(const ComplexMatrix& m, const RegisterLayout& layout,
                            std::span<const std::string> keep) {
    require_square(m, layout.dimension(), "partial_trace");
    const auto kept = in_layout_order(layout, keep);
    const auto traced = layout.complement(kept);
    const auto pk = scatter_table(layout, kept);
    const auto pt = scatter_table(layout, traced);
    const Index dk = static_cast<Index>(pk.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Index j = 0; j < dk; ++j) {
        for (Index i = 0; i < dk; ++i) {
            Complex acc = 0.0;
            for (Index t : pt) {
                acc += m(pk[i] | t, pk[j] | t);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

ComplexMatrix reduced_density(const ComplexVector& psi, const RegisterLayout& layout,
                              std::span<const std::string> keep) {
    if (psi.size() != layout.dimension()) {
        throw DimensionMismatch("reduced_density: state size does not match layout");
    }
    const auto kept = in_layout_order(layout, keep);
    const auto traced = layout.complement(kept);
    const auto pk = scatter_table(layout, kept);
    const auto pt = scatter_table(layout, traced);
    ComplexMatrix phi(static_cast<Index>(pk.size()), static_cast<Index>(pt.size()));
    for (Index t = 0; t < phi.cols(); ++t) {
        for (Index i = 0; i < phi.rows(); ++i) {
            phi(i, t) = psi(pk[i] | pt[t]);
        }
    }
    return phi * phi.adjoint();
}

ComplexMatrix project_zero(const ComplexMatrix& m, const RegisterLayout& layout,
                           std::span<const std::string> zeroed) {
    require_square(m, layout.dimension(), "project_zero");
    const auto rest = layout.complement(zeroed);
    const auto pr = scatter_table(layout, rest);
    const Index d = static_cast<Index>(pr.size());
    ComplexMatrix out(d, d);
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            out(i, j) = m(pr[i], pr[j]);
        }
    }
    return out;
}

ComplexVector project_zero(const ComplexVector& psi, const RegisterLayout& layout,
                           std::span<const std::string> zeroed) {
    if (psi.size() != layout.dimension()) {
        throw DimensionMismatch("project_zero: state size does not match layout");
    }
    const auto rest = layout.complement(zeroed);
    const auto pr = scatter_table(layout, rest);
    ComplexVector out(static_cast<Index>(pr.size()));
    for (Index i = 0; i < out.size(); ++i) {
        out(i) = psi(pr[i]);
    }
    return out;
}

void apply_on_segments(ComplexMatrix& states, const RegisterLayout& layout,
                       std::span<const std::string> targets, const ComplexMatrix& op) {
    if (states.rows() != layout.dimension()) {
        throw DimensionMismatch("apply_on_segments: state size does not match layout");
    }
    const auto pt = scatter_table(layout, targets);
    const auto others = layout.complement(targets);
    const auto po = scatter_table(layout, others);
    const Index dt = static_cast<Index>(pt.size());
    if (op.rows() != dt || op.cols() != dt) {
        throw DimensionMismatch("apply_on_segments: operator does not match target segments");
    }
    ComplexMatrix gathered(dt, static_cast<Index>(po.size()));
    for (Index c = 0; c < states.cols(); ++c) {
        for (Index o = 0; o < gathered.cols(); ++o) {
            for (Index t = 0; t < dt; ++t) {
                gathered(t, o) = states(pt[t] | po[o], c);
            }
        }
        gathered = op * gathered;
        for (Index o = 0; o < gathered.cols(); ++o) {
            for (Index t = 0; t < dt; ++t) {
                states(pt[t] | po[o], c) = gathered(t, o);
            }
        }
    }
}

void apply_on_segments(ComplexVector& state, const RegisterLayout& layout,
                       std::span<const std::string> targets, const ComplexMatrix& op) {
    ComplexMatrix m = state;
    apply_on_segments(m, layout, targets, op);
    state = m.col(0);
}

namespace {

RealVector singular_values(const ComplexMatrix& m) {
    if (m.size() == 0) {
        return RealVector();
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (m.rows() == m.cols() && hermiticity_defect(m) <= 1e-13 * scale) {
        const ComplexMatrix h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().cwiseAbs();
    }
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

}  // namespace

double operator_norm(const ComplexMatrix& m) {
    const RealVector s = singular_values(m);
    return s.size() == 0 ? 0.0 : s.maxCoeff();
}

double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

ComplexMatrix complete_unitary(const ComplexVector& v) {
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw InvalidState("complete_unitary: vector is not normalized (norm " +
                           std::to_string(norm) + ")");
    }
    const Index n = v.size();
    const double phase = std::abs(v(0)) > 0.0 ? std::arg(v(0)) : 0.0;
    const Complex rot = std::polar(1.0, phase);
    ComplexVector w = -v;
    w(0) += rot;
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    const double wn2 = w.squaredNorm();
    if (wn2 > 1e-30) {
        u -= (2.0 / wn2) * (w * w.adjoint());
    }
    u.col(0) *= rot;
    return u;
}

double unitarity_defect(const ComplexMatrix& u) {
    return operator_norm(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

ComplexMatrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

ComplexMatrix random_hermitian_unit(Index dim, std::mt19937_64& rng) {
    const ComplexMatrix g = random_gaussian(dim, dim, rng);
    ComplexMatrix h = 0.5 * (g + g.adjoint());
    const double norm = operator_norm(h);
    if (norm > 0.0) {
        h /= norm;
    }
    return h;
}

}  // namespace qfid
