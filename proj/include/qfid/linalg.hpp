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

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfid/errors.hpp"

namespace qfid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kEigenTol = 1e-10;

/// One named run of qubits inside a register.
struct Segment {
    std::string name;
    int qubits = 0;

    bool operator==(const Segment&) const = default;
};

/// Ordered list of named qubit segments.
///
/// Basis indices concatenate the segment values left to right, so the first
/// segment holds the most significant bits. This is the same ordering that
/// `tensor(a, b)` produces when `a` lives on the earlier segment. Segments
/// with zero qubits are allowed and contribute a factor of one to the
/// dimension.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    RegisterLayout(std::initializer_list<Segment> segments);
    explicit RegisterLayout(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    int total_qubits() const { return total_qubits_; }
    Index dimension() const { return Index{1} << total_qubits_; }

    bool contains(const std::string& name) const;
    const Segment& segment(const std::string& name) const;
    int qubits(const std::string& name) const { return segment(name).qubits; }

    /// Bit position of the least significant qubit of `name`.
    int shift(const std::string& name) const;

    /// Layout with `extra` appended at the end.
    RegisterLayout appended(Segment extra) const;
    RegisterLayout appended(const RegisterLayout& extra) const;

    /// Layout restricted to `names`, preserving this layout's order.
    RegisterLayout restricted(std::span<const std::string> names) const;

    /// Names of every segment not in `names`, in layout order.
    std::vector<std::string> complement(std::span<const std::string> names) const;

    bool operator==(const RegisterLayout& other) const { return segments_ == other.segments_; }

   private:
    std::vector<Segment> segments_;
    int total_qubits_ = 0;
};

struct HermitianEigen {
    RealVector values;     // descending
    ComplexMatrix vectors;  // column j pairs with values[j]
};

bool is_power_of_two(Index n);
int log2_exact(Index n);

/// Largest entrywise |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix identity(Index dim);
ComplexVector basis_state(Index dim, Index index);

HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// Applies `f` to the spectrum of a Hermitian matrix.
///
/// With `clamp_negative` set the function is treated as defined only on
/// [0, inf): eigenvalues in [-tol, 0) are replaced by zero and anything below
/// -tol raises NegativeEigenvalue.
ComplexMatrix matrix_func(const ComplexMatrix& m, const std::function<double(double)>& f,
                          bool clamp_negative, double tol = kHermitianTol);
ComplexMatrix matrix_func(const HermitianEigen& eig, const std::function<double(double)>& f,
                          bool clamp_negative, double tol = kHermitianTol);

/// Square root of a positive semidefinite matrix.
ComplexMatrix sqrtm_psd(const ComplexMatrix& m, double tol = kHermitianTol);

/// exp(i s m) for Hermitian m.
ComplexMatrix expm_i(const ComplexMatrix& m, double s);
ComplexMatrix expm_i(const HermitianEigen& eig, double s);

/// Trace over every segment not listed in `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, const RegisterLayout& layout,
                            std::span<const std::string> keep);

/// Reduced density operator of a pure state, tr_{not keep}(|psi><psi|).
ComplexMatrix reduced_density(const ComplexVector& psi, const RegisterLayout& layout,
                              std::span<const std::string> keep);

/// <0|_S m |0>_S for the segments S in `zeroed`; the result acts on the
/// remaining segments in layout order.
ComplexMatrix project_zero(const ComplexMatrix& m, const RegisterLayout& layout,
                           std::span<const std::string> zeroed);

/// (<0|_S (x) I) psi.
ComplexVector project_zero(const ComplexVector& psi, const RegisterLayout& layout,
                           std::span<const std::string> zeroed);

/// Applies `op` to the listed segments (in the given order) of every column
/// of `states`, acting as the identity elsewhere.
void apply_on_segments(ComplexMatrix& states, const RegisterLayout& layout,
                       std::span<const std::string> targets, const ComplexMatrix& op);
void apply_on_segments(ComplexVector& state, const RegisterLayout& layout,
                       std::span<const std::string> targets, const ComplexMatrix& op);

double operator_norm(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);

/// Unitary whose first column is the unit vector `v` (Householder completion).
ComplexMatrix complete_unitary(const ComplexVector& v);

/// Distance of U^dagger U from the identity in operator norm.
double unitarity_defect(const ComplexMatrix& u);

/// Complex Gaussian matrix with i.i.d. N(0,1/2) real and imaginary parts.
ComplexMatrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng);

/// Random Hermitian matrix rescaled to unit operator norm.
ComplexMatrix random_hermitian_unit(Index dim, std::mt19937_64& rng);

}  // namespace qfid
