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


// Brute-force reference implementations used only by the tests. Each one is
// written from the defining formula, independent of the library code paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfid/linalg.hpp"

namespace oracle {

using qfid::Complex;
using qfid::ComplexMatrix;
using qfid::ComplexVector;
using qfid::Index;

inline constexpr double kPi = std::numbers::pi;

// Value of each segment for a basis index, the first segment being most
// significant.
inline std::map<std::string, Index> decode(Index index, const qfid::RegisterLayout& layout) {
    std::map<std::string, Index> out;
    int remaining = layout.total_qubits();
    for (const auto& s : layout.segments()) {
        remaining -= s.qubits;
        out[s.name] = (index >> remaining) & ((Index{1} << s.qubits) - 1);
    }
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) {
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
        }
    }
    return out;
}

// <0|_zeroed m |0>_zeroed by enumerating every (row, col) pair.
inline ComplexMatrix slice_block(const ComplexMatrix& m, const qfid::RegisterLayout& layout,
                                 const std::vector<std::string>& zeroed) {
    std::vector<Index> rows;
    for (Index i = 0; i < layout.dimension(); ++i) {
        const auto d = decode(i, layout);
        bool ok = true;
        for (const auto& z : zeroed) {
            ok = ok && d.at(z) == 0;
        }
        if (ok) {
            rows.push_back(i);
        }
    }
    ComplexMatrix out(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            out(i, j) = m(rows[i], rows[j]);
        }
    }
    return out;
}

// Partial trace by summing over matching values of the traced segments.
inline ComplexMatrix trace_out(const ComplexMatrix& m, const qfid::RegisterLayout& layout,
                               const std::vector<std::string>& keep) {
    auto key = [&](const std::map<std::string, Index>& d, bool kept) {
        Index k = 0;
        for (const auto& s : layout.segments()) {
            const bool in = std::find(keep.begin(), keep.end(), s.name) != keep.end();
            if (in == kept) {
                k = (k << s.qubits) | d.at(s.name);
            }
        }
        return k;
    };
    int kept_qubits = 0;
    for (const auto& s : layout.segments()) {
        if (std::find(keep.begin(), keep.end(), s.name) != keep.end()) {
            kept_qubits += s.qubits;
        }
    }
    ComplexMatrix out = ComplexMatrix::Zero(Index{1} << kept_qubits, Index{1} << kept_qubits);
    for (Index i = 0; i < m.rows(); ++i) {
        const auto di = decode(i, layout);
        for (Index j = 0; j < m.cols(); ++j) {
            const auto dj = decode(j, layout);
            if (key(di, false) == key(dj, false)) {
                out(key(di, true), key(dj, true)) += m(i, j);
            }
        }
    }
    return out;
}

inline ComplexMatrix dft(Index n) {
    ComplexMatrix f(n, n);
    for (Index k = 0; k < n; ++k) {
        for (Index j = 0; j < n; ++j) {
            f(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), 2.0 * kPi * k * j / n);
        }
    }
    return f;
}

// Phase estimation on an eigenvector with eigenphase delta per step: the
// window sqrt(2/T) sin(pi (tau + 1/2) / T), phase kicks e^{i tau delta}, then
// the inverse Fourier matrix. Returns the amplitudes on |k>.
inline ComplexVector phase_estimation(double delta, Index grid) {
    ComplexVector v(grid);
    for (Index tau = 0; tau < grid; ++tau) {
        const double w = std::sqrt(2.0 / grid) * std::sin(kPi * (tau + 0.5) / grid);
        v(tau) = w * std::polar(1.0, tau * delta);
    }
    return dft(grid).adjoint() * v;
}

// Root fidelity of two qubit states: F^2 = tr(rho sigma) + 2 sqrt(det rho det sigma).
inline double qubit_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    const double overlap = (rho * sigma).trace().real();
    const double dets = std::max(0.0, rho.determinant().real()) *
                        std::max(0.0, sigma.determinant().real());
    return std::sqrt(std::max(0.0, overlap + 2.0 * std::sqrt(dets)));
}

inline ComplexMatrix random_hermitian(Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return 0.5 * (m + m.adjoint());
}

inline ComplexVector random_unit(Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexVector v(dim);
    for (Index i = 0; i < dim; ++i) {
        v(i) = Complex(g(rng), g(rng));
    }
    return v.normalized();
}

inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
