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

#include "qfid/amplitude_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAmplitudeSlack = 1e-12;

// sin^2(M pi d) / (M^2 sin^2(pi d)), equal to 1 at integer d.
double fejer(double d, std::int64_t M) {
    const double s = std::sin(kPi * d);
    if (std::abs(s) < 1e-12) {
        return 1.0;
    }
    const double num = std::sin(static_cast<double>(M) * kPi * d);
    return num * num / (static_cast<double>(M * M) * s * s);
}

double clamp_amplitude(double x) {
    if (!(x >= -kAmplitudeSlack && x <= 1.0 + kAmplitudeSlack)) {
        throw OutOfRange("amplitude " + std::to_string(x) + " outside [0, 1]");
    }
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

std::string to_string(QaeMode mode) { return mode == QaeMode::Exact ? "exact" : "sample"; }

QaeMode parse_qae_mode(std::string_view text) {
    if (text == "exact") {
        return QaeMode::Exact;
    }
    if (text == "sample") {
        return QaeMode::Sample;
    }
    throw InvalidParams("unknown amplitude-estimation mode '" + std::string(text) + "'");
}

QaeParams QaeParams::make(std::int64_t M, QaeMode mode, std::uint64_t seed) {
    if (M < 2) {
        throw InvalidParams("M must be at least 2");
    }
    if (mode == QaeMode::Sample && !is_power_of_two(M)) {
        throw NotPowerOfTwo("sample-mode M = " + std::to_string(M) + " is not a power of two");
    }
    return QaeParams{M, mode, seed};
}

double exact_amplitude(const ComplexMatrix& state, const RegisterLayout& layout,
                       const std::vector<std::string>& zero_segments) {
    for (const auto& name : zero_segments) {
        layout.segment(name);  // throws UnknownSegment
    }
    if (state.rows() != layout.dimension()) {
        throw DimensionMismatch("state does not match the register layout");
    }
    if (state.cols() == 1) {
        const ComplexVector psi = state.col(0);
        return project_zero(psi, layout, zero_segments).squaredNorm();
    }
    return project_zero(state, layout, zero_segments).trace().real();
}

double qae_bound(double x, std::int64_t M) {
    const double m = static_cast<double>(M);
    return 2.0 * kPi * std::sqrt(std::max(0.0, x * (1.0 - x))) / m + kPi * kPi / (m * m);
}

std::vector<double> qae_outcome_distribution(double x, std::int64_t M) {
    if (M < 2) {
        throw InvalidParams("M must be at least 2");
    }
    const double theta = std::asin(std::sqrt(clamp_amplitude(x)));
    const double m = static_cast<double>(M);
    // The start state splits evenly over the Grover eigenphases +-2 theta.
    std::vector<double> p(static_cast<std::size_t>(M));
    for (std::int64_t y = 0; y < M; ++y) {
        const double grid = static_cast<double>(y) / m;
        p[static_cast<std::size_t>(y)] =
            0.5 * (fejer(theta / kPi - grid, M) + fejer(1.0 - theta / kPi - grid, M));
    }
    return p;
}

double qae_estimate(double x, const QaeParams& params) {
    const double amp = clamp_amplitude(x);
    const double m = static_cast<double>(params.M);
    if (params.mode == QaeMode::Exact) {
        const double theta = std::asin(std::sqrt(amp));
        const double s = std::sin(kPi * std::round(m * theta / kPi) / m);
        return s * s;
    }
    const auto p = qae_outcome_distribution(amp, params.M);
    std::mt19937_64 rng(params.seed);
    std::discrete_distribution<std::int64_t> pick(p.begin(), p.end());
    const double s = std::sin(kPi * static_cast<double>(pick(rng)) / m);
    return s * s;
}

}  // namespace qfid
