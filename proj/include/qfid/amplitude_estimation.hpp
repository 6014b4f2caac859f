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
#include <string>
#include <string_view>
#include <vector>

#include "qfid/linalg.hpp"

namespace qfid {

enum class QaeMode { Exact, Sample };

std::string to_string(QaeMode mode);
QaeMode parse_qae_mode(std::string_view text);

struct QaeParams {
    std::int64_t M = 16;
    QaeMode mode = QaeMode::Exact;
    std::uint64_t seed = 0;

    /// M >= 2; a power of two in sample mode.
    static QaeParams make(std::int64_t M, QaeMode mode, std::uint64_t seed = 0);
};

/// Probability of finding every segment in `zero_segments` in |0>. `state` is
/// a column vector or a density matrix on `layout`.
double exact_amplitude(const ComplexMatrix& state, const RegisterLayout& layout,
                       const std::vector<std::string>& zero_segments);

/// 2 pi sqrt(x(1-x))/M + pi^2/M^2.
double qae_bound(double x, std::int64_t M);

/// Distribution of the canonical estimation outcome y in [0, M) for amplitude x.
std::vector<double> qae_outcome_distribution(double x, std::int64_t M);

/// Estimate of x: the nearest grid point sin^2(pi y / M) in exact mode, a
/// sampled outcome in sample mode.
double qae_estimate(double x, const QaeParams& params);

}  // namespace qfid
