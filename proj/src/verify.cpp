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

#include "qfid/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include "qfid/amplitude_estimation.hpp"
#include "qfid/errors.hpp"
#include "qfid/harness.hpp"
#include "qfid/pipeline.hpp"
#include "qfid/sqrt_extractor.hpp"
#include "qfid/state.hpp"

namespace qfid {

namespace {

constexpr double kPi = std::numbers::pi;

std::string printf_string(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

using Suite = std::function<void(std::vector<Check>&, std::uint64_t)>;

void add(std::vector<Check>& out, const char* suite, std::string name, bool pass,
         std::string detail) {
    out.push_back(Check{suite, std::move(name), pass, std::move(detail)});
}

void sine_state_suite(std::vector<Check>& out, std::uint64_t) {
    const char* s = "sine-state";
    const RealVector two = sine_state(2);
    const double dev2 = std::max(std::abs(two(0) - std::sqrt(0.5)), std::abs(two(1) - std::sqrt(0.5)));
    add(out, s, "T=2 equals (1/sqrt2, 1/sqrt2)", dev2 <= 1e-15, printf_string("max dev %.3g", dev2));

    double worst = 0.0;
    for (Index T = 2; T <= (Index{1} << 16); T *= 2) {
        worst = std::max(worst, std::abs(sine_state(T).norm() - 1.0));
    }
    add(out, s, "unit norm for T = 2..65536", worst <= 1e-12, printf_string("max |norm-1| %.3g", worst));

    const RealVector eight = sine_state(8);
    bool shape = true;
    for (Index i = 0; i < 8; ++i) {
        shape = shape && eight(i) > 0.0 && std::abs(eight(i) - eight(7 - i)) <= 1e-15;
        if (i > 0 && i < 4) {
            shape = shape && eight(i) > eight(i - 1);
        }
    }
    add(out, s, "T=8 symmetric and unimodal", shape, "");

    bool threw = false;
    try {
        (void)sine_state(6);
    } catch (const NotPowerOfTwo&) {
        threw = true;
    }
    add(out, s, "T=6 rejected", threw, "");
}

void lipschitz_suite(std::vector<Check>& out, std::uint64_t seed) {
    const char* s = "filter-Lipschitz";
    std::mt19937_64 rng(seed);
    for (double kappa : {2.0, 8.0, 32.0}) {
        const double limit = kPi / std::sqrt(3.0) * kappa;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_real_distribution<double> ramp(0.0, 2.0 / kappa);
        double worst = 0.0;
        for (int i = 0; i < 20000; ++i) {
            // Half the pairs are drawn near the ramp, where the slope peaks.
            auto& dist = i % 2 == 0 ? unit : ramp;
            const double a = dist(rng);
            const double b = dist(rng);
            if (a == b) {
                continue;
            }
            const double q = (h_state(a, kappa) - h_state(b, kappa)).norm() / std::abs(a - b);
            worst = std::max(worst, q / limit);
        }
        add(out, s, printf_string("kappa=%g: |h(a)-h(b)| <= (pi/sqrt3) kappa |a-b|", kappa),
            worst <= 1.0 + 1e-6, printf_string("max quotient / bound %.9f", worst));

        const double edge = 1.0 / kappa;
        const double jump = std::abs(filter_f(edge, kappa) - filter_f(std::nextafter(edge, 0.0), kappa));
        double flat = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double lam = edge + (1.0 - edge) * i / 1000.0;
            flat = std::max(flat, std::abs(std::pow(lam, 0.25) * filter_f(lam, kappa) -
                                           0.5 * std::pow(kappa, -0.25)));
        }
        add(out, s, printf_string("kappa=%g: continuity at 1/kappa, lambda^(1/4) f flat", kappa),
            jump <= 1e-9 && flat <= 1e-12, printf_string("jump %.3g, flat dev %.3g", jump, flat));
    }
}

void ideal_bound_suite(std::vector<Check>& out, std::uint64_t seed) {
    const char* s = "ideal-bound";
    double worst = 0.0;
    int cases = 0;
    bool ok = true;
    std::string failure;
    for (double kappa : {1.0, 4.0, 16.0, 64.0}) {
        const SqrtParams params = SqrtParams::make(kappa, 64, SimLevel::IdealSpectral);
        for (int n = 1; n <= 3; ++n) {
            for (int rank = 1; rank <= std::min(4, 1 << n); ++rank) {
                for (int encoded = 0; encoded < 2; ++encoded) {
                    const std::uint64_t sd = derive_seed(seed, static_cast<std::uint64_t>(
                                                                   ((kappa * 8 + n) * 8 + rank) * 2 + encoded));
                    const DensityOperator rho = random_density(n + encoded, rank, sd);
                    const RegisterLayout layout =
                        encoded ? RegisterLayout({Segment{kSystem, n}, Segment{kEncoding, 1}})
                                : RegisterLayout({Segment{kSystem, n}});
                    try {
                        const SqrtOutput o = ideal_sqrt_state(purify(rho, layout, ceil_log2(rank)), params);
                        const double dev = o.block_deviation();
                        worst = std::max(worst, dev * 4.0 * kappa);
                        ok = ok && dev <= 1.0 / (4.0 * kappa) + 1e-9;
                    } catch (const Error& e) {
                        ok = false;
                        failure = e.what();
                    }
                    ++cases;
                }
            }
        }
    }
    add(out, s, "||block - sqrt(A)/(4 sqrt kappa)|| <= 1/(4 kappa)", ok,
        printf_string("%d cases, max deviation * 4 kappa = %.12f%s", cases, worst,
                      failure.empty() ? "" : (" error: " + failure).c_str()));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double spectral = 0.0;
    for (double kappa : {1.0, 4.0, 16.0, 64.0}) {
        for (int i = 0; i < 20000; ++i) {
            const double lam = i % 2 ? unit(rng) : unit(rng) * 2.0 / kappa;
            const double f = filter_f(lam, kappa);
            spectral = std::max(spectral, std::abs(lam * f * f - std::sqrt(lam) / (4.0 * std::sqrt(kappa))) *
                                              4.0 * kappa);
        }
    }
    add(out, s, "max |lambda f^2 - sqrt(lambda)/(4 sqrt kappa)| <= 1/(4 kappa)", spectral <= 1.0 + 1e-12,
        printf_string("max scaled deviation %.12f", spectral));
}

struct CoeffStats {
    double max_difference = 0.0;
    double max_norm_defect = 0.0;
    double max_tail_ratio = 0.0;
    int samples = 0;
};

CoeffStats coefficient_stats(std::uint64_t seed) {
    CoeffStats st;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int T : {8, 16, 32}) {
        const SqrtParams params = SqrtParams::make(4.0, T, SimLevel::CircuitPe);
        std::vector<double> lambdas;
        for (int i = 0; i < 100; ++i) {
            lambdas.push_back(unit(rng));
        }
        // Eigenvalues that put some delta exactly on a removable singularity.
        for (int k = 0; k < T; k += 3) {
            for (double side : {-1.0, 1.0}) {
                const double target = side * kPi / T;
                lambdas.push_back((target - 2.0 * kPi / 3.0 + 2.0 * kPi * k / T) * 3.0);  // t = T
            }
        }
        for (double lam : lambdas) {
            double total = 0.0;
            for (const auto& row : coeffs_table(lam, params)) {
                st.max_difference = std::max(st.max_difference, row.difference);
                total += std::norm(row.closed);
                if (row.has_tail_bound) {
                    st.max_tail_ratio = std::max(st.max_tail_ratio, std::abs(row.closed) / row.tail_bound);
                }
            }
            st.max_norm_defect = std::max(st.max_norm_defect, std::abs(total - 1.0));
            ++st.samples;
        }
    }
    return st;
}

void pe_coefficients_suite(std::vector<Check>& out, std::uint64_t seed) {
    const char* s = "pe-coefficients";
    const CoeffStats st = coefficient_stats(seed);
    add(out, s, "closed form matches direct sum (T = 8, 16, 32)", st.max_difference <= 1e-10,
        printf_string("%d eigenvalues, max |closed - sum| %.3g", st.samples, st.max_difference));
    add(out, s, "sum_k |alpha|^2 = 1", st.max_norm_defect <= 1e-10,
        printf_string("max |sum - 1| %.3g", st.max_norm_defect));
}

void tail_bound_suite(std::vector<Check>& out, std::uint64_t seed) {
    const CoeffStats st = coefficient_stats(seed);
    add(out, "tail-bound", "|alpha| <= 3 sqrt2 pi^3/(T^2 delta^2) for |delta| > 2 pi/T",
        st.max_tail_ratio <= 1.0, printf_string("max |alpha| / bound %.6f", st.max_tail_ratio));
}

void distance_bounds_suite(std::vector<Check>& out, std::uint64_t seed) {
    const char* s = "distance-bounds";
    double worst = -1.0;
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + i % 3;
        const int dim = 1 << n;
        const auto a = random_density(n, 1 + static_cast<int>(derive_seed(seed, 3 * i) % dim),
                                      derive_seed(seed, 3 * i + 1));
        const auto b = random_density(n, 1 + static_cast<int>(derive_seed(seed, 3 * i + 2) % dim),
                                      derive_seed(seed, 3 * i + 3));
        const double f = fidelity_exact(a, b);
        worst = std::max(worst, trace_distance(a, b) - std::sqrt(std::max(0.0, 1.0 - f * f)));
    }
    add(out, s, "D <= sqrt(1 - F^2) on 200 random pairs", worst <= 1e-12,
        printf_string("max D - sqrt(1-F^2) = %.3g", worst));

    const DensityOperator rho = random_density(1, 1, derive_seed(seed, 999));
    const Purification p = purify(rho, 0);
    const SqrtParams params = SqrtParams::make(8.0, 32, SimLevel::CircuitPe);
    const SqrtOutput circuit = build_sqrt_unitary(p, params);
    const SqrtOutput ideal = ideal_sqrt_state(p, params, true);
    const double vec = (circuit.state() - ideal.state()).norm();
    std::vector<std::string> kept = circuit.layout().complement(std::vector<std::string>{kGarbage});
    const double op = operator_norm(reduced_density(circuit.state(), circuit.layout(), kept) -
                                    reduced_density(ideal.state(), ideal.layout(), kept));
    add(out, s, "||rho_circuit - rho_ideal|| <= || |circuit> - |ideal> ||", op <= vec + 1e-12,
        printf_string("operator %.6g vs vector %.6g", op, vec));
}

void weyl_suite(std::vector<Check>& out, std::uint64_t seed) {
    const char* s = "weyl";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_scale(-4.0, -1.0);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 500; ++i) {
        const Index dim = Index{2} << (i % 4);
        const int r = 1 + static_cast<int>(rng() % std::min<Index>(4, dim));
        ComplexMatrix x = random_gaussian(dim, r, rng);
        x /= x.norm();
        const ComplexMatrix e = random_gaussian(dim, r, rng) * std::pow(10.0, log_scale(rng));
        const ComplexMatrix target = x * x.adjoint();
        const ComplexMatrix perturbed = (x + e) * (x + e).adjoint();
        const WeylCheck c = weyl_trace_bound_check(perturbed, target, r);
        ok = ok && c.holds;
        worst = std::max(worst, c.difference / c.bound);
    }
    add(out, s, "rank-r perturbations, 500 pairs, dim <= 16", ok,
        printf_string("max difference / bound %.6f", worst));

    ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.5;
    double worst_diag = 0.0;
    bool ok_diag = true;
    for (int i = 0; i < 50; ++i) {
        const ComplexMatrix j = random_hermitian_unit(4, rng) * 1e-4;
        const WeylCheck c = weyl_trace_bound_check(diag + j, diag, 2);
        ok_diag = ok_diag && c.holds;
        worst_diag = std::max(worst_diag, c.difference);
    }
    add(out, s, "diag(.5,.5,0,0) + J, ||J|| = 1e-4, r = 2", ok_diag && worst_diag <= 2.0 * std::sqrt(3e-4),
        printf_string("max difference %.6g, bound %.6g", worst_diag, 2.0 * std::sqrt(3e-4)));

    const WeylCheck zero = weyl_trace_bound_check(diag, diag, 2);
    add(out, s, "J = 0 gives zero difference", zero.difference <= 1e-15,
        printf_string("difference %.3g", zero.difference));
}

void qae_suite(std::vector<Check>& out, std::uint64_t seed) {
    const char* s = "qae-bound";
    double worst = 0.0;
    for (std::int64_t M = 8; M <= 1024; M *= 2) {
        const QaeParams params = QaeParams::make(M, QaeMode::Exact);
        for (int i = 0; i < 10000; ++i) {
            const double x = i / 9999.0;
            worst = std::max(worst, std::abs(qae_estimate(x, params) - x) / qae_bound(x, M));
        }
    }
    add(out, s, "exact mode within 2 pi sqrt(x(1-x))/M + pi^2/M^2", worst <= 1.0,
        printf_string("max error / bound %.6f over 1e4 x, M = 8..1024", worst));

    const double x = 0.5;
    const std::int64_t M = 64;
    int hits = 0;
    bool on_grid = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const double est = qae_estimate(x, QaeParams::make(M, QaeMode::Sample, derive_seed(seed, trial)));
        hits += std::abs(est - x) <= qae_bound(x, M) ? 1 : 0;
        const double y = std::asin(std::sqrt(std::clamp(est, 0.0, 1.0))) * M / kPi;
        on_grid = on_grid && std::abs(y - std::round(y)) <= 1e-6;
    }
    const double freq = hits / 1000.0;
    add(out, s, "sample mode success frequency >= 8/pi^2 - 0.03 (x=0.5, M=64)",
        freq >= 8.0 / (kPi * kPi) - 0.03, printf_string("frequency %.3f, threshold %.3f", freq,
                                                       8.0 / (kPi * kPi) - 0.03));
    add(out, s, "sample-mode estimates lie on the sin^2 grid", on_grid, "");
}

const std::map<std::string, Suite>& registry() {
    static const std::map<std::string, Suite> suites{
        {"sine-state", sine_state_suite},   {"filter-Lipschitz", lipschitz_suite},
        {"ideal-bound", ideal_bound_suite}, {"pe-coefficients", pe_coefficients_suite},
        {"tail-bound", tail_bound_suite},   {"distance-bounds", distance_bounds_suite},
        {"weyl", weyl_suite},               {"qae-bound", qae_suite}};
    return suites;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{"sine-state",      "filter-Lipschitz", "ideal-bound",
                                                "pe-coefficients", "tail-bound",       "distance-bounds",
                                                "weyl",            "qae-bound"};
    return names;
}

std::vector<Check> run_verify(const std::string& suite, std::uint64_t seed) {
    std::vector<Check> out;
    if (suite == "all") {
        for (const auto& name : verify_suites()) {
            registry().at(name)(out, seed);
        }
        return out;
    }
    const auto it = registry().find(suite);
    if (it == registry().end()) {
        std::string list;
        for (const auto& name : verify_suites()) {
            list += name + ", ";
        }
        throw UnknownSuite("unknown suite '" + suite + "'; available: " + list + "all");
    }
    it->second(out, seed);
    return out;
}

bool print_checks(const std::vector<Check>& checks, std::ostream& out) {
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        out << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name;
        if (!c.detail.empty()) {
            out << " [" << c.detail << "]";
        }
        out << '\n';
    }
    out << (all ? "all checks passed" : "some checks FAILED") << " (" << checks.size()
        << " checks)\n";
    return all;
}

}  // namespace qfid
