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

#include "qfid/sqrt_extractor.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/FFT>

namespace qfid {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpectrumTol = 1e-9;
// Closed-form coefficients lose accuracy as a denominator sine approaches 0.
constexpr double kSingularityGuard = 1e-4;

std::vector<std::string> garbage_of(const RegisterLayout& layout) {
    return layout.contains(kGarbage) ? std::vector<std::string>{kGarbage}
                                     : std::vector<std::string>{};
}

int encoding_qubits(const RegisterLayout& layout) {
    int a = 0;
    for (const auto& s : layout.segments()) {
        if (s.name != kSystem && s.name != kGarbage) {
            a += s.qubits;
        }
    }
    return a;
}

ComplexMatrix operator_from_purification(const Purification& p) {
    if (!p.layout.contains(kSystem)) {
        throw InvalidParams("purification has no '" + kSystem + "' segment");
    }
    if (p.state.size() != p.layout.dimension()) {
        throw DimensionMismatch("purification state does not match its layout");
    }
    return encoded_block(CarrierKind::Pure, p.state, p.layout, {kSystem}, garbage_of(p.layout));
}

HermitianEigen checked_spectrum(const ComplexMatrix& a) {
    HermitianEigen eig = eig_hermitian(a);
    const double hi = eig.values.maxCoeff();
    const double lo = eig.values.minCoeff();
    if (lo < -kSpectrumTol || hi > 1.0 + kSpectrumTol) {
        throw SpectrumOutOfRange("encoded operator has spectrum [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "], outside [0, 1]");
    }
    return eig;
}

ComplexMatrix filter_matrix(const HermitianEigen& eig, double kappa, bool complement) {
    return matrix_func(
        eig,
        [kappa, complement](double x) {
            const double f = filter_f(x, kappa);
            return complement ? std::sqrt(std::max(0.0, 1.0 - f * f)) : f;
        },
        false);
}

BlockEncodingSpec output_spec(const RegisterLayout& p_layout, const SqrtParams& params,
                              double epsilon) {
    return BlockEncodingSpec::make(4.0 * std::sqrt(params.kappa),
                                   encoding_qubits(p_layout) + params.pe_qubits() + 1, epsilon);
}

SqrtOutput finish_output(SimLevel level, const SqrtParams& params, ComplexMatrix a,
                         CarrierKind kind, ComplexMatrix carrier, RegisterLayout layout,
                         const RegisterLayout& source_layout, std::int64_t queries,
                         std::shared_ptr<const SqrtCircuit> circuit) {
    const ComplexMatrix target = sqrtm_psd(a);
    const auto garbage = garbage_of(layout);
    const double alpha = 4.0 * std::sqrt(params.kappa);
    const double eps = be_error(kind, carrier, layout, {kSystem}, garbage, target, alpha);
    SqrtOutput out;
    out.level = level;
    out.params = params;
    out.a_operator = std::move(a);
    out.encoding = EncodedOperator::make(kind, std::move(carrier), std::move(layout), {kSystem},
                                         garbage, output_spec(source_layout, params, eps), target);
    out.queries_per_use = queries;
    out.circuit = std::move(circuit);
    if (level == SimLevel::IdealSpectral && eps / alpha > 1.0 / (4.0 * params.kappa) + 1e-9) {
        throw InvalidState("ideal square-root block deviation " + std::to_string(eps / alpha) +
                           " exceeds 1/(4 kappa)");
    }
    return out;
}

}  // namespace

std::string to_string(SimLevel level) {
    switch (level) {
        case SimLevel::IdealSpectral:
            return "ideal-spectral";
        case SimLevel::CircuitPe:
            return "circuit-pe";
        case SimLevel::CircuitPePerturbed:
            return "circuit-pe-perturbed";
    }
    return "unknown";
}

SimLevel parse_sim_level(std::string_view text) {
    if (text == "ideal-spectral") {
        return SimLevel::IdealSpectral;
    }
    if (text == "circuit-pe") {
        return SimLevel::CircuitPe;
    }
    if (text == "circuit-pe-perturbed") {
        return SimLevel::CircuitPePerturbed;
    }
    throw InvalidParams("unknown simulation level '" + std::string(text) + "'");
}

SqrtParams SqrtParams::make(double kappa, int t, SimLevel level, double perturbation,
                            std::uint64_t perturbation_seed) {
    if (!(kappa >= 1.0)) {
        throw InvalidParams("kappa must be at least 1");
    }
    if (t < 6) {
        throw InvalidParams("t must be at least 6");
    }
    if (t > (1 << 30)) {
        throw InfeasibleParams("t = " + std::to_string(t) + " exceeds 2^30");
    }
    if (!(perturbation >= 0.0)) {
        throw InvalidParams("perturbation must be nonnegative");
    }
    return SqrtParams{kappa, t, level, perturbation, perturbation_seed};
}

int SqrtParams::pe_qubits() const { return ceil_log2(t); }

Index SqrtParams::grid_size() const { return Index{1} << pe_qubits(); }

RealVector sine_state(Index grid_size) {
    if (grid_size < 2 || !is_power_of_two(grid_size)) {
        throw NotPowerOfTwo("sine window size " + std::to_string(grid_size) +
                            " is not a power of two >= 2");
    }
    const double T = static_cast<double>(grid_size);
    RealVector psi(grid_size);
    for (Index tau = 0; tau < grid_size; ++tau) {
        psi(tau) = std::sqrt(2.0 / T) * std::sin(kPi * (static_cast<double>(tau) + 0.5) / T);
    }
    return psi;
}

double filter_f(double lambda, double kappa) {
    const double lo = 1.0 / (2.0 * kappa);
    const double mid = 1.0 / kappa;
    if (lambda > 1.0) {
        return 0.5 * std::pow(kappa, -0.25);
    }
    if (lambda >= mid) {
        return 0.5 * std::pow(kappa, -0.25) * std::pow(lambda, -0.25);
    }
    if (lambda >= lo) {
        return 0.5 * std::sin(0.5 * kPi * (lambda - lo) / (mid - lo));
    }
    return 0.0;
}

Eigen::Vector2d h_state(double lambda, double kappa) {
    const double f = filter_f(lambda, kappa);
    return {f, std::sqrt(std::max(0.0, 1.0 - f * f))};
}

double grid_eigenvalue(Index k, const SqrtParams& params) {
    const double T = static_cast<double>(params.grid_size());
    return 3.0 * T / params.t * (2.0 * kPi * static_cast<double>(k) / T - 2.0 * kPi / 3.0);
}

Eigen::Matrix2d rotation_gate(Index k, const SqrtParams& params) {
    if (k < 0 || k >= params.grid_size()) {
        throw IndexOutOfRange("grid index " + std::to_string(k) + " outside [0, " +
                              std::to_string(params.grid_size()) + ")");
    }
    const Eigen::Vector2d h = h_state(grid_eigenvalue(k, params), params.kappa);
    Eigen::Matrix2d r;
    r << h(0), -h(1), h(1), h(0);
    return r;
}

double pe_phase_offset(double lambda, Index k, const SqrtParams& params) {
    const double T = static_cast<double>(params.grid_size());
    return params.t / (3.0 * T) * lambda + 2.0 * kPi / 3.0 - 2.0 * kPi * static_cast<double>(k) / T;
}

Complex pe_coefficient_sum(double lambda, Index k, const SqrtParams& params) {
    const Index grid = params.grid_size();
    const double T = static_cast<double>(grid);
    const double delta = pe_phase_offset(lambda, k, params);
    Complex acc = 0.0;
    for (Index tau = 0; tau < grid; ++tau) {
        const double x = static_cast<double>(tau);
        acc += std::polar(1.0, x * delta) * std::sin(kPi * (x + 0.5) / T);
    }
    return std::sqrt(2.0) / T * acc;
}

Complex pe_coefficient(double lambda, Index k, const SqrtParams& params) {
    if (k < 0 || k >= params.grid_size()) {
        throw IndexOutOfRange("grid index " + std::to_string(k) + " outside the phase grid");
    }
    const double T = static_cast<double>(params.grid_size());
    const double delta = pe_phase_offset(lambda, k, params);
    const double half = kPi / (2.0 * T);
    const double s_plus = std::sin(delta / 2.0 + half);
    const double s_minus = std::sin(delta / 2.0 - half);
    if (std::abs(s_plus) < kSingularityGuard || std::abs(s_minus) < kSingularityGuard) {
        return pe_coefficient_sum(lambda, k, params);
    }
    const Complex phase = std::polar(1.0, delta * (T - 1.0) / 2.0);
    const double magnitude = std::sqrt(2.0) * std::cos(T * delta / 2.0) / T *
                             std::cos(delta / 2.0) * std::sin(half) / (s_plus * s_minus);
    return -phase * magnitude;
}

std::int64_t hamiltonian_step_cost(double evolution_time) {
    return static_cast<std::int64_t>(std::ceil(std::abs(evolution_time))) + 1;
}

std::vector<double> pe_step_times(const SqrtParams& params) {
    const double T = static_cast<double>(params.grid_size());
    std::vector<double> times;
    for (int j = 0; j < params.pe_qubits(); ++j) {
        times.push_back(std::ldexp(1.0, j) * params.t / (3.0 * T));
    }
    return times;
}

std::int64_t queries_per_use(const SqrtParams& params) {
    std::int64_t steps = 0;
    for (double s : pe_step_times(params)) {
        steps += hamiltonian_step_cost(s);
    }
    return 1 + 4 * steps;
}

int sqrt_register_qubits(const Purification& p, const SqrtParams& params) {
    return p.layout.total_qubits() + params.pe_qubits() + 1;
}

SqrtCircuit::SqrtCircuit(const Purification& p, const SqrtParams& params)
    : purification_(p), params_(params) {
    a_ = operator_from_purification(p);
    const HermitianEigen eig = checked_spectrum(a_);
    const int l = params.pe_qubits();
    layout_ = p.layout.appended(Segment{kPe, l}).appended(Segment{kFlag, 1});
    grid_ = params.grid_size();
    system_dim_ = Index{1} << p.layout.qubits(kSystem);
    below_system_ = Index{1} << p.layout.shift(kSystem);

    window_reflector_ = -sine_state(grid_);
    window_reflector_(0) += 1.0;

    // Controlled exp(i 2^j (t/(3T) A + 2pi/3 I)), least significant bit first,
    // optionally followed by a random unitary within `perturbation` of I.
    const auto times = pe_step_times(params);
    std::vector<ComplexMatrix> steps;
    std::mt19937_64 rng(params.perturbation_seed);
    std::int64_t cost = 0;
    for (int j = 0; j < l; ++j) {
        ComplexMatrix step = expm_i(eig, times[static_cast<std::size_t>(j)]) *
                             std::polar(1.0, std::ldexp(1.0, j) * 2.0 * kPi / 3.0);
        if (params.level == SimLevel::CircuitPePerturbed && params.perturbation > 0.0) {
            step = expm_i(random_hermitian_unit(system_dim_, rng), params.perturbation) * step;
        }
        steps.push_back(std::move(step));
        cost += hamiltonian_step_cost(times[static_cast<std::size_t>(j)]);
    }
    queries_per_phase_pass_ = 2 * cost;

    powers_.resize(static_cast<std::size_t>(grid_));
    powers_[0] = ComplexMatrix::Identity(system_dim_, system_dim_);
    for (Index tau = 1; tau < grid_; ++tau) {
        int top = 0;
        while ((Index{2} << top) <= tau) {
            ++top;
        }
        powers_[static_cast<std::size_t>(tau)] =
            steps[static_cast<std::size_t>(top)] *
            powers_[static_cast<std::size_t>(tau - (Index{1} << top))];
    }

    for (Index k = 0; k < grid_; ++k) {
        rotations_.push_back(rotation_gate(k, params));
    }
}

void SqrtCircuit::apply_window(ComplexVector& state) const {
    const double wn2 = window_reflector_.squaredNorm();
    if (wn2 == 0.0) {
        return;
    }
    const Index outer = state.size() / (2 * grid_);
    for (Index p = 0; p < outer; ++p) {
        for (Index f = 0; f < 2; ++f) {
            Complex dot = 0.0;
            for (Index tau = 0; tau < grid_; ++tau) {
                dot += window_reflector_(tau) * state((p * grid_ + tau) * 2 + f);
            }
            const Complex scale = 2.0 * dot / wn2;
            for (Index tau = 0; tau < grid_; ++tau) {
                state((p * grid_ + tau) * 2 + f) -= scale * window_reflector_(tau);
            }
        }
    }
}

std::int64_t SqrtCircuit::apply_controlled_phase(ComplexVector& state, bool adjoint) const {
    const Index outer = state.size() / (2 * grid_);
    const Index above = outer / (system_dim_ * below_system_);
    ComplexVector v(system_dim_);
    for (Index hi = 0; hi < above; ++hi) {
        for (Index lo = 0; lo < below_system_; ++lo) {
            for (Index tau = 0; tau < grid_; ++tau) {
                const ComplexMatrix& g = powers_[static_cast<std::size_t>(tau)];
                for (Index f = 0; f < 2; ++f) {
                    auto index = [&](Index s) {
                        return (((hi * system_dim_ + s) * below_system_ + lo) * grid_ + tau) * 2 + f;
                    };
                    for (Index s = 0; s < system_dim_; ++s) {
                        v(s) = state(index(s));
                    }
                    const ComplexVector w = adjoint ? ComplexVector(g.adjoint() * v)
                                                    : ComplexVector(g * v);
                    for (Index s = 0; s < system_dim_; ++s) {
                        state(index(s)) = w(s);
                    }
                }
            }
        }
    }
    return queries_per_phase_pass_;
}

void SqrtCircuit::apply_fourier(ComplexVector& state, bool inverse) const {
    // FT_l is sqrt(T) times the (1/T-scaled) inverse DFT; its adjoint is the
    // forward DFT divided by sqrt(T).
    Eigen::FFT<double> fft;
    const Index outer = state.size() / (2 * grid_);
    const double root = std::sqrt(static_cast<double>(grid_));
    std::vector<Complex> in(static_cast<std::size_t>(grid_));
    std::vector<Complex> out;
    for (Index p = 0; p < outer; ++p) {
        for (Index f = 0; f < 2; ++f) {
            for (Index tau = 0; tau < grid_; ++tau) {
                in[static_cast<std::size_t>(tau)] = state((p * grid_ + tau) * 2 + f);
            }
            if (inverse) {
                fft.fwd(out, in);
            } else {
                fft.inv(out, in);
            }
            const double scale = inverse ? 1.0 / root : root;
            for (Index tau = 0; tau < grid_; ++tau) {
                state((p * grid_ + tau) * 2 + f) = scale * out[static_cast<std::size_t>(tau)];
            }
        }
    }
}

void SqrtCircuit::apply_rotations(ComplexVector& state) const {
    const Index outer = state.size() / (2 * grid_);
    for (Index p = 0; p < outer; ++p) {
        for (Index k = 0; k < grid_; ++k) {
            const Eigen::Matrix2d& r = rotations_[static_cast<std::size_t>(k)];
            const Index base = (p * grid_ + k) * 2;
            const Complex a = state(base);
            const Complex b = state(base + 1);
            state(base) = r(0, 0) * a + r(0, 1) * b;
            state(base + 1) = r(1, 0) * a + r(1, 1) * b;
        }
    }
}

std::int64_t SqrtCircuit::apply(ComplexVector& state) const {
    if (state.size() != layout_.dimension()) {
        throw DimensionMismatch("circuit state does not match the register");
    }
    if (!purification_.has_preparer()) {
        throw InvalidParams("applying the full circuit needs the purification's preparer");
    }
    apply_on_segments(state, layout_, purification_.layout.complement({}),
                      purification_.preparer);
    std::int64_t queries = 1;
    apply_window(state);
    queries += apply_controlled_phase(state, false);
    apply_fourier(state, true);
    apply_rotations(state);
    apply_fourier(state, false);
    queries += apply_controlled_phase(state, true);
    apply_window(state);
    return queries;
}

ComplexVector SqrtCircuit::prepare(std::int64_t* queries) const {
    ComplexVector state = ComplexVector::Zero(layout_.dimension());
    for (Index p = 0; p < purification_.state.size(); ++p) {
        state(p * grid_ * 2) = purification_.state(p);
    }
    std::int64_t used = 1;
    apply_window(state);
    used += apply_controlled_phase(state, false);
    apply_fourier(state, true);
    apply_rotations(state);
    apply_fourier(state, false);
    used += apply_controlled_phase(state, true);
    apply_window(state);
    if (queries != nullptr) {
        *queries = used;
    }
    return state;
}

ComplexMatrix SqrtCircuit::unitary(int qubit_budget) const {
    if (layout_.total_qubits() > qubit_budget) {
        throw RegisterTooLarge("circuit register of " + std::to_string(layout_.total_qubits()) +
                               " qubits exceeds the budget of " + std::to_string(qubit_budget));
    }
    const Index dim = layout_.dimension();
    ComplexMatrix u(dim, dim);
    for (Index c = 0; c < dim; ++c) {
        ComplexVector v = basis_state(dim, c);
        apply(v);
        u.col(c) = v;
    }
    return u;
}

ComplexVector SqrtOutput::state() const {
    if (!has_state()) {
        throw InvalidParams("this square-root output carries a density operator, not a state");
    }
    return encoding.carrier.col(0);
}

double SqrtOutput::amplitude() const { return block().trace().real(); }

double SqrtOutput::pe_zero_weight() const {
    const ComplexVector psi = state();
    return project_zero(psi, layout(), std::vector<std::string>{kPe}).squaredNorm();
}

ComplexMatrix SqrtOutput::unitary(int qubit_budget) const {
    if (!circuit) {
        throw InvalidParams("ideal-spectral outputs have no circuit unitary");
    }
    return circuit->unitary(qubit_budget);
}

SqrtOutput build_sqrt_unitary(const Purification& p, const SqrtParams& params, int qubit_budget) {
    const int width = sqrt_register_qubits(p, params);
    if (width > qubit_budget) {
        throw RegisterTooLarge("square-root circuit needs " + std::to_string(width) +
                               " qubits, budget is " + std::to_string(qubit_budget));
    }
    auto circuit = std::make_shared<const SqrtCircuit>(p, params);
    std::int64_t queries = 0;
    ComplexVector out = circuit->prepare(&queries);
    const SimLevel level = params.level == SimLevel::CircuitPePerturbed
                               ? SimLevel::CircuitPePerturbed
                               : SimLevel::CircuitPe;
    ComplexMatrix a = circuit->encoded_operator();
    RegisterLayout layout = circuit->layout();
    return finish_output(level, params, std::move(a), CarrierKind::Pure, std::move(out),
                         std::move(layout), p.layout, queries, std::move(circuit));
}

SqrtOutput ideal_sqrt_state(const Purification& p, const SqrtParams& params,
                            bool materialize_pe) {
    ComplexMatrix a = operator_from_purification(p);
    const HermitianEigen eig = checked_spectrum(a);
    const std::vector<std::string> sys{kSystem};
    ComplexVector kept = p.state;
    ComplexVector flipped = p.state;
    apply_on_segments(kept, p.layout, sys, filter_matrix(eig, params.kappa, false));
    apply_on_segments(flipped, p.layout, sys, filter_matrix(eig, params.kappa, true));

    const int l = materialize_pe ? params.pe_qubits() : 0;
    const Index grid = Index{1} << l;
    RegisterLayout layout = p.layout.appended(Segment{kPe, l}).appended(Segment{kFlag, 1});
    ComplexVector out = ComplexVector::Zero(layout.dimension());
    for (Index i = 0; i < p.state.size(); ++i) {
        out(i * grid * 2) = kept(i);
        out(i * grid * 2 + 1) = flipped(i);
    }
    return finish_output(SimLevel::IdealSpectral, params, std::move(a), CarrierKind::Pure,
                         std::move(out), std::move(layout), p.layout, queries_per_use(params),
                         nullptr);
}

SqrtOutput ideal_sqrt_state(const DensityOperator& rho, const RegisterLayout& layout,
                            const SqrtParams& params) {
    if (layout.total_qubits() != rho.qubits()) {
        throw DimensionMismatch("carrier layout does not match the density operator");
    }
    if (layout.contains(kGarbage)) {
        throw InvalidParams("density carrier layouts carry no garbage segment");
    }
    const std::vector<std::string> sys{kSystem};
    const std::vector<std::string> encoding = layout.complement(sys);
    ComplexMatrix a = project_zero(rho.matrix(), layout, encoding);
    const HermitianEigen eig = checked_spectrum(a);

    const Index dim = rho.dimension();
    ComplexMatrix keep = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix flip = ComplexMatrix::Identity(dim, dim);
    apply_on_segments(keep, layout, sys, filter_matrix(eig, params.kappa, false));
    apply_on_segments(flip, layout, sys, filter_matrix(eig, params.kappa, true));
    const ComplexMatrix* branch[2] = {&keep, &flip};

    ComplexMatrix out(2 * dim, 2 * dim);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const ComplexMatrix part = *branch[x] * rho.matrix() * branch[y]->adjoint();
            for (Index j = 0; j < dim; ++j) {
                for (Index i = 0; i < dim; ++i) {
                    out(2 * i + x, 2 * j + y) = part(i, j);
                }
            }
        }
    }
    RegisterLayout out_layout = layout.appended(Segment{kPe, 0}).appended(Segment{kFlag, 1});
    return finish_output(SimLevel::IdealSpectral, params, std::move(a), CarrierKind::Density,
                         std::move(out), std::move(out_layout), layout, queries_per_use(params),
                         nullptr);
}

SqrtOutput build_sqrt(const Purification& p, const SqrtParams& params, int qubit_budget) {
    if (params.level != SimLevel::IdealSpectral && sqrt_register_qubits(p, params) <= qubit_budget) {
        return build_sqrt_unitary(p, params, qubit_budget);
    }
    return ideal_sqrt_state(p, params);
}

}  // namespace qfid
