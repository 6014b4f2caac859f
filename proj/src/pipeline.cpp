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

#include "qfid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

constexpr double kStateTol = 1e-8;

std::int64_t pow2_ceil(double v) {
    std::int64_t p = 1;
    while (static_cast<double>(p) < v && p < (std::int64_t{1} << 62)) {
        p <<= 1;
    }
    return p;
}

std::int64_t t_ceiling(SimLevel level) {
    return level == SimLevel::IdealSpectral ? kIdealTCeiling : kCircuitTCeiling;
}

void require_plain_state(const Purification& p, const char* role) {
    const auto prepared = p.prepared_segments();
    if (prepared.size() != 1 || prepared.front() != kSystem) {
        throw InvalidParams(std::string(role) +
                            " preparation must act on [system][garbage] only");
    }
}

// Deterministic total order on equal-rank inputs, so both argument orders
// run the identical computation.
bool lexicographically_less(const ComplexMatrix& a, const ComplexMatrix& b) {
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            const auto ka = std::make_tuple(a(i, j).real(), a(i, j).imag());
            const auto kb = std::make_tuple(b(i, j).real(), b(i, j).imag());
            if (ka != kb) {
                return ka < kb;
            }
        }
    }
    return false;
}

double trace_sqrt(const ComplexMatrix& m) {
    const HermitianEigen eig = eig_hermitian(0.5 * (m + m.adjoint()), 1e-6);
    double acc = 0.0;
    for (Index i = 0; i < eig.values.size(); ++i) {
        acc += std::sqrt(std::max(0.0, eig.values(i)));
    }
    return acc;
}

}  // namespace

void PipelineParams::validate() const {
    (void)sigma_stage();
    (void)eta_stage();
    (void)QaeParams::make(qae.M, qae.mode, qae.seed);
    if (!(bound_constant > 0.0)) {
        throw InvalidParams("bound_constant must be positive");
    }
    if (qubit_budget < 1 || unitary_qubit_limit < 0) {
        throw InvalidParams("qubit limits must be positive");
    }
}

SqrtParams PipelineParams::sigma_stage() const {
    return SqrtParams::make(kappa_sigma, t_sigma, sim_level, perturbation, qae.seed ^ 0x5167u);
}

SqrtParams PipelineParams::eta_stage() const {
    return SqrtParams::make(kappa, t, sim_level, perturbation, qae.seed ^ 0xe7au);
}

SigmaStage build_w_sigma(const Purification& sigma_prep, const PipelineParams& params) {
    params.validate();
    require_plain_state(sigma_prep, "sigma");
    SigmaStage out;
    out.sqrt = build_sqrt(sigma_prep, params.sigma_stage(), params.qubit_budget);
    out.block = out.sqrt.block();
    out.sigma_queries_per_v = out.sqrt.queries_per_use;

    const RegisterLayout& layout = out.sqrt.layout();
    int width = layout.total_qubits();
    for (const auto& s : layout.segments()) {
        if (s.name != kGarbage) {
            width += s.qubits;
        }
    }
    const double alpha = 4.0 * std::sqrt(params.kappa_sigma);
    if (width <= std::min(params.unitary_qubit_limit, params.qubit_budget)) {
        const ComplexVector psi = out.sqrt.state();
        // The sigma-stage ancillas get their own names so the eta stage can
        // append its own phase register and flag.
        std::vector<Segment> renamed;
        for (const auto& s : layout.segments()) {
            const bool keep = s.name == kSystem || s.name == kGarbage;
            renamed.push_back({keep ? s.name : kSigmaPrefix + s.name, s.qubits});
        }
        Purification prepared;
        prepared.layout = RegisterLayout(std::move(renamed));
        prepared.state = psi;
        prepared.preparer = out.sqrt.circuit && sigma_prep.has_preparer()
                                ? out.sqrt.unitary(params.qubit_budget)
                                : complete_unitary(psi);
        const EncodedOperator lemma = purification_to_unitary_be(prepared, params.qubit_budget);
        const ComplexMatrix& target = out.sqrt.encoding.target;
        const double eps = be_error(CarrierKind::Unitary, lemma.carrier, lemma.layout, {kSystem},
                                    {}, target, alpha);
        out.w_sigma = EncodedOperator::make(
            CarrierKind::Unitary, lemma.carrier, lemma.layout, {kSystem}, {},
            BlockEncodingSpec::make(alpha, lemma.layout.total_qubits() - layout.qubits(kSystem), eps),
            target);
        out.assembled = true;
    } else {
        out.w_sigma = out.sqrt.encoding;
    }
    return out;
}

EtaStage build_eta(const Purification& rho_prep, const SigmaStage& sigma,
                   const ComplexMatrix& sigma_matrix, const PipelineParams& params) {
    require_plain_state(rho_prep, "rho");
    const ComplexMatrix rho = rho_prep.prepared_density();
    if (rho.rows() != sigma.block.rows() || sigma_matrix.rows() != rho.rows()) {
        throw DimensionMismatch("rho and sigma act on different registers");
    }
    const int n = rho_prep.layout.qubits(kSystem);
    const int b_rho = rho_prep.layout.contains(kGarbage) ? rho_prep.layout.qubits(kGarbage) : 0;

    Purification purification;
    std::optional<DensityOperator> density;
    ComplexMatrix block;
    bool full_register = false;
    const ComplexMatrix root = sqrtm_psd(sigma_matrix);
    const ComplexMatrix ideal = root * rho * root / (16.0 * params.kappa_sigma);

    const RegisterLayout& w_layout = sigma.w_sigma.layout;
    if (sigma.assembled && w_layout.total_qubits() + b_rho <= params.qubit_budget) {
        // |eta> = (W_sigma (x) I)(O_rho (x) I)|0>, the garbage of rho kept last.
        RegisterLayout layout = w_layout.appended(Segment{kGarbage, b_rho});
        ComplexVector psi = ComplexVector::Zero(layout.dimension());
        const int s_shift = layout.shift(kSystem);
        const int g_shift = layout.shift(kGarbage);
        const int rs_shift = rho_prep.layout.shift(kSystem);
        const int rg_shift = b_rho > 0 ? rho_prep.layout.shift(kGarbage) : 0;
        for (Index s = 0; s < (Index{1} << n); ++s) {
            for (Index g = 0; g < (Index{1} << b_rho); ++g) {
                psi((s << s_shift) | (g << g_shift)) = rho_prep.state((s << rs_shift) | (g << rg_shift));
            }
        }
        std::vector<std::string> w_names;
        for (const auto& seg : w_layout.segments()) {
            w_names.push_back(seg.name);
        }
        apply_on_segments(psi, layout, w_names, sigma.w_sigma.carrier);
        density = DensityOperator::from_matrix(reduced_density(psi, layout, w_names), kStateTol);
        purification.layout = std::move(layout);
        purification.state = std::move(psi);
        block = encoded_block(CarrierKind::Pure, purification.state,
                                  purification.layout, {kSystem}, {kGarbage});
        full_register = true;
    } else {
        block = sigma.block * rho * sigma.block.adjoint();
        const Index dim = block.rows();
        ComplexMatrix carrier = ComplexMatrix::Zero(2 * dim, 2 * dim);
        for (Index i = 0; i < dim; ++i) {
            for (Index j = 0; j < dim; ++j) {
                carrier(2 * i, 2 * j) = block(i, j);
            }
        }
        carrier(1, 1) = 1.0 - block.trace().real();
        density = DensityOperator::from_matrix(carrier, kStateTol);
        const RegisterLayout layout({Segment{kSystem, n}, Segment{kEncoding, 1}});
        purification = purify(*density, layout, ceil_log2(density->rank()));
    }
    const double lemma_error = operator_norm(block - ideal);
    return EtaStage{std::move(purification), std::move(*density), std::move(block), full_register,
                    lemma_error};
}

double analytic_error_bound(const PipelineParams& p, int r, double delta) {
    const double ks = p.kappa_sigma;
    const double rr = static_cast<double>(r);
    return p.bound_constant *
           (std::sqrt(p.kappa * ks) * (delta + rr / p.kappa + p.kappa / p.t) +
            rr * std::sqrt(1.0 / std::sqrt(ks) + std::pow(ks, 1.5) / p.t_sigma));
}

EstimationReport estimate_fidelity(const Purification& rho_prep, const Purification& sigma_prep,
                                   const PipelineParams& params) {
    params.validate();
    require_plain_state(rho_prep, "rho");
    require_plain_state(sigma_prep, "sigma");
    DensityOperator rho = DensityOperator::from_matrix(rho_prep.prepared_density(), kStateTol);
    DensityOperator sigma = DensityOperator::from_matrix(sigma_prep.prepared_density(), kStateTol);
    if (rho.qubits() != sigma.qubits()) {
        throw DimensionMismatch("rho and sigma act on different registers");
    }

    EstimationReport report;
    report.params = params;
    report.seed = params.qae.seed;
    report.swapped = rho.rank() > sigma.rank() ||
                     (rho.rank() == sigma.rank() &&
                      lexicographically_less(sigma.matrix(), rho.matrix()));
    const Purification& lo = report.swapped ? sigma_prep : rho_prep;
    const Purification& hi = report.swapped ? rho_prep : sigma_prep;
    if (report.swapped) {
        std::swap(rho, sigma);
    }
    report.rank_r = rho.rank();

    const SigmaStage stage_sigma = build_w_sigma(hi, params);
    const EtaStage stage_eta = build_eta(lo, stage_sigma, sigma.matrix(), params);
    const SqrtOutput out = build_sqrt(stage_eta.purification, params.eta_stage(), params.qubit_budget);

    report.x = std::clamp(out.amplitude(), 0.0, 1.0);
    report.x_tilde = qae_estimate(report.x, params.qae);
    report.estimate = 16.0 * std::sqrt(params.kappa * params.kappa_sigma) * report.x_tilde;
    report.exact_fidelity = fidelity_exact(rho, sigma);
    report.abs_error = std::abs(report.estimate - report.exact_fidelity);
    report.delta = qae_bound(report.x, params.qae.M);
    report.delta_tilde = qae_bound(report.x_tilde, params.qae.M);
    report.analytic_bound = analytic_error_bound(params, report.rank_r, report.delta);

    // Each use of U_rho-tilde: one eta preparation = one O_rho call plus one
    // W_sigma use (two V_sigma uses). QAE with grid M applies it 2M - 1 times.
    const std::int64_t uses = 2 * params.qae.M - 1;
    report.queries_rho = uses * out.queries_per_use;
    report.queries_sigma = report.queries_rho * 2 * stage_sigma.sigma_queries_per_v;

    report.sigma_stage_level = to_string(stage_sigma.sqrt.level);
    report.eta_stage_level = to_string(out.level);
    report.w_sigma_assembled = stage_sigma.assembled;
    report.eta_full_register = stage_eta.full_register;
    report.eps_sigma = stage_sigma.w_sigma.spec.epsilon;
    report.eps_eta_sqrt = out.encoding.spec.epsilon;
    report.eta_lemma_error = stage_eta.lemma_error;
    const double ks = params.kappa_sigma;
    const double ts = params.t_sigma;
    report.eta_lemma_bound =
        params.bound_constant * (std::pow(ks, -1.5) + std::sqrt(ks) / ts + ks * ks / (ts * ts));
    return report;
}

nlohmann::ordered_json to_json(const EstimationReport& r) {
    nlohmann::ordered_json j;
    j["estimate"] = r.estimate;
    j["exact_fidelity"] = r.exact_fidelity;
    j["abs_error"] = r.abs_error;
    j["analytic_bound"] = r.analytic_bound;
    j["x_tilde"] = r.x_tilde;
    j["x"] = r.x;
    j["rank_r"] = r.rank_r;
    j["queries_rho"] = r.queries_rho;
    j["queries_sigma"] = r.queries_sigma;
    j["kappa_sigma"] = r.params.kappa_sigma;
    j["t_sigma"] = r.params.t_sigma;
    j["kappa"] = r.params.kappa;
    j["t"] = r.params.t;
    j["M"] = r.params.qae.M;
    j["qae_mode"] = to_string(r.params.qae.mode);
    j["sim_level"] = to_string(r.params.sim_level);
    j["bound_constant"] = r.params.bound_constant;
    j["seed"] = r.seed;
    j["swapped"] = r.swapped;
    j["sigma_stage_level"] = r.sigma_stage_level;
    j["eta_stage_level"] = r.eta_stage_level;
    j["w_sigma_assembled"] = r.w_sigma_assembled;
    j["eta_full_register"] = r.eta_full_register;
    j["eps_sigma"] = r.eps_sigma;
    j["eps_eta_sqrt"] = r.eps_eta_sqrt;
    j["eta_lemma_error"] = r.eta_lemma_error;
    j["eta_lemma_bound"] = r.eta_lemma_bound;
    j["delta"] = r.delta;
    j["delta_tilde"] = r.delta_tilde;
    return j;
}

ParamMode parse_param_mode(std::string_view text) {
    if (text == "paper") {
        return ParamMode::Paper;
    }
    if (text == "practical") {
        return ParamMode::Practical;
    }
    throw InvalidParams("unknown parameter mode '" + std::string(text) + "'");
}

PaperParams paper_params(int r, double eps) {
    if (r < 1 || !(eps > 0.0 && eps < 1.0)) {
        throw InvalidParams("need r >= 1 and eps in (0, 1)");
    }
    const double q = static_cast<double>(r);
    PaperParams p;
    p.kappa_sigma = std::pow(q, 4) / std::pow(eps, 4);
    p.t_sigma = std::pow(q, 8) / std::pow(eps, 8);
    p.kappa = std::pow(q, 6) / std::pow(eps, 6);
    p.t = std::pow(q, 11) / std::pow(eps, 12);
    p.delta = std::pow(eps, 6) / std::pow(q, 5);
    p.M = std::pow(q, 2.5) / std::pow(eps, 3.5);
    return p;
}

namespace {

PipelineParams paper_mode(int r, double eps, SimLevel level) {
    const PaperParams raw = paper_params(r, eps);
    const double ceiling = static_cast<double>(t_ceiling(level));
    // Round before comparing so values within floating noise of an integer stay put.
    auto up = [](double v) { return std::ceil(v * (1.0 - 1e-12)); };
    const double t_sigma = std::max(6.0, up(raw.t_sigma));
    const double t = std::max(6.0, up(raw.t));
    if (t_sigma > ceiling || t > ceiling) {
        throw InfeasibleParams("paper parameters need t_sigma = " + std::to_string(t_sigma) +
                               ", t = " + std::to_string(t) + " but the " + to_string(level) +
                               " ceiling is " + std::to_string(static_cast<std::int64_t>(ceiling)));
    }
    PipelineParams p;
    p.kappa_sigma = std::max(1.0, raw.kappa_sigma);
    p.t_sigma = static_cast<int>(t_sigma);
    p.kappa = std::max(1.0, raw.kappa);
    p.t = static_cast<int>(t);
    p.qae = QaeParams::make(std::max<std::int64_t>(2, pow2_ceil(up(raw.M))), QaeMode::Exact);
    p.sim_level = level;
    return p;
}

struct ProxyErrors {
    double sigma_stage = 0.0;
    double sqrt_stage = 0.0;
    double qae = 0.0;
};

// Calibration panel for the practical search: the flat state I_r / r plus a
// few fixed random rank-r pairs.
std::vector<std::pair<DensityOperator, DensityOperator>> proxy_panel(int r) {
    const int n = std::max(1, ceil_log2(r));
    ComplexMatrix flat = ComplexMatrix::Zero(Index{1} << n, Index{1} << n);
    for (int i = 0; i < r; ++i) {
        flat(i, i) = 1.0 / r;
    }
    std::vector<std::pair<DensityOperator, DensityOperator>> panel;
    const DensityOperator f = DensityOperator::from_matrix(flat);
    panel.emplace_back(f, f);
    for (std::uint64_t i = 0; i < 4; ++i) {
        panel.emplace_back(random_density(n, r, 7001 + 2 * i), random_density(n, r, 7002 + 2 * i));
    }
    return panel;
}

// Stage-wise errors in fidelity units with perfect phase estimation, worst
// case over the panel.
ProxyErrors proxy_errors(const PipelineParams& params,
                         const std::vector<std::pair<DensityOperator, DensityOperator>>& panel) {
    PipelineParams ideal = params;
    ideal.sim_level = SimLevel::IdealSpectral;
    ideal.unitary_qubit_limit = 0;
    const double scale_sigma = 4.0 * std::sqrt(params.kappa_sigma);
    const double scale = 16.0 * std::sqrt(params.kappa * params.kappa_sigma);
    ProxyErrors e;
    for (const auto& [rho, sigma] : panel) {
        const Purification prep = purify(sigma, ceil_log2(sigma.rank()));
        const SigmaStage stage = build_w_sigma(prep, ideal);
        const ComplexMatrix a = stage.block * rho.matrix() * stage.block.adjoint();
        const HermitianEigen eig = eig_hermitian(0.5 * (a + a.adjoint()));
        double x = 0.0;
        for (Index i = 0; i < eig.values.size(); ++i) {
            const double lam = std::max(0.0, eig.values(i));
            const double f = filter_f(lam, params.kappa);
            x += lam * f * f;
        }
        const double tr_root = trace_sqrt(a);
        e.sigma_stage = std::max(e.sigma_stage, std::abs(fidelity_exact(rho, sigma) - scale_sigma * tr_root));
        e.sqrt_stage = std::max(e.sqrt_stage, std::abs(scale * x - scale_sigma * tr_root));
        e.qae = std::max(e.qae, scale * qae_bound(x, params.qae.M));
    }
    return e;
}

PipelineParams practical_mode(int r, double eps, SimLevel level) {
    const std::int64_t ceiling = t_ceiling(level);
    auto t_for = [&](double v) {
        return static_cast<int>(std::clamp<std::int64_t>(pow2_ceil(v), 8, ceiling));
    };
    double ks = static_cast<double>(std::max<std::int64_t>(4, pow2_ceil(r)));
    double k = 4.0 * ks;
    std::int64_t M = 8;
    const auto panel = proxy_panel(r);
    PipelineParams p;
    p.sim_level = level;
    for (int iter = 0; iter < 64; ++iter) {
        k = std::max(k, 4.0 * ks);
        p.kappa_sigma = ks;
        p.kappa = k;
        p.t_sigma = t_for(8.0 * std::pow(ks, 1.5) / eps);
        p.t = t_for(8.0 * k / eps);
        p.qae = QaeParams::make(M, QaeMode::Exact);
        const ProxyErrors e = proxy_errors(p, panel);
        const double target = eps / 3.0;
        if (e.sigma_stage <= target && e.sqrt_stage <= target && e.qae <= target) {
            break;
        }
        if (e.sigma_stage > target) {
            ks *= 2.0;
        }
        if (e.sqrt_stage > target) {
            k *= 2.0;
        }
        if (e.qae > target && M < (std::int64_t{1} << 30)) {
            M *= 2;
        }
    }
    return p;
}

}  // namespace

PipelineParams select_params(int r, double eps, ParamMode mode, SimLevel level) {
    if (r < 1 || !(eps > 0.0 && eps < 1.0)) {
        throw InvalidParams("need r >= 1 and eps in (0, 1)");
    }
    return mode == ParamMode::Paper ? paper_mode(r, eps, level) : practical_mode(r, eps, level);
}

WeylCheck weyl_trace_bound_check(const ComplexMatrix& eta_block, const ComplexMatrix& target,
                                 int r) {
    if (eta_block.rows() != target.rows() || eta_block.cols() != target.cols()) {
        throw DimensionMismatch("weyl check needs operators of equal shape");
    }
    WeylCheck c;
    c.difference = std::abs(trace_sqrt(eta_block) - trace_sqrt(target));
    c.bound = static_cast<double>(r) * std::sqrt(3.0 * operator_norm(eta_block - target));
    c.holds = c.difference <= c.bound + 1e-12;
    return c;
}

}  // namespace qfid
