#include "linrep/observables.hpp"

#include <algorithm>
#include <cmath>

#include "linrep/dft.hpp"
#include "linrep/spectral.hpp"

namespace linrep {

ObservableSpec ObservableSpec::total_mass() {
    ObservableSpec s;
    s.weight = [](std::span<const double>) { return 1.0; };
    return s;
}

ObservableSpec ObservableSpec::coordinate(int axis) {
    ObservableSpec s;
    s.weight = [axis](std::span<const double> x) { return x[axis]; };
    return s;
}

ObservableSpec ObservableSpec::momentum_coordinate(int axis) {
    ObservableSpec s;
    s.weight = [axis](std::span<const double> p) { return p[axis]; };
    s.target = Target::MomentumAxes;
    return s;
}

ObservableSpec ObservableSpec::momentum_density() {
    ObservableSpec s;
    s.weight = [](std::span<const double>) { return 1.0; };
    s.target = Target::MomentumAxes;
    return s;
}

ObservableSpec ObservableSpec::kinetic_energy() {
    ObservableSpec s;
    s.weight = [](std::span<const double> p) {
        double e = 0.0;
        for (double v : p) e += v * v;
        return 0.5 * e;
    };
    s.target = Target::MomentumAxes;
    return s;
}

rvec trapezoid_endpoint_weights(int m) {
    if (m < 2) throw ValidationError("need at least two nodes");
    rvec w(m, 1.0);
    w.front() = 0.5;
    w.back() = 0.5;
    return w;
}

namespace {

rvec coords_of(const GridSpec& g, std::size_t k) {
    rvec x(g.dim());
    std::size_t rem = k;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
        x[ax] = g.node(static_cast<int>(rem % g.points_per_axis()));
        rem /= g.points_per_axis();
    }
    return x;
}

std::size_t pow_sz(int m, int d) {
    std::size_t r = 1;
    for (int i = 0; i < d; ++i) r *= static_cast<std::size_t>(m);
    return r;
}

} // namespace

rvec observable_values(const ObservableSpec& spec, const GridSpec& g) {
    if (!spec.weight) throw ValidationError("observable has no weight function");
    rvec out(g.total_points());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec.weight(coords_of(g, k));
    return out;
}

double observable_vector_norm(const ObservableSpec& spec, const GridSpec& g) {
    rvec gj = observable_values(spec, g);
    double s = 0.0;
    for (double v : gj) s += v * v;
    return std::sqrt(s / static_cast<double>(g.total_points()));
}

double expect_liouville(const RealState& rho, const ObservableSpec& spec) {
    if (spec.target != ObservableSpec::Target::AllAxes)
        throw ValidationError("full-grid expectation needs an all-axes observable");
    rvec gj = observable_values(spec, rho.grid);
    double s = 0.0;
    for (std::size_t k = 0; k < gj.size(); ++k) s += gj[k] * rho.values[k];
    return s / static_cast<double>(rho.grid.total_points());
}

double expect_kvn(const ComplexState& psi, const ObservableSpec& spec) {
    if (spec.target != ObservableSpec::Target::AllAxes)
        throw ValidationError("full-grid expectation needs an all-axes observable");
    rvec gj = observable_values(spec, psi.grid);
    double s = 0.0;
    for (std::size_t k = 0; k < gj.size(); ++k) s += gj[k] * std::norm(psi.values[k]);
    return s / static_cast<double>(psi.grid.total_points());
}

double expect_kvn(const RealState& psi, const ObservableSpec& spec) {
    rvec gj = observable_values(spec, psi.grid);
    double s = 0.0;
    for (std::size_t k = 0; k < gj.size(); ++k)
        s += gj[k] * psi.values[k] * psi.values[k];
    return s / static_cast<double>(psi.grid.total_points());
}

rvec expect_hje(const RealState& w, const ObservableSpec& spec) {
    if (!w.grid.is_phase_space())
        throw ValidationError("momentum integration needs a phase-space state");
    if (spec.target != ObservableSpec::Target::MomentumAxes)
        throw ValidationError("momentum integration needs a momentum-axes observable");
    const int d = w.grid.position_dim();
    const int m = w.grid.points_per_axis();
    const std::size_t px = pow_sz(m, d);       // position block count
    const std::size_t pp = pow_sz(m, d);       // momentum nodes per block

    // G(p) over the momentum subgrid.
    rvec gp(pp);
    rvec p(d);
    for (std::size_t lp = 0; lp < pp; ++lp) {
        std::size_t rem = lp;
        for (int ax = d - 1; ax >= 0; --ax) {
            p[ax] = w.grid.node(static_cast<int>(rem % m));
            rem /= m;
        }
        gp[lp] = spec.weight(p);
    }

    rvec out(px, 0.0);
    for (std::size_t ix = 0; ix < px; ++ix) {
        const double* block = w.values.data() + ix * pp;
        double s = 0.0;
        for (std::size_t lp = 0; lp < pp; ++lp) s += gp[lp] * block[lp];
        out[ix] = s / static_cast<double>(pp);
    }
    return out;
}

rvec recover_velocity_hje(const RealState& w, int axis) {
    rvec momentum = expect_hje(w, ObservableSpec::momentum_coordinate(axis));
    rvec density = expect_hje(w, ObservableSpec::momentum_density());
    rvec u(momentum.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::abs(density[i]) < 1e-300)
            throw DivergenceError("vanishing density while recovering the velocity");
        u[i] = momentum[i] / density[i];
    }
    return u;
}

rvec recover_ode_solution(const RealState& rho) {
    rvec q(rho.grid.dim());
    for (int ax = 0; ax < rho.grid.dim(); ++ax)
        q[ax] = expect_liouville(rho, ObservableSpec::coordinate(ax));
    return q;
}

double schrodinger_observable(const ComplexState& u, double hbar,
                              SchrodingerObservable which, std::size_t node) {
    if (node >= u.values.size()) throw IndexError("node out of range");
    if (which == SchrodingerObservable::Density) return std::norm(u.values[node]);
    if (u.grid.dim() != 1)
        throw ValidationError("current and energy follow the one-dimensional construction");

    DftPlan plan(u.grid.points_per_axis());
    cvec du = u.values;
    apply_momentum_axis(u.grid, 0, plan, du);      // P u = -i du/dx
    for (auto& v : du) v *= cplx(0.0, 1.0);        // du/dx = i P u

    if (which == SchrodingerObservable::Current)
        return hbar * std::imag(std::conj(u.values[node]) * du[node]);
    return 0.5 * hbar * hbar * std::norm(du[node]);
}

rvec schrodinger_density(const ComplexState& u) {
    rvec rho(u.values.size());
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = std::norm(u.values[k]);
    return rho;
}

SamplingPlan SamplingPlan::make(double eps, double confidence, double variance_bound,
                                std::uint64_t seed) {
    if (!(eps > 0.0)) throw ValidationError("sampling precision must be positive");
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw ValidationError("confidence must lie in (0, 1)");
    if (variance_bound < 0.0) throw ValidationError("variance bound must be nonnegative");
    SamplingPlan plan;
    plan.eps = eps;
    plan.confidence = confidence;
    plan.variance_bound = variance_bound;
    plan.seed = seed;
    double raw = variance_bound / ((1.0 - confidence) * eps * eps);
    double n = std::ceil(raw - 1e-9 * std::max(raw, 1.0));
    plan.n_samples = n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
    return plan;
}

namespace {

/// Inverse-CDF draw over a cumulative table.
std::size_t draw_index(const rvec& cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

BornResult sample_values(const rvec& probs, const rvec& values,
                         const SamplingPlan& plan) {
    rvec cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    if (!(acc > 0.0)) throw ValidationError("state has zero norm");

    Rng rng(plan.seed);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < plan.n_samples; ++s)
        sum += values[draw_index(cdf, rng.uniform())];
    return {sum / static_cast<double>(plan.n_samples), plan.n_samples};
}

} // namespace

BornResult born_sample_diagonal(const cvec& state, const rvec& values,
                                const SamplingPlan& plan) {
    if (state.size() != values.size())
        throw ValidationError("observable and state sizes differ");
    rvec probs(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) probs[i] = std::norm(state[i]);
    return sample_values(probs, values, plan);
}

BornResult born_sample_diagonal(const rvec& state, const rvec& values,
                                const SamplingPlan& plan) {
    if (state.size() != values.size())
        throw ValidationError("observable and state sizes differ");
    rvec probs(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) probs[i] = state[i] * state[i];
    return sample_values(probs, values, plan);
}

BornResult born_sample_rank_one(const cvec& state, const cvec& g_state,
                                const SamplingPlan& plan) {
    if (state.size() != g_state.size())
        throw ValidationError("projector and state sizes differ");
    double nrm2 = 0.0, gnrm2 = 0.0;
    cplx inner(0.0);
    for (std::size_t i = 0; i < state.size(); ++i) {
        nrm2 += std::norm(state[i]);
        gnrm2 += std::norm(g_state[i]);
        inner += std::conj(g_state[i]) * state[i];
    }
    if (!(nrm2 > 0.0) || !(gnrm2 > 0.0))
        throw ValidationError("state has zero norm");
    double upsilon = std::norm(inner) / (nrm2 * gnrm2);
    upsilon = std::clamp(upsilon, 0.0, 1.0);

    Rng rng(plan.seed);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < plan.n_samples; ++s)
        if (rng.uniform() < upsilon) ++hits;
    return {static_cast<double>(hits) / static_cast<double>(plan.n_samples),
            plan.n_samples};
}

double diagonal_expectation(const cvec& state, const rvec& values) {
    double nrm2 = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        double p = std::norm(state[i]);
        nrm2 += p;
        acc += p * values[i];
    }
    if (!(nrm2 > 0.0)) throw ValidationError("state has zero norm");
    return acc / nrm2;
}

double diagonal_variance(const cvec& state, const rvec& values) {
    double mean = diagonal_expectation(state, values);
    double nrm2 = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        double p = std::norm(state[i]);
        nrm2 += p;
        acc += p * (values[i] - mean) * (values[i] - mean);
    }
    return acc / nrm2;
}

PaddedHistory dilate_history(const std::vector<rvec>& history) {
    if (history.empty()) throw ValidationError("cannot dilate an empty history");
    PaddedHistory out;
    out.original_blocks = static_cast<int>(history.size());
    out.appended_blocks = out.original_blocks;
    out.blocks = history;
    const rvec& final_block = history.back();
    for (int i = 0; i < out.appended_blocks; ++i) out.blocks.push_back(final_block);

    double final_sq = 0.0;
    for (double v : final_block) final_sq += v * v;
    for (const rvec& b : out.blocks) {
        double s = 0.0;
        for (double v : b) s += v * v;
        out.total_sq_norm += s;
    }
    out.final_share = out.total_sq_norm > 0.0
                          ? (out.appended_blocks + 1) * final_sq / out.total_sq_norm
                          : 0.0;
    return out;
}

double padded_final_expectation(const PaddedHistory& padded, const rvec& values) {
    if (padded.blocks.empty()) throw ValidationError("empty padded history");
    if (values.size() != padded.blocks.back().size())
        throw ValidationError("observable size mismatch");
    // <w_hat|O_hat|w_hat> with O supported on the appended tail, then undo the
    // history normalisation and the tail multiplicity.
    double acc = 0.0;
    for (int b = padded.original_blocks;
         b < padded.original_blocks + padded.appended_blocks; ++b) {
        const rvec& w = padded.blocks[b];
        for (std::size_t i = 0; i < w.size(); ++i) acc += values[i] * w[i] * w[i];
    }
    double normalized = acc / padded.total_sq_norm;
    return normalized * padded.total_sq_norm / padded.appended_blocks;
}

namespace {

NormEstimate perturbed_norm(double nrm, double eta, std::uint64_t seed) {
    if (!(eta >= 0.0) || eta >= 1.0)
        throw ValidationError("relative accuracy must lie in [0, 1)");
    Rng rng(seed);
    NormEstimate est;
    est.true_norm = nrm;
    est.eta = eta;
    est.estimate = nrm * (1.0 + rng.uniform(-eta, eta));
    return est;
}

} // namespace

NormEstimate emulate_norm_estimate(std::span<const double> x, double eta,
                                   std::uint64_t seed) {
    return perturbed_norm(l2_norm(x), eta, seed);
}

NormEstimate emulate_norm_estimate(std::span<const cplx> x, double eta,
                                   std::uint64_t seed) {
    return perturbed_norm(l2_norm(x), eta, seed);
}

double factor_n_l(const RealState& rho0) {
    double s = 0.0;
    for (double v : rho0.values) s += v;
    return s / std::pow(static_cast<double>(rho0.grid.points_per_axis()),
                        rho0.grid.dim() / 2.0);
}

double factor_n_k(const RealState& psi0) {
    return l2_norm(psi0.values) /
           std::pow(static_cast<double>(psi0.grid.points_per_axis()),
                    psi0.grid.dim() / 4.0);
}

double factor_n_h(const RealState& w0) {
    if (!w0.grid.is_phase_space())
        throw ValidationError("n_H is defined for phase-space states");
    return l2_norm(w0.values) /
           std::pow(static_cast<double>(w0.grid.points_per_axis()),
                    w0.grid.position_dim() / 2.0);
}

double factor_n_u0(const ComplexState& u0) { return l2_norm(u0.values); }

double decay_factor(std::span<const double> norm_trace) {
    if (norm_trace.empty()) throw ValidationError("empty norm trace");
    double peak = 0.0;
    for (double v : norm_trace) peak = std::max(peak, v);
    double final = norm_trace.back();
    if (!(final > 0.0)) throw DivergenceError("final state has zero norm");
    return peak / final;
}

} // namespace linrep
