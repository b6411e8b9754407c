#include "linrep/splitting.hpp"

#include <cmath>

namespace linrep {

namespace {

Eigen::MatrixXcd dense_unitary(const Eigen::MatrixXcd& hermitian, double t) {
    Eigen::MatrixXcd sym = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw InternalError("eigendecomposition failed while caching a unitary");
    Eigen::VectorXcd phases(sym.rows());
    for (Eigen::Index i = 0; i < sym.rows(); ++i)
        phases(i) = std::exp(cplx(0.0, -solver.eigenvalues()(i) * t));
    return solver.eigenvectors() * phases.asDiagonal() *
           solver.eigenvectors().adjoint();
}

void matvec_inplace(const Eigen::MatrixXcd& mat, cvec& v) {
    Eigen::Map<const Eigen::VectorXcd> x(v.data(), v.size());
    Eigen::VectorXcd y = mat * x;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = y(i);
}

/// Multiply by a positive diagonal and return the post-selection success
/// probability of the rescaled (norm <= 1) version of that diagonal.
double apply_diag_tracked(const rvec& d, cvec& v) {
    double dmax = 0.0;
    for (double x : d) dmax = std::max(dmax, x);
    double before = 0.0, after = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        before += std::norm(v[i]);
        v[i] *= d[i];
        after += std::norm(v[i]);
    }
    if (before == 0.0) return 1.0;
    return after / (dmax * dmax * before);
}

rvec node_coords_of(const GridSpec& g, std::size_t k) {
    rvec x(g.dim());
    std::size_t rem = k;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
        x[ax] = g.node(static_cast<int>(rem % g.points_per_axis()));
        rem /= g.points_per_axis();
    }
    return x;
}

} // namespace

SplitPlan::SplitPlan(SplitScheme scheme, const GridSpec& g, double dt)
    : scheme_(scheme), grid_(g), dt_(dt) {
    if (!(dt > 0.0)) throw ValidationError("split step must be positive");
    dft_ = std::make_shared<DftPlan>(g.points_per_axis());
}

SplitPlan SplitPlan::schrodinger(const GridSpec& g,
                                 const std::function<double(std::span<const double>)>& v,
                                 double hbar, double dt, SplitOrder order) {
    if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
    SplitPlan plan(SplitScheme::Schrodinger, g, dt);
    plan.order_ = order;
    plan.hbar_ = hbar;

    const int m = g.points_per_axis();
    const double kin_dt = order == SplitOrder::Strang ? 0.5 * dt : dt;
    plan.kinetic_phase_.resize(m);
    for (int k = 0; k < m; ++k) {
        double mu = plan.dft_->mu(k);
        plan.kinetic_phase_[k] = std::exp(cplx(0.0, -0.5 * hbar * mu * mu * kin_dt));
    }
    plan.potential_phase_.assign(g.total_points(), cplx(1.0));
    if (v)
        for (std::size_t k = 0; k < g.total_points(); ++k)
            plan.potential_phase_[k] =
                std::exp(cplx(0.0, -v(node_coords_of(g, k)) * dt / hbar));
    return plan;
}

SplitPlan SplitPlan::liouville_phase(
    const GridSpec& g2d,
    const std::function<double(std::span<const double>, int)>& grad_v, double dt,
    SplitOrder order) {
    if (!g2d.is_phase_space())
        throw ValidationError("phase-space splitting needs a phase grid");
    SplitPlan plan(SplitScheme::LiouvillePhase, g2d, dt);
    plan.order_ = order;
    const int d = g2d.position_dim();
    plan.spatial_dim_ = d;
    const int m = g2d.points_per_axis();
    const std::size_t n = g2d.total_points();
    const double transport_dt = order == SplitOrder::Strang ? 0.5 * dt : dt;

    plan.transport_phase_.resize(n);
    plan.kick_phase_.resize(n);
    std::vector<int> idx(2 * d);
    rvec x(d);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t rem = k;
        for (int ax = 2 * d - 1; ax >= 0; --ax) {
            idx[ax] = static_cast<int>(rem % m);
            rem /= m;
        }
        double s1 = 0.0;  // sum_l mu(x_l slot) * p-value(p_l node)
        for (int l = 0; l < d; ++l) s1 += plan.dft_->mu(idx[l]) * g2d.node(idx[d + l]);
        plan.transport_phase_[k] = std::exp(cplx(0.0, -s1 * transport_dt));

        double s2 = 0.0;  // sum_l dV/dx_l (x node) * mu(p_l slot)
        if (grad_v) {
            for (int l = 0; l < d; ++l) x[l] = g2d.node(idx[l]);
            for (int l = 0; l < d; ++l) s2 += grad_v(x, l) * plan.dft_->mu(idx[d + l]);
        }
        plan.kick_phase_[k] = std::exp(cplx(0.0, s2 * dt));
    }
    return plan;
}

SplitPlan SplitPlan::kvn_trotter(const GridSpec& g, const FlowField& field, double dt) {
    SplitPlan plan(SplitScheme::KvnTrotter, g, dt);
    plan.axis_unitaries_.reserve(g.dim());
    for (int ax = 0; ax < g.dim(); ++ax) {
        HermitianGenerator h = build_kvn_hamiltonian(g, field, ax);
        plan.axis_unitaries_.push_back(dense_unitary(h.matrix(), dt));
    }
    return plan;
}

SplitPlan SplitPlan::liouville_nonunitary(const GridSpec& g, const FlowField& field,
                                          double dt, double alpha) {
    SplitPlan plan(SplitScheme::LiouvilleNonunitary, g, dt);
    plan.nonunitary_axes_.reserve(g.dim());
    for (int ax = 0; ax < g.dim(); ++ax) {
        AsymGenerator gen = build_asym_generator(g, field, ax, alpha);
        NonunitaryAxis axis;
        const std::size_t n = gen.lambda_plus.size();
        axis.sub_in.resize(n);
        axis.sub_in_minus.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            axis.sub_in[i] = std::sqrt(gen.lambda_plus[i]);
            axis.sub_in_minus[i] = std::sqrt(gen.lambda_minus[i]);
        }
        axis.u_plus_half = dense_unitary(gen.sym_plus.matrix(), 0.5 * dt);
        axis.u_minus_full = dense_unitary(gen.sym_minus.matrix(), -dt);
        plan.nonunitary_axes_.push_back(std::move(axis));
    }
    return plan;
}

void SplitPlan::step_schrodinger(cvec& state) const {
    auto kinetic = [&](const cvec& table) {
        apply_parity_sign(grid_, state);
        for (int ax = 0; ax < grid_.dim(); ++ax)
            transform_axis(grid_, ax, AxisTransform::Inverse, *dft_, state);
        const int m = grid_.points_per_axis();
        for (int ax = 0; ax < grid_.dim(); ++ax) {
            const std::size_t stride = axis_stride(ax, grid_);
            const std::size_t block = stride * static_cast<std::size_t>(m);
            for (std::size_t base = 0; base < state.size(); base += block)
                for (int j = 0; j < m; ++j) {
                    cplx f = table[j];
                    cplx* p0 = state.data() + base + static_cast<std::size_t>(j) * stride;
                    for (std::size_t w = 0; w < stride; ++w) p0[w] *= f;
                }
        }
        for (int ax = 0; ax < grid_.dim(); ++ax)
            transform_axis(grid_, ax, AxisTransform::Forward, *dft_, state);
        apply_parity_sign(grid_, state);
    };
    auto potential = [&] {
        for (std::size_t k = 0; k < state.size(); ++k) state[k] *= potential_phase_[k];
    };

    kinetic(kinetic_phase_);
    potential();
    if (order_ == SplitOrder::Strang) kinetic(kinetic_phase_);
}

void SplitPlan::step_liouville_phase(cvec& state) const {
    const int d = spatial_dim_;
    auto transport = [&] {
        for (int l = 0; l < d; ++l)
            transform_axis(grid_, l, AxisTransform::CoefFromNodal, *dft_, state);
        for (std::size_t k = 0; k < state.size(); ++k) state[k] *= transport_phase_[k];
        for (int l = 0; l < d; ++l)
            transform_axis(grid_, l, AxisTransform::NodalFromCoef, *dft_, state);
    };
    auto kick = [&] {
        for (int l = 0; l < d; ++l)
            transform_axis(grid_, d + l, AxisTransform::CoefFromNodal, *dft_, state);
        for (std::size_t k = 0; k < state.size(); ++k) state[k] *= kick_phase_[k];
        for (int l = 0; l < d; ++l)
            transform_axis(grid_, d + l, AxisTransform::NodalFromCoef, *dft_, state);
    };

    transport();
    kick();
    if (order_ == SplitOrder::Strang) transport();
}

void SplitPlan::step_kvn_trotter(cvec& state) const {
    for (const auto& u : axis_unitaries_) matvec_inplace(u, state);
}

void SplitPlan::step_nonunitary(cvec& state, CopyLedger* ledger) const {
    double step_prob = 1.0;
    rvec inv;
    for (const auto& axis : nonunitary_axes_) {
        auto sandwich_half = [&](const rvec& root, const Eigen::MatrixXcd& u) {
            step_prob *= apply_diag_tracked(root, state);
            matvec_inplace(u, state);
            inv.resize(root.size());
            for (std::size_t i = 0; i < root.size(); ++i) inv[i] = 1.0 / root[i];
            step_prob *= apply_diag_tracked(inv, state);
        };
        sandwich_half(axis.sub_in, axis.u_plus_half);
        sandwich_half(axis.sub_in_minus, axis.u_minus_full);
        sandwich_half(axis.sub_in, axis.u_plus_half);
    }
    if (ledger) ledger->record_step(step_prob);
}

void SplitPlan::step(cvec& state) const {
    CopyLedger scratch;
    step(state, scratch);
}

void SplitPlan::step(cvec& state, CopyLedger& ledger) const {
    if (state.size() != grid_.total_points())
        throw ValidationError("state size does not match the plan grid");
    switch (scheme_) {
        case SplitScheme::Schrodinger: step_schrodinger(state); break;
        case SplitScheme::LiouvillePhase: step_liouville_phase(state); break;
        case SplitScheme::KvnTrotter: step_kvn_trotter(state); break;
        case SplitScheme::LiouvilleNonunitary:
            step_nonunitary(state, &ledger);
            break;
    }
}

double SplitPlan::mass(const cvec& state) const {
    const double cell = std::pow(grid_.spacing(), grid_.dim());
    double s = 0.0;
    if (scheme_ == SplitScheme::Schrodinger) {
        for (const cplx& u : state) s += std::norm(u);
    } else {
        for (const cplx& u : state) s += u.real();
    }
    return s * cell;
}

EvolveResult SplitPlan::evolve(const ComplexState& initial, int n_steps,
                               const EvolveOptions& options) const {
    if (!(initial.grid == grid_))
        throw ValidationError("initial state does not match the plan grid");
    if (n_steps < 0) throw ValidationError("negative step count");

    EvolveResult result{initial, {}, {}, {}};
    cvec& state = result.state.values;

    auto record = [&](int n) {
        if (options.record_trace)
            result.trace.push_back({n, n * dt_, l2_norm(state), l1_norm(state),
                                    mass(state),
                                    result.ledger.cumulative_copy_estimate});
        if (options.keep_history) result.history.push_back(state);
        if (options.observer) options.observer(n, n * dt_, state);
    };

    record(0);
    for (int n = 1; n <= n_steps; ++n) {
        step(state, result.ledger);
        if (!all_finite(state))
            throw DivergenceError("state became non-finite at step " + std::to_string(n));
        record(n);
    }
    return result;
}

} // namespace linrep
