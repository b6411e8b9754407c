#include "linrep/upwind.hpp"

#include <cmath>

namespace linrep {

namespace {

constexpr double kCflSlack = 1e-12;

double pos_part(double a) { return a > 0.0 ? a : 0.0; }
double neg_part(double a) { return a < 0.0 ? a : 0.0; }

/// Nodal tables F_i(x_j) for all axes over the flattened grid.
std::vector<rvec> nodal_tables(const GridSpec& g, const FlowField& field) {
    std::vector<rvec> tables(field.dim, rvec(g.total_points()));
    const int m = g.points_per_axis();
    rvec x(g.dim());
    for (std::size_t k = 0; k < g.total_points(); ++k) {
        std::size_t rem = k;
        for (int ax = g.dim() - 1; ax >= 0; --ax) {
            x[ax] = g.node(static_cast<int>(rem % m));
            rem /= m;
        }
        for (int i = 0; i < field.dim; ++i) tables[i][k] = field.component(x, i);
    }
    return tables;
}

std::size_t shift_index(std::size_t k, int axis, int delta, const GridSpec& g) {
    const int m = g.points_per_axis();
    const std::size_t stride = axis_stride(axis, g);
    const std::size_t axis_block = stride * static_cast<std::size_t>(m);
    const std::size_t base = (k / axis_block) * axis_block;
    const std::size_t offset = k - base;
    const int j = static_cast<int>(offset / stride);
    const std::size_t within = offset % stride;
    const int jn = ((j + delta) % m + m) % m;
    return base + static_cast<std::size_t>(jn) * stride + within;
}

void require_cfl(const CflReport& rep, const char* what) {
    if (!rep.ok)
        throw StabilityError(std::string(what) +
                             ": CFL violated, lambda * speed sum = " +
                             std::to_string(rep.lambda * rep.sup_sum));
}

} // namespace

CflReport check_cfl(const FlowField& field, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    CflReport rep;
    rep.lambda = lambda;
    rep.sup_sum = field.sup_sum();
    rep.margin = 1.0 - lambda * rep.sup_sum;
    rep.ok = rep.margin >= -kCflSlack;
    return rep;
}

CflReport check_cfl(const HamiltonianField& ham, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    CflReport rep;
    rep.lambda = lambda;
    rep.sup_sum = ham.sup_sum();
    rep.margin = 1.0 - lambda * rep.sup_sum;
    rep.ok = rep.margin >= -kCflSlack;
    return rep;
}

UpwindScheme assemble_liouville(const GridSpec& g, const TimeGrid& tg,
                                const FlowField& field) {
    if (field.dim != g.dim())
        throw ValidationError("flow field dimension does not match the grid");
    const double lambda = tg.dt / g.spacing();
    CflReport cfl = check_cfl(field, lambda);
    require_cfl(cfl, "liouville upwind assembly");

    const auto tables = nodal_tables(g, field);
    const std::size_t n = g.total_points();
    std::vector<SparseMatrix::Triplet> entries;
    entries.reserve(n * (2 * g.dim() + 1));

    for (std::size_t k = 0; k < n; ++k) {
        double diag = 1.0;
        for (int ax = 0; ax < g.dim(); ++ax) {
            const std::size_t kp = shift_index(k, ax, +1, g);
            const std::size_t km = shift_index(k, ax, -1, g);
            const double face_p = 0.5 * (tables[ax][kp] + tables[ax][k]);  // at j + 1/2
            const double face_m = 0.5 * (tables[ax][km] + tables[ax][k]);  // at j - 1/2
            diag -= lambda * (pos_part(face_p) - neg_part(face_m));
            entries.push_back({k, kp, -lambda * neg_part(face_p)});
            entries.push_back({k, km, lambda * pos_part(face_m)});
        }
        entries.push_back({k, k, diag});
    }

    UpwindScheme scheme{g, tg, SchemeKind::Liouville, lambda, field.div_sup, cfl,
                        SparseMatrix(n, n, std::move(entries))};
    return scheme;
}

UpwindScheme assemble_kvn(const GridSpec& g, const TimeGrid& tg,
                          const FlowField& field) {
    if (field.dim != g.dim())
        throw ValidationError("flow field dimension does not match the grid");
    const double lambda = tg.dt / g.spacing();
    CflReport cfl = check_cfl(field, lambda);
    require_cfl(cfl, "kvn upwind assembly");

    const auto tables = nodal_tables(g, field);
    const std::size_t n = g.total_points();
    const double dx = g.spacing();

    // Nodal divergence: analytic when available, else grid central differences.
    rvec div(n, 0.0);
    if (field.divergence) {
        const int m = g.points_per_axis();
        rvec x(g.dim());
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t rem = k;
            for (int ax = g.dim() - 1; ax >= 0; --ax) {
                x[ax] = g.node(static_cast<int>(rem % m));
                rem /= m;
            }
            div[k] = field.divergence(x);
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (int ax = 0; ax < g.dim(); ++ax) {
                const std::size_t kp = shift_index(k, ax, +1, g);
                const std::size_t km = shift_index(k, ax, -1, g);
                s += (tables[ax][kp] - tables[ax][km]) / (2.0 * dx);
            }
            div[k] = s;
        }
    }

    std::vector<SparseMatrix::Triplet> entries;
    entries.reserve(n * (2 * g.dim() + 1));
    for (std::size_t k = 0; k < n; ++k) {
        double diag = 1.0 - 0.5 * tg.dt * div[k];
        for (int ax = 0; ax < g.dim(); ++ax) {
            const double b = tables[ax][k];
            diag -= lambda * (pos_part(b) - neg_part(b));
            entries.push_back({k, shift_index(k, ax, +1, g), -lambda * neg_part(b)});
            entries.push_back({k, shift_index(k, ax, -1, g), lambda * pos_part(b)});
        }
        entries.push_back({k, k, diag});
    }

    UpwindScheme scheme{g, tg, SchemeKind::Kvn, lambda, field.div_sup, cfl,
                        SparseMatrix(n, n, std::move(entries))};
    return scheme;
}

UpwindScheme assemble_hje(const GridSpec& g2d, const TimeGrid& tg,
                          const HamiltonianField& ham) {
    if (!g2d.is_phase_space() || ham.dim != g2d.position_dim())
        throw ValidationError("phase-space assembly needs a matching phase grid");
    const double lambda = tg.dt / g2d.spacing();
    CflReport cfl = check_cfl(ham, lambda);
    require_cfl(cfl, "phase-space upwind assembly");

    const int d = ham.dim;
    const int m = g2d.points_per_axis();
    const std::size_t n = g2d.total_points();

    // Per-axis nodal advection speeds: dH/dp_i along x_i, -dH/dx_i along p_i.
    std::vector<rvec> speed(2 * d, rvec(n));
    rvec x(d), p(d);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t rem = k;
        for (int ax = 2 * d - 1; ax >= 0; --ax) {
            double coord = g2d.node(static_cast<int>(rem % m));
            if (ax < d) x[ax] = coord; else p[ax - d] = coord;
            rem /= m;
        }
        for (int i = 0; i < d; ++i) {
            speed[i][k] = ham.dHdp(x, p, i);
            speed[d + i][k] = -ham.dHdx(x, p, i);
        }
    }

    std::vector<SparseMatrix::Triplet> entries;
    entries.reserve(n * (4 * d + 1));
    for (std::size_t k = 0; k < n; ++k) {
        double diag = 1.0;
        for (int ax = 0; ax < 2 * d; ++ax) {
            const double v = speed[ax][k];
            diag -= lambda * (pos_part(v) - neg_part(v));
            entries.push_back({k, shift_index(k, ax, +1, g2d), -lambda * neg_part(v)});
            entries.push_back({k, shift_index(k, ax, -1, g2d), lambda * pos_part(v)});
        }
        entries.push_back({k, k, diag});
    }

    double div_sup = 0.0;  // Hamiltonian phase flow is divergence free
    UpwindScheme scheme{g2d, tg, SchemeKind::Hje, lambda, div_sup, cfl,
                        SparseMatrix(n, n, std::move(entries))};
    return scheme;
}

RealState step(const UpwindScheme& scheme, const RealState& w) {
    if (!(w.grid == scheme.grid))
        throw ValidationError("state does not match the scheme grid");
    RealState out(w.grid);
    scheme.matrix.apply(w.values, out.values);
    return out;
}

BlockSystem::BlockSystem(std::shared_ptr<const SparseMatrix> block, const TimeGrid& tg,
                         rvec w0, bool dilate, double div_sup)
    : block_(std::move(block)),
      block_size_(block_->rows()),
      steps_(tg.steps),
      dilation_(dilate ? tg.steps : 0),
      dt_(tg.dt),
      div_sup_(div_sup),
      w0_(std::move(w0)) {
    if (w0_.size() != block_size_)
        throw ValidationError("initial state does not match the block size");
    f1_.resize(block_size_);
    block_->apply(w0_, f1_);
}

std::vector<rvec> BlockSystem::forward_solve() const {
    std::vector<rvec> history;
    history.reserve(total_blocks());
    rvec cur = f1_;
    history.push_back(cur);
    for (int nth = 2; nth <= steps_; ++nth) {
        rvec next(block_size_);
        block_->apply(cur, next);
        history.push_back(next);
        cur = std::move(next);
    }
    for (int nth = 0; nth < dilation_; ++nth) history.push_back(cur);
    return history;
}

void BlockSystem::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != total_size() || y.size() != total_size())
        throw ValidationError("block apply size mismatch");
    const std::size_t bs = block_size_;
    for (int b = 0; b < total_blocks(); ++b) {
        auto xb = x.subspan(b * bs, bs);
        auto yb = y.subspan(b * bs, bs);
        for (std::size_t i = 0; i < bs; ++i) yb[i] = xb[i];
        if (b == 0) continue;
        auto xp = x.subspan((b - 1) * bs, bs);
        if (b < steps_) {
            rvec tmp(bs);
            block_->apply(xp, tmp);
            for (std::size_t i = 0; i < bs; ++i) yb[i] -= tmp[i];
        } else {
            for (std::size_t i = 0; i < bs; ++i) yb[i] -= xp[i];
        }
    }
}

void BlockSystem::apply_transpose(std::span<const double> x, std::span<double> y) const {
    if (x.size() != total_size() || y.size() != total_size())
        throw ValidationError("block transpose apply size mismatch");
    const std::size_t bs = block_size_;
    for (int b = 0; b < total_blocks(); ++b) {
        auto xb = x.subspan(b * bs, bs);
        auto yb = y.subspan(b * bs, bs);
        for (std::size_t i = 0; i < bs; ++i) yb[i] = xb[i];
        if (b + 1 >= total_blocks()) continue;
        auto xn = x.subspan((b + 1) * bs, bs);
        if (b + 1 < steps_) {
            rvec tmp(bs);
            block_->apply_transpose(xn, tmp);
            for (std::size_t i = 0; i < bs; ++i) yb[i] -= tmp[i];
        } else {
            for (std::size_t i = 0; i < bs; ++i) yb[i] -= xn[i];
        }
    }
}

void BlockSystem::solve(std::span<const double> rhs, std::span<double> y) const {
    if (rhs.size() != total_size() || y.size() != total_size())
        throw ValidationError("block solve size mismatch");
    const std::size_t bs = block_size_;
    rvec tmp(bs);
    for (int b = 0; b < total_blocks(); ++b) {
        auto rb = rhs.subspan(b * bs, bs);
        auto yb = y.subspan(b * bs, bs);
        for (std::size_t i = 0; i < bs; ++i) yb[i] = rb[i];
        if (b == 0) continue;
        auto yp = y.subspan((b - 1) * bs, bs);
        if (b < steps_) {
            block_->apply(yp, tmp);
            for (std::size_t i = 0; i < bs; ++i) yb[i] += tmp[i];
        } else {
            for (std::size_t i = 0; i < bs; ++i) yb[i] += yp[i];
        }
    }
}

void BlockSystem::solve_transpose(std::span<const double> rhs, std::span<double> y) const {
    if (rhs.size() != total_size() || y.size() != total_size())
        throw ValidationError("block transpose solve size mismatch");
    const std::size_t bs = block_size_;
    rvec tmp(bs);
    for (int b = total_blocks() - 1; b >= 0; --b) {
        auto rb = rhs.subspan(b * bs, bs);
        auto yb = y.subspan(b * bs, bs);
        for (std::size_t i = 0; i < bs; ++i) yb[i] = rb[i];
        if (b + 1 >= total_blocks()) continue;
        auto yn = y.subspan((b + 1) * bs, bs);
        if (b + 1 < steps_) {
            block_->apply_transpose(yn, tmp);
            for (std::size_t i = 0; i < bs; ++i) yb[i] += tmp[i];
        } else {
            for (std::size_t i = 0; i < bs; ++i) yb[i] += yn[i];
        }
    }
}

BlockSystem build_block_system(const UpwindScheme& scheme, const RealState& w0,
                               bool dilate) {
    if (!(w0.grid == scheme.grid))
        throw ValidationError("initial state does not match the scheme grid");
    auto block = std::make_shared<SparseMatrix>(scheme.matrix);
    return BlockSystem(std::move(block), scheme.time, w0.values, dilate,
                       scheme.div_sup);
}

namespace {

/// Largest singular value of the operator pair (apply, apply_transpose).
template <class Fwd, class Bwd>
double power_iteration_sigma(std::size_t n, Fwd&& fwd, Bwd&& bwd) {
    Rng rng(0x5eedULL + n);
    rvec v(n), av(n), atav(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    double nrm = l2_norm(v);
    for (double& x : v) x /= nrm;

    double sigma = 0.0;
    for (int it = 0; it < 500; ++it) {
        fwd(std::span<const double>(v), std::span<double>(av));
        bwd(std::span<const double>(av), std::span<double>(atav));
        double lam = l2_norm(atav);
        if (lam == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = atav[i] / lam;
        double next = std::sqrt(lam);
        if (it > 10 && std::abs(next - sigma) <= 1e-12 * next) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

} // namespace

ConditionDiagnostics condition_diagnostics(const BlockSystem& sys, std::size_t budget) {
    ConditionDiagnostics diag;
    diag.kappa_bound = (2.0 + sys.dt() * sys.div_sup()) *
                       std::exp(sys.div_sup() + 1.0) / sys.dt();
    diag.norm_B_bound = 1.0 + sys.dt() * sys.div_sup();
    diag.max_row_nnz = sys.block().max_row_nnz();
    if (sys.total_size() > budget) {
        diag.note = "skipped: system size " + std::to_string(sys.total_size()) +
                    " exceeds dense-diagnostic budget " + std::to_string(budget);
        return diag;
    }

    const std::size_t n = sys.total_size();
    diag.sigma_max = power_iteration_sigma(
        n, [&](auto x, auto y) { sys.apply(x, y); },
        [&](auto x, auto y) { sys.apply_transpose(x, y); });
    diag.sigma_max_inv = power_iteration_sigma(
        n, [&](auto x, auto y) { sys.solve(x, y); },
        [&](auto x, auto y) { sys.solve_transpose(x, y); });
    diag.kappa_est = diag.sigma_max * diag.sigma_max_inv;

    const std::size_t bs = sys.block_size();
    diag.norm_B_est = power_iteration_sigma(
        bs, [&](auto x, auto y) { sys.block().apply(x, y); },
        [&](auto x, auto y) { sys.block().apply_transpose(x, y); });

    diag.computed = true;
    if (diag.kappa_est > diag.kappa_bound * (1.0 + 1e-9))
        throw InternalError("measured condition number exceeds its bound");
    return diag;
}

} // namespace linrep
