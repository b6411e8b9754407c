#include "linrep/mollifier.hpp"

#include <cmath>

namespace linrep {

double grid_mass(const RealState& s) {
    double sum = 0.0;
    for (double v : s.values) sum += v;
    return sum * std::pow(s.grid.spacing(), s.grid.dim());
}

MollifierSpec MollifierSpec::from_cells(MollifierKind kind, int cells, double dx) {
    if (cells < 2)
        throw ValidationError("mollifier support must span at least two cells");
    MollifierSpec spec;
    spec.kind = kind;
    spec.support_cells = cells;
    spec.width = cells * dx;
    return spec;
}

namespace {

/// Signed distance on the unit circle, in [-1/2, 1/2).
double periodic_distance(double x, double center) {
    double d = x - center;
    d -= std::floor(d + 0.5);
    return d;
}

double kernel(MollifierKind kind, double s) {
    double a = std::abs(s);
    if (a >= 1.0) return 0.0;
    switch (kind) {
        case MollifierKind::Hat: return 1.0 - a;
        case MollifierKind::Cosine: return 0.5 * (1.0 + std::cos(kPi * s));
    }
    return 0.0;
}

void check_delta_fits(const MollifierSpec& spec, double dx) {
    if (!(spec.width > 0.0)) throw ValidationError("mollifier width must be positive");
    if (spec.width < 2.0 * dx - 1e-12)
        throw ValidationError("mollifier width " + std::to_string(spec.width) +
                              " is under-resolved on spacing " + std::to_string(dx));
    if (spec.width > 0.5 + 1e-12)
        throw DomainError("mollifier support exceeds half the periodic box");
}

} // namespace

double delta_eval(const MollifierSpec& spec, double x, double center) {
    if (!(spec.width > 0.0)) throw ValidationError("mollifier width must be positive");
    double d = periodic_distance(x, center);
    return kernel(spec.kind, d / spec.width) / spec.width;
}

RealState init_liouville(const GridSpec& g, const MollifierSpec& spec,
                         std::span<const double> q0) {
    if (static_cast<int>(q0.size()) != g.dim())
        throw ValidationError("center dimension does not match the grid");
    check_delta_fits(spec, g.spacing());
    for (double c : q0)
        if (c < 0.0 || c > 1.0) throw DomainError("delta center outside the unit box");

    const int m = g.points_per_axis();
    // 1D profile per axis, then tensor product over the flattened grid.
    std::vector<rvec> profiles(g.dim(), rvec(m));
    for (int ax = 0; ax < g.dim(); ++ax)
        for (int j = 0; j < m; ++j)
            profiles[ax][j] = delta_eval(spec, g.node(j), q0[ax]);

    RealState state(g);
    const std::size_t total = g.total_points();
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        double v = 1.0;
        for (int ax = g.dim() - 1; ax >= 0; --ax) {
            v *= profiles[ax][rem % m];
            rem /= m;
        }
        state.values[k] = v;
    }
    return state;
}

RealState init_kvn(const GridSpec& g, const MollifierSpec& spec,
                   std::span<const double> q0) {
    RealState rho = init_liouville(g, spec, q0);
    for (double& v : rho.values) v = std::sqrt(v);
    return rho;
}

RealState init_levelset(const GridSpec& g2d, const MollifierSpec& spec,
                        const std::function<void(std::span<const double>, std::span<double>)>& u0,
                        const std::function<double(std::span<const double>)>& a0sq) {
    if (!g2d.is_phase_space())
        throw ValidationError("level-set initial data needs a phase-space grid");
    check_delta_fits(spec, g2d.spacing());

    const int d = g2d.position_dim();
    const int m = g2d.points_per_axis();
    std::size_t x_total = 1;
    for (int i = 0; i < d; ++i) x_total *= static_cast<std::size_t>(m);
    const std::size_t p_total = g2d.total_points() / x_total;

    RealState state(g2d);
    rvec x(d), u(d);
    std::vector<int> jp(d);
    for (std::size_t ix = 0; ix < x_total; ++ix) {
        std::size_t rem = ix;
        for (int ax = d - 1; ax >= 0; --ax) {
            x[ax] = g2d.node(static_cast<int>(rem % m));
            rem /= m;
        }
        u0(x, u);
        for (int i = 0; i < d; ++i)
            if (u[i] < spec.width - 1e-12 || u[i] > 1.0 - spec.width + 1e-12)
                throw DomainError("level-set center " + std::to_string(u[i]) +
                                  " leaves the momentum box by less than the kernel width");
        double amp = a0sq ? a0sq(x) : 1.0;

        // Momentum block for this position node is contiguous: x-major layout.
        double* block = state.values.data() + ix * p_total;
        for (std::size_t lp = 0; lp < p_total; ++lp) {
            std::size_t r = lp;
            double v = amp;
            for (int ax = d - 1; ax >= 0; --ax) {
                v *= delta_eval(spec, g2d.node(static_cast<int>(r % m)), u[ax]);
                r /= m;
            }
            block[lp] = v;
        }
    }
    return state;
}

ComplexState init_wkb(const GridSpec& g,
                      const std::function<double(std::span<const double>)>& a0,
                      const std::function<double(std::span<const double>)>& s0,
                      double hbar) {
    if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
    ComplexState state(g);
    const int m = g.points_per_axis();
    rvec x(g.dim());
    for (std::size_t k = 0; k < g.total_points(); ++k) {
        std::size_t rem = k;
        for (int ax = g.dim() - 1; ax >= 0; --ax) {
            x[ax] = g.node(static_cast<int>(rem % m));
            rem /= m;
        }
        state.values[k] = a0(x) * std::exp(cplx(0.0, s0(x) / hbar));
    }
    return state;
}

} // namespace linrep
