#include "linrep/grid.hpp"

#include <cmath>

namespace linrep {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Largest 1/2^m not exceeding target. Never returns coarser than 1/2.
double round_down_to_dyadic(double target, std::size_t budget, int dim) {
    if (!(target > 0.0)) throw ValidationError("mesh target spacing must be positive");
    int m = 1;
    while (std::ldexp(1.0, -m) > target * (1.0 + 1e-12)) {
        ++m;
        if (m > 40) throw BudgetError("mesh spacing underflows the grid budget");
    }
    if (std::pow(std::ldexp(1.0, m), dim) > static_cast<double>(budget))
        throw BudgetError("mesh target spacing " + std::to_string(target) +
                          " needs more than the budgeted " + std::to_string(budget) +
                          " grid points");
    return std::ldexp(1.0, -m);
}

} // namespace

GridSpec::GridSpec(int dim, int m, int pos_dim, std::size_t budget)
    : dim_(dim), m_(m), pos_dim_(pos_dim) {
    if (dim < 1) throw ValidationError("grid dimension must be at least 1");
    if (!is_power_of_two(m) || m < 2)
        throw ValidationError("points per axis must be a power of two >= 2, got " +
                              std::to_string(m));
    dx_ = 1.0 / m;
    double total = std::pow(static_cast<double>(m), dim);
    if (total > static_cast<double>(budget))
        throw BudgetError("grid of " + std::to_string(total) +
                          " points exceeds budget " + std::to_string(budget));
    total_ = 1;
    for (int i = 0; i < dim; ++i) total_ *= static_cast<std::size_t>(m);
    roles_.assign(dim, AxisRole::Position);
    for (int i = pos_dim; i < dim; ++i) roles_[i] = AxisRole::Momentum;
}

GridSpec GridSpec::unit_box(int dim, int points_per_axis, std::size_t budget) {
    return GridSpec(dim, points_per_axis, dim, budget);
}

GridSpec GridSpec::phase_space(int spatial_dim, int points_per_axis, std::size_t budget) {
    return GridSpec(2 * spatial_dim, points_per_axis, spatial_dim, budget);
}

std::size_t flatten_index(const MultiIndex& j, const GridSpec& g) {
    if (static_cast<int>(j.size()) != g.dim())
        throw IndexError("multi-index length " + std::to_string(j.size()) +
                         " does not match grid dimension " + std::to_string(g.dim()));
    std::size_t idx = 0;
    const std::size_t m = static_cast<std::size_t>(g.points_per_axis());
    for (int i = 0; i < g.dim(); ++i) {
        if (j[i] < 0 || j[i] >= g.points_per_axis())
            throw IndexError("multi-index component " + std::to_string(j[i]) +
                             " out of range [0, " + std::to_string(g.points_per_axis()) + ")");
        idx = idx * m + static_cast<std::size_t>(j[i]);
    }
    return idx;
}

MultiIndex unflatten_index(std::size_t k, const GridSpec& g) {
    if (k >= g.total_points()) throw IndexError("flat index out of range");
    MultiIndex j(g.dim());
    const std::size_t m = static_cast<std::size_t>(g.points_per_axis());
    for (int i = g.dim() - 1; i >= 0; --i) {
        j[i] = static_cast<int>(k % m);
        k /= m;
    }
    return j;
}

std::size_t axis_stride(int axis, const GridSpec& g) {
    if (axis < 0 || axis >= g.dim()) throw IndexError("axis out of range");
    std::size_t s = 1;
    for (int i = g.dim() - 1; i > axis; --i)
        s *= static_cast<std::size_t>(g.points_per_axis());
    return s;
}

TimeGrid TimeGrid::from_dt(double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw ValidationError("time step and horizon must be positive");
    double steps = horizon / dt;
    double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * steps + 1e-12)
        throw ValidationError("time step does not tile the horizon into whole steps");
    TimeGrid tg;
    tg.dt = dt;
    tg.steps = static_cast<int>(rounded);
    tg.horizon = horizon;
    return tg;
}

TimeGrid TimeGrid::from_steps(int steps, double horizon) {
    if (steps < 1) throw ValidationError("need at least one time step");
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
    TimeGrid tg;
    tg.dt = horizon / steps;
    tg.steps = steps;
    tg.horizon = horizon;
    return tg;
}

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw ValidationError("target accuracy must lie in (0, 1), got " + std::to_string(eps));
}

/// Round omega up to an integer number of cells, clamped to [2 cells, half box]
/// (whole box on the degenerate M = 2 grid).
void attach_omega(MeshStrategy& s, double omega_target) {
    int m = static_cast<int>(std::ceil(omega_target / s.dx - 1e-9));
    m = std::max(m, 2);
    m = std::min(m, std::max(s.points_per_axis / 2, 2));
    s.support_cells = m;
    s.omega = m * s.dx;
}

/// Round dt down so the unit horizon is a whole number of steps.
void attach_dt(MeshStrategy& s, double dt_target) {
    if (!(dt_target > 0.0)) throw ValidationError("derived time step must be positive");
    int n = static_cast<int>(std::ceil(1.0 / dt_target - 1e-12));
    n = std::max(n, 1);
    s.steps_per_unit_time = n;
    s.dt = 1.0 / n;
}

} // namespace

MeshStrategy mesh_for_upwind(double eps, int d, double c_f, std::size_t budget) {
    check_eps(eps);
    if (d < 1) throw ValidationError("dimension must be at least 1");
    if (!(c_f > 0.0)) throw ValidationError("CFL constant must be positive");

    MeshStrategy s;
    s.kind = "upwind";
    s.target_eps = eps;
    s.sobolev_order = 1.0;
    s.cfl_constant = c_f;
    s.dx = round_down_to_dyadic(eps * eps * eps / d, budget, d);
    s.points_per_axis = static_cast<int>(std::lround(1.0 / s.dx));
    attach_dt(s, s.dx / (d * c_f));
    attach_omega(s, std::cbrt(d * s.dx));
    return s;
}

MeshStrategy mesh_for_spectral(double eps, int d, double ell, std::size_t budget) {
    check_eps(eps);
    if (d < 1) throw ValidationError("dimension must be at least 1");
    if (!(ell >= 1.0)) throw ValidationError("smoothness order must be at least 1");

    MeshStrategy s;
    s.kind = "spectral";
    s.target_eps = eps;
    s.sobolev_order = ell;
    double dx_target = std::pow(eps, 1.0 + 2.0 / ell) / std::pow(static_cast<double>(d), 1.0 / ell);
    s.dx = round_down_to_dyadic(dx_target, budget, d);
    s.points_per_axis = static_cast<int>(std::lround(1.0 / s.dx));
    attach_dt(s, eps * eps);
    attach_omega(s, eps);
    return s;
}

MeshStrategy mesh_for_schrodinger(double eps, int d, double ell,
                                  SchrodingerMeshPurpose purpose, std::size_t budget) {
    check_eps(eps);
    if (d < 1) throw ValidationError("dimension must be at least 1");
    if (!(ell >= 1.0)) throw ValidationError("smoothness order must be at least 1");

    MeshStrategy s;
    s.target_eps = eps;
    s.sobolev_order = ell;
    s.hbar = std::sqrt(eps);
    double dx_target, dt_target;
    if (purpose == SchrodingerMeshPurpose::Wavefunction) {
        s.kind = "schrodinger_wavefunction";
        dx_target = std::pow(eps, 0.5 + 2.5 / ell) / std::pow(static_cast<double>(d), 1.0 / ell);
        dt_target = std::pow(eps, 1.5);
    } else {
        s.kind = "schrodinger_observable";
        dx_target = std::pow(eps, 0.5 + 2.0 / ell) / std::pow(static_cast<double>(d), 1.0 / ell);
        dt_target = eps;
    }
    s.dx = round_down_to_dyadic(dx_target, budget, d);
    s.points_per_axis = static_cast<int>(std::lround(1.0 / s.dx));
    attach_dt(s, dt_target);
    attach_omega(s, s.hbar);
    return s;
}

} // namespace linrep
