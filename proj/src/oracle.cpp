#include "linrep/oracle.hpp"

#include <cmath>
#include <limits>

namespace linrep::oracle {

namespace {

void rk4_step(const FlowField& field, rvec& q, double dt, rvec& k1, rvec& k2,
              rvec& k3, rvec& k4, rvec& tmp) {
    const int d = field.dim;
    field.eval(q, k1);
    for (int i = 0; i < d; ++i) tmp[i] = q[i] + 0.5 * dt * k1[i];
    field.eval(tmp, k2);
    for (int i = 0; i < d; ++i) tmp[i] = q[i] + 0.5 * dt * k2[i];
    field.eval(tmp, k3);
    for (int i = 0; i < d; ++i) tmp[i] = q[i] + dt * k3[i];
    field.eval(tmp, k4);
    for (int i = 0; i < d; ++i)
        q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

rvec rk4_final(const FlowField& field, rvec q, double horizon, double dt) {
    int steps = static_cast<int>(std::ceil(horizon / dt - 1e-12));
    double h = horizon / steps;
    rvec k1(field.dim), k2(field.dim), k3(field.dim), k4(field.dim), tmp(field.dim);
    for (int n = 0; n < steps; ++n) {
        rk4_step(field, q, h, k1, k2, k3, k4, tmp);
        if (!all_finite(q)) throw DivergenceError("trajectory became non-finite");
    }
    return q;
}

} // namespace

TrajectoryResult rk4(const FlowField& field, std::span<const double> q0, double horizon,
                     double dt) {
    if (!(dt > 0.0)) throw ValidationError("oracle step must be positive");
    if (static_cast<int>(q0.size()) != field.dim)
        throw ValidationError("initial point dimension mismatch");

    int steps = static_cast<int>(std::ceil(horizon / dt - 1e-12));
    steps = std::max(steps, 1);
    double h = horizon / steps;

    TrajectoryResult result;
    result.dt = h;
    rvec q(q0.begin(), q0.end());
    result.states.push_back(q);
    rvec k1(field.dim), k2(field.dim), k3(field.dim), k4(field.dim), tmp(field.dim);
    for (int n = 0; n < steps; ++n) {
        rk4_step(field, q, h, k1, k2, k3, k4, tmp);
        if (!all_finite(q)) throw DivergenceError("trajectory became non-finite");
        result.states.push_back(q);
    }

    rvec refined = rk4_final(field, rvec(q0.begin(), q0.end()), horizon, 0.5 * h);
    double err = 0.0;
    for (int i = 0; i < field.dim; ++i)
        err = std::max(err, std::abs(refined[i] - q[i]));
    result.accuracy_estimate = err;
    return result;
}

GridOracleResult characteristics_liouville(
    const FlowField& field, const std::function<double(std::span<const double>)>& rho0,
    double t, const GridSpec& g, double dt_oracle) {
    if (field.dim != g.dim())
        throw ValidationError("field dimension does not match the grid");
    if (dt_oracle <= 0.0) dt_oracle = g.spacing() / 10.0;

    // Backward flow: integrate dY/dtau = -F(Y) from the node, accumulating the
    // divergence along the path for the Jacobian factor.
    FlowField backward;
    backward.dim = field.dim + 1;
    backward.component = [&field](std::span<const double> y, int i) {
        std::span<const double> q = y.first(static_cast<std::size_t>(field.dim));
        if (i < field.dim) return -field.component(q, i);
        return field.divergence_at(q);
    };

    auto solve_at = [&](std::size_t k, double dt) {
        rvec y(field.dim + 1, 0.0);
        std::size_t rem = k;
        for (int ax = field.dim - 1; ax >= 0; --ax) {
            y[ax] = g.node(static_cast<int>(rem % g.points_per_axis()));
            rem /= g.points_per_axis();
        }
        rvec end = rk4_final(backward, y, t, dt);
        std::span<const double> foot(end.data(), static_cast<std::size_t>(field.dim));
        return rho0(foot) * std::exp(-end[field.dim]);
    };

    GridOracleResult result;
    result.dt_used = dt_oracle;
    result.values.resize(g.total_points());
    double acc = 0.0;
    for (std::size_t k = 0; k < g.total_points(); ++k) {
        result.values[k] = solve_at(k, dt_oracle);
        if (k % (1 + g.total_points() / 8) == 0)
            acc = std::max(acc, std::abs(solve_at(k, 0.5 * dt_oracle) - result.values[k]));
    }
    result.accuracy_estimate = acc;
    return result;
}

double burgers_caustic_time(const std::function<double(double)>& u0) {
    const int n = 4096;
    double max_slope = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = static_cast<double>(i) / n;
        double h = 1.0 / n;
        double du = (u0(x + h) - u0(x - h)) / (2.0 * h);
        max_slope = std::max(max_slope, std::abs(du));
    }
    if (max_slope == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / max_slope;
}

double burgers_characteristics(const std::function<double(double)>& u0, double t,
                               double x) {
    double t_caustic = burgers_caustic_time(u0);
    if (t >= 0.9 * t_caustic)
        throw CausticError("requested time " + std::to_string(t) +
                           " is within 10% of the caustic estimate " +
                           std::to_string(t_caustic));
    double u = u0(x);
    for (int it = 0; it < 10000; ++it) {
        double next = 0.5 * u + 0.5 * u0(x - u * t);
        if (std::abs(next - u) < 1e-15) {
            u = next;
            break;
        }
        u = next;
    }
    if (std::abs(u - u0(x - u * t)) > 1e-12)
        throw CausticError("fixed point failed to converge to 1e-12");
    return u;
}

cvec free_schrodinger_exact(const cvec& coef_ascending, const DftPlan& plan,
                            double hbar, double t) {
    if (static_cast<int>(coef_ascending.size()) != plan.size())
        throw ValidationError("coefficient length mismatch");
    cvec out = coef_ascending;
    for (int k = 0; k < plan.size(); ++k) {
        double mu = plan.mu(k);
        out[k] *= std::exp(cplx(0.0, -0.5 * hbar * mu * mu * t));
    }
    return out;
}

cvec free_schrodinger_exact_nodal(const cvec& u_nodal, const DftPlan& plan,
                                  double hbar, double t) {
    cvec coef = plan.coef_from_nodal(u_nodal);
    coef = free_schrodinger_exact(coef, plan, hbar, t);
    return plan.nodal_from_coef(coef);
}

} // namespace linrep::oracle
