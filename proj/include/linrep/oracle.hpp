#pragma once

#include <functional>

#include "linrep/dft.hpp"
#include "linrep/field.hpp"
#include "linrep/mollifier.hpp"

namespace linrep::oracle {

/// Reference results carry a step-halving accuracy estimate so the caller can
/// verify the oracle sits below the error it is certifying.
struct TrajectoryResult {
    std::vector<rvec> states;  // q(0), q(dt), ..., q(T)
    double dt = 0.0;
    double accuracy_estimate = 0.0;
};

/// Classical fourth-order integration of dq/dt = F(q).
TrajectoryResult rk4(const FlowField& field, std::span<const double> q0, double horizon,
                     double dt);

struct GridOracleResult {
    rvec values;
    double dt_used = 0.0;
    double accuracy_estimate = 0.0;
};

/// Exact transport solution rho(t, x) = rho0(X(0; x, t)) exp(-int div F) with
/// backward characteristics integrated by rk4 at dt = dx/10 unless overridden.
GridOracleResult characteristics_liouville(
    const FlowField& field, const std::function<double(std::span<const double>)>& rho0,
    double t, const GridSpec& g, double dt_oracle = 0.0);

/// Pre-caustic solution of u_t + u u_x = 0 via the fixed point u = u0(x - u t).
/// Refuses t at or beyond 0.9 of the estimated caustic time 1/max|u0'|.
double burgers_characteristics(const std::function<double(double)>& u0, double t,
                               double x);

/// Estimated caustic time from a centered-difference scan of u0'.
double burgers_caustic_time(const std::function<double(double)>& u0);

/// Multiplies each ascending-order mode by e^{-i hbar mu^2 t / 2}; exact free
/// evolution for any t.
cvec free_schrodinger_exact(const cvec& coef_ascending, const DftPlan& plan,
                            double hbar, double t);

/// Same evolution acting on nodal values.
cvec free_schrodinger_exact_nodal(const cvec& u_nodal, const DftPlan& plan,
                                  double hbar, double t);

} // namespace linrep::oracle
