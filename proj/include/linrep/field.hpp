#pragma once

#include <functional>
#include <span>
#include <string>

#include "linrep/grid.hpp"
#include "linrep/types.hpp"

namespace linrep {

/// Right-hand side F of dq/dt = F(q) together with the bounds that drive CFL
/// checks and growth estimates. The divergence is analytic when supplied,
/// otherwise a central difference of the components.
struct FlowField {
    int dim = 1;
    std::function<double(std::span<const double>, int)> component;  // F_i(x)
    rvec sup_per_axis;                                              // sup_x |F_i|
    double div_sup = 0.0;                                           // sup |div F|
    std::function<double(std::span<const double>)> divergence;      // optional

    double sup_sum() const {
        double s = 0.0;
        for (double v : sup_per_axis) s += v;
        return s;
    }

    double component_at(std::span<const double> x, int axis) const {
        return component(x, axis);
    }

    void eval(std::span<const double> x, std::span<double> out) const {
        for (int i = 0; i < dim; ++i) out[i] = component(x, i);
    }

    double divergence_at(std::span<const double> x) const;

    /// Measure sup |F_i| and sup |div F| by sampling grid nodes (refined 2x).
    /// Used for randomized fields whose analytic bounds are inconvenient.
    void estimate_sups(const GridSpec& g);
};

/// Hamiltonian H(x, p) entering the phase-space transport equation through its
/// gradients: x-advection speed dH/dp_i, p-advection speed -dH/dx_i.
struct HamiltonianField {
    int dim = 1;  // spatial dimension d; the grid has 2d axes
    std::function<double(std::span<const double>, std::span<const double>, int)> dHdx;
    std::function<double(std::span<const double>, std::span<const double>, int)> dHdp;
    rvec sup_dHdx;  // per axis
    rvec sup_dHdp;

    double sup_sum() const {
        double s = 0.0;
        for (double v : sup_dHdx) s += v;
        for (double v : sup_dHdp) s += v;
        return s;
    }
};

/// H = |p|^2/2 + V(x) with the gradient of V supplied directly; V itself never
/// enters the transport equation. Momentum values are the grid coordinates, so
/// sup |dH/dp_i| = 1 on the unit box.
HamiltonianField kinetic_plus_potential(
    int d, const std::function<double(std::span<const double>, int)>& grad_v,
    rvec sup_grad_v);

} // namespace linrep
