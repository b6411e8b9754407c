#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "linrep/errors.hpp"
#include "linrep/types.hpp"

namespace linrep {

enum class AxisRole { Position, Momentum };

using MultiIndex = std::vector<int>;

/// Uniform periodic tensor grid on the unit box. Every axis has M = 2^m nodes
/// x_j = j/M, j = 0..M-1, with wrap-around at the ends. Phase-space grids tag
/// the trailing axes as momentum.
class GridSpec {
public:
    static constexpr std::size_t kDefaultBudget = std::size_t(1) << 24;

    /// All-position grid over [0,1]^dim.
    static GridSpec unit_box(int dim, int points_per_axis,
                             std::size_t budget = kDefaultBudget);

    /// Phase-space grid over [0,1]^{2d}: d position axes followed by d momentum axes.
    static GridSpec phase_space(int spatial_dim, int points_per_axis,
                                std::size_t budget = kDefaultBudget);

    int dim() const { return dim_; }
    int points_per_axis() const { return m_; }
    double spacing() const { return dx_; }
    const std::vector<AxisRole>& axis_roles() const { return roles_; }

    /// Number of position axes (equals dim() for configuration-space grids).
    int position_dim() const { return pos_dim_; }
    int momentum_dim() const { return dim_ - pos_dim_; }
    bool is_phase_space() const { return pos_dim_ != dim_; }

    std::size_t total_points() const { return total_; }

    /// Coordinate of node j along one axis.
    double node(int j) const { return dx_ * j; }

    bool operator==(const GridSpec& other) const {
        return dim_ == other.dim_ && m_ == other.m_ && roles_ == other.roles_;
    }

private:
    GridSpec(int dim, int m, int pos_dim, std::size_t budget);

    int dim_ = 0;
    int m_ = 0;
    int pos_dim_ = 0;
    double dx_ = 0.0;
    std::size_t total_ = 0;
    std::vector<AxisRole> roles_;
};

/// Row-major base-M flattening: index = sum_i j_i * M^(dim-i), i = 1..dim.
/// Bijective onto [0, M^dim). Throws IndexError on out-of-range components.
std::size_t flatten_index(const MultiIndex& j, const GridSpec& g);

MultiIndex unflatten_index(std::size_t k, const GridSpec& g);

/// Stride of an axis (0-based) in the flattened layout.
std::size_t axis_stride(int axis, const GridSpec& g);

struct TimeGrid {
    double dt = 0.0;
    int steps = 0;
    double horizon = 0.0;

    /// steps = round(T/dt); rejects if dt does not tile the horizon.
    static TimeGrid from_dt(double dt, double horizon);

    /// dt = T/steps.
    static TimeGrid from_steps(int steps, double horizon);
};

/// Concrete mesh derived from a target accuracy. Asymptotic scalings are made
/// deterministic: dx rounds down to the nearest 1/2^m, omega rounds up to an
/// integer multiple of dx (at least 2 cells, at most half the box), dt rounds
/// down so the unit horizon is an integer number of steps.
struct MeshStrategy {
    std::string kind;        // upwind | spectral | schrodinger_wavefunction | schrodinger_observable
    double target_eps = 0.0;
    double sobolev_order = 0.0;   // ell; infinity for smooth data
    double time_order = 1.0;      // alpha; first-order marching throughout
    double dx = 0.0;
    double dt = 0.0;
    double omega = 0.0;
    int points_per_axis = 0;      // M = 1/dx
    int support_cells = 0;        // omega / dx
    int steps_per_unit_time = 0;  // 1/dt
    double hbar = 0.0;            // set for the Schrodinger strategies
    double cfl_constant = 1.0;    // C_F used when deriving dt
};

/// dx ~ eps^3/d, dt = dx/(d*C_F), omega = (d*dx)^{1/3}.
MeshStrategy mesh_for_upwind(double eps, int d, double c_f = 1.0,
                             std::size_t budget = GridSpec::kDefaultBudget);

/// dx ~ eps^{1+2/ell}/d^{1/ell}, dt ~ eps^2, omega ~ eps.
MeshStrategy mesh_for_spectral(double eps, int d, double ell,
                               std::size_t budget = GridSpec::kDefaultBudget);

enum class SchrodingerMeshPurpose { Wavefunction, Observable };

/// Wavefunction targets: dt ~ eps^{3/2}, dx ~ eps^{1/2+5/(2 ell)}/d^{1/ell}.
/// Observable targets:   dt ~ eps,       dx ~ eps^{1/2+2/ell}/d^{1/ell}.
/// Both set hbar = sqrt(eps).
MeshStrategy mesh_for_schrodinger(double eps, int d, double ell,
                                  SchrodingerMeshPurpose purpose,
                                  std::size_t budget = GridSpec::kDefaultBudget);

} // namespace linrep
