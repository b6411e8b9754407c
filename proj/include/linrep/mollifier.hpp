#pragma once

#include <functional>
#include <span>

#include "linrep/grid.hpp"
#include "linrep/types.hpp"

namespace linrep {

/// Grid function: values flattened in the row-major base-M order of the grid.
template <class T>
struct GridFunction {
    GridSpec grid;
    std::vector<T> values;

    GridFunction(const GridSpec& g, std::vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.total_points())
            throw ValidationError("grid function size does not match the grid");
    }
    explicit GridFunction(const GridSpec& g) : grid(g), values(g.total_points(), T{}) {}
};

using RealState = GridFunction<double>;
using ComplexState = GridFunction<cplx>;

/// Riemann mass sum_j v_j * dx^dim (exact for the periodic trapezoid rule).
double grid_mass(const RealState& s);

enum class MollifierKind { Hat, Cosine };

/// Compactly supported kernel of width omega = support_cells * dx.
/// Hat: beta(x) = 1 - |x|. Cosine: beta(x) = (1 + cos(pi x))/2. Both on [-1, 1].
struct MollifierSpec {
    MollifierKind kind = MollifierKind::Hat;
    int support_cells = 2;
    double width = 0.0;

    static MollifierSpec from_cells(MollifierKind kind, int cells, double dx);
};

/// (1/omega) beta((x - center)/omega) with wrap-around distance on the unit circle.
double delta_eval(const MollifierSpec& spec, double x, double center);

enum class Representation { Liouville, Kvn, LevelSet, Schrodinger };

/// Tensor-product smoothed delta centered at q0; nonnegative, mass close to 1.
/// Rejects omega < 2 dx (kernel narrower than the grid) and omega > 1/2
/// (support wrapping onto itself).
RealState init_liouville(const GridSpec& g, const MollifierSpec& spec,
                         std::span<const double> q0);

/// Pointwise square root of the matching Liouville state.
RealState init_kvn(const GridSpec& g, const MollifierSpec& spec,
                   std::span<const double> q0);

/// Smoothed delta along the momentum axes centered at u0(x) for each position
/// node, scaled by a0sq(x) (default 1). u0 must stay inside the momentum box
/// with margin >= omega.
RealState init_levelset(const GridSpec& g2d, const MollifierSpec& spec,
                        const std::function<void(std::span<const double>, std::span<double>)>& u0,
                        const std::function<double(std::span<const double>)>& a0sq = nullptr);

/// WKB data A0(x) exp(i S0(x)/hbar).
ComplexState init_wkb(const GridSpec& g,
                      const std::function<double(std::span<const double>)>& a0,
                      const std::function<double(std::span<const double>)>& s0,
                      double hbar);

} // namespace linrep
