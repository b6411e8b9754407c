#pragma once

#include <span>

#include "linrep/grid.hpp"
#include "linrep/types.hpp"

namespace linrep {

/// Radix-2 transform machinery for one axis of length M = 2N = 2^m.
///
/// forward:  y_k = (1/sqrt(M)) sum_j e^{+2 pi i jk/M} x_j      (unitary)
/// inverse:  x_j = (1/sqrt(M)) sum_k e^{-2 pi i jk/M} y_k
///
/// The collocation matrix Phi with entries e^{i mu_l x_j}, mu_l = 2 pi (l - N)
/// for 0-based l, factors as Phi = sqrt(M) S F with S = diag(1,-1,1,...), so
/// coefficient extraction is a sign flip, an inverse transform and a scale.
/// Coefficients land directly in ascending-frequency order; the permutation to
/// standard wrapped bin order is (bin + N) mod M.
class DftPlan {
public:
    explicit DftPlan(int size);

    int size() const { return size_; }

    /// Frequency of coefficient slot k (ascending order): 2 pi (k - N).
    double mu(int k) const { return mu_[k]; }
    const rvec& mu_table() const { return mu_; }

    void forward_inplace(std::span<cplx> v) const;
    void inverse_inplace(std::span<cplx> v) const;

    cvec forward(cvec v) const;
    cvec inverse(cvec v) const;

    /// c = Phi^{-1} u.
    cvec coef_from_nodal(cvec u) const;
    /// u = Phi c.
    cvec nodal_from_coef(cvec c) const;

    /// Ascending-frequency slot of a standard DFT bin.
    static int ascending_index_from_bin(int bin, int size) {
        return (bin + size / 2) % size;
    }

private:
    void transform(std::span<cplx> v, bool conjugate) const;

    int size_ = 0;
    int log2_ = 0;
    rvec mu_;
    std::vector<int> bitrev_;
    cvec twiddle_;  // e^{+2 pi i k / M}, k < M/2
};

/// Apply the plan along one axis of a flattened tensor-product state.
/// kind selects: unitary forward, unitary inverse, Phi^{-1} (coefficients),
/// or Phi (back to nodal values).
enum class AxisTransform { Forward, Inverse, CoefFromNodal, NodalFromCoef };

void transform_axis(const GridSpec& g, int axis, AxisTransform kind,
                    const DftPlan& plan, std::span<cplx> data);

/// Multiply by (-1)^{j_axis} along one axis (the S factor).
void apply_axis_sign(const GridSpec& g, int axis, std::span<cplx> data);

/// Multiply by (-1)^{sum_i j_i} (the tensorised S factor over all axes).
void apply_parity_sign(const GridSpec& g, std::span<cplx> data);

} // namespace linrep
