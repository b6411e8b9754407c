#pragma once

// Shared oracles for the test suites. These deliberately avoid the library's
// own transform and exponential paths so they can certify them.

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include "linrep/field.hpp"
#include "linrep/types.hpp"

namespace testutil {

using linrep::cplx;
using linrep::cvec;
using linrep::rvec;

/// Matrix exponential by scaling-and-squaring with a plain Taylor series.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
    double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (std::ldexp(nrm, -squarings) > 0.25) ++squarings;
    Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Direct O(M^2) unitary transform, sign +1 matching the library's forward.
inline cvec dft_direct(const cvec& x, int sign) {
    const int m = static_cast<int>(x.size());
    cvec y(m, cplx(0.0));
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            y[k] += x[j] * std::exp(cplx(0.0, sign * linrep::kTwoPi * j * k / m));
    double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (auto& v : y) v *= scale;
    return y;
}

/// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(const rvec& x, const rvec& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Smooth periodic field: F_i(x) = a_i + sum_k b_ik sin(2 pi x_k + c_ik),
/// with analytic divergence and per-axis bounds.
inline linrep::FlowField random_smooth_field(int d, linrep::Rng& rng,
                                             double amplitude = 0.3) {
    auto a = std::make_shared<rvec>(d);
    auto b = std::make_shared<std::vector<rvec>>(d, rvec(d));
    auto c = std::make_shared<std::vector<rvec>>(d, rvec(d));
    for (int i = 0; i < d; ++i) {
        (*a)[i] = rng.uniform(-amplitude, amplitude);
        for (int k = 0; k < d; ++k) {
            (*b)[i][k] = rng.uniform(-amplitude, amplitude) / d;
            (*c)[i][k] = rng.uniform(0.0, linrep::kTwoPi);
        }
    }
    linrep::FlowField field;
    field.dim = d;
    field.component = [a, b, c, d](std::span<const double> x, int i) {
        double v = (*a)[i];
        for (int k = 0; k < d; ++k)
            v += (*b)[i][k] * std::sin(linrep::kTwoPi * x[k] + (*c)[i][k]);
        return v;
    };
    field.divergence = [b, c, d](std::span<const double> x) {
        double v = 0.0;
        for (int i = 0; i < d; ++i)
            v += linrep::kTwoPi * (*b)[i][i] *
                 std::cos(linrep::kTwoPi * x[i] + (*c)[i][i]);
        return v;
    };
    field.sup_per_axis.assign(d, 0.0);
    field.div_sup = 0.0;
    for (int i = 0; i < d; ++i) {
        double s = std::abs((*a)[i]);
        for (int k = 0; k < d; ++k) s += std::abs((*b)[i][k]);
        field.sup_per_axis[i] = s;
        field.div_sup += linrep::kTwoPi * std::abs((*b)[i][i]);
    }
    return field;
}

} // namespace testutil
