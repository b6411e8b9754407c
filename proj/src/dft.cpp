#include "linrep/dft.hpp"

#include <cmath>

namespace linrep {

DftPlan::DftPlan(int size) : size_(size) {
    if (size < 2 || (size & (size - 1)) != 0)
        throw ValidationError("transform length must be a power of two >= 2");
    while ((1 << log2_) < size_) ++log2_;

    const int n = size_ / 2;
    mu_.resize(size_);
    for (int k = 0; k < size_; ++k) mu_[k] = kTwoPi * (k - n);

    bitrev_.resize(size_);
    for (int i = 0; i < size_; ++i) {
        int r = 0;
        for (int b = 0; b < log2_; ++b)
            if (i & (1 << b)) r |= 1 << (log2_ - 1 - b);
        bitrev_[i] = r;
    }

    twiddle_.resize(n);
    for (int k = 0; k < n; ++k)
        twiddle_[k] = std::exp(cplx(0.0, kTwoPi * k / size_));
}

void DftPlan::transform(std::span<cplx> v, bool conjugate) const {
    if (static_cast<int>(v.size()) != size_)
        throw ValidationError("transform length mismatch");
    for (int i = 0; i < size_; ++i) {
        int r = bitrev_[i];
        if (r > i) std::swap(v[i], v[r]);
    }
    for (int len = 2; len <= size_; len <<= 1) {
        const int stride = size_ / len;
        for (int start = 0; start < size_; start += len) {
            for (int k = 0; k < len / 2; ++k) {
                cplx w = twiddle_[k * stride];
                if (conjugate) w = std::conj(w);
                cplx a = v[start + k];
                cplx b = v[start + k + len / 2] * w;
                v[start + k] = a + b;
                v[start + k + len / 2] = a - b;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(size_));
    for (auto& x : v) x *= scale;
}

void DftPlan::forward_inplace(std::span<cplx> v) const { transform(v, false); }
void DftPlan::inverse_inplace(std::span<cplx> v) const { transform(v, true); }

cvec DftPlan::forward(cvec v) const {
    forward_inplace(v);
    return v;
}

cvec DftPlan::inverse(cvec v) const {
    inverse_inplace(v);
    return v;
}

cvec DftPlan::coef_from_nodal(cvec u) const {
    for (int j = 1; j < size_; j += 2) u[j] = -u[j];
    inverse_inplace(u);
    const double scale = 1.0 / std::sqrt(static_cast<double>(size_));
    for (auto& x : u) x *= scale;
    return u;
}

cvec DftPlan::nodal_from_coef(cvec c) const {
    forward_inplace(c);
    const double scale = std::sqrt(static_cast<double>(size_));
    for (auto& x : c) x *= scale;
    for (int j = 1; j < size_; j += 2) c[j] = -c[j];
    return c;
}

void transform_axis(const GridSpec& g, int axis, AxisTransform kind,
                    const DftPlan& plan, std::span<cplx> data) {
    if (data.size() != g.total_points())
        throw ValidationError("axis transform size mismatch");
    const int m = g.points_per_axis();
    if (plan.size() != m) throw ValidationError("plan does not match the grid");
    const std::size_t stride = axis_stride(axis, g);
    const std::size_t block = stride * static_cast<std::size_t>(m);
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

    cvec line(m);
    for (std::size_t base = 0; base < data.size(); base += block) {
        for (std::size_t within = 0; within < stride; ++within) {
            cplx* p0 = data.data() + base + within;
            for (int j = 0; j < m; ++j) line[j] = p0[j * stride];
            switch (kind) {
                case AxisTransform::Forward:
                    plan.forward_inplace(line);
                    break;
                case AxisTransform::Inverse:
                    plan.inverse_inplace(line);
                    break;
                case AxisTransform::CoefFromNodal:
                    for (int j = 1; j < m; j += 2) line[j] = -line[j];
                    plan.inverse_inplace(line);
                    for (auto& x : line) x *= inv_sqrt_m;
                    break;
                case AxisTransform::NodalFromCoef:
                    plan.forward_inplace(line);
                    for (auto& x : line) x /= inv_sqrt_m;
                    for (int j = 1; j < m; j += 2) line[j] = -line[j];
                    break;
            }
            for (int j = 0; j < m; ++j) p0[j * stride] = line[j];
        }
    }
}

void apply_axis_sign(const GridSpec& g, int axis, std::span<cplx> data) {
    if (data.size() != g.total_points())
        throw ValidationError("sign application size mismatch");
    const int m = g.points_per_axis();
    const std::size_t stride = axis_stride(axis, g);
    const std::size_t block = stride * static_cast<std::size_t>(m);
    for (std::size_t base = 0; base < data.size(); base += block)
        for (int j = 1; j < m; j += 2) {
            cplx* p0 = data.data() + base + static_cast<std::size_t>(j) * stride;
            for (std::size_t within = 0; within < stride; ++within) p0[within] = -p0[within];
        }
}

void apply_parity_sign(const GridSpec& g, std::span<cplx> data) {
    for (int ax = 0; ax < g.dim(); ++ax) apply_axis_sign(g, ax, data);
}

} // namespace linrep
