#include "linrep/field.hpp"

#include <cmath>

namespace linrep {

double FlowField::divergence_at(std::span<const double> x) const {
    if (divergence) return divergence(x);
    const double h = 1e-6;
    rvec xp(x.begin(), x.end());
    double div = 0.0;
    for (int i = 0; i < dim; ++i) {
        double xi = xp[i];
        xp[i] = xi + h;
        double fp = component(xp, i);
        xp[i] = xi - h;
        double fm = component(xp, i);
        xp[i] = xi;
        div += (fp - fm) / (2.0 * h);
    }
    return div;
}

void FlowField::estimate_sups(const GridSpec& g) {
    const int m2 = 2 * g.points_per_axis();
    const double dx2 = 1.0 / m2;
    sup_per_axis.assign(dim, 0.0);
    div_sup = 0.0;
    rvec x(dim);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(m2);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (int ax = dim - 1; ax >= 0; --ax) {
            x[ax] = dx2 * static_cast<double>(rem % m2);
            rem /= m2;
        }
        for (int i = 0; i < dim; ++i)
            sup_per_axis[i] = std::max(sup_per_axis[i], std::abs(component(x, i)));
        div_sup = std::max(div_sup, std::abs(divergence_at(x)));
    }
}

HamiltonianField kinetic_plus_potential(
    int d, const std::function<double(std::span<const double>, int)>& grad_v,
    rvec sup_grad_v) {
    HamiltonianField h;
    h.dim = d;
    h.dHdx = [grad_v](std::span<const double> x, std::span<const double>, int i) {
        return grad_v ? grad_v(x, i) : 0.0;
    };
    h.dHdp = [](std::span<const double>, std::span<const double> p, int i) {
        return p[i];
    };
    h.sup_dHdx = grad_v ? std::move(sup_grad_v) : rvec(d, 0.0);
    if (static_cast<int>(h.sup_dHdx.size()) != d)
        throw ValidationError("gradient bound vector has wrong length");
    h.sup_dHdp.assign(d, 1.0);
    return h;
}

} // namespace linrep
