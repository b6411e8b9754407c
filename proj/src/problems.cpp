#include "linrep/problems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace linrep {

namespace {

Problem make_linear_decay() {
    Problem p;
    p.name = "linear-decay";
    p.kind = "ode";
    p.description = "dq/dt = -(q - 1/2), closed form q(t) = 1/2 + (q0 - 1/2) e^{-t}";
    p.reference = "linear relaxation toward the box center";
    p.field.dim = 1;
    p.field.component = [](std::span<const double> x, int) { return -(x[0] - 0.5); };
    p.field.sup_per_axis = {0.5};
    p.field.div_sup = 1.0;
    p.field.divergence = [](std::span<const double>) { return -1.0; };
    p.q0 = {0.7};
    p.exact_trajectory = [](double t) {
        return rvec{0.5 + 0.2 * std::exp(-t)};
    };
    return p;
}

Problem make_logistic() {
    Problem p;
    p.name = "logistic";
    p.kind = "ode";
    p.description = "dq/dt = q(1-q), closed form q(t) = q0 e^t / (1 - q0 + q0 e^t)";
    p.reference = "logistic growth benchmark";
    p.field.dim = 1;
    p.field.component = [](std::span<const double> x, int) { return x[0] * (1.0 - x[0]); };
    p.field.sup_per_axis = {0.25};
    p.field.div_sup = 1.0;
    p.field.divergence = [](std::span<const double> x) { return 1.0 - 2.0 * x[0]; };
    p.q0 = {0.1};
    p.exact_trajectory = [](double t) {
        double e = 0.1 * std::exp(t);
        return rvec{e / (0.9 + e)};
    };
    return p;
}

Problem make_rotation() {
    Problem p;
    p.name = "rotation";
    p.kind = "ode";
    p.description = "rigid rotation about (1/2, 1/2); divergence free";
    p.reference = "divergence-free field where the two transport pipelines coincide";
    p.field.dim = 2;
    p.field.component = [](std::span<const double> x, int i) {
        return i == 0 ? -(x[1] - 0.5) : (x[0] - 0.5);
    };
    p.field.sup_per_axis = {0.5, 0.5};
    p.field.div_sup = 0.0;
    p.field.divergence = [](std::span<const double>) { return 0.0; };
    p.q0 = {0.7, 0.5};
    p.exact_trajectory = [](double t) {
        double c = std::cos(t), s = std::sin(t);
        return rvec{0.5 + 0.2 * c, 0.5 + 0.2 * s};
    };
    return p;
}

Problem make_burgers() {
    Problem p;
    p.name = "burgers";
    p.kind = "hje";
    p.description = "u_t + u u_x = 0 with u0(x) = 1/4 + sin(2 pi x)/10";
    p.reference = "pre-caustic transport benchmark solved along characteristics";
    p.u0 = [](double x) { return 0.25 + 0.1 * std::sin(kTwoPi * x); };
    p.burgers_oracle = true;
    return p;
}

Problem make_constant_gradient() {
    Problem p;
    p.name = "constant-gradient";
    p.kind = "hje";
    p.description = "H = p^2/2 + V with dV/dx = 1/5; u(t, x) = u0 - t/5";
    p.reference = "uniform forcing with a spatially constant exact solution";
    p.u0 = [](double) { return 0.4; };
    p.grad_v = [](std::span<const double>, int) { return 0.2; };
    p.grad_v_sup = {0.2};
    p.exact_velocity = [](double t, double) { return 0.4 - 0.2 * t; };
    return p;
}

Problem make_wkb_gaussian() {
    Problem p;
    p.name = "wkb-gaussian";
    p.kind = "schrodinger";
    p.description =
        "Gaussian bump with a log-cosh phase in a constant potential V = 10";
    p.reference = "semiclassical benchmark; density develops caustic oscillations";
    p.a0 = [](std::span<const double> x) {
        return std::exp(-25.0 * (x[0] - 0.5) * (x[0] - 0.5));
    };
    p.s0 = [](std::span<const double> x) {
        double z = 5.0 * (x[0] - 0.5);
        return -0.2 * std::log(std::exp(z) + std::exp(-z));
    };
    p.v = [](std::span<const double>) { return 10.0; };
    p.default_hbar = 0.0256;
    return p;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

} // namespace

const std::vector<Problem>& problem_registry() {
    static const std::vector<Problem> registry = {
        make_linear_decay(), make_logistic(),         make_rotation(),
        make_burgers(),      make_constant_gradient(), make_wkb_gaussian(),
    };
    return registry;
}

const Problem& get_problem(const std::string& name) {
    const Problem* nearest = nullptr;
    int best = 1 << 30;
    for (const Problem& p : problem_registry()) {
        if (p.name == name) return p;
        int d = edit_distance(name, p.name);
        if (d < best) {
            best = d;
            nearest = &p;
        }
    }
    throw ValidationError("unknown problem '" + name + "'; nearest match is '" +
                          (nearest ? nearest->name : "") + "'");
}

std::string list_problems_text() {
    std::ostringstream os;
    for (const Problem& p : problem_registry()) {
        os << p.name << "  [" << p.kind << "]\n    " << p.description << "\n    ("
           << p.reference << ")\n";
    }
    return os.str();
}

} // namespace linrep
