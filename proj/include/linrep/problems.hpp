#pragma once

#include <functional>
#include <string>

#include "linrep/field.hpp"

namespace linrep {

/// Named built-in benchmark problems exposed through the CLI.
struct Problem {
    std::string name;
    std::string kind;  // ode | hje | schrodinger
    std::string description;
    std::string reference;  // benchmark provenance note

    // ode
    FlowField field;
    rvec q0;
    std::function<rvec(double)> exact_trajectory;

    // hje (one spatial dimension)
    std::function<double(double)> u0;
    std::function<double(std::span<const double>, int)> grad_v;  // null for V = 0
    rvec grad_v_sup;
    std::function<double(double, double)> exact_velocity;  // u(t, x)
    bool burgers_oracle = false;

    // schrodinger
    std::function<double(std::span<const double>)> a0, s0, v;
    double default_hbar = 0.0;
};

const std::vector<Problem>& problem_registry();

/// Throws ValidationError naming the nearest registered problem on a miss.
const Problem& get_problem(const std::string& name);

std::string list_problems_text();

} // namespace linrep
