#include "linrep/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "linrep/observables.hpp"
#include "linrep/oracle.hpp"
#include "linrep/problems.hpp"
#include "linrep/resources.hpp"
#include "linrep/splitting.hpp"
#include "linrep/upwind.hpp"

namespace linrep::cli {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ValidationError("config field '" + field + "': " + why);
}

double get_double(const json& j, const std::string& key, double fallback,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(key, "missing");
        return fallback;
    }
    if (!j[key].is_number()) fail(key, "expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, int fallback,
            bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(key, "missing");
        return fallback;
    }
    if (!j[key].is_number_integer()) fail(key, "expected an integer");
    return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& key,
                       const std::string& fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(key, "missing");
        return fallback;
    }
    if (!j[key].is_string()) fail(key, "expected a string");
    return j[key].get<std::string>();
}

double get_ell(const json& j, const std::string& key) {
    if (!j.contains(key)) return std::numeric_limits<double>::infinity();
    if (j[key].is_string()) {
        if (j[key] == "inf" || j[key] == "smooth")
            return std::numeric_limits<double>::infinity();
        fail(key, "expected a number or \"inf\"");
    }
    return j[key].get<double>();
}

std::filesystem::path resolve_output_dir(const json& config) {
    std::filesystem::path dir = get_string(config, "output_dir", "out");
    if (dir.is_relative()) {
        if (const char* root = std::getenv("LINREP_OUT_ROOT"))
            dir = std::filesystem::path(root) / dir;
    }
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
    os << text;
}

struct TraceWriter {
    std::string header;
    std::vector<std::string> rows;

    void row(std::initializer_list<double> values, int step, double time) {
        std::string line = std::to_string(step) + "," + fmt17(time);
        for (double v : values) line += "," + fmt17(v);
        rows.push_back(std::move(line));
    }
    std::string text() const {
        std::string out = header + "\n";
        for (const auto& r : rows) out += r + "\n";
        return out;
    }
};

MollifierKind kernel_from_config(const json& mesh) {
    std::string kind = get_string(mesh, "kernel", "hat");
    if (kind == "hat") return MollifierKind::Hat;
    if (kind == "cosine") return MollifierKind::Cosine;
    fail("mesh.kernel", "expected hat or cosine");
}

struct ResolvedMesh {
    int points_per_axis = 0;
    double dx = 0.0;
    double dt = 0.0;
    int steps = 0;
    int support_cells = 0;
    double omega = 0.0;
    double hbar = 0.0;
    double target_eps = 0.0;  // 0 when the mesh was explicit
    MollifierKind kernel = MollifierKind::Hat;

    json to_json() const {
        json j;
        j["points_per_axis"] = points_per_axis;
        j["dx"] = dx;
        j["dt"] = dt;
        j["steps"] = steps;
        if (support_cells > 0) {
            j["support_cells"] = support_cells;
            j["omega"] = omega;
            j["kernel"] = kernel == MollifierKind::Hat ? "hat" : "cosine";
        }
        if (hbar > 0.0) j["hbar"] = hbar;
        if (target_eps > 0.0) j["target_eps"] = target_eps;
        return j;
    }
};

/// Fit the step to the horizon without enlarging it.
void tile_horizon(ResolvedMesh& mesh, double dt_target, double horizon) {
    int steps = static_cast<int>(std::ceil(horizon / dt_target - 1e-12));
    steps = std::max(steps, 1);
    mesh.steps = steps;
    mesh.dt = horizon / steps;
}

ResolvedMesh resolve_mesh_transport(const json& config, int d, double cfl_speed_sum,
                                    bool spectral_scaling, double horizon) {
    if (!config.contains("mesh")) fail("mesh", "missing");
    const json& mesh = config["mesh"];
    ResolvedMesh out;
    out.kernel = kernel_from_config(mesh);

    if (mesh.contains("target_eps")) {
        double eps = get_double(mesh, "target_eps", 0.0, true);
        MeshStrategy strategy =
            spectral_scaling
                ? mesh_for_spectral(eps, d, get_ell(mesh, "ell"))
                : mesh_for_upwind(eps, d, std::max(cfl_speed_sum, 1e-12));
        out.points_per_axis = strategy.points_per_axis;
        out.dx = strategy.dx;
        out.support_cells = strategy.support_cells;
        out.omega = strategy.omega;
        out.target_eps = eps;
        tile_horizon(out, strategy.dt, horizon);
        return out;
    }

    out.points_per_axis = get_int(mesh, "points_per_axis", 0, true);
    if (out.points_per_axis < 2) fail("mesh.points_per_axis", "must be at least 2");
    out.dx = 1.0 / out.points_per_axis;
    double dt_target = mesh.contains("dt")
                           ? get_double(mesh, "dt", 0.0, true)
                           : out.dx / (2.0 * std::max(cfl_speed_sum, 0.5));
    tile_horizon(out, dt_target, horizon);
    int default_cells =
        static_cast<int>(std::ceil(std::cbrt(d * out.dx) / out.dx - 1e-9));
    out.support_cells = get_int(mesh, "support_cells", std::max(2, default_cells));
    if (out.support_cells < 2) fail("mesh.support_cells", "must be at least 2");
    out.omega = out.support_cells * out.dx;
    return out;
}

json observable_block(const rvec& position, const rvec* oracle_exact,
                      const rvec* oracle_rk4, double oracle_accuracy,
                      double budget_bound) {
    json obs;
    obs["position"] = position;
    if (oracle_exact) obs["oracle_exact"] = *oracle_exact;
    if (oracle_rk4) {
        obs["oracle_rk4"] = *oracle_rk4;
        obs["oracle_rk4_accuracy"] = oracle_accuracy;
    }
    const rvec* ref = oracle_exact ? oracle_exact : oracle_rk4;
    if (ref) {
        double err = 0.0;
        for (std::size_t i = 0; i < position.size(); ++i)
            err = std::max(err, std::abs(position[i] - (*ref)[i]));
        obs["abs_error"] = err;
    }
    obs["budget_bound"] = budget_bound;
    return obs;
}

json run_ode(const json& config, const std::filesystem::path& outdir) {
    const bool kvn = config["subcommand"] == "ode-kvn";
    const Problem& problem = get_problem(get_string(config, "problem", "", true));
    if (problem.kind != "ode") fail("problem", "'" + problem.name + "' is not an ode problem");

    std::string method = get_string(config, "method", "fd");
    const bool fd = method == "fd";
    if (kvn) {
        if (!fd && method != "spectral-sim" && method != "spectral-qlsa-emulated")
            fail("method", "ode-kvn supports fd, spectral-sim, spectral-qlsa-emulated");
    } else {
        if (!fd && method != "nonunitary-split")
            fail("method", "ode-liouville supports fd, nonunitary-split");
    }

    const int d = problem.field.dim;
    const double horizon = get_double(config, "horizon", 0.5);
    const std::uint64_t seed =
        static_cast<std::uint64_t>(get_double(config, "seed", 0.0));

    if (config.contains("observables")) {
        if (!config["observables"].is_array()) fail("observables", "expected an array");
        for (const auto& name : config["observables"]) {
            if (!name.is_string() || (name != "position" && name != "mass"))
                fail("observables", "supported entries are position, mass");
        }
    }

    ResolvedMesh mesh =
        resolve_mesh_transport(config, d, problem.field.sup_sum(), !fd, horizon);
    GridSpec grid = GridSpec::unit_box(d, mesh.points_per_axis);
    TimeGrid tg = TimeGrid::from_steps(mesh.steps, horizon);
    MollifierSpec moll =
        MollifierSpec::from_cells(mesh.kernel, mesh.support_cells, grid.spacing());

    RealState rho0 = init_liouville(grid, moll, problem.q0);
    RealState psi0 = init_kvn(grid, moll, problem.q0);

    json result;
    result["mesh"] = mesh.to_json();
    result["factors"] = {{"n_L", factor_n_l(rho0)}, {"n_K", factor_n_k(psi0)}};
    result["initial_mass"] = grid_mass(rho0);

    TraceWriter trace;
    trace.header = "step,time,l2_norm,l1_norm,mass";
    for (int ax = 0; ax < d; ++ax) trace.header += ",position_" + std::to_string(ax);

    rvec l2_trace;
    rvec final_position;
    double final_mass = 0.0;
    std::vector<std::pair<int, double>> moment_trace;  // (step, <x_0>)

    auto record_real = [&](int n, const RealState& w) {
        rvec pos = recover_ode_solution(w);
        l2_trace.push_back(l2_norm(w.values));
        std::string line = std::to_string(n) + "," + fmt17(n * tg.dt) + "," +
                           fmt17(l2_norm(w.values)) + "," + fmt17(l1_norm(w.values)) +
                           "," + fmt17(grid_mass(w));
        for (double v : pos) line += "," + fmt17(v);
        trace.rows.push_back(line);
        moment_trace.emplace_back(n, pos[0]);
        final_position = pos;
        final_mass = grid_mass(w);
    };
    auto record_kvn_state = [&](int n, const ComplexState& u) {
        RealState sq(grid);
        for (std::size_t k = 0; k < u.values.size(); ++k)
            sq.values[k] = std::norm(u.values[k]);
        rvec pos = recover_ode_solution(sq);
        l2_trace.push_back(l2_norm(u.values));
        std::string line = std::to_string(n) + "," + fmt17(n * tg.dt) + "," +
                           fmt17(l2_norm(u.values)) + "," + fmt17(l1_norm(u.values)) +
                           "," + fmt17(grid_mass(sq));
        for (double v : pos) line += "," + fmt17(v);
        trace.rows.push_back(line);
        moment_trace.emplace_back(n, pos[0]);
        final_position = pos;
        final_mass = grid_mass(sq);
    };

    RealState w(grid);
    ComplexState u(grid);
    bool complex_path = false;

    if (fd) {
        UpwindScheme scheme = kvn ? assemble_kvn(grid, tg, problem.field)
                                  : assemble_liouville(grid, tg, problem.field);
        result["cfl"] = {{"lambda", scheme.lambda},
                         {"speed_sum", scheme.cfl.sup_sum},
                         {"margin", scheme.cfl.margin}};
        w = kvn ? psi0 : rho0;
        if (kvn) {
            // |psi|^2 observables use the squared state
            RealState sq(grid);
            for (std::size_t k = 0; k < w.values.size(); ++k)
                sq.values[k] = w.values[k] * w.values[k];
            record_real(0, sq);
        } else {
            record_real(0, w);
        }
        for (int n = 1; n <= tg.steps; ++n) {
            w = step(scheme, w);
            if (!all_finite(w.values))
                throw DivergenceError("transport state became non-finite");
            if (kvn) {
                RealState sq(grid);
                for (std::size_t k = 0; k < w.values.size(); ++k)
                    sq.values[k] = w.values[k] * w.values[k];
                record_real(n, sq);
                l2_trace.back() = l2_norm(w.values);
            } else {
                record_real(n, w);
            }
        }

        if (config.value("diagnostics", true)) {
            BlockSystem sys = build_block_system(scheme, kvn ? psi0 : rho0,
                                                 config.value("dilate", false));
            ConditionDiagnostics diag = condition_diagnostics(sys);
            json jd;
            jd["computed"] = diag.computed;
            if (diag.computed) {
                jd["kappa_est"] = diag.kappa_est;
                jd["kappa_bound"] = diag.kappa_bound;
                jd["sigma_max"] = diag.sigma_max;
                jd["norm_B_est"] = diag.norm_B_est;
                jd["norm_B_bound"] = diag.norm_B_bound;
            } else {
                jd["note"] = diag.note;
            }
            jd["max_row_nnz"] = diag.max_row_nnz;
            jd["sparsity_bound"] = 2 * d + 1;
            result["diagnostics"] = jd;
        }
        if (config.value("export_matrix", false)) {
            std::ofstream os(outdir / "matrix.txt", std::ios::binary);
            scheme.matrix.export_triplets(os);
            result["matrix_export"] = "matrix.txt";
        }
    } else if (method == "nonunitary-split") {
        SplitPlan plan = SplitPlan::liouville_nonunitary(
            grid, problem.field, tg.dt, get_double(config, "alpha", 1.0));
        ComplexState init(grid);
        for (std::size_t k = 0; k < rho0.values.size(); ++k)
            init.values[k] = rho0.values[k];
        record_real(0, rho0);
        EvolveOptions opts;
        EvolveResult ev = plan.evolve(init, tg.steps, opts);
        u = ev.state;
        complex_path = true;
        double max_imag = 0.0;
        RealState re(grid);
        for (std::size_t k = 0; k < u.values.size(); ++k) {
            re.values[k] = u.values[k].real();
            max_imag = std::max(max_imag, std::abs(u.values[k].imag()));
        }
        record_real(tg.steps, re);
        result["max_imaginary_residue"] = max_imag;
        resources::CopyCostReport copies = resources::copy_cost(ev.ledger);
        result["copy_cost"] = {{"cumulative", copies.cumulative},
                               {"per_step_factor", copies.per_step_factor},
                               {"steps", copies.steps}};
    } else if (method == "spectral-sim") {
        SplitPlan plan = SplitPlan::kvn_trotter(grid, problem.field, tg.dt);
        ComplexState init(grid);
        for (std::size_t k = 0; k < psi0.values.size(); ++k)
            init.values[k] = psi0.values[k];
        u = init;
        complex_path = true;
        record_kvn_state(0, u);
        for (int n = 1; n <= tg.steps; ++n) {
            plan.step(u.values);
            record_kvn_state(n, u);
        }
    } else {  // spectral-qlsa-emulated: exact evolution of the collocation system
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(grid.total_points(),
                                                    grid.total_points());
        for (int ax = 0; ax < d; ++ax)
            h += build_kvn_hamiltonian(grid, problem.field, ax).matrix();
        HermitianGenerator gen = HermitianGenerator::dense(std::move(h));
        ComplexState init(grid);
        for (std::size_t k = 0; k < psi0.values.size(); ++k)
            init.values[k] = psi0.values[k];
        record_kvn_state(0, init);
        u.values = gen.expm_apply(horizon, init.values);
        complex_path = true;
        record_kvn_state(tg.steps, u);
        result["generator_hermiticity"] = gen.hermiticity_certificate();
    }

    result["g_decay"] = decay_factor(l2_trace);
    result["final_mass"] = final_mass;

    // Reference solution and error budget.
    rvec exact, rk4v;
    double rk4_acc = 0.0;
    const rvec* exact_ptr = nullptr;
    const rvec* rk4_ptr = nullptr;
    if (problem.exact_trajectory) {
        exact = problem.exact_trajectory(horizon);
        exact_ptr = &exact;
    }
    oracle::TrajectoryResult traj = oracle::rk4(problem.field, problem.q0, horizon, 1e-3);
    rk4v = traj.states.back();
    rk4_acc = traj.accuracy_estimate;
    rk4_ptr = &rk4v;
    double budget = mesh.omega * std::exp(horizon * problem.field.div_sup) +
                    d * mesh.dx / (mesh.omega * mesh.omega);
    result["observables"] =
        observable_block(final_position, exact_ptr, rk4_ptr, rk4_acc, budget);

    // Per-step observable trace with its reference value and error budget.
    oracle::TrajectoryResult aligned =
        oracle::rk4(problem.field, problem.q0, horizon, tg.dt);
    std::string obs_csv = "time,value,exact_oracle,budget_bound\n";
    for (const auto& [n, value] : moment_trace) {
        double t = n * tg.dt;
        double ref = problem.exact_trajectory ? problem.exact_trajectory(t)[0]
                                              : aligned.states[n][0];
        double bt = mesh.omega * std::exp(t * problem.field.div_sup) +
                    d * mesh.dx / (mesh.omega * mesh.omega);
        obs_csv += fmt17(t) + "," + fmt17(value) + "," + fmt17(ref) + "," +
                   fmt17(bt) + "\n";
    }
    write_text(outdir / "observable_trace.csv", obs_csv);

    // Statistical estimation of the first position moment.
    if (config.contains("sampling")) {
        const json& sj = config["sampling"];
        double eps = get_double(sj, "eps", 0.05);
        double conf = get_double(sj, "confidence", 0.9);
        ObservableSpec spec = ObservableSpec::coordinate(0);
        json sampling;
        if (kvn || complex_path) {
            cvec psi = complex_path ? u.values
                                    : cvec(w.values.begin(), w.values.end());
            rvec values = observable_values(spec, grid);
            double var = diagonal_variance(psi, values);
            SamplingPlan plan = SamplingPlan::make(eps, conf, var, seed);
            plan.factor_name = "n_K^4";
            plan.factor_value = std::pow(factor_n_k(psi0), 4.0);
            BornResult res = born_sample_diagonal(psi, values, plan);
            sampling["mode"] = "diagonal";
            sampling["exact"] = diagonal_expectation(psi, values);
            sampling["empirical_mean"] = res.empirical_mean;
            sampling["n_samples"] = res.n_used;
            sampling["variance"] = var;
            sampling["factor"] = plan.factor_name;
            sampling["factor_value"] = plan.factor_value;
            sampling["within_eps"] =
                std::abs(res.empirical_mean - sampling["exact"].get<double>()) < eps;
        } else {
            rvec gj = observable_values(spec, grid);
            cvec gstate(gj.begin(), gj.end());
            cvec wstate(w.values.begin(), w.values.end());
            double n_psi = l2_norm(w.values) /
                           std::pow(static_cast<double>(mesh.points_per_axis), d / 2.0);
            double n_g = observable_vector_norm(spec, grid);
            double upsilon_exact = 0.0;
            {
                double dot = 0.0;
                for (std::size_t k = 0; k < gj.size(); ++k) dot += gj[k] * w.values[k];
                double denom = l2_norm(w.values) * l2_norm(gj);
                upsilon_exact = denom > 0.0 ? (dot / denom) * (dot / denom) : 0.0;
            }
            SamplingPlan plan =
                SamplingPlan::make(eps, conf, upsilon_exact * (1.0 - upsilon_exact), seed);
            plan.factor_name = "n_L^4";
            plan.factor_value = std::pow(factor_n_l(rho0), 4.0);
            BornResult res = born_sample_rank_one(wstate, gstate, plan);
            double reconstructed = n_psi * n_g * std::sqrt(std::max(res.empirical_mean, 0.0));
            double exact_obs = expect_liouville(w, spec);
            sampling["mode"] = "rank_one";
            sampling["upsilon_exact"] = upsilon_exact;
            sampling["upsilon_empirical"] = res.empirical_mean;
            sampling["reconstructed"] = reconstructed;
            sampling["exact"] = exact_obs;
            sampling["n_samples"] = res.n_used;
            sampling["factor"] = plan.factor_name;
            sampling["factor_value"] = plan.factor_value;
            sampling["within_eps"] = std::abs(reconstructed - exact_obs) < eps;
        }
        result["sampling"] = sampling;
    }

    if (mesh.target_eps > 0.0) {
        std::string row = kvn ? "kvn_rep" : "liouville_rep";
        json estimates = json::array();
        for (const auto& entry : resources::registry()) {
            if (entry.row != row || !entry.in_summary_table) continue;
            resources::EvalFactors factors;
            factors.n_l4 = std::pow(factor_n_l(rho0), 4.0);
            factors.n_k4 = std::pow(factor_n_k(psi0), 4.0);
            estimates.push_back(
                {{"id", entry.id},
                 {"value", resources::evaluate(entry, d, mesh.target_eps,
                                               std::numeric_limits<double>::infinity(),
                                               factors)},
                 {"note", entry.note}});
        }
        result["resources"] = estimates;
    }

    write_text(outdir / "trace.csv", trace.text());
    result["artifacts"] = {"trace.csv", "observable_trace.csv", "result.json"};
    return result;
}

json run_hje(const json& config, const std::filesystem::path& outdir) {
    const Problem& problem = get_problem(get_string(config, "problem", "", true));
    if (problem.kind != "hje") fail("problem", "'" + problem.name + "' is not an hje problem");

    std::string method = get_string(config, "method", "fd");
    if (method != "fd" && method != "spectral-sim")
        fail("method", "hje supports fd, spectral-sim");

    const int d = 1;
    const double horizon = get_double(config, "horizon", 0.2);
    HamiltonianField ham = kinetic_plus_potential(
        d, problem.grad_v, problem.grad_v.operator bool() ? problem.grad_v_sup : rvec{});

    ResolvedMesh mesh = resolve_mesh_transport(config, d, ham.sup_sum(),
                                               method != "fd", horizon);
    GridSpec grid = GridSpec::phase_space(d, mesh.points_per_axis);
    TimeGrid tg = TimeGrid::from_steps(mesh.steps, horizon);
    MollifierSpec moll =
        MollifierSpec::from_cells(mesh.kernel, mesh.support_cells, grid.spacing());

    auto u0 = [&problem](std::span<const double> x, std::span<double> out) {
        out[0] = problem.u0(x[0]);
    };
    RealState w0 = init_levelset(grid, moll, u0);

    json result;
    result["mesh"] = mesh.to_json();
    result["factors"] = {{"n_H", factor_n_h(w0)}};

    TraceWriter trace;
    trace.header = "step,time,l2_norm,l1_norm,mass";
    rvec l2_trace;
    RealState w = w0;

    auto record = [&](int n, const RealState& state) {
        l2_trace.push_back(l2_norm(state.values));
        trace.row({l2_norm(state.values), l1_norm(state.values), grid_mass(state)}, n,
                  n * tg.dt);
    };

    if (method == "fd") {
        UpwindScheme scheme = assemble_hje(grid, tg, ham);
        result["cfl"] = {{"lambda", scheme.lambda},
                         {"speed_sum", scheme.cfl.sup_sum},
                         {"margin", scheme.cfl.margin}};
        record(0, w);
        for (int n = 1; n <= tg.steps; ++n) {
            w = step(scheme, w);
            if (!all_finite(w.values))
                throw DivergenceError("phase-space state became non-finite");
            record(n, w);
        }
        if (config.value("export_matrix", false)) {
            std::ofstream os(outdir / "matrix.txt", std::ios::binary);
            scheme.matrix.export_triplets(os);
            result["matrix_export"] = "matrix.txt";
        }
    } else {
        SplitPlan plan = SplitPlan::liouville_phase(grid, problem.grad_v, tg.dt);
        ComplexState cw(grid);
        for (std::size_t k = 0; k < w.values.size(); ++k) cw.values[k] = w.values[k];
        EvolveOptions opts;
        EvolveResult ev = plan.evolve(cw, tg.steps, opts);
        double max_imag = 0.0;
        for (std::size_t k = 0; k < w.values.size(); ++k) {
            w.values[k] = ev.state.values[k].real();
            max_imag = std::max(max_imag, std::abs(ev.state.values[k].imag()));
        }
        result["max_imaginary_residue"] = max_imag;
        record(tg.steps, w);
    }
    result["g_decay"] = decay_factor(l2_trace);

    // Momentum-axis observables per position node.
    rvec density = expect_hje(w, ObservableSpec::momentum_density());
    rvec momentum = expect_hje(w, ObservableSpec::momentum_coordinate(0));
    rvec kinetic = expect_hje(w, ObservableSpec::kinetic_energy());
    rvec velocity = recover_velocity_hje(w);

    rvec oracle_u;
    bool have_oracle = false;
    if (problem.exact_velocity) {
        oracle_u.resize(velocity.size());
        for (std::size_t i = 0; i < velocity.size(); ++i)
            oracle_u[i] = problem.exact_velocity(horizon, grid.node(static_cast<int>(i)));
        have_oracle = true;
    } else if (problem.burgers_oracle) {
        oracle_u.resize(velocity.size());
        for (std::size_t i = 0; i < velocity.size(); ++i)
            oracle_u[i] = oracle::burgers_characteristics(
                problem.u0, horizon, grid.node(static_cast<int>(i)));
        have_oracle = true;
    }

    std::string obs_csv = "x,density,momentum,kinetic,velocity";
    if (have_oracle) obs_csv += ",oracle_velocity";
    obs_csv += "\n";
    double max_err = 0.0;
    for (std::size_t i = 0; i < velocity.size(); ++i) {
        obs_csv += fmt17(grid.node(static_cast<int>(i))) + "," + fmt17(density[i]) +
                   "," + fmt17(momentum[i]) + "," + fmt17(kinetic[i]) + "," +
                   fmt17(velocity[i]);
        if (have_oracle) {
            obs_csv += "," + fmt17(oracle_u[i]);
            max_err = std::max(max_err, std::abs(velocity[i] - oracle_u[i]));
        }
        obs_csv += "\n";
    }
    write_text(outdir / "observables.csv", obs_csv);

    json obs;
    obs["velocity_max_error"] = have_oracle ? json(max_err) : json();
    obs["budget_bound"] =
        mesh.omega + d * mesh.dx / (mesh.omega * mesh.omega);
    result["observables"] = obs;
    write_text(outdir / "trace.csv", trace.text());
    result["artifacts"] = {"trace.csv", "observables.csv", "result.json"};
    return result;
}

json run_schrodinger(const json& config, const std::filesystem::path& outdir) {
    const Problem& problem = get_problem(get_string(config, "problem", "", true));
    if (problem.kind != "schrodinger")
        fail("problem", "'" + problem.name + "' is not a schrodinger problem");
    std::string method = get_string(config, "method", "splitting");
    if (method != "splitting") fail("method", "schrodinger supports splitting");

    const double horizon = get_double(config, "horizon", 0.54);
    if (!config.contains("mesh")) fail("mesh", "missing");
    const json& mesh_cfg = config["mesh"];

    ResolvedMesh mesh;
    if (mesh_cfg.contains("target_eps")) {
        double eps = get_double(mesh_cfg, "target_eps", 0.0, true);
        std::string purpose = get_string(mesh_cfg, "purpose", "observable");
        MeshStrategy strategy = mesh_for_schrodinger(
            eps, 1, get_ell(mesh_cfg, "ell"),
            purpose == "wavefunction" ? SchrodingerMeshPurpose::Wavefunction
                                      : SchrodingerMeshPurpose::Observable);
        mesh.points_per_axis = strategy.points_per_axis;
        mesh.dx = strategy.dx;
        mesh.hbar = strategy.hbar;
        mesh.target_eps = eps;
        tile_horizon(mesh, strategy.dt, horizon);
    } else {
        mesh.points_per_axis = get_int(mesh_cfg, "points_per_axis", 0, true);
        mesh.dx = 1.0 / mesh.points_per_axis;
        mesh.hbar = get_double(mesh_cfg, "hbar", problem.default_hbar);
        double dt_target = get_double(mesh_cfg, "dt", horizon / 100.0);
        tile_horizon(mesh, dt_target, horizon);
    }
    if (!(mesh.hbar > 0.0)) fail("mesh.hbar", "must be positive");

    GridSpec grid = GridSpec::unit_box(1, mesh.points_per_axis);
    ComplexState u0 = init_wkb(grid, problem.a0, problem.s0, mesh.hbar);

    SplitOrder order = get_string(config, "order", "lie") == "strang"
                           ? SplitOrder::Strang
                           : SplitOrder::Lie;
    SplitPlan plan = SplitPlan::schrodinger(grid, problem.v, mesh.hbar, mesh.dt, order);
    EvolveOptions opts;
    opts.record_trace = true;
    EvolveResult ev = plan.evolve(u0, mesh.steps, opts);

    TraceWriter trace;
    trace.header = "step,time,l2_norm,l1_norm,mass,ledger_cumulative";
    for (const auto& rec : ev.trace)
        trace.row({rec.l2_norm, rec.l1_norm, rec.mass, rec.ledger_cumulative},
                  rec.step, rec.time);
    write_text(outdir / "trace.csv", trace.text());

    rvec rho = schrodinger_density(ev.state);
    std::string density_csv = "x,rho\n";
    for (std::size_t i = 0; i < rho.size(); ++i)
        density_csv += fmt17(grid.node(static_cast<int>(i))) + "," + fmt17(rho[i]) + "\n";
    write_text(outdir / "density.csv", density_csv);

    int maxima = 0;
    const int m = mesh.points_per_axis;
    double peak = linf_norm(rho);
    for (int i = 0; i < m; ++i) {
        double left = rho[(i + m - 1) % m], right = rho[(i + 1) % m];
        if (rho[i] > left && rho[i] > right && rho[i] > 1e-8 * peak) ++maxima;
    }

    json result;
    result["mesh"] = mesh.to_json();
    result["factors"] = {{"N_u0", factor_n_u0(u0)}};
    result["mass_initial"] = ev.trace.front().mass;
    result["mass_final"] = ev.trace.back().mass;
    result["mass_drift"] =
        std::abs(ev.trace.back().mass - ev.trace.front().mass);
    result["density_local_maxima"] = maxima;
    std::size_t mid = static_cast<std::size_t>(m / 2);
    result["observables"] = {
        {"density_mid", schrodinger_observable(ev.state, mesh.hbar,
                                               SchrodingerObservable::Density, mid)},
        {"current_mid", schrodinger_observable(ev.state, mesh.hbar,
                                               SchrodingerObservable::Current, mid)},
        {"energy_mid", schrodinger_observable(ev.state, mesh.hbar,
                                              SchrodingerObservable::Energy, mid)}};

    if (mesh.target_eps > 0.0) {
        json estimates = json::array();
        resources::EvalFactors factors;
        factors.n_u04 = std::pow(factor_n_u0(u0), 4.0);
        for (const auto& entry : resources::registry()) {
            if (entry.row != "schrodinger" || !entry.in_summary_table) continue;
            estimates.push_back(
                {{"id", entry.id},
                 {"value", resources::evaluate(entry, 1, mesh.target_eps,
                                               std::numeric_limits<double>::infinity(),
                                               factors)},
                 {"note", entry.note}});
        }
        result["resources"] = estimates;
    }
    result["artifacts"] = {"trace.csv", "density.csv", "result.json"};
    return result;
}

json run_resources(const json& config, const std::filesystem::path& outdir) {
    std::vector<double> dims = {1, 2, 4};
    std::vector<double> epsilons = {0.1, 0.01, 0.001};
    if (config.contains("dims")) dims = config["dims"].get<std::vector<double>>();
    if (config.contains("epsilons"))
        epsilons = config["epsilons"].get<std::vector<double>>();
    double ell = get_ell(config, "ell");
    resources::EvalFactors factors;
    factors.alpha = get_double(config, "alpha", 4.0);

    std::vector<resources::ComplexityEntry> entries;
    for (const auto& e : resources::registry())
        if (e.in_summary_table) entries.push_back(e);

    resources::CompareTable table =
        resources::compare_table(entries, dims, epsilons, ell, factors);
    write_text(outdir / "resources.md", resources::to_markdown(table));
    write_text(outdir / "resources.csv", resources::to_csv(table));

    json result;
    result["alpha"] = factors.alpha;
    result["ell"] = std::isinf(ell) ? json("inf") : json(ell);
    result["entries"] = table.entry_ids;
    result["simulation_dominates_at_small_eps"] =
        table.simulation_dominates_at_small_eps;
    json cells = json::array();
    for (const auto& cell : table.cells)
        cells.push_back({{"d", cell.d},
                         {"eps", cell.eps},
                         {"values", cell.values},
                         {"cheapest", cell.cheapest_id}});
    result["cells"] = cells;
    json anchors = json::array();
    for (const auto& e : entries)
        anchors.push_back({{"id", e.id}, {"note", e.note}});
    result["entry_notes"] = anchors;
    result["artifacts"] = {"resources.md", "resources.csv", "result.json"};
    return result;
}

} // namespace

RunArtifacts run(const json& config) {
    if (!config.is_object()) throw ValidationError("config must be a JSON object");
    std::string sub = get_string(config, "subcommand", "", true);

    std::filesystem::path outdir = resolve_output_dir(config);
    json result;
    result["subcommand"] = sub;
    result["resolved_config"] = config;
    result["config_hash"] = fnv1a_hex(config.dump());

    json body;
    if (sub == "ode-liouville" || sub == "ode-kvn") body = run_ode(config, outdir);
    else if (sub == "hje") body = run_hje(config, outdir);
    else if (sub == "schrodinger") body = run_schrodinger(config, outdir);
    else if (sub == "resources") body = run_resources(config, outdir);
    else fail("subcommand", "expected ode-liouville, ode-kvn, hje, schrodinger or resources");

    for (auto& [key, value] : body.items()) result[key] = value;

    RunArtifacts artifacts;
    artifacts.result = result;
    artifacts.output_dir = outdir;
    artifacts.result_path = outdir / "result.json";
    write_text(artifacts.result_path, result.dump(2) + "\n");
    return artifacts;
}

json load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config file " + path.string());
    json config;
    try {
        config = json::parse(is);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return config;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const BudgetError*>(&e)) return 3;
    if (dynamic_cast<const DivergenceError*>(&e)) return 4;
    if (dynamic_cast<const InternalError*>(&e)) return 1;
    if (dynamic_cast<const ValidationError*>(&e)) return 2;
    if (dynamic_cast<const Error*>(&e)) return 2;
    return 1;
}

} // namespace linrep::cli
