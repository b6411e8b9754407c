// Acceptance suite: every check below guards one release criterion and prints
// a single PASS/FAIL line. The binary exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "linrep/observables.hpp"
#include "linrep/oracle.hpp"
#include "linrep/problems.hpp"
#include "linrep/resources.hpp"
#include "linrep/runner.hpp"
#include "linrep/splitting.hpp"
#include "linrep/upwind.hpp"
#include "test_util.hpp"

using namespace linrep;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%2d] %s  %s (%s)\n", index, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_l1_contraction() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst_growth = 0.0, worst_colsum = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        int d = trial % 2 == 0 ? 1 : 2;
        int m = d == 1 ? 64 : 32;
        FlowField field = testutil::random_smooth_field(d, rng);
        GridSpec g = GridSpec::unit_box(d, m);
        double dt = 0.9 * g.spacing() / std::max(field.sup_sum(), 0.02);
        TimeGrid tg = TimeGrid::from_steps(
            std::max(1, static_cast<int>(std::ceil(0.25 / dt))), 0.25);
        UpwindScheme scheme = assemble_liouville(g, tg, field);

        for (double s : scheme.matrix.column_sums())
            worst_colsum = std::max(worst_colsum, std::abs(s - 1.0));

        RealState w(g);
        for (double& v : w.values) v = rng.uniform(-1.0, 1.0);
        RealState bw = step(scheme, w);
        worst_growth =
            std::max(worst_growth, l1_norm(bw.values) - l1_norm(w.values));
    }
    double elapsed = seconds_since(t0);
    ok = worst_growth <= 1e-12 && worst_colsum <= 1e-12 && elapsed < 10.0;
    report(1, ok, "l1 contraction and column conservation of the transport matrix",
           "50 fields, growth " + fmt(worst_growth) + ", colsum dev " +
               fmt(worst_colsum) + ", " + fmt(elapsed) + " s");
}

void criterion_2_kvn_growth() {
    Rng rng(103);
    bool ok = true;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        FlowField field = testutil::random_smooth_field(1, rng, 0.25);
        GridSpec g = GridSpec::unit_box(1, 64);
        double dt = 0.8 * g.spacing() / std::max(field.sup_sum(), 0.02);
        TimeGrid tg = TimeGrid::from_steps(100, 100 * dt);
        UpwindScheme scheme = assemble_kvn(g, tg, field);

        RealState w(g);
        for (double& v : w.values) v = std::abs(rng.uniform(0.1, 1.0));
        double initial = l1_norm(w.values);
        for (int n = 1; n <= 100; ++n) {
            w = step(scheme, w);
            double bound = std::exp(n * tg.dt * field.div_sup) * initial * (1.0 + 1e-10);
            double ratio = l1_norm(w.values) / bound;
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > 1.0) ok = false;
        }
    }
    report(2, ok, "square-root scheme growth stays under exp(t |div F|)",
           "10 fields x 100 steps, worst norm/bound " + fmt(worst_ratio));
}

void criterion_3_unitarity() {
    double worst = 0.0;

    {  // per-axis Hermitian factors
        Rng rng(107);
        GridSpec g = GridSpec::unit_box(2, 8);
        FlowField field = testutil::random_smooth_field(2, rng, 0.4);
        SplitPlan plan = SplitPlan::kvn_trotter(g, field, 0.01);
        cvec u(g.total_points());
        for (auto& x : u) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        double n0 = l2_norm(u);
        for (int n = 0; n < 1000; ++n) plan.step(u);
        worst = std::max(worst, std::abs(l2_norm(u) - n0) / n0);
    }
    {  // phase-space two-stage splitting
        GridSpec g = GridSpec::phase_space(1, 8);
        SplitPlan plan = SplitPlan::liouville_phase(
            g, [](std::span<const double> x, int) { return std::cos(kTwoPi * x[0]); },
            0.01);
        Rng rng(109);
        cvec u(g.total_points());
        for (auto& x : u) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        double n0 = l2_norm(u);
        for (int n = 0; n < 1000; ++n) plan.step(u);
        worst = std::max(worst, std::abs(l2_norm(u) - n0) / n0);
    }
    {  // split-step wave propagator
        GridSpec g = GridSpec::unit_box(1, 16);
        SplitPlan plan = SplitPlan::schrodinger(
            g, [](std::span<const double> x) { return 1.0 + std::cos(kTwoPi * x[0]); },
            0.3, 0.01);
        Rng rng(113);
        cvec u(g.total_points());
        for (auto& x : u) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        double n0 = l2_norm(u);
        for (int n = 0; n < 1000; ++n) plan.step(u);
        worst = std::max(worst, std::abs(l2_norm(u) - n0) / n0);
    }
    report(3, worst <= 1e-10, "spectral propagators preserve the l2 norm",
           "1000 steps each, worst relative drift " + fmt(worst));
}

void criterion_4_square_consistency() {
    const Problem& rotation = get_problem("rotation");
    const double horizon = 0.25;
    const int support = 3;  // omega = 3/16 on every grid in the ladder

    rvec dxs, diffs;
    bool within_budget = true;
    for (int m : {16, 32, 64}) {
        GridSpec g = GridSpec::unit_box(2, m);
        int cells = support * m / 16;
        MollifierSpec spec = MollifierSpec::from_cells(MollifierKind::Hat, cells,
                                                       g.spacing());
        RealState rho = init_liouville(g, spec, rotation.q0);
        RealState psi = init_kvn(g, spec, rotation.q0);

        double dt = 0.5 * g.spacing();  // speed sum is 1 for the rotation field
        TimeGrid tg = TimeGrid::from_steps(static_cast<int>(std::ceil(horizon / dt)),
                                           horizon);
        UpwindScheme lio = assemble_liouville(g, tg, rotation.field);
        UpwindScheme kvn = assemble_kvn(g, tg, rotation.field);
        for (int n = 0; n < tg.steps; ++n) {
            rho = step(lio, rho);
            psi = step(kvn, psi);
        }
        ObservableSpec xobs = ObservableSpec::coordinate(0);
        double a = expect_liouville(rho, xobs);
        double b = expect_kvn(psi, xobs);
        double omega = cells * g.spacing();
        double budget = 2.0 * (omega + 2.0 * g.spacing() / (omega * omega));
        if (std::abs(a - b) > budget) within_budget = false;
        dxs.push_back(g.spacing());
        diffs.push_back(std::abs(a - b));
    }
    double slope = testutil::fit_loglog_slope(dxs, diffs);
    bool ok = within_budget && slope >= 0.8;
    report(4, ok, "transport and square-root pipelines agree on a rotation field",
           "slope " + fmt(slope) + ", diffs " + fmt(diffs[0]) + " -> " + fmt(diffs[2]));
}

void criterion_5_ode_recovery() {
    auto t0 = std::chrono::steady_clock::now();
    const Problem& problem = get_problem("linear-decay");
    const double horizon = 0.5;
    double exact = problem.exact_trajectory(horizon)[0];

    rvec dxs, errs;
    double final_error = 0.0;
    for (int m : {256, 512, 1024, 2048, 4096}) {
        GridSpec g = GridSpec::unit_box(1, m);
        int cells = static_cast<int>(std::ceil(std::cbrt(g.spacing()) / g.spacing()));
        MollifierSpec spec = MollifierSpec::from_cells(MollifierKind::Hat, cells,
                                                       g.spacing());
        RealState w = init_liouville(g, spec, problem.q0);
        TimeGrid tg = TimeGrid::from_steps(static_cast<int>(horizon * m), horizon);
        UpwindScheme scheme = assemble_liouville(g, tg, problem.field);
        for (int n = 0; n < tg.steps; ++n) w = step(scheme, w);
        double mean = expect_liouville(w, ObservableSpec::coordinate(0));
        dxs.push_back(g.spacing());
        errs.push_back(std::abs(mean - exact));
        final_error = errs.back();
    }
    double slope = testutil::fit_loglog_slope(dxs, errs);
    double elapsed = seconds_since(t0);
    bool decreasing = true;
    for (std::size_t i = 1; i < errs.size(); ++i)
        if (errs[i] >= errs[i - 1]) decreasing = false;
    bool budgeted = true;
    for (std::size_t i = 0; i < errs.size(); ++i)
        if (errs[i] > std::cbrt(dxs[i])) budgeted = false;
    bool slope_in_window = slope >= 0.25 && slope <= 0.45;
    bool ok = decreasing && budgeted && slope_in_window && final_error < 0.02 &&
              elapsed < 60.0;
    std::string note = "slope " + fmt(slope) + ", error at M=4096 " +
                       fmt(final_error) + ", " + fmt(elapsed) + " s";
    if (!slope_in_window && decreasing && budgeted && final_error < 0.02)
        note += "; error sits far below the cube-root budget: the symmetric kernel "
                "makes the first moment superconverge, so the stated slope window "
                "cannot be met";
    report(5, ok, "moment recovery converges at the cube-root mesh rate", note);
}

void criterion_6_product_formula_orders() {
    // first-order splitting against the exact phase-space generator
    GridSpec g = GridSpec::phase_space(1, 8);
    auto grad = [](std::span<const double> x, int) { return std::cos(kTwoPi * x[0]); };
    HermitianGenerator gen = build_liouville_phase_generator(g, grad);
    Rng rng(127);
    cvec u(g.total_points());
    for (auto& x : u) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double n0 = l2_norm(u);
    for (auto& x : u) x /= n0;

    const double horizon = 0.5;
    cvec exact = expm_apply(gen, horizon, u);
    rvec dts, errs;
    for (int steps : {8, 16, 32}) {
        SplitPlan plan = SplitPlan::liouville_phase(g, grad, horizon / steps);
        cvec v = u;
        for (int n = 0; n < steps; ++n) plan.step(v);
        double err = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) err += std::norm(v[k] - exact[k]);
        dts.push_back(horizon / steps);
        errs.push_back(std::sqrt(err));
    }
    double lie_slope = testutil::fit_loglog_slope(dts, errs);

    // symmetric sandwich of the shifted factors against the raw transport factor
    GridSpec g1 = GridSpec::unit_box(1, 8);
    FlowField f;
    f.dim = 1;
    f.component = [](std::span<const double> x, int) {
        return 1.0 + 0.5 * std::sin(kTwoPi * x[0]);
    };
    f.sup_per_axis = {1.5};
    AsymGenerator asym = build_asym_generator(g1, f, 0);
    cvec w(8);
    for (auto& x : w) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double wn = l2_norm(w);
    for (auto& x : w) x /= wn;

    Eigen::MatrixXcd exact_u =
        testutil::expm_taylor(cplx(0.0, -horizon) * asym.a);
    Eigen::Map<const Eigen::VectorXcd> wv(w.data(), 8);
    Eigen::VectorXcd w_exact = exact_u * wv;

    rvec dts2, errs2;
    for (int steps : {64, 128, 256}) {  // dt ||A|| below one half: asymptotic regime
        SplitPlan plan = SplitPlan::liouville_nonunitary(g1, f, horizon / steps);
        cvec v = w;
        for (int n = 0; n < steps; ++n) plan.step(v);
        double err = 0.0;
        for (int k = 0; k < 8; ++k) err += std::norm(v[k] - w_exact(k));
        dts2.push_back(horizon / steps);
        errs2.push_back(std::sqrt(err));
    }
    double strang_slope = testutil::fit_loglog_slope(dts2, errs2);

    bool ok = std::abs(lie_slope - 1.0) <= 0.2 && std::abs(strang_slope - 2.0) <= 0.2;
    report(6, ok, "product-formula error orders",
           "first-order slope " + fmt(lie_slope) + ", sandwich slope " +
               fmt(strang_slope));
}

void criterion_7_condition_bound() {
    FlowField field;
    field.dim = 1;
    field.component = [](std::span<const double> x, int) {
        return std::sin(kTwoPi * x[0]) / kTwoPi;
    };
    field.sup_per_axis = {1.0 / kTwoPi};
    field.div_sup = 1.0;
    field.divergence = [](std::span<const double> x) { return std::cos(kTwoPi * x[0]); };

    GridSpec g = GridSpec::unit_box(1, 16);
    MollifierSpec spec = MollifierSpec::from_cells(MollifierKind::Hat, 3, g.spacing());
    RealState w0 = init_liouville(g, spec, rvec{0.5});

    bool ok = true;
    rvec kappa_dt;
    double worst_b = 0.0;
    for (int steps : {8, 16, 32}) {
        TimeGrid tg = TimeGrid::from_steps(steps, 0.5);
        UpwindScheme scheme = assemble_liouville(g, tg, field);
        BlockSystem sys = build_block_system(scheme, w0);
        ConditionDiagnostics diag = condition_diagnostics(sys);
        if (!diag.computed) ok = false;
        if (diag.norm_B_est > diag.norm_B_bound * (1.0 + 1e-9)) ok = false;
        if (diag.kappa_est > diag.kappa_bound * (1.0 + 1e-9)) ok = false;
        worst_b = std::max(worst_b, diag.norm_B_est - diag.norm_B_bound);
        kappa_dt.push_back(diag.kappa_est * tg.dt);
    }
    double spread = *std::max_element(kappa_dt.begin(), kappa_dt.end()) /
                    *std::min_element(kappa_dt.begin(), kappa_dt.end());
    ok = ok && spread <= 4.0;
    report(7, ok, "history-system condition number scales as 1/dt within its bound",
           "kappa*dt spread " + fmt(spread) + ", norm slack " + fmt(worst_b));
}

void criterion_8_hje_precaustic() {
    const Problem& problem = get_problem("burgers");
    const double horizon = 0.2;
    HamiltonianField ham = kinetic_plus_potential(1, nullptr, {});

    rvec dxs, errs;
    double worst_c = 0.0;
    for (int m : {64, 128, 256}) {
        GridSpec g = GridSpec::phase_space(1, m);
        int cells = std::max(
            2, static_cast<int>(std::llround(0.5 * std::cbrt(g.spacing()) * m)));
        MollifierSpec spec = MollifierSpec::from_cells(MollifierKind::Hat, cells,
                                                       g.spacing());
        auto u0 = [&problem](std::span<const double> x, std::span<double> out) {
            out[0] = problem.u0(x[0]);
        };
        RealState w = init_levelset(g, spec, u0);
        TimeGrid tg = TimeGrid::from_steps(
            static_cast<int>(std::ceil(2.0 * horizon * m)), horizon);
        UpwindScheme scheme = assemble_hje(g, tg, ham);
        for (int n = 0; n < tg.steps; ++n) w = step(scheme, w);

        rvec velocity = recover_velocity_hje(w);
        double err = 0.0;
        for (int j = 0; j < m; ++j) {
            double ref = oracle::burgers_characteristics(problem.u0, horizon, g.node(j));
            err = std::max(err, std::abs(velocity[j] - ref));
        }
        double omega = cells * g.spacing();
        double budget = omega + g.spacing() / (omega * omega);
        worst_c = std::max(worst_c, err / budget);
        dxs.push_back(g.spacing());
        errs.push_back(err);
    }
    bool shrinking = errs[1] < errs[0] && errs[2] < errs[1];
    bool ok = worst_c <= 10.0 && shrinking;
    report(8, ok, "level-set velocity matches the characteristics fixed point",
           "errors " + fmt(errs[0]) + " -> " + fmt(errs[2]) + ", fitted C " +
               fmt(worst_c));
}

void criterion_9_schrodinger() {
    // free splitting is exact at any step size
    bool free_exact = true;
    {
        GridSpec g = GridSpec::unit_box(1, 32);
        DftPlan plan(32);
        Rng rng(131);
        ComplexState u(g);
        for (auto& x : u.values) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        for (double dt : {0.37, 0.054, 1.3}) {
            SplitPlan split = SplitPlan::schrodinger(g, nullptr, 0.0256, dt);
            cvec stepped = u.values;
            split.step(stepped);
            cvec exact = oracle::free_schrodinger_exact_nodal(u.values, plan, 0.0256, dt);
            for (int j = 0; j < 32; ++j)
                if (std::abs(stepped[j] - exact[j]) > 1e-12) free_exact = false;
        }
    }

    // WKB benchmark: mass conservation and oscillation counts down the ladder
    const Problem& problem = get_problem("wkb-gaussian");
    const double horizon = 0.54;
    struct Rung {
        double hbar;
        int m;
    };
    const std::vector<Rung> ladder = {{0.0256, 16},   {0.0064, 64},
                                      {0.0008, 512},  {0.0001, 4096},
                                      {0.000025, 16384}, {0.0000125, 32768}};
    double mass_drift_first = 0.0;
    std::vector<int> maxima;
    for (const Rung& rung : ladder) {
        GridSpec g = GridSpec::unit_box(1, rung.m);
        ComplexState u0 = init_wkb(g, problem.a0, problem.s0, rung.hbar);
        SplitPlan plan = SplitPlan::schrodinger(g, problem.v, rung.hbar, horizon / 200);
        EvolveOptions opts;
        opts.record_trace = true;
        EvolveResult out = plan.evolve(u0, 200, opts);
        if (rung.m == 16)
            mass_drift_first =
                std::abs(out.trace.back().mass - out.trace.front().mass);
        rvec rho = schrodinger_density(out.state);
        double peak = linf_norm(rho);
        int count = 0;
        for (int j = 0; j < rung.m; ++j) {
            double left = rho[(j + rung.m - 1) % rung.m];
            double right = rho[(j + 1) % rung.m];
            if (rho[j] > left && rho[j] > right && rho[j] > 1e-8 * peak) ++count;
        }
        maxima.push_back(count);
    }
    bool nondecreasing = true;
    for (std::size_t i = 1; i < maxima.size(); ++i)
        if (maxima[i] < maxima[i - 1]) nondecreasing = false;

    std::ostringstream counts;
    for (std::size_t i = 0; i < maxima.size(); ++i)
        counts << (i ? "," : "") << maxima[i];
    bool ok = free_exact && mass_drift_first <= 1e-10 && nondecreasing;
    report(9, ok, "wave benchmark: free exactness, mass conservation, oscillations",
           "mass drift " + fmt(mass_drift_first) + ", maxima " + counts.str());
}

void criterion_10_sampling_law() {
    GridSpec g = GridSpec::unit_box(1, 64);
    MollifierSpec spec = MollifierSpec::from_cells(MollifierKind::Cosine, 8, g.spacing());
    RealState psi = init_kvn(g, spec, rvec{0.59375});
    cvec state(psi.values.begin(), psi.values.end());
    rvec values = observable_values(ObservableSpec::coordinate(0), g);

    const double eps = 0.05, confidence = 0.9;
    double variance = diagonal_variance(state, values);
    double exact = diagonal_expectation(state, values);

    int hits = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        SamplingPlan plan = SamplingPlan::make(eps, confidence, variance, 5000 + t);
        BornResult res = born_sample_diagonal(state, values, plan);
        if (std::abs(res.empirical_mean - exact) < eps) ++hits;
    }
    double fraction = static_cast<double>(hits) / trials;

    // eigenstates need exactly one shot
    cvec eigen(4, cplx(0.0));
    eigen[2] = 1.0;
    rvec vals = {1.0, 2.0, 3.0, 4.0};
    SamplingPlan single = SamplingPlan::make(eps, confidence,
                                             diagonal_variance(eigen, vals), 9);
    BornResult res = born_sample_diagonal(eigen, vals, single);
    bool ok = fraction >= confidence - 0.05 && res.n_used == 1 &&
              res.empirical_mean == 3.0;
    report(10, ok, "statistical sampling law at the planned repetition count",
           "fraction within eps " + fmt(fraction) + " over 200 trials");
}

void criterion_11_registry() {
    using namespace linrep::resources;
    bool ok = true;
    // structural fidelity of all summary cells
    struct Cell {
        const char* id;
        double d0, d1, e0, e1;
        bool alpha;
        FactorSymbol factor;
    };
    const std::vector<Cell> cells = {
        {"liouville_rep.qsim.subroutine", 2, 2, 2, 4, false, FactorSymbol::None},
        {"liouville_rep.qsim.observable", 2, 2, 4, 4, false, FactorSymbol::NL4},
        {"liouville_rep.spectral_qlsa.subroutine", 3, 2, 4, 4, false, FactorSymbol::None},
        {"liouville_rep.spectral_qlsa.observable", 3, 2, 6, 4, false, FactorSymbol::NL4},
        {"liouville_rep.fd_qlsa.subroutine", 0, 0, 3, 0, true, FactorSymbol::None},
        {"liouville_rep.fd_qlsa.observable", 0, 0, 5, 0, true, FactorSymbol::NL4},
        {"kvn_rep.qsim.subroutine", 2, 2, 2, 4, false, FactorSymbol::None},
        {"kvn_rep.qsim.observable", 2, 2, 4, 4, false, FactorSymbol::NK4},
        {"kvn_rep.spectral_qlsa.subroutine", 3, 2, 2, 4, false, FactorSymbol::None},
        {"kvn_rep.spectral_qlsa.observable", 3, 2, 4, 4, false, FactorSymbol::NK4},
        {"kvn_rep.fd_qlsa.subroutine", 0, 0, 3, 0, true, FactorSymbol::None},
        {"kvn_rep.fd_qlsa.observable", 0, 0, 5, 0, true, FactorSymbol::NK4},
        {"liouville_phase.qsim.subroutine", 1, 0, 2, 0, false, FactorSymbol::None},
        {"liouville_phase.qsim.observable", 1, 0, 4, 0, false, FactorSymbol::NH4},
        {"liouville_phase.spectral_qlsa.subroutine", 2, 2, 2, 4, false, FactorSymbol::None},
        {"liouville_phase.spectral_qlsa.observable", 2, 2, 4, 4, false, FactorSymbol::NH4},
        {"liouville_phase.fd_qlsa.subroutine", 0, 0, 3, 0, true, FactorSymbol::None},
        {"liouville_phase.fd_qlsa.observable", 0, 0, 5, 0, true, FactorSymbol::NH4},
        {"schrodinger.qsim.subroutine", 1, 0, 1, 0, false, FactorSymbol::None},
        {"schrodinger.qsim.observable", 1, 0, 3, 0, false, FactorSymbol::NU04CO},
        {"schrodinger.spectral_qlsa.subroutine", 2, 2, 1, 4, false, FactorSymbol::None},
        {"schrodinger.spectral_qlsa.observable", 2, 2, 3, 4, false, FactorSymbol::NU04CO},
    };
    int matched = 0;
    for (const Cell& cell : cells) {
        const ComplexityEntry& e = entry_by_id(cell.id);
        bool match = e.d_exp.use_alpha == cell.alpha && e.factor == cell.factor &&
                     e.eps_exp.c0 == cell.e0 && e.eps_exp.c1 == cell.e1 &&
                     (cell.alpha || (e.d_exp.c0 == cell.d0 && e.d_exp.c1 == cell.d1));
        if (match) ++matched;
        else ok = false;
    }

    // wave simulation beats the phase-space simulation by one accuracy power
    const double inf = std::numeric_limits<double>::infinity();
    const ComplexityEntry& wave = entry_by_id("schrodinger.qsim.subroutine");
    const ComplexityEntry& phase = entry_by_id("liouville_phase.qsim.subroutine");
    double worst_gap = 1.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        double ratio = evaluate(phase, 2, eps, inf) / evaluate(wave, 2, eps, inf);
        double gap = ratio * eps;
        if (gap < 0.25 || gap > 4.0) ok = false;
        worst_gap = gap;
    }
    report(11, ok, "complexity registry matches the summary table",
           std::to_string(matched) + "/22 cells, accuracy gap factor " + fmt(worst_gap));
}

void criterion_12_determinism() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "linrep_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    cli::json config = {{"subcommand", "ode-liouville"},
                        {"problem", "linear-decay"},
                        {"method", "fd"},
                        {"mesh", {{"points_per_axis", 128}, {"support_cells", 6}}},
                        {"horizon", 0.5},
                        {"sampling", {{"eps", 0.05}, {"confidence", 0.9}}},
                        {"seed", 2024},
                        {"output_dir", (dir / "run").string()}};

    auto read_bytes = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(is), {});
    };
    cli::RunArtifacts a = cli::run(config);
    std::string first = read_bytes(a.result_path);
    cli::RunArtifacts b = cli::run(config);
    std::string second = read_bytes(b.result_path);

    bool ok = !first.empty() && first == second;
    report(12, ok, "identical config and seed produce byte-identical results",
           std::to_string(first.size()) + " bytes compared");
}

} // namespace

int main() {
    criterion_1_l1_contraction();
    criterion_2_kvn_growth();
    criterion_3_unitarity();
    criterion_4_square_consistency();
    criterion_5_ode_recovery();
    criterion_6_product_formula_orders();
    criterion_7_condition_bound();
    criterion_8_hje_precaustic();
    criterion_9_schrodinger();
    criterion_10_sampling_law();
    criterion_11_registry();
    criterion_12_determinism();

    if (g_failures == 0)
        std::printf("acceptance: all 12 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
