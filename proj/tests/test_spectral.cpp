#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "linrep/spectral.hpp"
#include "linrep/splitting.hpp"
#include "test_util.hpp"

using namespace linrep;

TEST_CASE("dense momentum operator") {
    const int m = 16;
    Eigen::MatrixXcd p = dense_momentum(m);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(p);
    DftPlan plan(m);
    rvec mu(plan.mu_table());
    std::sort(mu.begin(), mu.end());
    for (int i = 0; i < m; ++i)
        CHECK(eig.eigenvalues()(i) == doctest::Approx(mu[i]).epsilon(1e-10));
}

TEST_CASE("momentum and frequency pictures are conjugate") {
    GridSpec g = GridSpec::unit_box(2, 4);
    DftPlan plan(4);
    Rng rng(13);
    for (int axis = 0; axis < 2; ++axis) {
        cvec c(g.total_points());
        for (auto& x : c) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        // Phi^{d} then P_axis then Phi^{-d} should be the diagonal mu table.
        cvec u = c;
        for (int ax = 0; ax < 2; ++ax)
            transform_axis(g, ax, AxisTransform::NodalFromCoef, plan, u);
        apply_momentum_axis(g, axis, plan, u);
        for (int ax = 0; ax < 2; ++ax)
            transform_axis(g, ax, AxisTransform::CoefFromNodal, plan, u);
        const std::size_t stride = axis_stride(axis, g);
        for (std::size_t k = 0; k < c.size(); ++k) {
            int slot = static_cast<int>((k / stride) % 4);
            CHECK(std::abs(u[k] - plan.mu(slot) * c[k]) < 1e-10);
        }
    }
}

namespace {

FlowField sine_field_1d() {
    FlowField f;
    f.dim = 1;
    f.component = [](std::span<const double> x, int) { return std::sin(kTwoPi * x[0]); };
    f.sup_per_axis = {1.0};
    f.div_sup = kTwoPi;
    f.divergence = [](std::span<const double> x) { return kTwoPi * std::cos(kTwoPi * x[0]); };
    return f;
}

} // namespace

TEST_CASE("kvn hamiltonian assembly") {
    GridSpec g = GridSpec::unit_box(1, 8);

    FlowField zero;
    zero.dim = 1;
    zero.component = [](std::span<const double>, int) { return 0.0; };
    zero.sup_per_axis = {0.0};
    HermitianGenerator hz = build_kvn_hamiltonian(g, zero, 0);
    CHECK(hz.matrix().cwiseAbs().maxCoeff() < 1e-14);

    FlowField one;
    one.dim = 1;
    one.component = [](std::span<const double>, int) { return 1.0; };
    one.sup_per_axis = {1.0};
    HermitianGenerator h1 = build_kvn_hamiltonian(g, one, 0);
    Eigen::MatrixXcd p = dense_momentum(8);
    CHECK((h1.matrix() - p).cwiseAbs().maxCoeff() < 1e-10);

    // generic coefficient: compare against the dense half-anticommutator
    HermitianGenerator hs = build_kvn_hamiltonian(g, sine_field_1d(), 0);
    CHECK(hs.hermiticity_certificate() < 1e-12);
    Eigen::VectorXd f(8);
    for (int j = 0; j < 8; ++j) f(j) = std::sin(kTwoPi * g.node(j));
    Eigen::MatrixXcd expected =
        0.5 * (f.asDiagonal().toDenseMatrix().cast<cplx>() * p +
               p * f.asDiagonal().toDenseMatrix().cast<cplx>());
    CHECK((hs.matrix() - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("phase-space generator") {
    GridSpec g2 = GridSpec::phase_space(1, 4);

    SUBCASE("constant potential leaves only the streaming part") {
        HermitianGenerator a = build_liouville_phase_generator(g2, nullptr);
        HermitianGenerator b = build_liouville_phase_generator(
            g2, [](std::span<const double>, int) { return 0.0; });
        CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-12);

        // Kronecker oracle: P (x) diag(p-values)
        Eigen::MatrixXcd p = dense_momentum(4);
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
        for (int j = 0; j < 4; ++j) d(j, j) = g2.node(j);
        Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(16, 16);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                kron.block(4 * i, 4 * j, 4, 4) = p(i, j) * d;
        CHECK((a.matrix() - kron).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("evolution preserves the l2 norm") {
        HermitianGenerator a = build_liouville_phase_generator(
            g2, [](std::span<const double> x, int) { return std::cos(kTwoPi * x[0]); });
        CHECK(a.hermiticity_certificate() < 1e-10);
        Rng rng(19);
        cvec v(16);
        for (auto& x : v) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cvec evolved = expm_apply(a, 0.7, v);
        CHECK(l2_norm(evolved) == doctest::Approx(l2_norm(v)).epsilon(1e-10));
    }
}

TEST_CASE("schrodinger generator") {
    GridSpec g = GridSpec::unit_box(1, 16);
    const double hbar = 0.5;

    SUBCASE("free eigenvalues are hbar mu^2 / 2") {
        HermitianGenerator a = build_schrodinger_generator(g, nullptr, hbar);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a.matrix());
        DftPlan plan(16);
        rvec expect;
        for (int k = 0; k < 16; ++k) expect.push_back(0.5 * hbar * plan.mu(k) * plan.mu(k));
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < 16; ++i)
            CHECK(eig.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-9));
    }

    SUBCASE("exponential evolution matches the split propagator") {
        // Constant potential: the kinetic and potential flows commute, so one
        // split step of the benchmark parameters reproduces the exponential.
        GridSpec g16 = GridSpec::unit_box(1, 16);
        const double hb = 0.0256, dt = 0.01;
        auto v10 = [](std::span<const double>) { return 10.0; };
        HermitianGenerator gen = build_schrodinger_generator(g16, v10, hb);
        SplitPlan plan = SplitPlan::schrodinger(g16, v10, hb, dt);
        Rng rng(211);
        cvec u(16);
        for (auto& x : u) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cvec stepped = u;
        plan.step(stepped);
        cvec exact = expm_apply(gen, dt, u);
        for (int j = 0; j < 16; ++j) CHECK(std::abs(stepped[j] - exact[j]) < 1e-10);
    }

    SUBCASE("plane waves are eigenvectors for constant potentials") {
        const double vbar = 10.0;
        HermitianGenerator a = build_schrodinger_generator(
            g, [vbar](std::span<const double>) { return vbar; }, hbar);
        cvec wave(16);
        for (int j = 0; j < 16; ++j)
            wave[j] = std::exp(cplx(0.0, kTwoPi * g.node(j)));
        cvec aw = a.apply(wave);
        double expect = 0.5 * hbar * kTwoPi * kTwoPi + vbar / hbar;
        for (int j = 0; j < 16; ++j)
            CHECK(std::abs(aw[j] - expect * wave[j]) < 1e-9);
    }
}

TEST_CASE("asymmetric factor splitting") {
    GridSpec g = GridSpec::unit_box(1, 8);

    SUBCASE("shift rule with a strictly positive field") {
        FlowField f;
        f.dim = 1;
        f.component = [](std::span<const double> x, int) {
            return 1.5 + 0.25 * std::cos(kTwoPi * x[0]);
        };
        f.sup_per_axis = {1.75};
        AsymGenerator gen = build_asym_generator(g, f, 0, 0.5);
        CHECK(gen.shift == doctest::Approx(0.5));
        for (std::size_t i = 0; i < gen.lambda_minus.size(); ++i) {
            CHECK(gen.lambda_minus[i] == doctest::Approx(0.5));
            CHECK(gen.lambda_plus[i] ==
                  doctest::Approx(gen.lambda_f[i] + 0.5).epsilon(1e-14));
        }
    }

    SUBCASE("splitting reproduces the coefficient exactly") {
        Rng rng(29);
        FlowField f = testutil::random_smooth_field(1, rng, 1.0);
        AsymGenerator gen = build_asym_generator(g, f, 0);
        for (std::size_t i = 0; i < gen.lambda_f.size(); ++i) {
            CHECK(gen.lambda_plus[i] - gen.lambda_minus[i] ==
                  doctest::Approx(gen.lambda_f[i]).epsilon(1e-14));
            CHECK(gen.lambda_plus[i] >= gen.alpha - 1e-14);
            CHECK(gen.lambda_minus[i] >= gen.alpha - 1e-14);
        }
    }

    SUBCASE("symmetrised halves are similar to the raw factors") {
        FlowField f;
        f.dim = 1;
        f.component = [](std::span<const double> x, int) {
            return 1.0 + 0.5 * std::sin(kTwoPi * x[0]);
        };
        f.sup_per_axis = {1.5};
        AsymGenerator gen = build_asym_generator(g, f, 0, 1.0);
        CHECK(gen.sym_plus.hermiticity_certificate() < 1e-10);

        // spectrum of P Lambda+ equals the spectrum of sqrt(L+) P sqrt(L+)
        Eigen::MatrixXcd p = dense_momentum(8);
        Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(8, 8);
        for (int i = 0; i < 8; ++i) lam(i, i) = gen.lambda_plus[i];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> raw(p * lam);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sym(gen.sym_plus.matrix());
        rvec raw_ev, sym_ev;
        for (int i = 0; i < 8; ++i) {
            raw_ev.push_back(raw.eigenvalues()(i).real());
            CHECK(std::abs(raw.eigenvalues()(i).imag()) < 1e-8);
            sym_ev.push_back(sym.eigenvalues()(i));
        }
        std::sort(raw_ev.begin(), raw_ev.end());
        std::sort(sym_ev.begin(), sym_ev.end());
        for (int i = 0; i < 8; ++i)
            CHECK(raw_ev[i] == doctest::Approx(sym_ev[i]).epsilon(1e-8));
    }
}

TEST_CASE("generator triplet export") {
    GridSpec g = GridSpec::unit_box(1, 4);
    FlowField one;
    one.dim = 1;
    one.component = [](std::span<const double>, int) { return 1.0; };
    one.sup_per_axis = {1.0};
    HermitianGenerator h = build_kvn_hamiltonian(g, one, 0);
    std::ostringstream os;
    h.export_triplets(os);
    std::istringstream is(os.str());
    int rows, cols;
    std::size_t nnz;
    is >> rows >> cols >> nnz;
    CHECK(rows == 4);
    CHECK(cols == 4);
    int r, c;
    double re, im;
    std::size_t count = 0;
    Eigen::MatrixXcd back = Eigen::MatrixXcd::Zero(4, 4);
    while (is >> r >> c >> re >> im) {
        back(r, c) = cplx(re, im);
        ++count;
    }
    CHECK(count == nnz);
    CHECK((back - h.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hermitian exponential") {
    SUBCASE("t = 0 is the identity and diagonals apply phases") {
        HermitianGenerator diag = HermitianGenerator::diagonal({1.0, -2.0, 0.5});
        cvec v = {cplx(1, 0), cplx(0, 1), cplx(2, -1)};
        cvec same = expm_apply(diag, 0.0, v);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(same[i] - v[i]) < 1e-15);
        cvec rotated = expm_apply(diag, 0.3, v);
        for (int i = 0; i < 3; ++i) {
            cplx expect = v[i] * std::exp(cplx(0.0, -diag.diagonal_values()[i] * 0.3));
            CHECK(std::abs(rotated[i] - expect) < 1e-14);
        }
    }

    SUBCASE("dense path matches the Taylor oracle and preserves norms") {
        GridSpec g = GridSpec::unit_box(1, 8);
        HermitianGenerator h = build_kvn_hamiltonian(g, sine_field_1d(), 0);
        Rng rng(37);
        cvec v(8);
        for (auto& x : v) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cvec mine = expm_apply(h, 0.3, v);
        CHECK(l2_norm(mine) == doctest::Approx(l2_norm(v)).epsilon(1e-10));

        Eigen::MatrixXcd u = testutil::expm_taylor(cplx(0.0, -0.3) * h.matrix());
        Eigen::Map<Eigen::VectorXcd> vv(v.data(), 8);
        Eigen::VectorXcd expect = u * vv;
        for (int i = 0; i < 8; ++i) CHECK(std::abs(mine[i] - expect(i)) < 1e-9);
    }

    SUBCASE("budget is enforced before any dense allocation") {
        GridSpec big = GridSpec::unit_box(1, 8192);
        CHECK_THROWS_AS(build_kvn_hamiltonian(big, sine_field_1d(), 0), BudgetError);
    }
}

TEST_CASE("tensor grids factor through the one-axis operator") {
    // F_0 depends only on x_0, so the grid operator is the 1D factor tensored
    // with the identity.
    GridSpec g2 = GridSpec::unit_box(2, 4);
    FlowField f;
    f.dim = 2;
    f.component = [](std::span<const double> x, int i) {
        return i == 0 ? std::sin(kTwoPi * x[0]) : 0.0;
    };
    f.sup_per_axis = {1.0, 0.0};
    HermitianGenerator h2 = build_kvn_hamiltonian(g2, f, 0);

    GridSpec g1 = GridSpec::unit_box(1, 4);
    FlowField f1;
    f1.dim = 1;
    f1.component = [](std::span<const double> x, int) { return std::sin(kTwoPi * x[0]); };
    f1.sup_per_axis = {1.0};
    HermitianGenerator h1 = build_kvn_hamiltonian(g1, f1, 0);

    Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            kron.block(4 * i, 4 * j, 4, 4) =
                h1.matrix()(i, j) * Eigen::MatrixXcd::Identity(4, 4);
    CHECK((h2.matrix() - kron).cwiseAbs().maxCoeff() < 1e-10);
}
