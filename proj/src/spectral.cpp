#include "linrep/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "linrep/sparse.hpp"

namespace linrep {

namespace {

void check_dense_budget(std::size_t n) {
    if (n > kDenseGeneratorBudget)
        throw BudgetError("dense generator of " + std::to_string(n) +
                          " rows exceeds budget " +
                          std::to_string(kDenseGeneratorBudget));
}

rvec node_coords(const GridSpec& g, std::size_t k) {
    rvec x(g.dim());
    std::size_t rem = k;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
        x[ax] = g.node(static_cast<int>(rem % g.points_per_axis()));
        rem /= g.points_per_axis();
    }
    return x;
}

Eigen::MatrixXcd columns_from_action(
    std::size_t n, const std::function<void(cvec&)>& action) {
    Eigen::MatrixXcd mat(n, n);
    cvec col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), cplx(0.0));
        col[j] = 1.0;
        action(col);
        for (std::size_t i = 0; i < n; ++i) mat(i, j) = col[i];
    }
    return mat;
}

} // namespace

HermitianGenerator HermitianGenerator::dense(Eigen::MatrixXcd mat) {
    if (mat.rows() != mat.cols()) throw ValidationError("generator must be square");
    check_dense_budget(static_cast<std::size_t>(mat.rows()));
    HermitianGenerator gen;
    gen.form_ = Form::Dense;
    gen.dim_ = static_cast<int>(mat.rows());
    gen.certificate_ = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    gen.mat_ = std::move(mat);
    return gen;
}

HermitianGenerator HermitianGenerator::diagonal(rvec values) {
    HermitianGenerator gen;
    gen.form_ = Form::Diagonal;
    gen.dim_ = static_cast<int>(values.size());
    gen.certificate_ = 0.0;
    gen.diag_ = std::move(values);
    return gen;
}

const Eigen::MatrixXcd& HermitianGenerator::matrix() const {
    if (form_ != Form::Dense)
        throw ValidationError("generator has no dense matrix form");
    return mat_;
}

cvec HermitianGenerator::apply(std::span<const cplx> v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw ValidationError("generator apply size mismatch");
    cvec out(v.size());
    if (form_ == Form::Diagonal) {
        for (int i = 0; i < dim_; ++i) out[i] = diag_[i] * v[i];
        return out;
    }
    Eigen::Map<const Eigen::VectorXcd> x(v.data(), dim_);
    Eigen::Map<Eigen::VectorXcd> y(out.data(), dim_);
    y = mat_ * x;
    return out;
}

cvec HermitianGenerator::expm_apply(double t, std::span<const cplx> v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw ValidationError("generator expm size mismatch");
    cvec out(v.size());
    if (form_ == Form::Diagonal) {
        for (int i = 0; i < dim_; ++i)
            out[i] = v[i] * std::exp(cplx(0.0, -diag_[i] * t));
        return out;
    }
    std::call_once(eig_->once, [this] {
        Eigen::MatrixXcd sym = 0.5 * (mat_ + mat_.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
        if (solver.info() != Eigen::Success)
            throw InternalError("eigendecomposition failed");
        eig_->eigenvalues = solver.eigenvalues();
        eig_->eigenvectors = solver.eigenvectors();
    });
    Eigen::Map<const Eigen::VectorXcd> x(v.data(), dim_);
    Eigen::VectorXcd coeff = eig_->eigenvectors.adjoint() * x;
    for (int i = 0; i < dim_; ++i)
        coeff(i) *= std::exp(cplx(0.0, -eig_->eigenvalues(i) * t));
    Eigen::Map<Eigen::VectorXcd> y(out.data(), dim_);
    y = eig_->eigenvectors * coeff;
    return out;
}

void HermitianGenerator::export_triplets(std::ostream& os) const {
    std::vector<std::pair<std::pair<int, int>, cplx>> kept;
    if (form_ == Form::Diagonal) {
        for (int i = 0; i < dim_; ++i)
            if (std::abs(diag_[i]) >= SparseMatrix::kDropTolerance)
                kept.push_back({{i, i}, cplx(diag_[i], 0.0)});
    } else {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                if (std::abs(mat_(i, j)) >= SparseMatrix::kDropTolerance)
                    kept.push_back({{i, j}, mat_(i, j)});
    }
    os << dim_ << ' ' << dim_ << ' ' << kept.size() << '\n';
    char re[64], im[64];
    for (const auto& [idx, v] : kept) {
        std::snprintf(re, sizeof(re), "%.17g", v.real());
        std::snprintf(im, sizeof(im), "%.17g", v.imag());
        os << idx.first << ' ' << idx.second << ' ' << re << ' ' << im << '\n';
    }
}

cvec expm_apply(const HermitianGenerator& gen, double t, std::span<const cplx> v) {
    return gen.expm_apply(t, v);
}

void apply_momentum_axis(const GridSpec& g, int axis, const DftPlan& plan,
                         std::span<cplx> data, int power) {
    transform_axis(g, axis, AxisTransform::CoefFromNodal, plan, data);
    const int m = g.points_per_axis();
    const std::size_t stride = axis_stride(axis, g);
    const std::size_t block = stride * static_cast<std::size_t>(m);
    for (std::size_t base = 0; base < data.size(); base += block)
        for (int j = 0; j < m; ++j) {
            double w = plan.mu(j);
            double f = power == 1 ? w : std::pow(w, power);
            cplx* p0 = data.data() + base + static_cast<std::size_t>(j) * stride;
            for (std::size_t within = 0; within < stride; ++within) p0[within] *= f;
        }
    transform_axis(g, axis, AxisTransform::NodalFromCoef, plan, data);
}

Eigen::MatrixXcd dense_momentum(int size) {
    check_dense_budget(static_cast<std::size_t>(size));
    GridSpec g = GridSpec::unit_box(1, size);
    DftPlan plan(size);
    return columns_from_action(static_cast<std::size_t>(size), [&](cvec& col) {
        apply_momentum_axis(g, 0, plan, col);
    });
}

HermitianGenerator build_kvn_hamiltonian(const GridSpec& g, const FlowField& field,
                                         int axis) {
    if (axis < 0 || axis >= g.dim()) throw IndexError("axis out of range");
    if (field.dim != g.dim())
        throw ValidationError("flow field dimension does not match the grid");
    const std::size_t n = g.total_points();
    check_dense_budget(n);

    rvec f_nodal(n);
    for (std::size_t k = 0; k < n; ++k)
        f_nodal[k] = field.component(node_coords(g, k), axis);

    DftPlan plan(g.points_per_axis());
    auto mat = columns_from_action(n, [&](cvec& col) {
        cvec left = col;  // Lambda P col
        apply_momentum_axis(g, axis, plan, left);
        for (std::size_t i = 0; i < n; ++i) left[i] *= f_nodal[i];
        cvec right = col;  // P Lambda col
        for (std::size_t i = 0; i < n; ++i) right[i] *= f_nodal[i];
        apply_momentum_axis(g, axis, plan, right);
        for (std::size_t i = 0; i < n; ++i) col[i] = 0.5 * (left[i] + right[i]);
    });
    return HermitianGenerator::dense(std::move(mat));
}

HermitianGenerator build_liouville_phase_generator(
    const GridSpec& g2d,
    const std::function<double(std::span<const double>, int)>& grad_v) {
    if (!g2d.is_phase_space())
        throw ValidationError("phase generator needs a phase-space grid");
    const int d = g2d.position_dim();
    const int m = g2d.points_per_axis();
    const std::size_t n = g2d.total_points();
    check_dense_budget(n);

    // Nodal tables: p-value per phase node for each momentum axis, grad V
    // per phase node for each position axis.
    std::vector<rvec> p_val(d, rvec(n)), v_val(d, rvec(n, 0.0));
    rvec x(d);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t rem = k;
        rvec coords(2 * d);
        for (int ax = 2 * d - 1; ax >= 0; --ax) {
            coords[ax] = g2d.node(static_cast<int>(rem % m));
            rem /= m;
        }
        for (int i = 0; i < d; ++i) {
            x[i] = coords[i];
            p_val[i][k] = coords[d + i];
        }
        if (grad_v)
            for (int i = 0; i < d; ++i) v_val[i][k] = grad_v(x, i);
    }

    DftPlan plan(m);
    auto mat = columns_from_action(n, [&](cvec& col) {
        cvec acc(n, cplx(0.0));
        for (int l = 0; l < d; ++l) {
            cvec t1 = col;  // (P_l x D_l): diagonal in p commutes with P on x_l
            for (std::size_t i = 0; i < n; ++i) t1[i] *= p_val[l][i];
            apply_momentum_axis(g2d, l, plan, t1);
            cvec t2 = col;  // (V_l x P_l): P on the momentum axis d+l
            apply_momentum_axis(g2d, d + l, plan, t2);
            for (std::size_t i = 0; i < n; ++i)
                acc[i] += t1[i] - v_val[l][i] * t2[i];
        }
        col = std::move(acc);
    });
    return HermitianGenerator::dense(std::move(mat));
}

HermitianGenerator build_schrodinger_generator(
    const GridSpec& g, const std::function<double(std::span<const double>)>& v,
    double hbar) {
    if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
    const std::size_t n = g.total_points();
    check_dense_budget(n);

    rvec v_nodal(n, 0.0);
    if (v)
        for (std::size_t k = 0; k < n; ++k) v_nodal[k] = v(node_coords(g, k));

    DftPlan plan(g.points_per_axis());
    auto mat = columns_from_action(n, [&](cvec& col) {
        cvec kin(n, cplx(0.0));
        for (int ax = 0; ax < g.dim(); ++ax) {
            cvec t = col;
            apply_momentum_axis(g, ax, plan, t, 2);
            for (std::size_t i = 0; i < n; ++i) kin[i] += t[i];
        }
        for (std::size_t i = 0; i < n; ++i)
            col[i] = 0.5 * hbar * kin[i] + v_nodal[i] / hbar * col[i];
    });
    return HermitianGenerator::dense(std::move(mat));
}

AsymGenerator build_asym_generator(const GridSpec& g, const FlowField& field,
                                   int axis, double alpha) {
    if (axis < 0 || axis >= g.dim()) throw IndexError("axis out of range");
    if (!(alpha > 0.0)) throw ValidationError("splitting floor must be positive");
    const std::size_t n = g.total_points();
    check_dense_budget(n);

    AsymGenerator gen;
    gen.axis = axis;
    gen.alpha = alpha;
    gen.lambda_f.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        gen.lambda_f[k] = field.component(node_coords(g, k), axis);

    double min_f = gen.lambda_f[0];
    for (double v : gen.lambda_f) min_f = std::min(min_f, v);
    gen.shift = alpha + std::max(0.0, -min_f);

    gen.lambda_plus.resize(n);
    gen.lambda_minus.assign(n, gen.shift);
    for (std::size_t k = 0; k < n; ++k) gen.lambda_plus[k] = gen.lambda_f[k] + gen.shift;
    for (double v : gen.lambda_plus)
        if (!(v > 0.0)) throw InternalError("positive splitting produced a nonpositive entry");

    DftPlan plan(g.points_per_axis());
    gen.a = columns_from_action(n, [&](cvec& col) {
        for (std::size_t i = 0; i < n; ++i) col[i] *= gen.lambda_f[i];
        apply_momentum_axis(g, axis, plan, col);
    });

    auto symmetrized = [&](const rvec& lam) {
        rvec root(n);
        for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(lam[i]);
        auto mat = columns_from_action(n, [&](cvec& col) {
            for (std::size_t i = 0; i < n; ++i) col[i] *= root[i];
            apply_momentum_axis(g, axis, plan, col);
            for (std::size_t i = 0; i < n; ++i) col[i] *= root[i];
        });
        return HermitianGenerator::dense(std::move(mat));
    };
    gen.sym_plus = symmetrized(gen.lambda_plus);
    gen.sym_minus = symmetrized(gen.lambda_minus);
    return gen;
}

} // namespace linrep
