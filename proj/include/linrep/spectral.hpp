#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>

#include "linrep/dft.hpp"
#include "linrep/field.hpp"
#include "linrep/grid.hpp"

namespace linrep {

constexpr std::size_t kDenseGeneratorBudget = 4096;

/// Hermitian operator A with evolution e^{-i A t}. Dense form uses a lazily
/// cached eigendecomposition; the diagonal form applies phases directly.
class HermitianGenerator {
public:
    enum class Form { Dense, Diagonal };

    HermitianGenerator() = default;  // empty; fill via the factories

    static HermitianGenerator dense(Eigen::MatrixXcd mat);
    static HermitianGenerator diagonal(rvec values);

    Form form() const { return form_; }
    int dim() const { return dim_; }
    /// Max entry of |A - A^dagger|, recorded at construction.
    double hermiticity_certificate() const { return certificate_; }
    const Eigen::MatrixXcd& matrix() const;
    const rvec& diagonal_values() const { return diag_; }

    cvec apply(std::span<const cplx> v) const;
    cvec expm_apply(double t, std::span<const cplx> v) const;

    /// Coordinate-triplet text export, same layout as the sparse schemes:
    /// header "rows cols nnz", then one "row col re im" line per entry kept.
    void export_triplets(std::ostream& os) const;

private:
    Form form_ = Form::Diagonal;
    int dim_ = 0;
    double certificate_ = 0.0;
    Eigen::MatrixXcd mat_;
    rvec diag_;

    struct EigCache {
        std::once_flag once;
        Eigen::VectorXd eigenvalues;
        Eigen::MatrixXcd eigenvectors;
    };
    std::shared_ptr<EigCache> eig_ = std::make_shared<EigCache>();
};

/// e^{-i gen t} v.
cvec expm_apply(const HermitianGenerator& gen, double t, std::span<const cplx> v);

/// Apply the one-axis momentum operator P = Phi D_mu Phi^{-1} in place.
void apply_momentum_axis(const GridSpec& g, int axis, const DftPlan& plan,
                         std::span<cplx> data, int power = 1);

/// Dense one-axis momentum matrix (Hermitian, eigenvalues mu_l).
Eigen::MatrixXcd dense_momentum(int size);

/// H_j = (Lambda_{F_j} P_j + P_j Lambda_{F_j}) / 2 on the full grid.
HermitianGenerator build_kvn_hamiltonian(const GridSpec& g, const FlowField& field,
                                         int axis);

/// Phase-space generator for H = |p|^2/2 + V(x):
/// A = -i sum_l (P_l x D_l - V_l x P_l) = -i Atilde, returned as Atilde.
HermitianGenerator build_liouville_phase_generator(
    const GridSpec& g2d,
    const std::function<double(std::span<const double>, int)>& grad_v);

/// Atilde = (hbar/2) sum_j P_j^2 + V/hbar.
HermitianGenerator build_schrodinger_generator(
    const GridSpec& g, const std::function<double(std::span<const double>)>& v,
    double hbar);

/// One-axis transport factor A_i = P_i Lambda_{F_i} together with the positive
/// splitting Lambda = Lambda+ - Lambda- (shift rule s = alpha + max(0, -min F))
/// and the symmetrised Hermitian halves sqrt(Lambda+-) P sqrt(Lambda+-).
struct AsymGenerator {
    int axis = 0;
    double alpha = 1.0;
    double shift = 0.0;
    rvec lambda_f;     // nodal F values
    rvec lambda_plus;  // lambda_f + shift
    rvec lambda_minus; // constant shift
    Eigen::MatrixXcd a;            // P Lambda_F (not Hermitian in general)
    HermitianGenerator sym_plus;   // sqrt(L+) P sqrt(L+)
    HermitianGenerator sym_minus;  // sqrt(L-) P sqrt(L-)
};

AsymGenerator build_asym_generator(const GridSpec& g, const FlowField& field,
                                   int axis, double alpha = 1.0);

} // namespace linrep
