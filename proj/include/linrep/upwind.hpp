#pragma once

#include <memory>
#include <optional>
#include <string>

#include "linrep/field.hpp"
#include "linrep/grid.hpp"
#include "linrep/mollifier.hpp"
#include "linrep/sparse.hpp"

namespace linrep {

enum class SchemeKind { Liouville, Kvn, Hje };

struct CflReport {
    bool ok = false;
    double lambda = 0.0;
    double sup_sum = 0.0;   // sum over axes of the advection speed bounds
    double margin = 0.0;    // 1 - lambda * sup_sum
};

/// lambda * sum_i sup|F_i| <= 1.
CflReport check_cfl(const FlowField& field, double lambda);

/// lambda * sum_i (sup|dH/dx_i| + sup|dH/dp_i|) <= 1.
CflReport check_cfl(const HamiltonianField& ham, double lambda);

/// One-step update matrix B of a first-order upwind scheme, w^{n+1} = B w^n.
///
/// Liouville uses the conservative flux form with face-averaged coefficients
/// (columns of B sum to one); the KvN and phase-space schemes use nodal
/// coefficients in advective form with, for KvN, the div F / 2 reaction term
/// on the diagonal.
struct UpwindScheme {
    GridSpec grid;
    TimeGrid time;
    SchemeKind kind;
    double lambda = 0.0;
    double div_sup = 0.0;
    CflReport cfl;
    SparseMatrix matrix;
};

/// Conservative upwind matrix for d/dt w + div(F w) = 0. Refuses CFL violations.
UpwindScheme assemble_liouville(const GridSpec& g, const TimeGrid& tg,
                                const FlowField& field);

/// Advective upwind matrix for d/dt u + F . grad u + (div F / 2) u = 0.
UpwindScheme assemble_kvn(const GridSpec& g, const TimeGrid& tg,
                          const FlowField& field);

/// Advective upwind matrix on the phase grid for
/// d/dt w + dH/dp . grad_x w - dH/dx . grad_p w = 0.
UpwindScheme assemble_hje(const GridSpec& g2d, const TimeGrid& tg,
                          const HamiltonianField& ham);

/// w -> B w.
RealState step(const UpwindScheme& scheme, const RealState& w);

/// Block lower-bidiagonal time-history system L w = F with I on the diagonal
/// and -B on the subdiagonal; f^1 = B w^0 carries the initial data. Optional
/// dilation appends steps more blocks repeating the final state.
class BlockSystem {
public:
    BlockSystem(std::shared_ptr<const SparseMatrix> block, const TimeGrid& tg,
                rvec w0, bool dilate, double div_sup);

    int steps() const { return steps_; }
    int dilation_blocks() const { return dilation_; }
    int total_blocks() const { return steps_ + dilation_; }
    std::size_t block_size() const { return block_size_; }
    std::size_t total_size() const { return block_size_ * total_blocks(); }
    double dt() const { return dt_; }
    double div_sup() const { return div_sup_; }
    const SparseMatrix& block() const { return *block_; }
    const rvec& rhs_first_block() const { return f1_; }

    /// Exact solve by forward substitution; returns [w^1, ..., w^{total_blocks}].
    std::vector<rvec> forward_solve() const;

    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_transpose(std::span<const double> x, std::span<double> y) const;
    void solve(std::span<const double> rhs, std::span<double> y) const;
    void solve_transpose(std::span<const double> rhs, std::span<double> y) const;

private:
    std::shared_ptr<const SparseMatrix> block_;
    std::size_t block_size_;
    int steps_;
    int dilation_;
    double dt_;
    double div_sup_;
    rvec w0_;
    rvec f1_;
};

BlockSystem build_block_system(const UpwindScheme& scheme, const RealState& w0,
                               bool dilate = false);

struct ConditionDiagnostics {
    bool computed = false;
    std::string note;
    double kappa_est = 0.0;
    double kappa_bound = 0.0;
    double sigma_max = 0.0;
    double sigma_max_inv = 0.0;
    double norm_B_est = 0.0;
    double norm_B_bound = 0.0;
    std::size_t max_row_nnz = 0;
};

/// Singular-value based estimates via power iteration on L L^T and on the
/// explicitly invertible L^{-1}. Skipped with a notice beyond the budget.
ConditionDiagnostics condition_diagnostics(const BlockSystem& sys,
                                           std::size_t budget = 4096);

} // namespace linrep
