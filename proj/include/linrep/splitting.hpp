#pragma once

#include <functional>
#include <memory>

#include "linrep/mollifier.hpp"
#include "linrep/spectral.hpp"

namespace linrep {

enum class SplitScheme { Schrodinger, LiouvillePhase, KvnTrotter, LiouvilleNonunitary };
enum class SplitOrder { Lie, Strang };

/// Post-selection bookkeeping for the non-unitary splitting: every diagonal
/// substitution stage has a success probability; one run of all stages in a
/// step multiplies into the per-step probability, and the running copy
/// estimate is the product of reciprocals.
struct CopyLedger {
    std::vector<double> per_step_success_prob;
    double cumulative_copy_estimate = 1.0;

    void record_step(double prob) {
        if (!(prob > 0.0) || prob > 1.0 + 1e-12)
            throw InternalError("step success probability out of (0, 1]");
        per_step_success_prob.push_back(prob);
        cumulative_copy_estimate /= prob;
    }
    int steps() const { return static_cast<int>(per_step_success_prob.size()); }
};

struct EvolveRecord {
    int step;
    double time;
    double l2_norm;
    double l1_norm;
    double mass;
    double ledger_cumulative;
};

struct EvolveOptions {
    bool record_trace = false;
    bool keep_history = false;
    std::function<void(int, double, const cvec&)> observer;
};

struct EvolveResult {
    ComplexState state;
    std::vector<EvolveRecord> trace;
    std::vector<cvec> history;  // filled when keep_history is set
    CopyLedger ledger;
};

/// Time-splitting propagator. A plan is immutable once built; stepping only
/// touches caller-owned state buffers.
class SplitPlan {
public:
    /// Kinetic spectral phase then potential phase, one step of size dt.
    static SplitPlan schrodinger(const GridSpec& g,
                                 const std::function<double(std::span<const double>)>& v,
                                 double hbar, double dt,
                                 SplitOrder order = SplitOrder::Lie);

    /// Phase-space transport: x-advection phase in (c_x, w_p), then p-kick
    /// phase in (w_x, c_p), for H = |p|^2/2 + V(x).
    static SplitPlan liouville_phase(const GridSpec& g2d,
                                     const std::function<double(std::span<const double>, int)>& grad_v,
                                     double dt, SplitOrder order = SplitOrder::Lie);

    /// Product of the per-axis Hermitian factors, applied axis 1 first.
    static SplitPlan kvn_trotter(const GridSpec& g, const FlowField& field, double dt);

    /// Per-axis sandwich e^{-iA+ dt/2} e^{+iA- dt} e^{-iA+ dt/2} with diagonal
    /// substitutions, tracking post-selection probabilities in the ledger.
    static SplitPlan liouville_nonunitary(const GridSpec& g, const FlowField& field,
                                          double dt, double alpha = 1.0);

    SplitScheme scheme() const { return scheme_; }
    SplitOrder order() const { return order_; }
    double dt() const { return dt_; }
    const GridSpec& grid() const { return grid_; }

    void step(cvec& state) const;
    void step(cvec& state, CopyLedger& ledger) const;

    /// Physical mass of a state under this plan's convention: integral of
    /// |u|^2 for wavefunctions, integral of Re u for transported densities.
    double mass(const cvec& state) const;

    EvolveResult evolve(const ComplexState& initial, int n_steps,
                        const EvolveOptions& options = {}) const;

private:
    SplitPlan(SplitScheme scheme, const GridSpec& g, double dt);

    SplitScheme scheme_;
    SplitOrder order_ = SplitOrder::Lie;
    GridSpec grid_;
    double dt_ = 0.0;
    double hbar_ = 0.0;

    std::shared_ptr<const DftPlan> dft_;

    // Schrodinger tables
    cvec kinetic_phase_;    // per axis slot, e^{-i hbar mu^2 dt/2}
    cvec potential_phase_;  // per node, e^{-i V dt / hbar}

    // Liouville phase-space tables
    int spatial_dim_ = 0;
    cvec transport_phase_;  // per phase node in (c_x, w_p)
    cvec kick_phase_;       // per phase node in (w_x, c_p)

    // Dense factor paths
    std::vector<Eigen::MatrixXcd> axis_unitaries_;  // KvN Trotter e^{-i H_j dt}
    struct NonunitaryAxis {
        rvec sub_in;        // sqrt(Lambda+) and sqrt(Lambda-) entries
        rvec sub_in_minus;
        Eigen::MatrixXcd u_plus_half;  // e^{-i sym+ dt/2}
        Eigen::MatrixXcd u_minus_full; // e^{+i sym- dt}
    };
    std::vector<NonunitaryAxis> nonunitary_axes_;

    void step_schrodinger(cvec& state) const;
    void step_liouville_phase(cvec& state) const;
    void step_kvn_trotter(cvec& state) const;
    void step_nonunitary(cvec& state, CopyLedger* ledger) const;
};

} // namespace linrep
