#pragma once

#include <cstdint>
#include <functional>

#include "linrep/mollifier.hpp"
#include "linrep/types.hpp"

namespace linrep {

/// Quadrature-weighted observable G. On the periodic grid the trapezoid rule
/// folds its endpoint halves together, so the per-node weight is 1; the
/// classic endpoint-weighted vector is available for non-periodic data.
struct ObservableSpec {
    enum class Target { AllAxes, MomentumAxes };

    std::function<double(std::span<const double>)> weight;
    Target target = Target::AllAxes;

    static ObservableSpec total_mass();
    static ObservableSpec coordinate(int axis);
    static ObservableSpec momentum_coordinate(int axis);  // G(p) = p_axis over p
    static ObservableSpec momentum_density();             // G(p) = 1
    static ObservableSpec kinetic_energy();                // G(p) = |p|^2/2
};

/// Trapezoid weights [1/2, 1, ..., 1, 1/2] for a non-periodic axis of m nodes.
rvec trapezoid_endpoint_weights(int m);

/// G_j table over all grid nodes (weights folded in).
rvec observable_values(const ObservableSpec& spec, const GridSpec& g);

/// l2 norm of g = G_j / M^{d/2}; of order one for bounded G.
double observable_vector_norm(const ObservableSpec& spec, const GridSpec& g);

/// (1/M^d) sum_j G_j rho_j.
double expect_liouville(const RealState& rho, const ObservableSpec& spec);

/// (1/M^{d/2}) psi^dag G_M psi = (1/M^d) sum_j G_j |psi_j|^2.
double expect_kvn(const ComplexState& psi, const ObservableSpec& spec);
double expect_kvn(const RealState& psi, const ObservableSpec& spec);

/// Per-position-node integral over the momentum axes:
/// out[ix] = (1/M^d) sum_l G(p_l) w[ix, l].
rvec expect_hje(const RealState& w, const ObservableSpec& spec);

/// Momentum moment divided by density per position node; recovers the
/// transported velocity from a level-set state.
rvec recover_velocity_hje(const RealState& w, int axis = 0);

/// First moments <x_i>, the reconstructed ODE solution.
rvec recover_ode_solution(const RealState& rho);

enum class SchrodingerObservable { Density, Current, Energy };

/// Pointwise density |u|^2, current hbar Im(conj(u) du), kinetic energy
/// (hbar^2/2)|du|^2 with the spectral derivative. Current and energy follow
/// the one-dimensional construction.
double schrodinger_observable(const ComplexState& u, double hbar,
                              SchrodingerObservable which, std::size_t node);
rvec schrodinger_density(const ComplexState& u);

/// Sample-count plan from the statistical law n >= Var / ((1-p) eps^2).
struct SamplingPlan {
    double eps = 0.0;
    double confidence = 0.0;
    double variance_bound = 0.0;
    std::uint64_t n_samples = 1;
    std::string factor_name;     // multiplicative cost factor attached to the run
    double factor_value = 1.0;
    double decay_g = 1.0;        // reported only, never part of pass/fail
    std::uint64_t seed = 0;

    static SamplingPlan make(double eps, double confidence, double variance_bound,
                             std::uint64_t seed);
};

struct BornResult {
    double empirical_mean = 0.0;
    std::uint64_t n_used = 0;
};

/// Measurement emulation in the observable's eigenbasis: the computational
/// basis for a diagonal observable with the exact Born probabilities.
BornResult born_sample_diagonal(const cvec& state, const rvec& values,
                                const SamplingPlan& plan);
BornResult born_sample_diagonal(const rvec& state, const rvec& values,
                                const SamplingPlan& plan);

/// Projector-valued measurement onto |g><g|; the empirical mean estimates
/// Upsilon = |<g|psi>|^2.
BornResult born_sample_rank_one(const cvec& state, const cvec& g_state,
                                const SamplingPlan& plan);

double diagonal_expectation(const cvec& state, const rvec& values);
double diagonal_variance(const cvec& state, const rvec& values);

/// History padding: appends one copy of the final block per original block,
/// so the final state holds a (N_t+1)/(2 N_t) share of the squared norm when
/// all block norms coincide.
struct PaddedHistory {
    std::vector<rvec> blocks;
    int original_blocks = 0;
    int appended_blocks = 0;
    double total_sq_norm = 0.0;
    double final_share = 0.0;  // squared-norm share of blocks holding the final state
};

PaddedHistory dilate_history(const std::vector<rvec>& history);

/// Expectation of a diagonal observable restricted to the appended tail,
/// rescaled back; equals the plain final-state expectation identically.
double padded_final_expectation(const PaddedHistory& padded, const rvec& values);

struct NormEstimate {
    double true_norm = 0.0;
    double estimate = 0.0;
    double eta = 0.0;
};

/// alpha = ||x|| (1 + xi), xi uniform on [-eta, eta], deterministic per seed.
NormEstimate emulate_norm_estimate(std::span<const double> x, double eta,
                                   std::uint64_t seed);
NormEstimate emulate_norm_estimate(std::span<const cplx> x, double eta,
                                   std::uint64_t seed);

/// Sampling-cost factors attached to plans. n_L uses the mass-type norm
/// sum_j rho_j, which makes n_L = n_K^2 an exact identity for rho = psi^2.
double factor_n_l(const RealState& rho0);
double factor_n_k(const RealState& psi0);
double factor_n_h(const RealState& w0);
double factor_n_u0(const ComplexState& u0);

/// g = max_n ||w^n|| / ||w^{final}|| from a stored norm trace.
double decay_factor(std::span<const double> norm_trace);

} // namespace linrep
