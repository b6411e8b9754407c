#pragma once

#include <string>
#include <vector>

#include "linrep/splitting.hpp"
#include "linrep/types.hpp"

namespace linrep::resources {

enum class MethodFamily { QuantumSimulation, SpectralQlsa, FdQlsa };
enum class EntryKind { Subroutine, Observable };
enum class FactorSymbol { None, NL4, NK4, NH4, NU04CO };
enum class LogKind {
    None,
    InvEps,            // log2(1/eps)
    SpectralMesh,      // log2(d^{1/l} / eps^{1+2/l})
    SchrodingerObs,    // log2(d^{1/l} / eps^{1/2+2/l})
    SchrodingerWave    // log2(d^{1/l} / eps^{1/2+5/(2l)})
};

/// Exponent c0 + c1/ell, or the free matrix-order parameter alpha for the
/// finite-difference rows.
struct Exponent {
    double c0 = 0.0;
    double c1 = 0.0;
    bool use_alpha = false;

    double value(double ell, double alpha) const {
        if (use_alpha) return alpha;
        return c0 + (std::isinf(ell) ? 0.0 : c1 / ell);
    }
};

/// One cost formula, stored structurally so its shape can be checked, not just
/// its value: cost = d^{d_exp} * eps^{-eps_exp} * logfactor * sampling factor.
struct ComplexityEntry {
    std::string id;        // e.g. "liouville_rep.qsim.subroutine"
    std::string row;       // liouville_rep | kvn_rep | liouville_phase | schrodinger
    MethodFamily family;
    EntryKind kind;
    Exponent d_exp;
    Exponent eps_exp;
    LogKind log_kind = LogKind::None;
    FactorSymbol factor = FactorSymbol::None;
    bool in_summary_table = true;  // extra entries document alternative meshes
    std::string note;              // derivation label printed with tables
};

enum class SchrodObsKind { Density, Current, Energy };

struct EvalFactors {
    double alpha = 4.0;    // matrix-order exponent for the FD rows
    double n_l4 = 1.0;
    double n_k4 = 1.0;
    double n_h4 = 1.0;
    double n_u04 = 1.0;
    SchrodObsKind schrod_obs = SchrodObsKind::Density;
};

/// Numeric value with suppressed constants set to one and logs base 2,
/// floored at 1 so degenerate points stay order one.
double evaluate(const ComplexityEntry& entry, double d, double eps, double ell,
                const EvalFactors& factors = {});

/// Extra variance factor for the Schroedinger observables: 1 for the density,
/// d^{2/l}/eps^{4/l} for the current, d^{4/l}/eps^{8/l} for the energy.
double schrodinger_observable_factor(SchrodObsKind kind, double d, double eps,
                                     double ell);

const std::vector<ComplexityEntry>& registry();
const ComplexityEntry& entry_by_id(const std::string& id);

struct CompareCell {
    double d = 0.0;
    double eps = 0.0;
    std::vector<double> values;  // aligned with the entry list
    std::string cheapest_id;
};

struct CompareTable {
    std::vector<std::string> entry_ids;
    std::vector<CompareCell> cells;
    bool simulation_dominates_at_small_eps = false;
};

CompareTable compare_table(const std::vector<ComplexityEntry>& entries,
                           const std::vector<double>& dims,
                           const std::vector<double>& epsilons, double ell,
                           const EvalFactors& factors = {});

std::string to_markdown(const CompareTable& table);
std::string to_csv(const CompareTable& table);

struct CopyCostReport {
    double cumulative = 1.0;
    double per_step_factor = 1.0;  // geometric mean of the reciprocals
    int steps = 0;
};

/// Product of reciprocal per-step success probabilities from a splitting run.
CopyCostReport copy_cost(const CopyLedger& ledger);

} // namespace linrep::resources
