#include "linrep/resources.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "linrep/errors.hpp"

namespace linrep::resources {

namespace {

double log_factor(LogKind kind, double d, double eps, double ell) {
    auto mesh_log = [&](double eps_pow_c0, double eps_pow_c1) {
        double inv_ell = std::isinf(ell) ? 0.0 : 1.0 / ell;
        double arg = std::pow(d, inv_ell) /
                     std::pow(eps, eps_pow_c0 + eps_pow_c1 * inv_ell);
        return std::log2(arg);
    };
    double raw = 1.0;
    switch (kind) {
        case LogKind::None: return 1.0;
        case LogKind::InvEps: raw = std::log2(1.0 / eps); break;
        case LogKind::SpectralMesh: raw = mesh_log(1.0, 2.0); break;
        case LogKind::SchrodingerObs: raw = mesh_log(0.5, 2.0); break;
        case LogKind::SchrodingerWave: raw = mesh_log(0.5, 2.5); break;
    }
    return std::max(raw, 1.0);
}

double factor_value(FactorSymbol symbol, const EvalFactors& f, double d, double eps,
                    double ell) {
    switch (symbol) {
        case FactorSymbol::None: return 1.0;
        case FactorSymbol::NL4: return f.n_l4;
        case FactorSymbol::NK4: return f.n_k4;
        case FactorSymbol::NH4: return f.n_h4;
        case FactorSymbol::NU04CO:
            return f.n_u04 * schrodinger_observable_factor(f.schrod_obs, d, eps, ell);
    }
    return 1.0;
}

ComplexityEntry make(std::string id, std::string row, MethodFamily fam, EntryKind kind,
                     Exponent de, Exponent ee, LogKind log, FactorSymbol factor,
                     std::string note, bool in_table = true) {
    ComplexityEntry e;
    e.id = std::move(id);
    e.row = std::move(row);
    e.family = fam;
    e.kind = kind;
    e.d_exp = de;
    e.eps_exp = ee;
    e.log_kind = log;
    e.factor = factor;
    e.note = std::move(note);
    e.in_summary_table = in_table;
    return e;
}

std::vector<ComplexityEntry> build_registry() {
    using MF = MethodFamily;
    using EK = EntryKind;
    using FS = FactorSymbol;
    std::vector<ComplexityEntry> r;

    // Nonlinear ODEs, transport representation (conservative form).
    r.push_back(make("liouville_rep.qsim.subroutine", "liouville_rep", MF::QuantumSimulation,
                     EK::Subroutine, {2, 2}, {2, 4}, LogKind::SpectralMesh, FS::None,
                     "dimension-split symmetrised transport simulation"));
    r.push_back(make("liouville_rep.qsim.observable", "liouville_rep", MF::QuantumSimulation,
                     EK::Observable, {2, 2}, {4, 4}, LogKind::SpectralMesh, FS::NL4,
                     "simulation cost times the sampling factor"));
    r.push_back(make("liouville_rep.spectral_qlsa.subroutine", "liouville_rep", MF::SpectralQlsa,
                     EK::Subroutine, {3, 2}, {4, 4}, LogKind::SpectralMesh, FS::None,
                     "spectral collocation fed to a linear-system solver"));
    r.push_back(make("liouville_rep.spectral_qlsa.observable", "liouville_rep", MF::SpectralQlsa,
                     EK::Observable, {3, 2}, {6, 4}, LogKind::SpectralMesh, FS::NL4,
                     "solver cost times the sampling factor"));
    r.push_back(make("liouville_rep.fd_qlsa.subroutine", "liouville_rep", MF::FdQlsa,
                     EK::Subroutine, {0, 0, true}, {3, 0}, LogKind::InvEps, FS::None,
                     "upwind block system, condition number 1/dt, sparsity d"));
    r.push_back(make("liouville_rep.fd_qlsa.observable", "liouville_rep", MF::FdQlsa,
                     EK::Observable, {0, 0, true}, {5, 0}, LogKind::InvEps, FS::NL4,
                     "solver cost times the sampling factor"));

    // Nonlinear ODEs, unitary square-root representation.
    r.push_back(make("kvn_rep.qsim.subroutine", "kvn_rep", MF::QuantumSimulation,
                     EK::Subroutine, {2, 2}, {2, 4}, LogKind::SpectralMesh, FS::None,
                     "per-axis Hermitian factor simulation"));
    r.push_back(make("kvn_rep.qsim.observable", "kvn_rep", MF::QuantumSimulation,
                     EK::Observable, {2, 2}, {4, 4}, LogKind::SpectralMesh, FS::NK4,
                     "simulation cost times the sampling factor"));
    r.push_back(make("kvn_rep.spectral_qlsa.subroutine", "kvn_rep", MF::SpectralQlsa,
                     EK::Subroutine, {3, 2}, {2, 4}, LogKind::SpectralMesh, FS::None,
                     "Hermitian collocation system fed to a linear-system solver"));
    r.push_back(make("kvn_rep.spectral_qlsa.observable", "kvn_rep", MF::SpectralQlsa,
                     EK::Observable, {3, 2}, {4, 4}, LogKind::SpectralMesh, FS::NK4,
                     "solver cost times the sampling factor"));
    r.push_back(make("kvn_rep.fd_qlsa.subroutine", "kvn_rep", MF::FdQlsa,
                     EK::Subroutine, {0, 0, true}, {3, 0}, LogKind::InvEps, FS::None,
                     "upwind block system with the divergence reaction term"));
    r.push_back(make("kvn_rep.fd_qlsa.observable", "kvn_rep", MF::FdQlsa,
                     EK::Observable, {0, 0, true}, {5, 0}, LogKind::InvEps, FS::NK4,
                     "solver cost times the sampling factor"));

    // Hamilton-Jacobi via the phase-space transport equation.
    r.push_back(make("liouville_phase.qsim.subroutine", "liouville_phase", MF::QuantumSimulation,
                     EK::Subroutine, {1, 0}, {2, 0}, LogKind::SpectralMesh, FS::None,
                     "two-stage diagonal/transform splitting on the phase grid"));
    r.push_back(make("liouville_phase.qsim.observable", "liouville_phase", MF::QuantumSimulation,
                     EK::Observable, {1, 0}, {4, 0}, LogKind::SpectralMesh, FS::NH4,
                     "splitting cost times the sampling factor"));
    r.push_back(make("liouville_phase.spectral_qlsa.subroutine", "liouville_phase", MF::SpectralQlsa,
                     EK::Subroutine, {2, 2}, {2, 4}, LogKind::SpectralMesh, FS::None,
                     "phase-grid collocation fed to a linear-system solver"));
    r.push_back(make("liouville_phase.spectral_qlsa.observable", "liouville_phase", MF::SpectralQlsa,
                     EK::Observable, {2, 2}, {4, 4}, LogKind::SpectralMesh, FS::NH4,
                     "solver cost times the sampling factor"));
    r.push_back(make("liouville_phase.fd_qlsa.subroutine", "liouville_phase", MF::FdQlsa,
                     EK::Subroutine, {0, 0, true}, {3, 0}, LogKind::InvEps, FS::None,
                     "phase-grid upwind block system"));
    r.push_back(make("liouville_phase.fd_qlsa.observable", "liouville_phase", MF::FdQlsa,
                     EK::Observable, {0, 0, true}, {5, 0}, LogKind::InvEps, FS::NH4,
                     "solver cost times the sampling factor"));

    // Semiclassical wave equation route.
    r.push_back(make("schrodinger.qsim.subroutine", "schrodinger", MF::QuantumSimulation,
                     EK::Subroutine, {1, 0}, {1, 0}, LogKind::SchrodingerObs, FS::None,
                     "split-step transform circuit at the observable mesh"));
    r.push_back(make("schrodinger.qsim.observable", "schrodinger", MF::QuantumSimulation,
                     EK::Observable, {1, 0}, {3, 0}, LogKind::SchrodingerObs, FS::NU04CO,
                     "splitting cost times the sampling factor"));
    r.push_back(make("schrodinger.spectral_qlsa.subroutine", "schrodinger", MF::SpectralQlsa,
                     EK::Subroutine, {2, 2}, {1, 4}, LogKind::SchrodingerObs, FS::None,
                     "collocation system fed to a linear-system solver"));
    r.push_back(make("schrodinger.spectral_qlsa.observable", "schrodinger", MF::SpectralQlsa,
                     EK::Observable, {2, 2}, {3, 4}, LogKind::SchrodingerObs, FS::NU04CO,
                     "solver cost times the sampling factor"));

    // Wavefunction-accuracy mesh variant, kept outside the summary table.
    r.push_back(make("schrodinger.qsim.wavefunction", "schrodinger", MF::QuantumSimulation,
                     EK::Subroutine, {1, 0}, {1.5, 0}, LogKind::SchrodingerWave, FS::None,
                     "split-step circuit at the wavefunction mesh", false));
    return r;
}

} // namespace

double schrodinger_observable_factor(SchrodObsKind kind, double d, double eps,
                                     double ell) {
    double inv_ell = std::isinf(ell) ? 0.0 : 1.0 / ell;
    switch (kind) {
        case SchrodObsKind::Density: return 1.0;
        case SchrodObsKind::Current:
            return std::pow(d, 2.0 * inv_ell) / std::pow(eps, 4.0 * inv_ell);
        case SchrodObsKind::Energy:
            return std::pow(d, 4.0 * inv_ell) / std::pow(eps, 8.0 * inv_ell);
    }
    return 1.0;
}

double evaluate(const ComplexityEntry& entry, double d, double eps, double ell,
                const EvalFactors& factors) {
    if (!(eps > 0.0) || eps > 1.0)
        throw ValidationError("accuracy parameter must lie in (0, 1]");
    if (!(d >= 1.0)) throw ValidationError("dimension must be at least 1");
    if (!(ell >= 1.0)) throw ValidationError("smoothness order must be at least 1");
    if (entry.d_exp.use_alpha && !(factors.alpha >= 3.0))
        throw ValidationError("matrix-order exponent must be at least 3");

    double dpow = std::pow(d, entry.d_exp.value(ell, factors.alpha));
    double epow = std::pow(eps, -entry.eps_exp.value(ell, factors.alpha));
    double logf = log_factor(entry.log_kind, d, eps, ell);
    double fac = factor_value(entry.factor, factors, d, eps, ell);
    return dpow * epow * logf * fac;
}

const std::vector<ComplexityEntry>& registry() {
    static const std::vector<ComplexityEntry> reg = build_registry();
    return reg;
}

const ComplexityEntry& entry_by_id(const std::string& id) {
    for (const auto& e : registry())
        if (e.id == id) return e;
    throw ValidationError("unknown complexity entry: " + id);
}

CompareTable compare_table(const std::vector<ComplexityEntry>& entries,
                           const std::vector<double>& dims,
                           const std::vector<double>& epsilons, double ell,
                           const EvalFactors& factors) {
    if (entries.empty()) throw ValidationError("no entries to compare");
    CompareTable table;
    for (const auto& e : entries) table.entry_ids.push_back(e.id);

    double smallest_eps = 1.0;
    for (double eps : epsilons) smallest_eps = std::min(smallest_eps, eps);

    bool sim_wins_small_eps = true;
    for (double d : dims) {
        for (double eps : epsilons) {
            CompareCell cell;
            cell.d = d;
            cell.eps = eps;
            double best = 0.0;
            const ComplexityEntry* best_entry = nullptr;
            for (const auto& e : entries) {
                double v = evaluate(e, d, eps, ell, factors);
                cell.values.push_back(v);
                if (!best_entry || v < best) {
                    best = v;
                    best_entry = &e;
                }
            }
            cell.cheapest_id = best_entry->id;
            if (eps == smallest_eps &&
                best_entry->family != MethodFamily::QuantumSimulation)
                sim_wins_small_eps = false;
            table.cells.push_back(std::move(cell));
        }
    }
    table.simulation_dominates_at_small_eps = sim_wins_small_eps;
    return table;
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string to_markdown(const CompareTable& table) {
    std::ostringstream os;
    os << "| d | eps |";
    for (const auto& id : table.entry_ids) os << ' ' << id << " |";
    os << " cheapest |\n|---|---|";
    for (std::size_t i = 0; i < table.entry_ids.size(); ++i) os << "---|";
    os << "---|\n";
    for (const auto& cell : table.cells) {
        os << "| " << fmt(cell.d) << " | " << fmt(cell.eps) << " |";
        for (double v : cell.values) os << ' ' << fmt(v) << " |";
        os << ' ' << cell.cheapest_id << " |\n";
    }
    return os.str();
}

std::string to_csv(const CompareTable& table) {
    std::ostringstream os;
    os << "d,eps";
    for (const auto& id : table.entry_ids) os << ',' << id;
    os << ",cheapest\n";
    for (const auto& cell : table.cells) {
        os << fmt(cell.d) << ',' << fmt(cell.eps);
        for (double v : cell.values) os << ',' << fmt(v);
        os << ',' << cell.cheapest_id << '\n';
    }
    return os.str();
}

CopyCostReport copy_cost(const CopyLedger& ledger) {
    if (ledger.per_step_success_prob.empty())
        throw ValidationError("copy-cost report needs a populated ledger");
    CopyCostReport rep;
    rep.steps = ledger.steps();
    rep.cumulative = ledger.cumulative_copy_estimate;
    rep.per_step_factor = std::pow(rep.cumulative, 1.0 / rep.steps);
    return rep;
}

} // namespace linrep::resources
