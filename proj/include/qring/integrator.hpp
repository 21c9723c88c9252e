#pragma once

#include "qring/error.hpp"
#include "qring/kernels.hpp"
#include "qring/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qring {

struct EvolveConfig {
    double dt = 5e-4;
    double t_final = 24.0;
    int snapshot_every = 0;      ///< steps between snapshots; 0 disables them
    int diagnostics_every = 200; ///< steps between energy/norm checks; 0 disables them
    double energy_budget = 1e-3; ///< allowed relative energy drift over the horizon
    int max_tightenings = 3;     ///< restarts with dt/2 allowed when drift passes half the budget

    /// Number of steps to reach t_final; throws ConfigError when dt does not divide it.
    std::int64_t step_count() const;
    void validate() const;
};

struct DiagnosticsSample {
    double time = 0.0;
    double energy = 0.0;
    double energy_drift = 0.0;  ///< |E(t) - E(0)| / |E(0)|
    double norm_drift = 0.0;    ///< max over fields of |norm - 1|
};

struct DiagnosticsLog {
    std::vector<DiagnosticsSample> samples;
    double dt_used = 0.0;
    int tightenings = 0;

    double max_energy_drift() const;
    double max_norm_drift() const;
};

struct Snapshot {
    double time = 0.0;
    std::vector<double> order_variable;   ///< apparatus-only phi^2
    std::vector<double> system_density;   ///< empty without a system particle
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Raised by evolve(); carries the diagnostics gathered before the failure.
class EvolveFailure : public NumericalBlowUp {
public:
    EvolveFailure(std::int64_t step, DiagnosticsLog partial)
        : NumericalBlowUp(step), log_(std::move(partial)) {}
    const DiagnosticsLog& partial_log() const noexcept { return log_; }

private:
    DiagnosticsLog log_;
};

/// Strang split-step propagator for the coupled Hartree equations.
///
/// One step: half potential kick with V0 + V_HF, exact kinetic propagation in
/// wavenumber space, half kick with V_HF rebuilt from the new densities. Both
/// substeps are unitary per field, so norms are preserved to rounding.
class SplitStepper {
public:
    SplitStepper(const GridPtr& grid, const ModelParams& p, double dt,
                 kernels::Backend backend = kernels::Backend::Parallel);

    /// Advances `state` by `steps` steps. Throws NumericalBlowUp with the global
    /// step index (offset by `first_step`) on non-finite values.
    void advance(SystemState& state, std::int64_t steps, std::int64_t first_step = 0);

    double dt() const noexcept { return dt_; }

private:
    void kick(std::span<const std::span<cplx>> all, double fraction);
    void refresh_density(const SystemState& state);

    GridPtr grid_;
    ModelParams params_;
    double dt_;
    kernels::Kernels kernels_;
    std::vector<double> v0_;
    std::vector<cplx> kinetic_;
    std::vector<double> rho_sum_;
    std::vector<double> common_;
    std::vector<double> self_weight_;
    MeanfieldLayout layout_;
};

/// One split step of size dt (convenience wrapper around SplitStepper).
void step(SystemState& state, const ModelParams& p, double dt);

/// Runs to cfg.t_final, checking energy and norm every `diagnostics_every` steps.
///
/// Snapshots go to `observer` (if set) every `snapshot_every` steps, plus t = 0
/// and the final time. When `max_tightenings` > 0 and the energy drift passes
/// half the budget, the run restarts from the initial state with dt halved.
DiagnosticsLog evolve(SystemState& state, const ModelParams& p, const EvolveConfig& cfg,
                      const SnapshotObserver& observer = {},
                      kernels::Backend backend = kernels::Backend::Parallel);

}  // namespace qring
