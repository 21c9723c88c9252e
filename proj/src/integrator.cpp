#include "qring/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace qring {

std::int64_t EvolveConfig::step_count() const {
    const double ratio = t_final / dt;
    const auto steps = static_cast<std::int64_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-6 * std::max(1.0, ratio)) {
        throw ConfigError("evolve.t_final must be an integer multiple of evolve.dt");
    }
    return steps;
}

void EvolveConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("evolve.dt must be > 0");
    if (!(t_final >= 0.0)) throw ConfigError("evolve.t_final must be >= 0");
    if (snapshot_every < 0) throw ConfigError("evolve.snapshot_every must be >= 0");
    if (diagnostics_every < 0) throw ConfigError("evolve.diagnostics_every must be >= 0");
    if (!(energy_budget > 0.0)) throw ConfigError("evolve.energy_budget must be > 0");
    if (max_tightenings < 0) throw ConfigError("evolve.max_tightenings must be >= 0");
    step_count();
}

double DiagnosticsLog::max_energy_drift() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.energy_drift);
    return m;
}

double DiagnosticsLog::max_norm_drift() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.norm_drift);
    return m;
}

SplitStepper::SplitStepper(const GridPtr& grid, const ModelParams& p, double dt, kernels::Backend backend)
    : grid_(grid),
      params_(p),
      dt_(dt),
      kernels_{backend},
      v0_(background_potential(*grid, p)),
      kinetic_(grid->size()),
      rho_sum_(grid->size()),
      common_(grid->size()) {
    const auto k = grid->wavenumbers();
    const double inv_n = 1.0 / grid->size();
    const double rate = p.hbar * dt / (2.0 * p.mass);
    for (int j = 0; j < grid->size(); ++j) {
        const double kk = double(k[j]) * k[j];
        kinetic_[j] = std::polar(inv_n, -rate * kk);
    }
}

void SplitStepper::refresh_density(const SystemState& state) {
    kernels_.accumulate_density(field_views(state, layout_.system_participates), rho_sum_);
}

void SplitStepper::kick(std::span<const std::span<cplx>> all, double fraction) {
    const double coupling = params_.lambda / layout_.divisor;
    for (std::size_t j = 0; j < common_.size(); ++j) {
        common_[j] = v0_[j] + coupling * rho_sum_[j];
    }
    kernels_.apply_potential_phase(all, common_, self_weight_, fraction * dt_ / params_.hbar);
}

void SplitStepper::advance(SystemState& state, std::int64_t steps, std::int64_t first_step) {
    if (steps <= 0) return;
    layout_ = meanfield_layout(state, params_);
    const auto all = mutable_field_views(state, true);
    const double coupling = params_.lambda / layout_.divisor;
    self_weight_.assign(all.size(), coupling);
    if (state.system && !layout_.system_participates) self_weight_[0] = 0.0;

    // Kicks leave densities unchanged, so the closing half kick of one step and
    // the opening half kick of the next use the same potential and fuse into one.
    refresh_density(state);
    kick(all, 0.5);
    for (std::int64_t s = 0; s < steps; ++s) {
        kernels_.apply_spectral(all, kinetic_, grid_->transform());
        refresh_density(state);
        kick(all, s + 1 == steps ? 0.5 : 1.0);
        state.time += dt_;

        double total = 0.0;
        for (double r : rho_sum_) total += r;
        if (state.system && !layout_.system_participates) {
            for (const auto& a : state.system->amplitudes) total += std::norm(a);
        }
        if (!std::isfinite(total)) throw NumericalBlowUp(first_step + s + 1);
    }
}

void step(SystemState& state, const ModelParams& p, double dt) {
    SplitStepper(state.grid, p, dt).advance(state, 1);
}

namespace {

Snapshot take_snapshot(const SystemState& state, const ModelParams& p) {
    Snapshot snap;
    snap.time = state.time;
    if (!state.apparatus.empty()) snap.order_variable = order_variable(state, p, true);
    if (state.system) snap.system_density = state.system->density();
    return snap;
}

double max_norm_deviation(const SystemState& state) {
    double dev = 0.0;
    if (state.system) dev = std::abs(state.system->norm() - 1.0);
    for (const auto& f : state.apparatus) dev = std::max(dev, std::abs(f.norm() - 1.0));
    return dev;
}

struct Attempt {
    DiagnosticsLog log;
    std::vector<Snapshot> snapshots;
    bool over_budget = false;
};

Attempt run_attempt(SystemState& state, const ModelParams& p, const EvolveConfig& cfg, double dt,
                    bool abort_on_drift, kernels::Backend backend) {
    Attempt out;
    out.log.dt_used = dt;
    EvolveConfig local = cfg;
    local.dt = dt;
    // Cadences stay fixed in time units when dt has been halved.
    const auto scale = static_cast<int>(std::llround(cfg.dt / dt));
    local.diagnostics_every *= scale;
    local.snapshot_every *= scale;
    const std::int64_t total_steps = local.step_count();
    if (total_steps == 0) return out;

    const double e0 = total_energy(state, p);
    const double e_scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
    auto record = [&](double energy) {
        out.log.samples.push_back({state.time, energy, std::abs(energy - e0) / e_scale,
                                   max_norm_deviation(state)});
    };
    if (local.diagnostics_every > 0) record(e0);
    if (local.snapshot_every > 0) out.snapshots.push_back(take_snapshot(state, p));

    SplitStepper stepper(state.grid, p, dt, backend);
    std::int64_t done = 0;
    while (done < total_steps) {
        std::int64_t chunk = total_steps - done;
        if (local.diagnostics_every > 0) chunk = std::min<std::int64_t>(chunk, local.diagnostics_every - done % local.diagnostics_every);
        if (local.snapshot_every > 0) chunk = std::min<std::int64_t>(chunk, local.snapshot_every - done % local.snapshot_every);
        try {
            stepper.advance(state, chunk, done);
        } catch (const NumericalBlowUp& e) {
            throw EvolveFailure(e.step(), std::move(out.log));
        }
        done += chunk;
        const bool last = done == total_steps;
        if (local.diagnostics_every > 0 && (done % local.diagnostics_every == 0 || last)) {
            record(total_energy(state, p));
            if (abort_on_drift && out.log.samples.back().energy_drift > 0.5 * cfg.energy_budget) {
                out.over_budget = true;
                return out;
            }
        }
        if (local.snapshot_every > 0 && (done % local.snapshot_every == 0 || last)) {
            out.snapshots.push_back(take_snapshot(state, p));
        }
    }
    return out;
}

}  // namespace

DiagnosticsLog evolve(SystemState& state, const ModelParams& p, const EvolveConfig& cfg,
                      const SnapshotObserver& observer, kernels::Backend backend) {
    cfg.validate();
    const SystemState initial = state;
    double dt = cfg.dt;
    for (int attempt = 0;; ++attempt) {
        const bool may_tighten = attempt < cfg.max_tightenings;
        Attempt result = run_attempt(state, p, cfg, dt, may_tighten, backend);
        if (result.over_budget) {
            state = initial;
            dt *= 0.5;
            continue;
        }
        result.log.tightenings = attempt;
        if (observer) {
            for (const auto& s : result.snapshots) observer(s);
        }
        return std::move(result.log);
    }
}

}  // namespace qring
