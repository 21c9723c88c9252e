#include "qring/model.hpp"

#include "qring/error.hpp"
#include "qring/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qring {

void ModelParams::validate() const {
    if (!(hbar > 0.0)) throw ConfigError("model.hbar must be > 0");
    if (!(mass > 0.0)) throw ConfigError("model.mass must be > 0");
    if (n_apparatus < 1) throw ConfigError("model.n_apparatus must be >= 1");
    if (!(s2 > 0.0)) throw ConfigError("model.s2 must be > 0");
    if (!(sigma >= 0.0)) throw ConfigError("model.sigma must be >= 0");
    if (!std::isfinite(lambda)) throw ConfigError("model.lambda must be finite");
}

const WaveField& SystemState::particle(int i) const {
    if (i == 0) {
        if (!system) throw std::out_of_range("state has no system particle");
        return *system;
    }
    if (i < 0 || i > static_cast<int>(apparatus.size())) {
        throw std::out_of_range("particle index " + std::to_string(i) + " out of range");
    }
    return apparatus[i - 1];
}

WaveField& SystemState::particle(int i) {
    return const_cast<WaveField&>(std::as_const(*this).particle(i));
}

std::vector<std::span<const cplx>> field_views(const SystemState& state, bool with_system) {
    std::vector<std::span<const cplx>> views;
    views.reserve(state.apparatus.size() + 1);
    if (with_system && state.system) views.emplace_back(state.system->amplitudes);
    for (const auto& f : state.apparatus) views.emplace_back(f.amplitudes);
    return views;
}

std::vector<std::span<cplx>> mutable_field_views(SystemState& state, bool with_system) {
    std::vector<std::span<cplx>> views;
    views.reserve(state.apparatus.size() + 1);
    if (with_system && state.system) views.emplace_back(state.system->amplitudes);
    for (auto& f : state.apparatus) views.emplace_back(f.amplitudes);
    return views;
}

MeanfieldLayout meanfield_layout(const SystemState& state, const ModelParams& p) {
    MeanfieldLayout layout;
    const auto n = static_cast<double>(state.apparatus.size());
    layout.system_participates = state.system.has_value() && p.include_system_in_meanfield;
    layout.divisor = n;
    if (layout.system_participates && p.meanfield_norm == MeanfieldNorm::OverNPlus1) {
        layout.divisor = n + 1.0;
    }
    if (layout.divisor <= 0.0) layout.divisor = 1.0;  // system alone
    return layout;
}

std::vector<double> background_potential(const Grid& g, const ModelParams& p) {
    std::vector<double> v(g.size(), 0.0);
    if (!p.potential_on) return v;
    const auto theta = g.points();
    for (int j = 0; j < g.size(); ++j) {
        const double c = std::cos(theta[j]);
        v[j] = c * c;
    }
    return v;
}

std::vector<double> order_variable(const SystemState& state, const ModelParams& p, bool for_readout) {
    std::vector<double> phi2(state.grid->size());
    if (for_readout) {
        if (state.apparatus.empty()) {
            throw Error("readout requested on a state with zero apparatus particles");
        }
        kernels::Kernels{}.accumulate_density(field_views(state, false), phi2);
        const double inv = 1.0 / static_cast<double>(state.apparatus.size());
        for (auto& v : phi2) v *= inv;
        return phi2;
    }
    const auto layout = meanfield_layout(state, p);
    kernels::Kernels{}.accumulate_density(field_views(state, layout.system_participates), phi2);
    const double inv = 1.0 / layout.divisor;
    for (auto& v : phi2) v *= inv;
    return phi2;
}

std::vector<double> hartree_potential(int i, const SystemState& state, const ModelParams& p) {
    const auto layout = meanfield_layout(state, p);
    const WaveField& self = state.particle(i);
    std::vector<double> v = order_variable(state, p, false);
    const bool participates = i != 0 || layout.system_participates;
    const double inv = 1.0 / layout.divisor;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double self_term = participates ? std::norm(self.amplitudes[j]) * inv : 0.0;
        v[j] = p.lambda * (v[j] - self_term);
    }
    return v;
}

double total_energy(const SystemState& state, const ModelParams& p) {
    const Grid& g = *state.grid;
    const kernels::Kernels k;
    const auto all = field_views(state, true);

    std::vector<double> grad_sq(all.size());
    k.spectral_gradient_sq(all, g.wavenumbers(), g.transform(), grad_sq);
    double kinetic = 0.0;
    for (double v : grad_sq) kinetic += v;
    kinetic *= g.spacing() * p.hbar * p.hbar / (2.0 * p.mass);

    std::vector<double> rho_all(g.size());
    k.accumulate_density(all, rho_all);
    const auto v0 = background_potential(g, p);
    double external = 0.0;
    for (int j = 0; j < g.size(); ++j) external += v0[j] * rho_all[j];
    external *= g.spacing();

    const auto layout = meanfield_layout(state, p);
    const auto members = field_views(state, layout.system_participates);
    std::vector<double> rho_sum(g.size());
    k.accumulate_density(members, rho_sum);
    double pair = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        double self_sq = 0.0;
        for (const auto& f : members) {
            const double r = std::norm(f[j]);
            self_sq += r * r;
        }
        pair += rho_sum[j] * rho_sum[j] - self_sq;
    }
    double interaction = p.lambda / (2.0 * layout.divisor) * pair * g.spacing();

    if (state.system && !layout.system_participates) {
        // One-sided coupling: the system feels the apparatus but not vice versa.
        double cross = 0.0;
        for (int j = 0; j < g.size(); ++j) cross += std::norm(state.system->amplitudes[j]) * rho_sum[j];
        interaction += p.lambda / layout.divisor * cross * g.spacing();
    }
    return kinetic + external + interaction;
}

namespace {

// Weight of sample j in the theta > 0 half; theta = 0 and theta = -pi sit on the boundary.
inline double positive_weight(int j, int n) {
    if (j == 0 || 2 * j == n) return 0.5;
    return 2 * j > n ? 1.0 : 0.0;
}

}  // namespace

double positive_mass(std::span<const double> rho, const Grid& g) {
    double sum = 0.0;
    for (int j = 0; j < g.size(); ++j) sum += positive_weight(j, g.size()) * rho[j];
    return sum * g.spacing();
}

double readout_sign(std::span<const double> phi2, const Grid& g) {
    if (static_cast<int>(phi2.size()) != g.size()) throw GridError("length mismatch");
    double sum = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        sum += (2.0 * positive_weight(j, g.size()) - 1.0) * phi2[j];
    }
    return sum * g.spacing();
}

}  // namespace qring
