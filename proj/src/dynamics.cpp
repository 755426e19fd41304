#include "dualfield/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualfield::dynamics {

void BathSpec::validate() const {
    if (omega.size() != weight.size())
        throw std::invalid_argument("BathSpec: omega/weight size mismatch");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!(omega[i] > 0)) throw std::invalid_argument("BathSpec: lines must be > 0");
        if (!(weight[i] > 0)) throw std::invalid_argument("BathSpec: weights must be > 0");
    }
}

double BathSpec::min_spacing() const {
    std::vector<double> sorted = omega;
    std::sort(sorted.begin(), sorted.end());
    double d = sorted.empty() ? 0.0 : sorted.back();
    for (std::size_t i = 1; i < sorted.size(); ++i)
        d = std::min(d, sorted[i] - sorted[i - 1]);
    return d;
}

BathSpec make_bath_lines(const medium::ConductivityProfile& profile,
                         const BathGridOptions& opts) {
    if (!(opts.omega_min > 0) || !(opts.omega_max > opts.omega_min))
        throw std::invalid_argument("make_bath_lines: need 0 < omega_min < omega_max");
    std::vector<double> focus = opts.focus;
    for (double b : profile.breakpoints()) focus.push_back(b);
    double fw = opts.focus_width;
    if (fw <= 0)
        fw = profile.form() == medium::ProfileForm::Lorentzian ? profile.gamma() / 4
                                                               : (opts.omega_max - opts.omega_min) /
                                                                     (8.0 * opts.panels);
    const PanelSet panels = PanelSet::refined(opts.omega_min, opts.omega_max, opts.panels,
                                              opts.nodes_per_panel, focus, fw);
    BathSpec spec;
    panels.flatten(spec.omega, spec.weight);
    spec.validate();
    return spec;
}

BathState::BathState(BathSpec spec, const GridSpec& grid,
                     const medium::ConductivityProfile& profile)
    : spec_(std::move(spec)), grid_(grid) {
    spec_.validate();
    if (!profile.homogeneous() && profile.modulation_size() != grid.n())
        throw std::invalid_argument(
            "BathState: spatial modulation size does not match the grid");
    layout_ = kernels::BathLayout{spec_.n_lines(), grid.n()};
    z_.assign(layout_.size(), cplx{0, 0});
    s_line_.resize(spec_.n_lines());
    for (int l = 0; l < spec_.n_lines(); ++l)
        s_line_[l] = profile.coupling_spectral(spec_.omega[l]);
    sqrt_mod_.resize(grid.n());
    for (int i = 0; i < grid.n(); ++i) sqrt_mod_[i] = profile.coupling_spatial(i);
}

void BathState::excite_uniform(int line, int comp, cplx value) {
    for (int i = 0; i < grid_.n(); ++i) z(line, comp, i) = value;
}

double BathState::max_abs() const {
    double m = 0;
    for (const cplx& v : z_) m = std::max(m, std::abs(v));
    return m;
}

cplx phase_integral(double omega, double dt) {
    const double th = omega * dt;
    // (e^{i th} - 1)/(i w) = (sin th + i (1 - cos th)) / w, stable small-angle forms
    const double s = std::sin(th);
    const double one_minus_cos = 2.0 * std::sin(th / 2) * std::sin(th / 2);
    return cplx{s / omega, one_minus_cos / omega};
}

namespace {

std::vector<cplx> line_phases(const BathSpec& spec, double dt) {
    std::vector<cplx> ph(spec.n_lines());
    for (int l = 0; l < spec.n_lines(); ++l) {
        const double th = spec.omega[l] * dt;
        ph[l] = {std::cos(th), std::sin(th)};
    }
    return ph;
}

std::vector<cplx> line_kicks(const BathSpec& spec, double dt) {
    std::vector<cplx> phi(spec.n_lines());
    for (int l = 0; l < spec.n_lines(); ++l) phi[l] = phase_integral(spec.omega[l], dt);
    return phi;
}

}  // namespace

void step_bath(BathState& bath, const GridField& E, double dt) {
    if (dt == 0) throw std::invalid_argument("step_bath: dt must be nonzero");
    if (!(E.spec == bath.grid()))
        throw std::invalid_argument("step_bath: field grid does not match the bath grid");
    const auto phases = line_phases(bath.spec(), dt);
    const auto phis = line_kicks(bath.spec(), dt);
    kernels::rotate(bath.layout(), bath.raw(), phases);
    kernels::kick(bath.layout(), bath.raw(), bath.coupling_line(), bath.coupling_spatial(),
                  phis, E.data);
}

GridField assemble_polarization(const BathState& bath) {
    GridField p(bath.grid(), FieldKind::P);
    std::vector<double> w_over_omega_s(bath.spec().n_lines());
    for (int l = 0; l < bath.spec().n_lines(); ++l)
        w_over_omega_s[l] =
            bath.spec().weight[l] * bath.coupling_line()[l] / bath.spec().omega[l];
    kernels::polarization(bath.layout(), bath.raw(), w_over_omega_s, bath.coupling_spatial(),
                          p.data);
    return p;
}

void step_field(FieldState& field, std::span<const cplx> source, const modes::ModeBasis& basis,
                double dt) {
    if (dt == 0) throw std::invalid_argument("step_field: dt must be nonzero");
    if (static_cast<int>(field.c.size()) != basis.mode_count() ||
        source.size() != field.c.size())
        throw std::invalid_argument("step_field: amplitude/source size mismatch");
    const Units& un = basis.units;
    for (int m = 0; m < basis.mode_count(); ++m) {
        const double w = basis.omega_of(m);
        const double th = -w * dt;
        const cplx rot{std::cos(th), std::sin(th)};
        const double to_c = 1.0 / (un.c * std::sqrt(2 * un.hbar * w));
        field.c[m] = rot * field.c[m] + phase_integral(-w, dt) * (to_c * source[m]);
    }
}

GridField electric_field(const GridField& D, const GridField& P) {
    require_same_grid(D, P, "electric_field");
    GridField e(D.spec, FieldKind::E);
    for (std::size_t i = 0; i < e.data.size(); ++i) e.data[i] = D.data[i] - P.data[i];
    return e;
}

double DriveSpec::envelope(double t) const {
    if (t <= 0) return 0.0;
    if (ramp_time <= 0 || t >= ramp_time) return 1.0;
    const double s = t / ramp_time;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

GridField SimState::electric_field_now() const {
    const GridField D = modes::reconstruct_D(field.c, basis);
    GridField P = assemble_polarization(bath);
    if (drive && drive->amplitude != 0) {
        // drive pattern recomputed here (cold path); evolve caches it
        std::vector<cplx> u(basis.mode_count(), cplx{0, 0});
        const int m = modes::ModeBasis::flat_index(drive->wavevector, drive->pol);
        u[m] = 1.0;
        u[basis.conjugate_mode(m)] = modes::ModeBasis::eta(drive->pol);
        const GridField pat = modes::synthesize(basis, u, modes::VecPattern::Pol, FieldKind::P);
        const double a = drive->scalar(field.time);
        for (std::size_t i = 0; i < P.data.size(); ++i) P.data[i] += a * pat.data[i];
    }
    return electric_field(D, P);
}

SimState make_sim_state(const modes::ModeBasis& basis,
                        const medium::ConductivityProfile& profile, const BathSpec& lines) {
    SimState st;
    st.basis = basis;
    st.profile = profile;
    st.field.c.assign(basis.mode_count(), cplx{0, 0});
    st.bath = BathState(lines, basis.grid, profile);
    return st;
}

Trajectory evolve(SimState& state, const EvolveOptions& opts) {
    if (!(opts.dt != 0) || opts.n_steps < 1)
        throw std::invalid_argument("evolve: need nonzero dt and n_steps >= 1");

    const modes::ModeBasis& basis = state.basis;
    BathState& bath = state.bath;
    const int n_grid = basis.grid.n();

    double omega_max = 0;
    for (int m = 0; m < basis.mode_count(); ++m) omega_max = std::max(omega_max, basis.omega_of(m));
    for (double w : bath.spec().omega) omega_max = std::max(omega_max, w);
    if (std::abs(opts.dt) * omega_max * opts.min_samples_per_period > 2 * pi)
        throw std::invalid_argument(
            "evolve: dt under-resolves the fastest mode (guard: " +
            std::to_string(opts.min_samples_per_period) + " samples per period)");

    const double h = opts.dt / 2;
    const auto rot_h = line_phases(bath.spec(), h);
    const auto kick_h = line_kicks(bath.spec(), h);

    // self-consistency factor of the trailing half step: P[Z + s phi E] =
    // P[Z] + kappa E with kappa(x) = g(x) sum_l w_l s_l^2 Im phi_l / w_l
    double kappa0 = 0;
    for (int l = 0; l < bath.spec().n_lines(); ++l) {
        const double w = bath.spec().omega[l];
        const double s = bath.coupling_line()[l];
        kappa0 += bath.spec().weight[l] * s * s * phase_integral(w, h).imag() / w;
    }
    std::vector<double> inv_one_plus_kappa(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        const double g = bath.coupling_spatial()[i] * bath.coupling_spatial()[i];
        inv_one_plus_kappa[i] = 1.0 / (1.0 + g * kappa0);
    }

    // cached drive pattern
    GridField drive_pattern;
    const bool driven = state.drive && state.drive->amplitude != 0;
    if (driven) {
        std::vector<cplx> u(basis.mode_count(), cplx{0, 0});
        const int m = modes::ModeBasis::flat_index(state.drive->wavevector, state.drive->pol);
        u[m] = 1.0;
        u[basis.conjugate_mode(m)] = modes::ModeBasis::eta(state.drive->pol);
        drive_pattern = modes::synthesize(basis, u, modes::VecPattern::Pol, FieldKind::P);
    }
    const auto add_drive = [&](GridField& P, double t) {
        if (!driven) return;
        const double a = state.drive->scalar(t);
        for (std::size_t i = 0; i < P.data.size(); ++i) P.data[i] += a * drive_pattern.data[i];
    };

    Trajectory traj;
    for (const auto& obs : opts.observables) traj.names.push_back(obs.first);
    traj.series.resize(opts.observables.size());
    const auto record = [&](int step) {
        traj.time.push_back(state.field.time);
        for (std::size_t i = 0; i < opts.observables.size(); ++i)
            traj.series[i].push_back(opts.observables[i].second(state));
        for (const auto& hook : opts.hooks) hook(state, step);
    };
    const auto check_finite = [&](int step) {
        bool ok = true;
        for (const cplx& v : state.field.c)
            ok = ok && std::isfinite(v.real()) && std::isfinite(v.imag());
        for (const cplx& v : bath.raw())
            ok = ok && std::isfinite(v.real()) && std::isfinite(v.imag());
        if (!ok)
            throw std::runtime_error("evolve: non-finite state at step " + std::to_string(step));
    };

    record(0);
    for (int step = 1; step <= opts.n_steps; ++step) {
        const double t = state.field.time;

        // (1) leading bath half step on the explicit start-point field
        {
            const GridField D = modes::reconstruct_D(state.field.c, basis);
            GridField P = assemble_polarization(bath);
            add_drive(P, t);
            const GridField E = electric_field(D, P);
            kernels::rotate(bath.layout(), bath.raw(), rot_h);
            kernels::kick(bath.layout(), bath.raw(), bath.coupling_line(),
                          bath.coupling_spatial(), kick_h, E.data);
        }

        // (2) full field step on the midpoint source
        {
            GridField P = assemble_polarization(bath);
            add_drive(P, t + h);
            const auto S = modes::source_term(P, basis);
            step_field(state.field, S, basis, opts.dt);
        }

        // (3) trailing bath half step on the self-consistent endpoint field
        {
            kernels::rotate(bath.layout(), bath.raw(), rot_h);
            const GridField P_rot = assemble_polarization(bath);
            const GridField D = modes::reconstruct_D(state.field.c, basis);
            GridField E(basis.grid, FieldKind::E);
            GridField P_drv(basis.grid, FieldKind::P);
            add_drive(P_drv, t + opts.dt);
            for (int c = 0; c < 3; ++c)
                for (int i = 0; i < n_grid; ++i)
                    E.at(c, i) = (D.at(c, i) - P_rot.at(c, i) - P_drv.at(c, i)) *
                                 inv_one_plus_kappa[i];
            kernels::kick(bath.layout(), bath.raw(), bath.coupling_line(),
                          bath.coupling_spatial(), kick_h, E.data);
        }

        state.field.time = t + opts.dt;
        const bool at_interval = opts.observe_every > 0 && step % opts.observe_every == 0;
        if (at_interval || step == opts.n_steps) {
            check_finite(step);
            record(step);
        }
    }
    return traj;
}

}  // namespace dualfield::dynamics
