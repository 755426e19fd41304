#include "dualfield/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualfield::diagnostics {

namespace {

double grid_integral_sq(const GridField& a) {
    const int n = a.spec.n();
    std::vector<double> parts(3 * static_cast<std::size_t>(n));
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < n; ++i) {
            const double v = a.at(c, i).real();
            parts[static_cast<std::size_t>(c) * n + i] = v * v;
        }
    return pairwise_sum<double>(parts) * a.spec.cell_volume();
}

double grid_integral_dot(const GridField& a, const GridField& b) {
    const int n = a.spec.n();
    std::vector<double> parts(3 * static_cast<std::size_t>(n));
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < n; ++i)
            parts[static_cast<std::size_t>(c) * n + i] = a.at(c, i).real() * b.at(c, i).real();
    return pairwise_sum<double>(parts) * a.spec.cell_volume();
}

// J = dP/dt = sum_l w_l sqrt(2 sigma_l/pi) Re Z_l, exact from the amplitudes
GridField assemble_current(const BathState& bath) {
    GridField j(bath.grid(), FieldKind::J);
    const auto& spec = bath.spec();
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < bath.grid().n(); ++i) {
            double acc = 0;
            for (int l = 0; l < spec.n_lines(); ++l)
                acc += spec.weight[l] * bath.coupling_line()[l] * bath.z(l, c, i).real();
            j.at(c, i) = acc * bath.coupling_spatial()[i];
        }
    return j;
}

}  // namespace

double field_energy(const FieldState& field, const modes::ModeBasis& basis) {
    if (static_cast<int>(field.c.size()) != basis.mode_count())
        throw std::invalid_argument("field_energy: state does not match the basis");
    std::vector<double> parts(field.c.size());
    for (std::size_t m = 0; m < field.c.size(); ++m)
        parts[m] = basis.units.hbar * basis.omega_of(static_cast<int>(m)) * std::norm(field.c[m]);
    return pairwise_sum<double>(parts);
}

double matter_energy(const BathState& bath) {
    const auto& spec = bath.spec();
    const int n = bath.grid().n();
    std::vector<double> parts;
    parts.reserve(static_cast<std::size_t>(spec.n_lines()) * 3 * n);
    for (int l = 0; l < spec.n_lines(); ++l)
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < n; ++i)
                parts.push_back(spec.weight[l] * 0.5 * std::norm(bath.z(l, c, i)));
    return pairwise_sum<double>(parts) * bath.grid().cell_volume();
}

EnergyReport total_energy(const SimState& state) {
    EnergyReport r;
    r.t = state.field.time;

    const GridField F = modes::reconstruct_F(state.field.c, state.basis);
    const GridField D = modes::reconstruct_D(state.field.c, state.basis);
    const GridField B = modes::reconstruct_B(state.field.c, state.basis);
    const GridField P = dynamics::assemble_polarization(state.bath);
    const GridField E = dynamics::electric_field(D, P);

    r.H_M = matter_energy(state.bath);
    r.H_F = 0.5 * (grid_integral_sq(B) + grid_integral_sq(D));
    r.H_total = 0.5 * (grid_integral_sq(B) + grid_integral_sq(E)) + r.H_M;
    r.H_total_via_DP =
        r.H_F - grid_integral_dot(D, P) + 0.5 * grid_integral_sq(P) + r.H_M;
    const GridField curlP = modes::spectral_curl(P);
    r.H_total_via_curl =
        r.H_F - grid_integral_dot(F, curlP) + 0.5 * grid_integral_sq(P) + r.H_M;

    r.form_disagreement = std::max({std::abs(r.H_total - r.H_total_via_DP),
                                    std::abs(r.H_total - r.H_total_via_curl),
                                    std::abs(r.H_total_via_DP - r.H_total_via_curl)});
    const double scale = std::max(1.0, std::abs(r.H_total));
    if (r.form_disagreement > 1e-10 * scale)
        throw std::runtime_error(
            "total_energy: the algebraic forms of H disagree (projection bug)");
    return r;
}

namespace {

// pointwise energy density u = (B^2 + E^2)/2 + sum_l w_l |Z_l|^2 / 2
std::vector<double> energy_density(const SimState& state) {
    const GridField D = modes::reconstruct_D(state.field.c, state.basis);
    const GridField B = modes::reconstruct_B(state.field.c, state.basis);
    const GridField P = dynamics::assemble_polarization(state.bath);
    const GridField E = dynamics::electric_field(D, P);
    const int n = state.basis.grid.n();
    std::vector<double> u(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int c = 0; c < 3; ++c) {
            const double e = E.at(c, i).real();
            const double b = B.at(c, i).real();
            acc += 0.5 * (e * e + b * b);
        }
        const auto& spec = state.bath.spec();
        for (int l = 0; l < spec.n_lines(); ++l)
            for (int c = 0; c < 3; ++c)
                acc += 0.5 * spec.weight[l] * std::norm(state.bath.z(l, c, i));
        u[i] = acc;
    }
    return u;
}

}  // namespace

PoyntingReport poynting_residual(const SimState& before, const SimState& middle,
                                 const SimState& after, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("poynting_residual: dt must be positive");
    const auto u0 = energy_density(before);
    const auto u2 = energy_density(after);

    const GridField D = modes::reconstruct_D(middle.field.c, middle.basis);
    const GridField B = modes::reconstruct_B(middle.field.c, middle.basis);
    const GridField P = dynamics::assemble_polarization(middle.bath);
    const GridField E = dynamics::electric_field(D, P);
    const double c_light = middle.basis.units.c;

    GridField S(middle.basis.grid, FieldKind::Generic);  // c E x B
    const int n = middle.basis.grid.n();
    for (int i = 0; i < n; ++i) {
        const Vec3 e{E.at(0, i).real(), E.at(1, i).real(), E.at(2, i).real()};
        const Vec3 b{B.at(0, i).real(), B.at(1, i).real(), B.at(2, i).real()};
        const Vec3 s = c_light * cross(e, b);
        S.at(0, i) = s.x;
        S.at(1, i) = s.y;
        S.at(2, i) = s.z;
    }
    const auto div = modes::spectral_divergence(S);

    PoyntingReport rep;
    std::vector<double> flux_parts(n);
    const auto um = energy_density(middle);
    for (int i = 0; i < n; ++i) {
        const double dudt = (u2[i] - u0[i]) / (2 * dt);
        rep.max_residual = std::max(rep.max_residual, std::abs(dudt + div[i].real()));
        rep.energy_scale = std::max(rep.energy_scale, std::abs(um[i]));
        flux_parts[i] = div[i].real();
    }
    rep.flux_integral = pairwise_sum<double>(flux_parts) * middle.basis.grid.cell_volume();
    return rep;
}

ResponseResult driven_response(const ResponseConfig& cfg) {
    if (!cfg.profile.homogeneous())
        throw std::invalid_argument("driven_response: profile must be homogeneous");

    const auto basis = modes::build_basis(cfg.grid, cfg.k_max);
    dynamics::BathGridOptions bopt = cfg.bath;
    bopt.focus.push_back(cfg.omega_drive);
    const auto lines = dynamics::make_bath_lines(cfg.profile, bopt);

    SimState state = dynamics::make_sim_state(basis, cfg.profile, lines);
    dynamics::DriveSpec drive;
    drive.wavevector = 0;
    drive.pol = 0;
    drive.amplitude = cfg.amplitude;
    drive.omega = cfg.omega_drive;
    drive.ramp_time = cfg.ramp_time;
    state.drive = drive;
    const int m_drive = modes::ModeBasis::flat_index(drive.wavevector, drive.pol);

    double omega_top = cfg.omega_drive;
    for (double w : lines.omega) omega_top = std::max(omega_top, w);
    for (int m = 0; m < basis.mode_count(); ++m)
        omega_top = std::max(omega_top, basis.omega_of(m));
    const double dt = cfg.dt > 0 ? cfg.dt : 2 * pi / (24.0 * omega_top);

    const double t_window = cfg.n_window_periods * 2 * pi / cfg.omega_drive;
    const double t_total = cfg.ramp_time + cfg.settle_time + 2 * t_window;
    const int n_steps = static_cast<int>(std::ceil(t_total / dt));

    std::vector<double> times;
    std::vector<cplx> e_series, p_series;
    dynamics::EvolveOptions opts;
    opts.dt = dt;
    opts.n_steps = n_steps;
    opts.observe_every = 1;
    opts.hooks.push_back([&](const SimState& st, int) {
        times.push_back(st.field.time);
        const GridField Efield = st.electric_field_now();
        const GridField Pfield = dynamics::assemble_polarization(st.bath);
        e_series.push_back(modes::project(Efield, st.basis)[m_drive]);
        p_series.push_back(modes::project(Pfield, st.basis)[m_drive]);
    });
    dynamics::evolve(state, opts);

    // Hann-windowed Fourier quotient at the drive frequency over one window.
    const auto quotient = [&](double t_begin) {
        cplx num = 0, den = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            if (t < t_begin || t > t_begin + t_window) continue;
            const double s = (t - t_begin) / t_window;
            const double hann = 0.5 - 0.5 * std::cos(2 * pi * s);
            const cplx rot = std::polar(1.0, cfg.omega_drive * t);
            num += hann * rot * p_series[i];
            den += hann * rot * e_series[i];
        }
        if (std::abs(den) == 0)
            throw std::runtime_error("driven_response: no field content at the drive frequency");
        return num / den;
    };

    const double t0 = cfg.ramp_time + cfg.settle_time;
    const cplx chi1 = quotient(t0);
    const cplx chi2 = quotient(t0 + t_window);

    ResponseResult res;
    res.chi = chi2;
    res.window_drift = std::abs(chi2 - chi1) / std::max(1e-30, std::abs(chi2));
    res.transient_flagged = res.window_drift > 5e-3;
    return res;
}

MinimalState to_minimal(const FieldState& field, std::span<const cplx> p_coeffs,
                        const modes::ModeBasis& basis) {
    if (static_cast<int>(field.c.size()) != basis.mode_count() ||
        p_coeffs.size() != field.c.size())
        throw std::invalid_argument("to_minimal: size mismatch");
    MinimalState out;
    out.a.resize(field.c.size());
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        const int m1 = modes::ModeBasis::flat_index(w, 0);
        const int m2 = modes::ModeBasis::flat_index(w, 1);
        const double sc = 1.0 / std::sqrt(2 * basis.units.hbar * basis.omega_of(m1));
        out.a[m2] = -field.c[m1] - sc * p_coeffs[m2];
        out.a[m1] = field.c[m2] - sc * p_coeffs[m1];
    }
    return out;
}

FieldState from_minimal(const MinimalState& a, std::span<const cplx> p_coeffs,
                        const modes::ModeBasis& basis) {
    if (static_cast<int>(a.a.size()) != basis.mode_count() || p_coeffs.size() != a.a.size())
        throw std::invalid_argument("from_minimal: size mismatch");
    FieldState out;
    out.c.resize(a.a.size());
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        const int m1 = modes::ModeBasis::flat_index(w, 0);
        const int m2 = modes::ModeBasis::flat_index(w, 1);
        const double sc = 1.0 / std::sqrt(2 * basis.units.hbar * basis.omega_of(m1));
        out.c[m1] = -a.a[m2] - sc * p_coeffs[m2];
        out.c[m2] = a.a[m1] + sc * p_coeffs[m1];
    }
    return out;
}

MinimalState polarization_shift(const MinimalState& a, std::span<const cplx> p_coeffs,
                                const modes::ModeBasis& basis) {
    MinimalState out = a;
    for (int m = 0; m < basis.mode_count(); ++m)
        out.a[m] += p_coeffs[m] / std::sqrt(2 * basis.units.hbar * basis.omega_of(m));
    return out;
}

GridField reconstruct_A(std::span<const cplx> a, const modes::ModeBasis& basis) {
    const Units& un = basis.units;
    return modes::reconstruct_generic(a, basis, [&](double w) {
        return cplx{0, -un.c * std::sqrt(un.hbar / (2 * w))};
    }, modes::VecPattern::Pol, FieldKind::Generic);
}

GridField reconstruct_B_minimal(std::span<const cplx> a, const modes::ModeBasis& basis) {
    const Units& un = basis.units;
    return modes::reconstruct_generic(a, basis, [&](double w) {
        return cplx{std::sqrt(un.hbar * w / 2), 0};
    }, modes::VecPattern::KCrossPol, FieldKind::B);
}

GridField reconstruct_Eperp(std::span<const cplx> a, const modes::ModeBasis& basis) {
    const Units& un = basis.units;
    return modes::reconstruct_generic(a, basis, [&](double w) {
        return cplx{std::sqrt(un.hbar * w / 2), 0};
    }, modes::VecPattern::Pol, FieldKind::E);
}

EquivalenceReport hamiltonian_equivalence(const SimState& state) {
    const modes::ModeBasis& basis = state.basis;
    const GridField P = dynamics::assemble_polarization(state.bath);
    const auto p_coeffs = modes::project(P, basis);
    const double h_m = matter_energy(state.bath);

    // dual route
    const GridField B_dual = modes::reconstruct_B(state.field.c, basis);
    const GridField D = modes::reconstruct_D(state.field.c, basis);
    const GridField E_dual = dynamics::electric_field(D, P);
    const double h_dual = 0.5 * (grid_integral_sq(B_dual) + grid_integral_sq(E_dual)) + h_m;

    // minimal-coupling route through the transformed amplitudes
    const MinimalState a = to_minimal(state.field, p_coeffs, basis);
    const GridField E_perp_band = reconstruct_Eperp(a.a, basis);
    const GridField B_min = reconstruct_B_minimal(a.a, basis);
    const GridField A = reconstruct_A(a.a, basis);

    // transverse polarization outside the photon band carries E_perp = -P
    // there (no photon amplitude exists for it)
    const GridField P_perp = modes::transverse_part(P);
    const GridField P_perp_band =
        modes::synthesize(basis, p_coeffs, modes::VecPattern::Pol, FieldKind::P);
    GridField E_perp(basis.grid, FieldKind::E);
    for (std::size_t i = 0; i < E_perp.data.size(); ++i)
        E_perp.data[i] = E_perp_band.data[i] - (P_perp.data[i] - P_perp_band.data[i]);

    const GridField P_par = modes::longitudinal_part(P);  // E_par = -P_par

    const GridField J = assemble_current(state.bath);
    const GridField J_perp = modes::transverse_part(J);
    const double t_aj = grid_integral_dot(A, J_perp) / basis.units.c;

    const double h_minimal = 0.5 * (grid_integral_sq(E_perp) + grid_integral_sq(B_min)) -
                             t_aj + 0.5 * grid_integral_sq(P_par) + (h_m + t_aj);

    EquivalenceReport rep;
    rep.H_dual = h_dual;
    rep.H_minimal = h_minimal;
    rep.discrepancy = std::abs(h_dual - h_minimal);
    return rep;
}

}  // namespace dualfield::diagnostics
