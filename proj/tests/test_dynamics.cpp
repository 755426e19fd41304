#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dualfield/dynamics.hpp"
#include "dualfield/medium.hpp"
#include "dualfield/rng.hpp"

using namespace dualfield;
using namespace dualfield::dynamics;
using dualfield::medium::ConductivityProfile;

namespace {

GridSpec small_grid() { return GridSpec{{2 * pi, 2.0, 2.0}, {8, 4, 4}}; }
GridSpec cube_spec() { return GridSpec{{2 * pi, 2 * pi, 2 * pi}, {8, 8, 8}}; }

// Independent closed form for two coupled oscillators
//   u'' = -a u - g v,  v'' = -g u - b v
// via exact 2x2 eigen-decomposition; evolves complex initial data.
struct PairOracle {
    double a, b, g;
    double lam[2];
    double vec[2][2];  // vec[i] = eigenvector of lam[i]

    PairOracle(double a_, double b_, double g_) : a(a_), b(b_), g(g_) {
        const double tr = a + b;
        const double disc = std::sqrt((a - b) * (a - b) + 4 * g * g);
        lam[0] = (tr - disc) / 2;
        lam[1] = (tr + disc) / 2;
        for (int i = 0; i < 2; ++i) {
            double ex = g, ey = lam[i] - a;
            if (std::abs(ex) + std::abs(ey) < 1e-300) {
                ex = 1;
                ey = 0;
            }
            const double n = std::hypot(ex, ey);
            vec[i][0] = ex / n;
            vec[i][1] = ey / n;
        }
    }

    struct State {
        cplx u, du, v, dv;
    };

    State at(const State& init, double t) const {
        State out{};
        for (int i = 0; i < 2; ++i) {
            const cplx q0 = init.u * vec[i][0] + init.v * vec[i][1];
            const cplx p0 = init.du * vec[i][0] + init.dv * vec[i][1];
            const double w = std::sqrt(lam[i]);
            const cplx q = q0 * std::cos(w * t) + p0 * std::sin(w * t) / w;
            const cplx p = -q0 * w * std::sin(w * t) + p0 * std::cos(w * t);
            out.u += q * vec[i][0];
            out.v += q * vec[i][1];
            out.du += p * vec[i][0];
            out.dv += p * vec[i][1];
        }
        return out;
    }
};

// max |c_sim - c_oracle| over the trajectory of the excited mode, for the
// single-pair basis + single-line bath scenario.
double polariton_error(double sigma0, double omega_line, double dt, int n_steps,
                       int observe_every) {
    const auto basis = modes::build_basis(small_grid(), 1.0);
    REQUIRE(basis.n_wavevectors() == 2);
    const int w_plus = basis.wavevectors[0].n[0] > 0 ? 0 : 1;
    const int mode = modes::ModeBasis::flat_index(w_plus, 0);

    const auto profile = ConductivityProfile::flat_band(sigma0, 4.0);
    BathSpec lines{{omega_line}, {1.0}};
    SimState state = make_sim_state(basis, profile, lines);
    state.field.c[mode] = 1.0;

    const double wa = basis.omega_of(mode);
    const double s = profile.coupling_spectral(omega_line);
    const double weight = 1.0;
    const double g = basis.units.c * norm(basis.wavevectors[w_plus].k) * s * std::sqrt(weight);
    PairOracle oracle(wa * wa, omega_line * omega_line + weight * s * s, g);

    const double amp = basis.units.c * std::sqrt(2 * basis.units.hbar * wa);
    PairOracle::State init{};
    init.u = -amp / (cplx{0, 2 * wa});  // q(0) for c_mode = 1, partner 0
    init.du = amp / 2.0;

    double worst = 0;
    EvolveOptions opts;
    opts.dt = dt;
    opts.n_steps = n_steps;
    opts.observe_every = observe_every;
    opts.hooks.push_back([&](const SimState& st, int) {
        const auto o = oracle.at(init, st.field.time);
        const cplx c_expect = (o.du - cplx{0, wa} * o.u) / amp;
        worst = std::max(worst, std::abs(st.field.c[mode] - c_expect));
    });
    evolve(state, opts);
    return worst;
}

}  // namespace

TEST_CASE("bath spec and grid builder") {
    CHECK_THROWS(BathSpec({{0.0, 1.0}, {1.0, 1.0}}).validate());
    CHECK_THROWS(BathSpec({{0.5, 1.0}, {1.0, -1.0}}).validate());

    const auto profile = ConductivityProfile::lorentzian(1.0, 2.0, 0.1);
    const auto lines = make_bath_lines(profile, {.omega_min = 0.05, .omega_max = 8.0});
    lines.validate();
    CHECK(lines.n_lines() > 100);
    // refinement clusters lines near the resonance
    int near = 0;
    for (double w : lines.omega)
        if (std::abs(w - 2.0) < 0.2) ++near;
    CHECK(near > 20);
}

TEST_CASE("step_bath: free oscillation preserves modulus and advances phase") {
    const GridSpec g{{1, 1, 1}, {2, 2, 2}};
    const auto profile = ConductivityProfile::flat_band(0.5, 3.0);
    BathState bath(BathSpec{{1.3}, {1.0}}, g, profile);
    bath.excite_uniform(0, 1, cplx{0.7, -0.2});

    GridField E(g, FieldKind::E);  // zero field: kick vanishes only if sigma = 0
    BathState free_bath(BathSpec{{1.3}, {1.0}}, g, ConductivityProfile::zero());
    free_bath.excite_uniform(0, 1, cplx{0.7, -0.2});
    const double dt = 0.37;
    for (int n = 0; n < 50; ++n) step_bath(free_bath, E, dt);
    const cplx expect = cplx{0.7, -0.2} * std::polar(1.0, 1.3 * 50 * dt);
    CHECK(std::abs(free_bath.z(0, 1, 0) - expect) < 1e-12);

    // sigma > 0 with E = 0 also stays free
    for (int n = 0; n < 50; ++n) step_bath(bath, E, dt);
    CHECK(std::abs(bath.z(0, 1, 0) - expect) < 1e-12);
    CHECK_THROWS(step_bath(bath, E, 0.0));
}

TEST_CASE("step_bath: constant field reproduces the variation-of-constants solution") {
    const GridSpec g{{1, 1, 1}, {2, 2, 2}};
    const double sigma0 = 0.8, omega = 1.7, e0 = 0.45;
    const auto profile = ConductivityProfile::flat_band(sigma0, 3.0);
    BathState bath(BathSpec{{omega}, {1.0}}, g, profile);
    GridField E(g, FieldKind::E);
    for (int i = 0; i < g.n(); ++i) E.at(0, i) = e0;

    const double dt = 0.01;
    const int n = 400;
    for (int k = 0; k < n; ++k) step_bath(bath, E, dt);
    const double s = std::sqrt(2 * sigma0 / pi);
    const cplx expect = s * e0 * phase_integral(omega, n * dt);
    CHECK(std::abs(bath.z(0, 0, 0) - expect) < 1e-12);  // composition of exact steps
    CHECK(std::abs(bath.z(0, 1, 0)) == 0.0);
}

TEST_CASE("step_bath: resonant drive grows with the secular slope") {
    const GridSpec g{{1, 1, 1}, {2, 2, 2}};
    const double sigma0 = 0.3, omega = 2.0, e0 = 1.0;
    const auto profile = ConductivityProfile::flat_band(sigma0, 3.0);
    BathState bath(BathSpec{{omega}, {1.0}}, g, profile);
    GridField E(g, FieldKind::E);

    const double dt = 2 * pi / omega / 200;
    const int n_periods = 40;
    const int n = 200 * n_periods;
    double t = 0;
    for (int k = 0; k < n; ++k) {
        const double tm = t + dt / 2;  // midpoint field
        for (int i = 0; i < g.n(); ++i) E.at(2, i) = e0 * std::cos(omega * tm);
        step_bath(bath, E, dt);
        t += dt;
    }
    const double slope = std::abs(bath.z(0, 2, 0)) / t;
    const double expect = std::sqrt(2 * sigma0 / pi) * e0 / 2;
    CHECK(slope == doctest::Approx(expect).epsilon(2e-3));
}

TEST_CASE("assemble_polarization: rest, pure displacement, and modulation") {
    const GridSpec g{{1, 1, 1}, {2, 2, 2}};
    const double sigma0 = 0.6, omega = 1.1, weight = 0.8, x0 = 0.33;
    const auto profile = ConductivityProfile::flat_band(sigma0, 2.0);
    BathState bath(BathSpec{{omega}, {weight}}, g, profile);

    CHECK(assemble_polarization(bath).max_abs() == 0.0);

    bath.excite_uniform(0, 2, cplx{0, omega * x0});  // Z = i w X0
    const GridField p = assemble_polarization(bath);
    const double expect = weight * std::sqrt(2 * sigma0 / pi) * x0;
    for (int i = 0; i < g.n(); ++i) {
        CHECK(p.at(2, i).real() == doctest::Approx(expect).epsilon(1e-14));
        CHECK(std::abs(p.at(0, i)) == 0.0);
    }

    // spatial modulation scales the coupling by sqrt(g) twice
    std::vector<double> mod(g.n());
    for (int i = 0; i < g.n(); ++i) mod[i] = 0.25 * i;
    BathState bath2(BathSpec{{omega}, {weight}}, g, profile.with_modulation(mod));
    bath2.excite_uniform(0, 2, cplx{0, omega * x0});
    const GridField p2 = assemble_polarization(bath2);
    for (int i = 0; i < g.n(); ++i)
        CHECK(p2.at(2, i).real() ==
              doctest::Approx(expect * std::sqrt(mod[i])).epsilon(1e-13));
}

TEST_CASE("bath driven by constant E reproduces the susceptibility integral") {
    // P(t) = int_0^t chi(tau) E dtau; the bath quadrature and the kernel
    // quadrature discretize the same frequency integral independently.
    const GridSpec g{{1, 1, 1}, {2, 2, 2}};
    const auto profile = ConductivityProfile::lorentzian(0.8, 2.0, 0.4);
    const auto lines = make_bath_lines(profile, {.omega_min = 0.02, .omega_max = 30.0,
                                                 .panels = 64, .nodes_per_panel = 8});
    BathState bath(lines, g, profile);

    const double e0 = 1.0, dt = 0.005, t_end = 6.0;
    GridField E(g, FieldKind::E);
    for (int i = 0; i < g.n(); ++i) E.at(0, i) = e0;
    const int n = static_cast<int>(t_end / dt);
    for (int k = 0; k < n; ++k) step_bath(bath, E, dt);
    const double p_sim = assemble_polarization(bath).at(0, 0).real();

    // independent route: medium-module kernel, trapezoid in tau
    const auto tau = [&] {
        std::vector<double> t(1201);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = t_end * i / (t.size() - 1);
        return t;
    }();
    const auto kernel = medium::chi_kernel(profile, tau);
    double integral = 0;
    for (std::size_t i = 0; i + 1 < tau.size(); ++i)
        integral += 0.5 * (kernel.value(0, i) + kernel.value(0, i + 1)) * (tau[1] - tau[0]);
    CHECK(p_sim == doctest::Approx(integral * e0).epsilon(1e-3));
}

TEST_CASE("step_field: free rotation and constant source") {
    const auto basis = modes::build_basis(small_grid(), 1.0);
    FieldState f;
    f.c.assign(basis.mode_count(), cplx{0, 0});
    f.c[0] = cplx{0.3, 0.4};
    std::vector<cplx> zero(basis.mode_count(), cplx{0, 0});
    const double dt = 0.02;
    for (int k = 0; k < 100; ++k) step_field(f, zero, basis, dt);
    const double w = basis.omega_of(0);
    CHECK(std::abs(f.c[0] - cplx{0.3, 0.4} * std::polar(1.0, -w * 2.0)) < 1e-12);
    CHECK(std::abs(f.c[0]) == doctest::Approx(0.5).epsilon(1e-13));

    // constant source from rest: same closed form as the bath, with the
    // source-to-amplitude normalization 1/(c sqrt(2 hbar w))
    FieldState f2;
    f2.c.assign(basis.mode_count(), cplx{0, 0});
    std::vector<cplx> src(basis.mode_count(), cplx{0, 0});
    src[1] = cplx{0.9, -0.1};
    for (int k = 0; k < 100; ++k) step_field(f2, src, basis, dt);
    const double w1 = basis.omega_of(1);
    const cplx kappa = 1.0 / (basis.units.c * std::sqrt(2 * basis.units.hbar * w1));
    const cplx expect = kappa * src[1] * phase_integral(-w1, 100 * dt);
    CHECK(std::abs(f2.c[1] - expect) < 1e-13);
}

TEST_CASE("step_field: off-resonant monochromatic source beats with bounded amplitude") {
    const auto basis = modes::build_basis(small_grid(), 1.0);
    const int m = 0;
    const double w = basis.omega_of(m);   // 1
    const double nu = 0.6, s0 = 0.5, dt = 2 * pi / 400;
    FieldState f;
    f.c.assign(basis.mode_count(), cplx{0, 0});
    std::vector<cplx> src(basis.mode_count(), cplx{0, 0});

    const cplx kappa = 1.0 / (basis.units.c * std::sqrt(2 * basis.units.hbar * w));
    double worst = 0;
    double t = 0;
    for (int k = 0; k < 4000; ++k) {
        src[m] = s0 * std::cos(nu * (t + dt / 2));
        step_field(f, src, basis, dt);
        t += dt;
        // closed form: c(t) = kappa s0/2 int_0^t e^{-iw(t-t')}(e^{i nu t'}+e^{-i nu t'})dt'
        const cplx i{0, 1};
        const cplx e_m = std::polar(1.0, -w * t);
        const cplx term1 = (std::polar(1.0, nu * t) - e_m) / (i * (nu + w));
        const cplx term2 = (std::polar(1.0, -nu * t) - e_m) / (i * (w - nu));
        const cplx expect = kappa * s0 / 2.0 * (term1 + term2);
        worst = std::max(worst, std::abs(f.c[m] - expect));
    }
    CHECK(worst < 5e-5);  // O(dt^2) midpoint sampling error
}

TEST_CASE("evolve: vacuum keeps every mode modulus constant") {
    const auto basis = modes::build_basis(small_grid(), 1.0);
    SimState state = make_sim_state(basis, ConductivityProfile::zero(), BathSpec{{1.0}, {1.0}});
    Rng rng(17);
    for (auto& v : state.field.c) v = rng.cgaussian();
    const std::vector<double> mods = [&] {
        std::vector<double> m;
        for (const auto& v : state.field.c) m.push_back(std::abs(v));
        return m;
    }();

    EvolveOptions opts;
    opts.dt = 0.05;
    opts.n_steps = 500;
    opts.observe_every = 100;
    opts.hooks.push_back([&](const SimState& st, int) {
        for (std::size_t m = 0; m < mods.size(); ++m)
            CHECK(std::abs(st.field.c[m]) == doctest::Approx(mods[m]).epsilon(1e-13));
    });
    evolve(state, opts);
}

TEST_CASE("evolve: matches the two-oscillator polariton closed form") {
    const double err = polariton_error(1.4e-5, 1.0, 2 * pi / 100, 2000, 50);
    CHECK(err < 1e-4);
}

TEST_CASE("evolve: halving dt improves the oracle error fourfold") {
    // moderate coupling so the splitting error dominates roundoff
    const double e1 = polariton_error(0.01, 1.0, 2 * pi / 50, 400, 10);
    const double e2 = polariton_error(0.01, 1.0, 2 * pi / 100, 800, 20);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("evolve: time reversal returns the initial state") {
    const auto basis = modes::build_basis(cube_spec(), 1.0);
    const auto profile = ConductivityProfile::flat_band(0.1, 3.0);
    SimState state = make_sim_state(basis, profile, BathSpec{{1.3}, {1.0}});
    Rng rng(4);
    for (auto& v : state.field.c) v = rng.cgaussian();
    state.bath.excite_uniform(0, 0, cplx{0.2, 0.1});
    const auto c0 = state.field.c;
    const auto z0 = state.bath.raw();

    EvolveOptions fwd;
    fwd.dt = 0.05;
    fwd.n_steps = 200;
    evolve(state, fwd);
    EvolveOptions bwd = fwd;
    bwd.dt = -fwd.dt;
    evolve(state, bwd);

    double worst = 0;
    for (std::size_t m = 0; m < c0.size(); ++m)
        worst = std::max(worst, std::abs(state.field.c[m] - c0[m]));
    for (std::size_t i = 0; i < z0.size(); ++i)
        worst = std::max(worst, std::abs(state.bath.raw()[i] - z0[i]));
    CHECK(worst < 1e-10);
    CHECK(std::abs(state.field.time) < 1e-12);
}

TEST_CASE("evolve: reality and divergence constraints hold along the trajectory") {
    const auto basis = modes::build_basis(cube_spec(), 1.0);
    const auto profile = ConductivityProfile::flat_band(0.2, 3.0);
    SimState state = make_sim_state(basis, profile, BathSpec{{0.9, 1.7}, {0.6, 0.4}});
    Rng rng(12);
    for (auto& v : state.field.c) v = rng.cgaussian();
    state.bath.excite_uniform(0, 1, cplx{0.3, -0.4});

    EvolveOptions opts;
    opts.dt = 0.04;
    opts.n_steps = 300;
    opts.observe_every = 75;
    opts.hooks.push_back([&](const SimState& st, int) {
        const auto fields = modes::reconstruct_fields(st.field.c, st.basis);
        CHECK(fields.F.max_imag() < 1e-10);
        CHECK(fields.D.max_imag() < 1e-10);
        CHECK(fields.B.max_imag() < 1e-10);
        for (const GridField* f : {&fields.D, &fields.B})
            for (const cplx& v : modes::spectral_divergence(*f)) CHECK(std::abs(v) < 1e-10);
        const GridField P = assemble_polarization(st.bath);
        CHECK(P.max_imag() < 1e-12);
    });
    evolve(state, opts);
}

TEST_CASE("evolve: guard and abort diagnostics") {
    const auto basis = modes::build_basis(small_grid(), 1.0);
    SimState state = make_sim_state(basis, ConductivityProfile::zero(), BathSpec{{8.0}, {1.0}});
    EvolveOptions opts;
    opts.dt = 0.5;  // 8 rad/time at dt 0.5: fewer than 20 samples per period
    opts.n_steps = 10;
    CHECK_THROWS_AS(evolve(state, opts), std::invalid_argument);

    opts.dt = 0.01;
    state.bath.excite_uniform(0, 0, cplx{std::nan(""), 0});
    opts.observe_every = 1;
    try {
        evolve(state, opts);
        FAIL("expected non-finite abort");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("electric_field: pointwise identity and shape checks") {
    const GridSpec g{{1, 1, 1}, {2, 2, 2}};
    GridField D(g, FieldKind::D), P(g, FieldKind::P);
    Rng rng(2);
    for (auto& v : D.data) v = rng.cgaussian();
    for (auto& v : P.data) v = rng.cgaussian();
    const GridField E = electric_field(D, P);
    for (std::size_t i = 0; i < E.data.size(); ++i) {
        CHECK(E.data[i] == D.data[i] - P.data[i]);  // the stored value itself
        CHECK(std::abs(D.data[i] - E.data[i] - P.data[i]) < 1e-15);
    }
    GridField Q(GridSpec{{1, 1, 1}, {4, 2, 2}}, FieldKind::P);
    CHECK_THROWS(electric_field(D, Q));

    // P = 0 and D = 0 limits
    GridField zero(g, FieldKind::P);
    const GridField e1 = electric_field(D, zero);
    for (std::size_t i = 0; i < e1.data.size(); ++i) CHECK(e1.data[i] == D.data[i]);
    const GridField e2 = electric_field(zero, P);
    for (std::size_t i = 0; i < e2.data.size(); ++i) CHECK(e2.data[i] == -P.data[i]);
}

TEST_CASE("drive envelope ramps smoothly") {
    DriveSpec d;
    d.amplitude = 1.0;
    d.omega = 2.0;
    d.ramp_time = 5.0;
    CHECK(d.envelope(-1.0) == 0.0);
    CHECK(d.envelope(0.0) == 0.0);
    CHECK(d.envelope(2.5) == doctest::Approx(0.5));
    CHECK(d.envelope(5.0) == 1.0);
    CHECK(d.envelope(9.0) == 1.0);
}
