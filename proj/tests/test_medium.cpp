#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dualfield/medium.hpp"

using namespace dualfield;
using namespace dualfield::medium;

namespace {

// --- independent oracles (kept free of the implementation under test) ------

// Sine integral by truncated power series, good to ~1e-15 for |x| <= 4.
double si_series(double x) {
    double sum = 0, term = x;
    for (int n = 0; n < 60; ++n) {
        const int k = 2 * n + 1;
        sum += term / k;
        term *= -x * x / ((2 * n + 2) * (2 * n + 3));
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

// Damped-oscillator medium: the profile
//   sigma(w) = s0 g^2 w^2 / ((w^2 - w0^2)^2 + (g w)^2)
// has the closed-form kernel and permittivity below (checked against direct
// quadrature of the spectral integrals before being frozen here).
double chi_lorentzian(double s0, double w0, double g, double tau) {
    const double nu = std::sqrt(w0 * w0 - g * g / 4);
    return s0 * g * std::exp(-g * tau / 2) * std::sin(nu * tau) / nu;
}

cplx eps_lorentzian(double s0, double w0, double g, double w) {
    return 1.0 + s0 * g / cplx(w0 * w0 - w * w, -g * w);
}

// Flat band on [0, W]: PV integral of s0/(u^2-w^2) has a log closed form.
double eps_flat_real(double s0, double W, double w) {
    return 1.0 + s0 / (pi * w) * std::log((W - w) / (W + w));
}

std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

const double kSi1 = 0.94608307036718298;  // si_series(1), frozen

// Long-memory kernel shared by the permittivity tests (expensive to build).
const SusceptibilityKernel& lorentzian_kernel() {
    static const SusceptibilityKernel k = chi_kernel(
        ConductivityProfile::lorentzian(1.0, 2.0, 0.1), uniform_grid(0.0, 600.0, 20001));
    return k;
}

}  // namespace

TEST_CASE("sine-integral oracle reproduces its frozen value") {
    CHECK(si_series(1.0) == doctest::Approx(kSi1).epsilon(1e-15));
}

TEST_CASE("conductivity profiles: sign, evenness, validation") {
    const auto flat = ConductivityProfile::flat_band(1.0, 1.0);
    const auto lor = ConductivityProfile::lorentzian(1.0, 2.0, 0.1);
    const auto tab = ConductivityProfile::tabulated({0.0, 1.0, 2.0}, {0.0, 0.5, 0.0});

    for (const auto* p : {&flat, &lor, &tab}) {
        for (double w = 0; w <= 8.0; w += 0.03125) {
            CHECK(p->spectral(w) >= 0.0);
            CHECK(p->spectral(-w) == p->spectral(w));  // even extension, never stored
        }
    }
    CHECK(lor.spectral(2.0) == doctest::Approx(1.0));  // peak value is sigma0

    CHECK_THROWS(ConductivityProfile::lorentzian(-1.0, 2.0, 0.1));
    CHECK_THROWS(ConductivityProfile::lorentzian(1.0, 2.0, 0.0));
    CHECK_THROWS(ConductivityProfile::tabulated({1.0, 1.0}, {0.0, 1.0}));
    CHECK_THROWS(ConductivityProfile::tabulated({0.0, 1.0}, {0.0, -1.0}));
    CHECK_THROWS(flat.with_modulation({1.0, -0.5}));

    const auto modulated = lor.with_modulation({0.0, 0.5, 2.0});
    CHECK(modulated.sigma(2.0, 0) == 0.0);
    CHECK(modulated.sigma(2.0, 2) == doctest::Approx(2.0));
}

TEST_CASE("chi_kernel: zero profile and tau=0") {
    const auto tau = uniform_grid(0.0, 10.0, 101);
    const auto zero = chi_kernel(ConductivityProfile::zero(), tau);
    for (std::size_t k = 0; k < tau.size(); ++k) CHECK(zero.value(0, k) == 0.0);

    const auto lor = chi_kernel(ConductivityProfile::lorentzian(1.0, 2.0, 0.1), tau);
    CHECK(lor.value(0, 0) == 0.0);  // sin(0) = 0 under the integral
}

TEST_CASE("chi_kernel: flat band against the sine-integral oracle") {
    const auto profile = ConductivityProfile::flat_band(1.0, 1.0);
    const auto tau = uniform_grid(0.0, 4.0, 5);  // tau = 0, 1, 2, 3, 4
    const auto kernel = chi_kernel(profile, tau);
    for (std::size_t k = 0; k < tau.size(); ++k) {
        const double expected = 2.0 / pi * si_series(tau[k]);
        CHECK(kernel.value(0, k) == doctest::Approx(expected).epsilon(1e-12));
    }
    // frozen spot value chi(1) = (2/pi() Si(1)
    CHECK(kernel.value(0, 1) == doctest::Approx(2.0 / pi * kSi1).epsilon(1e-12));
    CHECK(kernel.quad_error < 1e-10);
}

TEST_CASE("chi_kernel: lorentzian against the closed form") {
    const double s0 = 1.0, w0 = 2.0, g = 0.1;
    const auto profile = ConductivityProfile::lorentzian(s0, w0, g);
    const auto tau = uniform_grid(0.0, 60.0, 1201);
    const auto kernel = chi_kernel(profile, tau);
    double worst = 0;
    for (std::size_t k = 0; k < tau.size(); ++k)
        worst = std::max(worst, std::abs(kernel.value(0, k) - chi_lorentzian(s0, w0, g, tau[k])));
    CHECK(worst < 2e-5);  // interpolation-limited at default quadrature settings
}

TEST_CASE("chi_kernel: linear in the profile") {
    const std::vector<double> w{0.0, 0.5, 1.0, 1.5, 2.0};
    const std::vector<double> s1{0.0, 0.3, 0.1, 0.7, 0.0};
    const std::vector<double> s2{0.0, 0.2, 0.9, 0.1, 0.0};
    const double a = 0.7, b = 1.9;
    std::vector<double> mix(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mix[i] = a * s1[i] + b * s2[i];

    const auto tau = uniform_grid(0.0, 8.0, 33);
    const MediumQuadrature quad{.panels = 16, .nodes_per_panel = 8, .omega_cap = 2.0};
    const auto k1 = chi_kernel(ConductivityProfile::tabulated(w, s1), tau, quad);
    const auto k2 = chi_kernel(ConductivityProfile::tabulated(w, s2), tau, quad);
    const auto km = chi_kernel(ConductivityProfile::tabulated(w, mix), tau, quad);
    for (std::size_t k = 0; k < tau.size(); ++k)
        CHECK(km.value(0, k) ==
              doctest::Approx(a * k1.value(0, k) + b * k2.value(0, k)).epsilon(1e-13));
}

TEST_CASE("chi_kernel: input validation") {
    const auto profile = ConductivityProfile::flat_band(1.0, 1.0);
    CHECK_THROWS(chi_kernel(profile, {0.0, 0.5, 1.5}));  // non-uniform
    CHECK_THROWS(chi_kernel(profile, {1.0, 0.5}));       // decreasing
    // cap below the tabulated support
    const auto tab = ConductivityProfile::tabulated({0.0, 3.0}, {0.0, 1.0});
    MediumQuadrature quad;
    quad.omega_cap = 2.0;
    CHECK_THROWS(chi_kernel(tab, uniform_grid(0.0, 1.0, 8), quad));
}

TEST_CASE("permittivity_from_kernel: vacuum and validation") {
    const auto tau = uniform_grid(0.0, 10.0, 401);
    const auto kernel = chi_kernel(ConductivityProfile::zero(), tau);
    const auto perm = permittivity_from_kernel(kernel, {0.0, 0.5, 1.0});
    for (int i = 0; i < 3; ++i) CHECK(perm.value(0, i) == cplx(1.0, 0.0));

    CHECK_THROWS(permittivity_from_kernel(kernel, {}));  // empty grid
    // Nyquist violation: kernel with content up to cap=1 sampled at dtau=0.5
    const auto coarse = chi_kernel(ConductivityProfile::flat_band(1.0, 1.0),
                                   uniform_grid(0.0, 40.0, 11));
    CHECK_THROWS(permittivity_from_kernel(coarse, {8.0}));
}

TEST_CASE("permittivity_from_kernel: lorentzian against the closed form") {
    const double s0 = 1.0, w0 = 2.0, g = 0.1;
    const auto profile = ConductivityProfile::lorentzian(s0, w0, g);
    const auto& kernel = lorentzian_kernel();

    double warn = -1;
    const auto grid = uniform_grid(0.1, 6.0, 60);
    const auto perm = permittivity_from_kernel(kernel, grid, 0, &warn);
    CHECK(warn == 0.0);  // kernel decayed
    double worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx ref = eps_lorentzian(s0, w0, g, grid[i]);
        worst = std::max(worst, std::abs(perm.value(0, i) - ref) / std::abs(ref));
    }
    CHECK(worst < 2e-4);

    // Im eps = sigma/omega within quadrature tolerance
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expect = profile.sigma(grid[i]) / grid[i];
        CHECK(perm.value(0, i).imag() == doctest::Approx(expect).epsilon(5e-3));
    }
}

TEST_CASE("permittivity_from_kernel: Hermitian symmetry is exact on the stored grid") {
    const auto kernel = lorentzian_kernel();
    std::vector<double> grid;
    for (int i = -5; i <= 5; ++i) grid.push_back(0.6 * i);
    const auto perm = permittivity_from_kernel(kernel, grid);
    for (int i = 0; i <= 10; ++i)
        CHECK(perm.value(0, i) == std::conj(perm.value(0, 10 - i)));
}

TEST_CASE("permittivity_from_kernel: undamped kernel raises the decay flag") {
    const auto kernel =
        chi_kernel(ConductivityProfile::flat_band(1.0, 1.0), uniform_grid(0.0, 12.0, 601));
    double warn = 0;
    (void)permittivity_from_kernel(kernel, {0.5}, 0, &warn);
    CHECK(warn > 0.0);
}

TEST_CASE("permittivity_pv: vacuum and exact imaginary part") {
    CHECK(permittivity_pv(ConductivityProfile::zero(), 0, 1.0) == cplx(1.0, 0.0));

    const auto lor = ConductivityProfile::lorentzian(0.8, 2.0, 0.1);
    for (double w : {0.3, 1.0, 2.5, 5.0}) {
        const cplx e = permittivity_pv(lor, 0, w);
        CHECK(e.imag() == lor.sigma(w) / w);  // inserted analytically, bit-exact
    }
    // odd imaginary part under omega -> -omega
    CHECK(permittivity_pv(lor, 0, -1.0) == std::conj(permittivity_pv(lor, 0, 1.0)));
}

TEST_CASE("permittivity_pv: lorentzian real part against the closed form") {
    const double s0 = 1.0, w0 = 2.0, g = 0.1;
    const auto profile = ConductivityProfile::lorentzian(s0, w0, g);
    PvInfo info;
    for (double w : {0.1, 0.5, 1.0, 1.99, 2.0, 3.0, 6.0}) {
        const cplx e = permittivity_pv(profile, 0, w, {}, &info);
        const cplx ref = eps_lorentzian(s0, w0, g, w);
        CHECK(e.real() == doctest::Approx(ref.real()).epsilon(1e-6));
        CHECK(info.convergence_estimate < 1e-3);
    }
    // static limit exists for this profile: eps(0) = 1 + s0*g/w0^2
    const cplx e0 = permittivity_pv(profile, 0, 0.0);
    CHECK(e0.real() == doctest::Approx(1.0 + s0 * g / (w0 * w0)).epsilon(1e-8));
    CHECK(e0.imag() == 0.0);
}

TEST_CASE("permittivity_pv: flat band against the log closed form") {
    const double s0 = 0.7, W = 1.0;
    const auto profile = ConductivityProfile::flat_band(s0, W);
    for (double w : {0.2, 0.5, 0.8}) {
        const cplx e = permittivity_pv(profile, 0, w);
        CHECK(e.real() == doctest::Approx(eps_flat_real(s0, W, w)).epsilon(1e-8));
        CHECK(e.imag() == s0 / w);
    }
}

TEST_CASE("permittivity_pv: rejects divergent and non-integrable requests") {
    const auto flat = ConductivityProfile::flat_band(1.0, 1.0);
    CHECK_THROWS(permittivity_pv(flat, 0, 0.0));  // sigma(0) > 0: static limit diverges
    CHECK_THROWS(permittivity_pv(flat, 0, 1.0));  // PV point at the band-edge jump
    // delta-like tabulated spike at the requested frequency
    const auto spike =
        ConductivityProfile::tabulated({0.0, 1.0 - 1e-9, 1.0, 1.0 + 1e-9, 2.0},
                                       {0.0, 0.0, 5.0, 0.0, 0.0});
    CHECK_THROWS(permittivity_pv(spike, 0, 1.0));
}

TEST_CASE("kernel route and PV route agree on a damped profile") {
    const auto profile = ConductivityProfile::lorentzian(1.0, 2.0, 0.1);
    const auto& kernel = lorentzian_kernel();
    const auto grid = uniform_grid(0.1, 6.0, 24);
    const auto perm = permittivity_from_kernel(kernel, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx pv = permittivity_pv(profile, 0, grid[i]);
        CHECK(std::abs(perm.value(0, i) - pv) / std::abs(pv) < 1e-3);
    }
}

TEST_CASE("kk_report: vacuum closes to machine precision") {
    Permittivity perm;
    perm.omega = uniform_grid(-4.0, 4.0, 81);
    perm.chi_shape.assign(81, cplx(0.0, 0.0));
    const auto report = kk_report(perm);
    CHECK(report.max_rel_residual < 1e-15);
    CHECK(report.hermitian_residual == 0.0);
    CHECK_FALSE(report.truncation_dominated);
}

TEST_CASE("kk_report: lorentzian on an adequate band closes below 1e-3") {
    const double s0 = 1.0, w0 = 2.0, g = 0.1;
    Permittivity perm;
    const int n = 8001;
    perm.omega = uniform_grid(-8.0, 8.0, n);
    perm.chi_shape.resize(n);
    for (int i = 0; i < n; ++i)
        perm.chi_shape[i] = eps_lorentzian(s0, w0, g, perm.omega[i]) - 1.0;
    const auto report = kk_report(perm);
    CHECK(report.max_rel_residual < 1e-3);
    CHECK(report.hermitian_residual < 1e-13);  // table built without mirroring
    CHECK_FALSE(report.truncation_dominated);
}

TEST_CASE("kk_report: band cut inside the line is truncation-dominated") {
    const double s0 = 1.0, w0 = 2.0, g = 0.1;
    Permittivity perm;
    const int n = 2001;
    perm.omega = uniform_grid(-2.0, 2.0, n);
    perm.chi_shape.resize(n);
    for (int i = 0; i < n; ++i)
        perm.chi_shape[i] = eps_lorentzian(s0, w0, g, perm.omega[i]) - 1.0;
    const auto report = kk_report(perm);
    CHECK(report.max_rel_residual > 1e-1);
    CHECK(report.truncation_dominated);
}

TEST_CASE("kk_report: grid-shape validation") {
    Permittivity perm;
    perm.omega = {-1.0, 0.0, 0.5};
    perm.chi_shape.assign(3, cplx(0.0, 0.0));
    CHECK_THROWS(kk_report(perm));
}
