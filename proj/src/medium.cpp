#include "dualfield/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_sf_expint.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualfield::medium {

namespace {

double resolve_cap(const ConductivityProfile& profile, const MediumQuadrature& quad,
                   double at_least = 0) {
    double cap = quad.omega_cap > 0 ? quad.omega_cap : profile.suggested_cutoff(1e-6);
    if (const auto edge = profile.support_edge()) {
        if (quad.omega_cap > 0 && quad.omega_cap < *edge)
            throw std::invalid_argument(
                "quadrature cutoff does not cover the profile's spectral support");
        cap = std::max(cap, *edge);
    }
    return std::max(cap, at_least);
}

double resolve_focus_width(const ConductivityProfile& profile, const MediumQuadrature& quad) {
    if (quad.focus_width > 0) return quad.focus_width;
    if (profile.form() == ProfileForm::Lorentzian) return 0.25 * profile.gamma();
    return 0;
}

PanelSet panels_for(const ConductivityProfile& profile, const MediumQuadrature& quad, double a,
                    double b, int n_panels) {
    std::vector<double> focus;
    for (double f : profile.breakpoints())
        if (f > a && f < b) focus.push_back(f);
    const double fw = resolve_focus_width(profile, quad);
    if (focus.empty() || fw <= 0) {
        // still split at hard breakpoints (kinks, band edges)
        std::vector<double> edges;
        for (int i = 0; i <= n_panels; ++i) edges.push_back(a + (b - a) * i / n_panels);
        edges.insert(edges.end(), focus.begin(), focus.end());
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return PanelSet(std::move(edges), quad.nodes_per_panel);
    }
    return PanelSet::refined(a, b, n_panels, quad.nodes_per_panel, focus, fw);
}

}  // namespace

namespace {

// Piecewise-linear spectral samples for the oscillatory kernel integral:
// within each segment [a, b] the shape G(w) = 2 sigma(w)/pi is linear and
//   int (A + B w) sin(w t)/w dw = A (Si(b t) - Si(a t)) + B (cos(a t) - cos(b t))/t
// is exact, so the quadrature error is an interpolation error only and does
// not grow with tau. Segment endpoints are sampled one-sided so jumps at
// panel edges (band edges, tabulated kinks) stay on their own side.
struct FilonGrid {
    std::vector<double> lo, hi;      // segment bounds
    std::vector<double> g_lo, g_hi;  // shape at the bounds
};

FilonGrid filon_grid(const ConductivityProfile& profile, const PanelSet& panels, int segments) {
    FilonGrid grid;
    const auto& edges = panels.edges();
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double eps = 1e-9 * (b - a);
        for (int s = 0; s < segments; ++s) {
            const double lo = a + (b - a) * s / segments;
            const double hi = a + (b - a) * (s + 1) / segments;
            grid.lo.push_back(lo);
            grid.hi.push_back(hi);
            grid.g_lo.push_back(2.0 * profile.spectral(lo + eps) / pi);
            grid.g_hi.push_back(2.0 * profile.spectral(hi - eps) / pi);
        }
    }
    return grid;
}

double filon_chi(const FilonGrid& grid, double t) {
    if (t == 0.0) return 0.0;
    const std::size_t n = grid.lo.size();
    std::vector<double> parts(n);
    for (std::size_t q = 0; q < n; ++q) {
        const double a = grid.lo[q], b = grid.hi[q];
        const double slope = (grid.g_hi[q] - grid.g_lo[q]) / (b - a);
        const double offset = grid.g_lo[q] - slope * a;
        parts[q] = offset * (gsl_sf_Si(b * t) - gsl_sf_Si(a * t)) +
                   slope * (std::cos(a * t) - std::cos(b * t)) / t;
    }
    return pairwise_sum<double>(parts);
}

}  // namespace

SusceptibilityKernel chi_kernel(const ConductivityProfile& profile,
                                const std::vector<double>& tau_grid,
                                const MediumQuadrature& quad) {
    if (tau_grid.size() < 2) throw std::invalid_argument("chi_kernel: tau grid too small");
    if (!(tau_grid.front() >= 0)) throw std::invalid_argument("chi_kernel: tau must be >= 0");
    const double dt = tau_grid[1] - tau_grid[0];
    if (!(dt > 0)) throw std::invalid_argument("chi_kernel: tau grid must increase");
    for (std::size_t k = 1; k < tau_grid.size(); ++k) {
        if (std::abs((tau_grid[k] - tau_grid[k - 1]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("chi_kernel: tau grid must be uniform");
    }

    const double cap = resolve_cap(profile, quad);

    SusceptibilityKernel kernel;
    kernel.tau = tau_grid;
    kernel.omega_cap = cap;
    if (!profile.homogeneous()) {
        kernel.modulation.resize(profile.modulation_size());
        for (int i = 0; i < profile.modulation_size(); ++i)
            kernel.modulation[i] = profile.modulation_at(i);
    }

    if (profile.form() == ProfileForm::Zero) {
        kernel.shape.assign(tau_grid.size(), 0.0);
        return kernel;
    }

    const PanelSet panels = panels_for(profile, quad, 0.0, cap, quad.panels);
    const FilonGrid grid = filon_grid(profile, panels, quad.nodes_per_panel);
    kernel.shape.resize(tau_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(tau_grid.size()); ++k)
        kernel.shape[k] = filon_chi(grid, tau_grid[k]);

    // Resolution estimate: halved segment count, sampled on a spread of tau.
    const FilonGrid coarse =
        filon_grid(profile, panels, std::max(1, quad.nodes_per_panel / 2));
    double err = 0;
    const std::size_t stride = std::max<std::size_t>(1, tau_grid.size() / 33);
    for (std::size_t k = 0; k < tau_grid.size(); k += stride)
        err = std::max(err, std::abs(filon_chi(coarse, tau_grid[k]) - kernel.shape[k]));
    kernel.quad_error = err;
    return kernel;
}

Permittivity permittivity_from_kernel(const SusceptibilityKernel& kernel,
                                      const std::vector<double>& omega_grid, double eta,
                                      double* decay_warning) {
    if (omega_grid.empty()) throw std::invalid_argument("permittivity_from_kernel: empty grid");
    if (kernel.tau.size() < 2 || kernel.shape.size() != kernel.tau.size())
        throw std::invalid_argument("permittivity_from_kernel: malformed kernel");
    if (std::abs(kernel.tau.front()) > 0)
        throw std::invalid_argument("permittivity_from_kernel: kernel must start at tau = 0");

    const double dt = kernel.dtau();
    double w_max = 0;
    for (double w : omega_grid) w_max = std::max(w_max, std::abs(w));
    if (dt * std::max(kernel.omega_cap, w_max) > pi)
        throw std::invalid_argument(
            "permittivity_from_kernel: tau sampling under-resolves the kernel's frequency "
            "content (Nyquist)");

    const double tau_max = kernel.tau.back();
    double peak = 0;
    for (double v : kernel.shape) peak = std::max(peak, std::abs(v));
    const double tail = peak > 0 ? std::abs(kernel.shape.back()) / peak : 0.0;
    if (decay_warning) *decay_warning = tail > 1e-6 ? tail : 0.0;

    if (eta <= 0) eta = 0.5 / tau_max;

    // One-sided Fourier transform with exponential regularizer, trapezoid in
    // tau; eta and eta/2 combined by linear Richardson.
    const auto transform = [&](double w, double e) {
        std::vector<cplx> parts(kernel.tau.size());
        for (std::size_t k = 0; k < kernel.tau.size(); ++k) {
            const double t = kernel.tau[k];
            const double damp = std::exp(-e * t);
            const cplx phase{std::cos(w * t), std::sin(w * t)};
            double trap = (k == 0 || k + 1 == kernel.tau.size()) ? 0.5 : 1.0;
            parts[k] = kernel.shape[k] * damp * phase * (trap * dt);
        }
        return pairwise_sum<cplx>(parts);
    };

    Permittivity perm;
    perm.omega = omega_grid;
    perm.modulation = kernel.modulation;
    perm.chi_shape.resize(omega_grid.size());

    // Compute once per |omega|; negative frequencies get the exact conjugate.
    std::vector<long long> order(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) order[i] = static_cast<long long>(i);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(order.size()); ++ii) {
        const double w = omega_grid[ii];
        const double aw = std::abs(w);
        const cplx full = 2.0 * transform(aw, eta / 2) - transform(aw, eta);
        perm.chi_shape[ii] = w >= 0 ? full : std::conj(full);
    }
    return perm;
}

cplx permittivity_pv(const ConductivityProfile& profile, int x_index, double omega,
                     const MediumQuadrature& quad, PvInfo* info) {
    const double g = profile.modulation_at(x_index);
    const double aw = std::abs(omega);
    const double cap = resolve_cap(profile, quad, 2 * aw + 1.0);

    if (info) info->convergence_estimate = 0;
    if (profile.form() == ProfileForm::Zero) return {1.0, 0.0};

    // Smoothness at the principal-value point: a jump or a spike narrower
    // than the probe makes the integral diverge or lose meaning there.
    const double probe_h = 1e-7 * std::max(1.0, cap);
    if (aw > 0 && aw < cap) {
        const double mid =
            0.5 * (profile.spectral(aw + probe_h) + profile.spectral(aw - probe_h));
        if (std::abs(profile.spectral(aw) - mid) >
            1e-3 * (profile.peak_value() + profile.spectral(aw)))
            throw std::invalid_argument(
                "permittivity_pv: conductivity is discontinuous or spike-like at the requested "
                "frequency; the principal value does not exist there");
    }

    double imag;
    if (aw > 0) {
        imag = profile.sigma(aw, x_index) / aw;
        if (omega < 0) imag = -imag;
    } else {
        // omega = 0 allowed only when sigma/omega has a (zero) limit.
        const double h = 1e-8 * cap;
        const double lim = profile.spectral(h) / h;
        if (std::abs(lim) > 1e-6 * profile.peak_value())
            throw std::invalid_argument(
                "permittivity_pv: sigma(0) > 0, the static limit of the permittivity diverges");
        imag = 0.0;
    }

    const int n_outer = std::max(8, quad.panels);
    double real_part;
    if (aw <= 0) {
        const PanelSet panels = panels_for(profile, quad, 0.0, cap, n_outer);
        real_part = panels.integrate(
            [&](double u) { return profile.spectral(u) / (u * u); });
    } else if (aw >= cap) {
        const PanelSet panels = panels_for(profile, quad, 0.0, cap, n_outer);
        real_part = panels.integrate(
            [&](double u) { return profile.spectral(u) / (u * u - aw * aw); });
    } else {
        // Half-width of the symmetric window around u = omega; kept clear of
        // profile breakpoints so sigma is smooth across the window.
        double W = std::min(aw, cap - aw);
        for (double f : profile.breakpoints()) {
            const double d = std::abs(f - aw);
            if (d > probe_h) W = std::min(W, 0.9 * d);
        }
        W = std::min(W, 0.25 * cap);
        if (!(W > 0)) throw std::invalid_argument("permittivity_pv: degenerate window");

        double outer = 0;
        if (aw - W > 16 * probe_h) {
            const PanelSet p1 = panels_for(profile, quad, 0.0, aw - W, n_outer);
            outer += p1.integrate(
                [&](double u) { return profile.spectral(u) / (u * u - aw * aw); });
        }
        if (cap - (aw + W) > 16 * probe_h) {
            const PanelSet p2 = panels_for(profile, quad, aw + W, cap, n_outer);
            outer += p2.integrate(
                [&](double u) { return profile.spectral(u) / (u * u - aw * aw); });
        }

        // Symmetric-node pairing: the 1/s poles cancel, leaving a bounded
        // integrand on [delta, W].
        const auto pair_integrand = [&](double s) {
            return profile.spectral(aw + s) / (s * (2 * aw + s)) -
                   profile.spectral(aw - s) / (s * (2 * aw - s));
        };
        const auto window_from = [&](double delta) {
            // log-spaced panels from delta to W
            std::vector<double> edges;
            const int per_decade = 4;
            const int nseg = std::max(4, static_cast<int>(per_decade * std::log10(W / delta)) + 1);
            for (int i = 0; i <= nseg; ++i)
                edges.push_back(delta * std::pow(W / delta, double(i) / nseg));
            PanelSet p(std::move(edges), quad.nodes_per_panel);
            return p.integrate(pair_integrand);
        };
        const double delta0 = 1e-3 * W;
        const double i_d0 = window_from(delta0);
        const double i_d1 = window_from(delta0 / 2);
        const double window = 2 * i_d1 - i_d0;  // Richardson in window size
        if (info) info->convergence_estimate = std::abs(i_d1 - i_d0);
        real_part = outer + window;
    }

    return cplx{1.0 + g * (2.0 / pi) * real_part, g * imag};
}

KkReport kk_report(const Permittivity& perm) {
    const std::size_t n = perm.omega.size();
    if (n < 4) throw std::invalid_argument("kk_report: grid too small");
    const double h = perm.omega[1] - perm.omega[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((perm.omega[i] - perm.omega[i - 1]) - h) > 1e-9 * h)
            throw std::invalid_argument("kk_report: omega grid must be uniform");
    // Symmetric band: each omega must have its negative on the grid.
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = -perm.omega[n - 1 - i];
        if (std::abs(perm.omega[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw std::invalid_argument("kk_report: omega grid must be symmetric about 0");
    }

    KkReport report;
    for (int x = 0; x < perm.n_x(); ++x) {
        std::vector<double> re(n), im(n);
        double scale = 1.0, peak_im = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx e = perm.value(x, static_cast<int>(i));
            re[i] = e.real();
            im[i] = e.imag();
            scale = std::max(scale, std::abs(e));
            peak_im = std::max(peak_im, std::abs(e.imag()));
        }

        // Hermitian symmetry residual on the stored grid.
        for (std::size_t i = 0; i < n; ++i) {
            const cplx e = perm.value(x, static_cast<int>(i));
            const cplx em = perm.value(x, static_cast<int>(n - 1 - i));
            report.hermitian_residual =
                std::max(report.hermitian_residual, std::abs(e - std::conj(em)));
        }

        // Kress odd-offset discrete Hilbert transform of eps''.
        std::vector<double> residual(n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            double s = 0;
            for (std::size_t j = (i % 2 == 0) ? 1 : 0; j < n; j += 2)
                s += im[j] / (perm.omega[j] - perm.omega[i]);
            const double hil = (2.0 * h / pi) * s;
            residual[i] = std::abs(re[i] - 1.0 - hil);
        }
        for (std::size_t i = 0; i < n; ++i)
            report.max_rel_residual = std::max(report.max_rel_residual, residual[i] / scale);

        // Edge-dominated absorption means the band cut through spectral
        // weight and the closure residual is truncation noise.
        const double edge_im = std::max(std::abs(im.front()), std::abs(im.back()));
        if (peak_im > 0 && edge_im > 1e-3 * peak_im) report.truncation_dominated = true;
    }
    return report;
}

}  // namespace dualfield::medium
