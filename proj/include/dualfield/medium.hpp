// medium.hpp — causal susceptibility kernel, complex permittivity and
// Kramers-Kronig consistency checks for a conductivity-defined medium
#pragma once

#include <optional>
#include <vector>

#include "dualfield/profile.hpp"
#include "dualfield/quadrature.hpp"

namespace dualfield::medium {

struct MediumQuadrature {
    int panels = 64;
    int nodes_per_panel = 16;
    double omega_cap = 0;      // 0 = derive from the profile
    double focus_width = 0;    // 0 = derive from the profile (gamma/4 for lines)
};

// chi(x, tau) = g(x) * chi_shape(tau): the spatial modulation factors out of
// the frequency integral, so only the shape is tabulated.
struct SusceptibilityKernel {
    std::vector<double> tau;          // uniform, tau[0] = 0
    std::vector<double> shape;        // chi_shape(tau_k)
    std::vector<double> modulation;   // empty for homogeneous media
    double omega_cap = 0;             // frequency content bound (Nyquist checks)
    double quad_error = 0;            // estimated quadrature truncation error

    double dtau() const { return tau.size() > 1 ? tau[1] - tau[0] : 0.0; }
    int n_x() const { return modulation.empty() ? 1 : static_cast<int>(modulation.size()); }
    double value(int x_index, int tau_index) const {
        const double g = modulation.empty() ? 1.0 : modulation[x_index];
        return g * shape[tau_index];
    }
};

// epsilon(x, omega) = 1 + g(x) * chi_tilde(omega) on a stored grid that is
// symmetric under omega -> -omega with exactly conjugated values.
struct Permittivity {
    std::vector<double> omega;       // ascending, symmetric about 0
    std::vector<cplx> chi_shape;     // chi_tilde at each omega
    std::vector<double> modulation;  // empty for homogeneous media

    int n_x() const { return modulation.empty() ? 1 : static_cast<int>(modulation.size()); }
    cplx value(int x_index, int omega_index) const {
        const double g = modulation.empty() ? 1.0 : modulation[x_index];
        return 1.0 + g * chi_shape[omega_index];
    }
};

struct PvInfo {
    double convergence_estimate = 0;  // |window Richardson correction|
};

struct KkReport {
    double max_rel_residual = 0;      // max |eps' - 1 - H[eps'']| / max(1, |eps|)
    double hermitian_residual = 0;    // max |eps(-w) - conj(eps(w))|
    bool truncation_dominated = false;
};

// chi(tau) = int_0^inf dw (2 sigma_w / pi) sin(w tau) / w, per Heaviside
// causality only tau >= 0 is represented.
SusceptibilityKernel chi_kernel(const ConductivityProfile& profile,
                                const std::vector<double>& tau_grid,
                                const MediumQuadrature& quad = {});

// eps(omega) = 1 + int_0^inf chi(tau) e^{i omega tau} dtau, computed with an
// e^{-eta tau} regularizer and linear Richardson extrapolation eta -> 0+.
Permittivity permittivity_from_kernel(const SusceptibilityKernel& kernel,
                                      const std::vector<double>& omega_grid,
                                      double eta = 0,  // 0 = derive from tau span
                                      double* decay_warning = nullptr);

// eps(omega) = 1 + (2/pi) PV int_0^inf sigma_u / (u^2 - omega^2) du
//              + i sigma_omega / omega,
// the principal value handled by symmetric nodes about u = omega with a
// Richardson-extrapolated exclusion window.
cplx permittivity_pv(const ConductivityProfile& profile, int x_index, double omega,
                     const MediumQuadrature& quad = {}, PvInfo* info = nullptr);

// Discrete Hilbert-transform closure check of a stored permittivity.
KkReport kk_report(const Permittivity& perm);

}  // namespace dualfield::medium
