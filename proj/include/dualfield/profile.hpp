// profile.hpp — conductivity profile sigma_omega(x), the single input that
// fixes the medium's absorption and, through causality, its dispersion
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dualfield/core.hpp"

namespace dualfield::medium {

enum class ProfileForm { Zero, FlatBand, Lorentzian, Tabulated };

// sigma_omega(x) = shape(omega) * g(x), with g >= 0 a spatial modulation
// (identically 1 for homogeneous media). The spectral shape is extended to
// negative frequencies evenly; only omega >= 0 is ever stored.
class ConductivityProfile {
  public:
    ConductivityProfile() = default;  // zero profile

    static ConductivityProfile zero();
    static ConductivityProfile flat_band(double sigma0, double omega_cut);
    // sigma(w) = sigma0 * gamma^2 * w^2 / ((w^2 - omega0^2)^2 + (gamma w)^2),
    // peak value sigma0 at the resonance omega0.
    static ConductivityProfile lorentzian(double sigma0, double omega0, double gamma);
    static ConductivityProfile tabulated(std::vector<double> omega, std::vector<double> sigma);

    ConductivityProfile with_modulation(std::vector<double> g) const;

    ProfileForm form() const { return form_; }
    bool homogeneous() const { return modulation_.empty(); }
    int modulation_size() const { return static_cast<int>(modulation_.size()); }

    // Spectral shape, evaluated with the even extension.
    double spectral(double omega) const;

    double modulation_at(int x_index) const {
        return modulation_.empty() ? 1.0 : modulation_[x_index];
    }

    double sigma(double omega, int x_index = 0) const {
        return spectral(omega) * modulation_at(x_index);
    }

    // Square root of the coupling prefactor 2*sigma/pi, split into a spectral
    // and a spatial factor (sigma is a product by construction).
    double coupling_spectral(double omega) const { return std::sqrt(2.0 * spectral(omega) / pi); }
    double coupling_spatial(int x_index) const { return std::sqrt(modulation_at(x_index)); }

    // Upper frequency beyond which the shape is everywhere below `tol` times
    // its peak. FlatBand/Tabulated have hard support; Lorentzian has a
    // 1/omega^2 tail.
    double suggested_cutoff(double tol = 1e-8) const;

    // Hard support edge for forms that have one (FlatBand, Tabulated).
    std::optional<double> support_edge() const;

    // Locations where the shape has kinks or narrow features; quadrature
    // panels split here.
    std::vector<double> breakpoints() const;

    double peak_value() const;

    // Parameters (meaning depends on form).
    double sigma0() const { return sigma0_; }
    double omega0() const { return omega0_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& tab_omega() const { return tab_omega_; }
    const std::vector<double>& tab_sigma() const { return tab_sigma_; }

    std::string describe() const;

  private:
    void validate() const;

    ProfileForm form_ = ProfileForm::Zero;
    double sigma0_ = 0, omega0_ = 0, gamma_ = 0;
    std::vector<double> tab_omega_, tab_sigma_;
    std::vector<double> modulation_;
};

}  // namespace dualfield::medium
