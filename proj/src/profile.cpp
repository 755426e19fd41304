#include "dualfield/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dualfield::medium {

namespace {
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
}  // namespace

ConductivityProfile ConductivityProfile::zero() {
    ConductivityProfile p;
    p.form_ = ProfileForm::Zero;
    return p;
}

ConductivityProfile ConductivityProfile::flat_band(double sigma0, double omega_cut) {
    ConductivityProfile p;
    p.form_ = ProfileForm::FlatBand;
    p.sigma0_ = sigma0;
    p.omega0_ = omega_cut;
    p.validate();
    return p;
}

ConductivityProfile ConductivityProfile::lorentzian(double sigma0, double omega0, double gamma) {
    ConductivityProfile p;
    p.form_ = ProfileForm::Lorentzian;
    p.sigma0_ = sigma0;
    p.omega0_ = omega0;
    p.gamma_ = gamma;
    p.validate();
    return p;
}

ConductivityProfile ConductivityProfile::tabulated(std::vector<double> omega,
                                                   std::vector<double> sigma) {
    ConductivityProfile p;
    p.form_ = ProfileForm::Tabulated;
    p.tab_omega_ = std::move(omega);
    p.tab_sigma_ = std::move(sigma);
    p.validate();
    return p;
}

ConductivityProfile ConductivityProfile::with_modulation(std::vector<double> g) const {
    for (double v : g)
        if (!(v >= 0)) throw std::invalid_argument("spatial modulation must be >= 0 everywhere");
    ConductivityProfile p = *this;
    p.modulation_ = std::move(g);
    return p;
}

void ConductivityProfile::validate() const {
    switch (form_) {
        case ProfileForm::Zero:
            break;
        case ProfileForm::FlatBand:
            if (!(sigma0_ >= 0)) throw std::invalid_argument("flat_band: sigma0 must be >= 0");
            if (!(omega0_ > 0)) throw std::invalid_argument("flat_band: band edge must be > 0");
            break;
        case ProfileForm::Lorentzian:
            if (!(sigma0_ >= 0)) throw std::invalid_argument("lorentzian: sigma0 must be >= 0");
            if (!(omega0_ > 0)) throw std::invalid_argument("lorentzian: omega0 must be > 0");
            if (!(gamma_ > 0)) throw std::invalid_argument("lorentzian: gamma must be > 0");
            break;
        case ProfileForm::Tabulated: {
            if (tab_omega_.size() != tab_sigma_.size() || tab_omega_.size() < 2)
                throw std::invalid_argument("tabulated: need >= 2 matched (omega, sigma) samples");
            for (std::size_t i = 0; i < tab_omega_.size(); ++i) {
                if (!(tab_sigma_[i] >= 0))
                    throw std::invalid_argument("tabulated: sigma must be >= 0");
                if (!(tab_omega_[i] >= 0))
                    throw std::invalid_argument("tabulated: omega must be >= 0");
                if (i > 0 && !(tab_omega_[i] > tab_omega_[i - 1]))
                    throw std::invalid_argument("tabulated: omega samples must increase strictly");
            }
            break;
        }
    }
}

double ConductivityProfile::spectral(double omega) const {
    const double w = std::abs(omega);  // even extension, applied here and never stored
    switch (form_) {
        case ProfileForm::Zero:
            return 0.0;
        case ProfileForm::FlatBand:
            return w <= omega0_ ? sigma0_ : 0.0;
        case ProfileForm::Lorentzian: {
            const double a = w * w - omega0_ * omega0_;
            const double b = gamma_ * w;
            return sigma0_ * gamma_ * gamma_ * w * w / (a * a + b * b);
        }
        case ProfileForm::Tabulated: {
            if (w <= tab_omega_.front() || w >= tab_omega_.back()) {
                if (w == tab_omega_.front()) return tab_sigma_.front();
                if (w == tab_omega_.back()) return tab_sigma_.back();
                return 0.0;
            }
            const auto it = std::upper_bound(tab_omega_.begin(), tab_omega_.end(), w);
            const std::size_t i = it - tab_omega_.begin();
            const double t = (w - tab_omega_[i - 1]) / (tab_omega_[i] - tab_omega_[i - 1]);
            return (1 - t) * tab_sigma_[i - 1] + t * tab_sigma_[i];
        }
    }
    return 0.0;
}

double ConductivityProfile::suggested_cutoff(double tol) const {
    switch (form_) {
        case ProfileForm::Zero:
            return 1.0;
        case ProfileForm::FlatBand:
            return omega0_;
        case ProfileForm::Lorentzian:
            // tail sigma ~ sigma0 gamma^2 / w^2
            return std::max(4.0 * omega0_, gamma_ / std::sqrt(tol));
        case ProfileForm::Tabulated:
            return tab_omega_.back();
    }
    return 1.0;
}

std::optional<double> ConductivityProfile::support_edge() const {
    if (form_ == ProfileForm::FlatBand) return omega0_;
    if (form_ == ProfileForm::Tabulated) return tab_omega_.back();
    return std::nullopt;
}

std::vector<double> ConductivityProfile::breakpoints() const {
    switch (form_) {
        case ProfileForm::Zero:
            return {};
        case ProfileForm::FlatBand:
            return {omega0_};
        case ProfileForm::Lorentzian:
            return {omega0_};
        case ProfileForm::Tabulated:
            return tab_omega_;
    }
    return {};
}

double ConductivityProfile::peak_value() const {
    switch (form_) {
        case ProfileForm::Zero:
            return 0.0;
        case ProfileForm::FlatBand:
        case ProfileForm::Lorentzian:
            return sigma0_;
        case ProfileForm::Tabulated:
            return *std::max_element(tab_sigma_.begin(), tab_sigma_.end());
    }
    return 0.0;
}

std::string ConductivityProfile::describe() const {
    switch (form_) {
        case ProfileForm::Zero:
            return "zero";
        case ProfileForm::FlatBand:
            return "flat-band(sigma0=" + num(sigma0_) + ", Omega=" + num(omega0_) +
                   ")";
        case ProfileForm::Lorentzian:
            return "lorentzian(sigma0=" + num(sigma0_) + ", omega0=" + num(omega0_) +
                   ", gamma=" + num(gamma_) + ")";
        case ProfileForm::Tabulated:
            return "tabulated(" + std::to_string(tab_omega_.size()) + " samples)";
    }
    return "?";
}

}  // namespace dualfield::medium
