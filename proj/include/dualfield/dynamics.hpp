// dynamics.hpp — coupled field/oscillator-bath evolution with exponential
// integrators built from the exact variation-of-constants sub-flows
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dualfield/grid.hpp"
#include "dualfield/kernels.hpp"
#include "dualfield/modes.hpp"
#include "dualfield/profile.hpp"
#include "dualfield/quadrature.hpp"

namespace dualfield::dynamics {

// Discretized frequency continuum: strictly positive lines with positive
// quadrature weights. The discretization induces a recurrence time of order
// 2 pi / (minimum line spacing); evolve() reports it through its guard.
struct BathSpec {
    std::vector<double> omega;
    std::vector<double> weight;

    int n_lines() const { return static_cast<int>(omega.size()); }
    void validate() const;
    double min_spacing() const;
};

struct BathGridOptions {
    double omega_min = 1e-3;
    double omega_max = 10.0;
    int panels = 48;
    int nodes_per_panel = 8;
    std::vector<double> focus;  // extra refinement points (drive frequency, ...)
    double focus_width = 0;     // 0 = derive from the profile
};

// Composite Gauss-Legendre line grid refined around the profile's spectral
// features and any caller-supplied focus frequencies.
BathSpec make_bath_lines(const medium::ConductivityProfile& profile,
                         const BathGridOptions& opts);

// Complex oscillator amplitudes Z(x) = dX/dt + i w X per (line, component,
// grid point); the conjugate partner is never stored.
class BathState {
  public:
    BathState() = default;
    BathState(BathSpec spec, const GridSpec& grid, const medium::ConductivityProfile& profile);

    const BathSpec& spec() const { return spec_; }
    const GridSpec& grid() const { return grid_; }
    const kernels::BathLayout& layout() const { return layout_; }

    cplx& z(int line, int comp, int ix) { return z_[layout_.at(line, comp, ix)]; }
    const cplx& z(int line, int comp, int ix) const { return z_[layout_.at(line, comp, ix)]; }
    std::vector<cplx>& raw() { return z_; }
    const std::vector<cplx>& raw() const { return z_; }

    // coupling sqrt(2 sigma_w(x)/pi) split into line and spatial factors
    const std::vector<double>& coupling_line() const { return s_line_; }
    const std::vector<double>& coupling_spatial() const { return sqrt_mod_; }

    // set Z uniformly over the grid for one (line, component)
    void excite_uniform(int line, int comp, cplx value);

    double max_abs() const;

  private:
    BathSpec spec_;
    GridSpec grid_;
    kernels::BathLayout layout_;
    std::vector<cplx> z_;
    std::vector<double> s_line_;    // sqrt(2 shape(w_l) / pi)
    std::vector<double> sqrt_mod_;  // sqrt(g(x))
};

// phi(w, dt) = (e^{i w dt} - 1) / (i w), the constant-drive propagator.
cplx phase_integral(double omega, double dt);

// Z <- e^{i w dt} Z + sqrt(2 sigma/pi) phi(w, dt) E, exact for E constant
// over the step; second order when E is the midpoint field.
void step_bath(BathState& bath, const GridField& E, double dt);

// P(x) = sum_l w_l sqrt(2 sigma_l(x)/pi) Im Z_l(x) / w_l
GridField assemble_polarization(const BathState& bath);

// Modal amplitudes of the F-potential sector.
struct FieldState {
    std::vector<cplx> c;
    double time = 0;
};

// c <- e^{-i w dt} c + phi(-w, dt) S / (c sqrt(2 hbar w)), exact for S
// constant over the step.
void step_field(FieldState& field, std::span<const cplx> source, const modes::ModeBasis& basis,
                double dt);

// E = D - P, pointwise.
GridField electric_field(const GridField& D, const GridField& P);

// Prescribed additive polarization line (a probe, not dynamical matter):
// P_drive(x, t) = amplitude * ramp(t) * cos(omega t) * [eps_j Phi_alpha + cc]
struct DriveSpec {
    int wavevector = 0;
    int pol = 0;
    double amplitude = 0;
    double omega = 1.0;
    double ramp_time = 0;  // quintic smoothstep turn-on

    double envelope(double t) const;
    double scalar(double t) const { return amplitude * envelope(t) * std::cos(omega * t); }
};

struct SimState {
    FieldState field;
    BathState bath;
    medium::ConductivityProfile profile;
    modes::ModeBasis basis;
    std::optional<DriveSpec> drive;

    // E = D - P - P_drive(t) reconstructed from the current amplitudes
    GridField electric_field_now() const;
};

SimState make_sim_state(const modes::ModeBasis& basis,
                        const medium::ConductivityProfile& profile, const BathSpec& lines);

using Observable = std::pair<std::string, std::function<double(const SimState&)>>;
using Hook = std::function<void(const SimState&, int step)>;

struct EvolveOptions {
    double dt = 0;
    int n_steps = 0;
    int observe_every = 0;  // 0: only initial and final states are recorded
    std::vector<Observable> observables;
    std::vector<Hook> hooks;
    double min_samples_per_period = 20;  // step-size guard
};

struct Trajectory {
    std::vector<double> time;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;  // series[i] belongs to names[i]
};

// Strang-split loop: half-step bath on the current E, full-step field on the
// midpoint source, half-step bath on the updated E. The trailing half step
// solves for the self-consistent endpoint field (closed form, P is linear in
// Z), which makes the composition exactly time-reversible.
Trajectory evolve(SimState& state, const EvolveOptions& opts);

}  // namespace dualfield::dynamics
