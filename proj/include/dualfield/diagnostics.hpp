// diagnostics.hpp — energies, Poynting conservation, driven-response probe
// and the equivalence map between the dual and minimal-coupling pictures
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dualfield/dynamics.hpp"
#include "dualfield/medium.hpp"

namespace dualfield::diagnostics {

using dynamics::BathState;
using dynamics::FieldState;
using dynamics::SimState;

struct EnergyReport {
    double t = 0;
    double H_F = 0;      // pure-field energy, int (B^2 + D^2)/2
    double H_M = 0;      // matter energy
    double H_total = 0;  // int (B^2 + E^2)/2 + H_M
    // the same total through the other two algebraic routes
    double H_total_via_DP = 0;     // int (B^2+D^2)/2 - D.P + P^2/2 + H_M
    double H_total_via_curl = 0;   // int (B^2+D^2)/2 - F.(curl P) + P^2/2 + H_M
    double form_disagreement = 0;  // max pairwise difference of the three
};

// sum_m hbar w_m |c_m|^2 (classical-amplitude analog of the normal-ordered
// free-boson form).
double field_energy(const FieldState& field, const modes::ModeBasis& basis);

// sum_l w_l int |Z_l|^2 / 2 d3x  (= ((dX/dt)^2 + w^2 X^2)/2 summed)
double matter_energy(const BathState& bath);

// Both Hamiltonian forms; throws if they disagree beyond 1e-10 relative
// (that signals a projection bug, not physics).
EnergyReport total_energy(const SimState& state);

struct PoyntingReport {
    double max_residual = 0;     // max_x |du/dt + div(c E x B)|
    double flux_integral = 0;    // volume integral of the divergence term
    double energy_scale = 0;     // max |u| for normalization
};

// Local conservation law, centered time differences over three consecutive
// snapshots (t - dt, t, t + dt) and spectral divergence.
PoyntingReport poynting_residual(const SimState& before, const SimState& middle,
                                 const SimState& after, double dt);

struct ResponseConfig {
    medium::ConductivityProfile profile;  // homogeneous, damped
    double omega_drive = 1.0;
    double amplitude = 1e-3;
    dynamics::BathGridOptions bath;
    double dt = 0;            // 0: derived from the spectral content
    double ramp_time = 30.0;
    double settle_time = 60.0;
    int n_window_periods = 20;
    GridSpec grid{{2 * pi, 2.0, 2.0}, {8, 4, 4}};
    double k_max = 1.0;
};

struct ResponseResult {
    cplx chi;                 // measured P~/E~ at the drive frequency
    double window_drift = 0;  // relative change of chi between two windows
    bool transient_flagged = false;
};

// Runs a driven simulation, discards the transient, and extracts the complex
// susceptibility by a Hann-windowed Fourier quotient at the drive frequency.
ResponseResult driven_response(const ResponseConfig& cfg);

// Modal amplitudes of the magnetic-potential representation.
struct MinimalState {
    std::vector<cplx> a;
};

// c_{a,1} = -a_{a,2} - P_{a,2}/sqrt(2 hbar w),
// c_{a,2} =  a_{a,1} + P_{a,1}/sqrt(2 hbar w); P_coeffs = project(P).
MinimalState to_minimal(const FieldState& field, std::span<const cplx> p_coeffs,
                        const modes::ModeBasis& basis);
FieldState from_minimal(const MinimalState& a, std::span<const cplx> p_coeffs,
                        const modes::ModeBasis& basis);

// The coefficient-level unitary shift a -> a + P/sqrt(2 hbar w).
MinimalState polarization_shift(const MinimalState& a, std::span<const cplx> p_coeffs,
                                const modes::ModeBasis& basis);

// Transverse-field reconstructions in the minimal-coupling representation:
//   A      = sum -ic sqrt(hbar/2w) a eps Phi + cc
//   B      = sum  sqrt(hbar w/2) a (khat x eps) Phi + cc
//   E_perp = sum  sqrt(hbar w/2) a eps Phi + cc
GridField reconstruct_A(std::span<const cplx> a, const modes::ModeBasis& basis);
GridField reconstruct_B_minimal(std::span<const cplx> a, const modes::ModeBasis& basis);
GridField reconstruct_Eperp(std::span<const cplx> a, const modes::ModeBasis& basis);

struct EquivalenceReport {
    double H_dual = 0;
    double H_minimal = 0;
    double discrepancy = 0;  // |H_dual - H_minimal|
};

// Total energy evaluated through the minimal-coupling route (map the state
// with to_minimal, rebuild E_perp/B from the a amplitudes, E_par = -P_par
// spectrally, matter term plus the A.J_perp pieces that cancel in the sum)
// against the dual-route value.
EquivalenceReport hamiltonian_equivalence(const SimState& state);

}  // namespace dualfield::diagnostics
