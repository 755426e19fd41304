// modes.hpp — truncated Born-von Karman plane-wave basis: two transverse
// polarizations per wavevector, the alpha <-> -alpha pairing, grid <-> mode
// transforms and the transverse delta
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dualfield/fft.hpp"
#include "dualfield/grid.hpp"

namespace dualfield::modes {

struct Mode {
    std::array<int, 3> n;  // integer lattice coordinates of k
    Vec3 k;
    double omega;              // c |k|
    std::array<Vec3, 2> pol;   // eps_1, eps_2 (orthonormal, transverse)
    int pair;                  // wavevector index of -k
};

// Immutable after construction; flat mode index m = 2*wavevector + j with
// polarization j in {0, 1}. Mode ordering is lexicographic in (nx, ny, nz, j).
class ModeBasis {
  public:
    GridSpec grid;
    Units units;
    double k_max = 0;
    std::vector<Mode> wavevectors;

    int n_wavevectors() const { return static_cast<int>(wavevectors.size()); }
    int mode_count() const { return 2 * n_wavevectors(); }

    static int flat_index(int w, int j) { return 2 * w + j; }
    int wavevector_of(int m) const { return m / 2; }
    int pol_of(int m) const { return m % 2; }
    // flat index of (-alpha, j)
    int conjugate_mode(int m) const {
        return flat_index(wavevectors[m / 2].pair, m % 2);
    }
    // eps_{-alpha,j} = eta_j eps_{alpha,j}
    static double eta(int j) { return j == 0 ? -1.0 : 1.0; }

    double omega_of(int m) const { return wavevectors[m / 2].omega; }
    const Vec3& pol_of_mode(int m) const { return wavevectors[m / 2].pol[m % 2]; }

    // Phi_alpha(x) = e^{i k.x} / sqrt(V)
    cplx phi(int w, const Vec3& x) const;

    const Fft3& fft() const { return *fft_; }
    void attach_fft();

  private:
    std::shared_ptr<const Fft3> fft_;
};

// Enumerates all nonzero k = 2 pi (nx/Lx, ny/Ly, nz/Lz) with |k| <= k_max.
// eps_1 = k x zhat / |k x zhat|, eps_2 = khat x eps_1; wavevectors parallel
// to zhat use the fallback pair (+-xhat, yhat), which keeps the eta parity.
ModeBasis build_basis(const GridSpec& grid, double k_max, const Units& units = {});

// sum_{alpha,j} eps (x) eps Phi*(x') Phi(x); the imaginary part cancels over
// the +-alpha pairing and is asserted below 1e-12.
Mat3 transverse_delta(const ModeBasis& basis, const Vec3& x, const Vec3& xp);

struct ProjectInfo {
    double out_of_band_fraction = 0;  // spectral power outside the basis bins
};

// f_{alpha,j} = int field . eps_j Phi* d3x. Exact on band-limited fields.
std::vector<cplx> project(const GridField& field, const ModeBasis& basis,
                          ProjectInfo* info = nullptr);

// Direct-sum reference used as an independent oracle in tests.
std::vector<cplx> project_reference(const GridField& field, const ModeBasis& basis);

enum class VecPattern { Pol, KCrossPol };

// field(x) = sum_m u_m p_m Phi_{alpha(m)}(x) + c.c. with p_m = eps_j or
// khat x eps_j. All dual- and minimal-representation reconstructions are
// instances of this synthesis.
GridField synthesize(const ModeBasis& basis, std::span<const cplx> u, VecPattern pattern,
                     FieldKind kind);
GridField synthesize_reference(const ModeBasis& basis, std::span<const cplx> u,
                               VecPattern pattern, FieldKind kind);

// "sum_m pref(w_m) c_m <pattern> Phi + c.c." with the conjugate images folded
// onto the pairing partners; the common form behind every physical-field
// reconstruction in either representation.
GridField reconstruct_generic(std::span<const cplx> c, const ModeBasis& basis,
                              const std::function<cplx(double)>& prefactor, VecPattern pattern,
                              FieldKind kind);

struct FieldTriplet {
    GridField F, D, B;
};

// Modal field reconstruction from the c amplitudes:
//   F = sum ic sqrt(hbar/2w) c eps Phi + cc
//   D = sum -sqrt(hbar w/2) c (khat x eps) Phi + cc
//   B = sum  sqrt(hbar w/2) c eps Phi + cc
FieldTriplet reconstruct_fields(std::span<const cplx> c, const ModeBasis& basis);
GridField reconstruct_F(std::span<const cplx> c, const ModeBasis& basis);
GridField reconstruct_D(std::span<const cplx> c, const ModeBasis& basis);
GridField reconstruct_B(std::span<const cplx> c, const ModeBasis& basis);

// S_{alpha,j} = c^2 int (curl P) . eps_j Phi* d3x, evaluated spectrally as
// c^2 (i k x P~(k)) . eps_j (periodic box, no surface term).
std::vector<cplx> source_term(const GridField& P, const ModeBasis& basis);

// Full-lattice spectral operators on grid fields (all FFT bins, not only the
// basis band). Derivatives at unresolvable Nyquist bins are set to zero.
GridField spectral_curl(const GridField& f);
std::vector<cplx> spectral_divergence(const GridField& f);
GridField transverse_part(const GridField& f);
GridField longitudinal_part(const GridField& f);

// Parseval power sum_x |f|^2 dV of a grid field.
double field_power(const GridField& f);

}  // namespace dualfield::modes
