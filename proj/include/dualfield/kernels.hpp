// kernels.hpp — hot inner loops of the bath update, in OpenMP and serial
// reference versions. Both orderings write each output element exactly once
// from a fixed-order expression, so results are bit-identical between the
// two paths and across thread counts.
#pragma once

#include <span>
#include <vector>

#include "dualfield/core.hpp"

namespace dualfield::kernels {

// Layout shared by all bath kernels: z[(line * 3 + comp) * n_grid + ix].
struct BathLayout {
    int n_lines = 0;
    int n_grid = 0;
    std::size_t size() const { return static_cast<std::size_t>(n_lines) * 3 * n_grid; }
    std::size_t at(int line, int comp, int ix) const {
        return (static_cast<std::size_t>(line) * 3 + comp) * n_grid + ix;
    }
};

// z <- phase[line] * z
void rotate(const BathLayout& lay, std::span<cplx> z, std::span<const cplx> phase);
void rotate_serial(const BathLayout& lay, std::span<cplx> z, std::span<const cplx> phase);

// z += s_line[line] * sqrt_mod[ix] * phi[line] * e[comp * n_grid + ix]
void kick(const BathLayout& lay, std::span<cplx> z, std::span<const double> s_line,
          std::span<const double> sqrt_mod, std::span<const cplx> phi,
          std::span<const cplx> e_field);
void kick_serial(const BathLayout& lay, std::span<cplx> z, std::span<const double> s_line,
                 std::span<const double> sqrt_mod, std::span<const cplx> phi,
                 std::span<const cplx> e_field);

// p[comp * n_grid + ix] = sum_line w[line] s_line[line] sqrt_mod[ix]
//                         * Im(z[line, comp, ix]) / omega[line]
// The line sum runs in fixed ascending order for every grid point.
void polarization(const BathLayout& lay, std::span<const cplx> z,
                  std::span<const double> w_over_omega_s, std::span<const double> sqrt_mod,
                  std::span<cplx> p);
void polarization_serial(const BathLayout& lay, std::span<const cplx> z,
                         std::span<const double> w_over_omega_s,
                         std::span<const double> sqrt_mod, std::span<cplx> p);

}  // namespace dualfield::kernels
