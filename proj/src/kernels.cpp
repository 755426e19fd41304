#include "dualfield/kernels.hpp"

#include <stdexcept>

namespace dualfield::kernels {

namespace {
void check(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}
}  // namespace

void rotate_serial(const BathLayout& lay, std::span<cplx> z, std::span<const cplx> phase) {
    check(z.size() == lay.size() && phase.size() == static_cast<std::size_t>(lay.n_lines),
          "rotate: shape mismatch");
    for (int l = 0; l < lay.n_lines; ++l) {
        const cplx ph = phase[l];
        cplx* zl = z.data() + lay.at(l, 0, 0);
        for (int i = 0; i < 3 * lay.n_grid; ++i) zl[i] *= ph;
    }
}

void rotate(const BathLayout& lay, std::span<cplx> z, std::span<const cplx> phase) {
    check(z.size() == lay.size() && phase.size() == static_cast<std::size_t>(lay.n_lines),
          "rotate: shape mismatch");
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int l = 0; l < lay.n_lines; ++l) {
        const cplx ph = phase[l];
        cplx* zl = z.data() + lay.at(l, 0, 0);
        for (int i = 0; i < 3 * lay.n_grid; ++i) zl[i] *= ph;
    }
}

void kick_serial(const BathLayout& lay, std::span<cplx> z, std::span<const double> s_line,
                 std::span<const double> sqrt_mod, std::span<const cplx> phi,
                 std::span<const cplx> e_field) {
    check(z.size() == lay.size() && e_field.size() == static_cast<std::size_t>(3) * lay.n_grid,
          "kick: shape mismatch");
    for (int l = 0; l < lay.n_lines; ++l) {
        const cplx sphi = s_line[l] * phi[l];
        for (int c = 0; c < 3; ++c) {
            cplx* zl = z.data() + lay.at(l, c, 0);
            const cplx* e = e_field.data() + static_cast<std::size_t>(c) * lay.n_grid;
            for (int i = 0; i < lay.n_grid; ++i) zl[i] += sphi * sqrt_mod[i] * e[i];
        }
    }
}

void kick(const BathLayout& lay, std::span<cplx> z, std::span<const double> s_line,
          std::span<const double> sqrt_mod, std::span<const cplx> phi,
          std::span<const cplx> e_field) {
    check(z.size() == lay.size() && e_field.size() == static_cast<std::size_t>(3) * lay.n_grid,
          "kick: shape mismatch");
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int l = 0; l < lay.n_lines; ++l) {
        const cplx sphi = s_line[l] * phi[l];
        for (int c = 0; c < 3; ++c) {
            cplx* zl = z.data() + lay.at(l, c, 0);
            const cplx* e = e_field.data() + static_cast<std::size_t>(c) * lay.n_grid;
            for (int i = 0; i < lay.n_grid; ++i) zl[i] += sphi * sqrt_mod[i] * e[i];
        }
    }
}

void polarization_serial(const BathLayout& lay, std::span<const cplx> z,
                         std::span<const double> w_over_omega_s,
                         std::span<const double> sqrt_mod, std::span<cplx> p) {
    check(z.size() == lay.size() && p.size() == static_cast<std::size_t>(3) * lay.n_grid,
          "polarization: shape mismatch");
    for (int c = 0; c < 3; ++c) {
        cplx* pc = p.data() + static_cast<std::size_t>(c) * lay.n_grid;
        for (int i = 0; i < lay.n_grid; ++i) {
            double acc = 0;
            for (int l = 0; l < lay.n_lines; ++l)
                acc += w_over_omega_s[l] * z[lay.at(l, c, i)].imag();
            pc[i] = acc * sqrt_mod[i];
        }
    }
}

void polarization(const BathLayout& lay, std::span<const cplx> z,
                  std::span<const double> w_over_omega_s, std::span<const double> sqrt_mod,
                  std::span<cplx> p) {
    check(z.size() == lay.size() && p.size() == static_cast<std::size_t>(3) * lay.n_grid,
          "polarization: shape mismatch");
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < lay.n_grid; ++i) {
            double acc = 0;
            for (int l = 0; l < lay.n_lines; ++l)
                acc += w_over_omega_s[l] * z[lay.at(l, c, i)].imag();
            p[static_cast<std::size_t>(c) * lay.n_grid + i] = acc * sqrt_mod[i];
        }
    }
}

}  // namespace dualfield::kernels
