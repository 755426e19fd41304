#include "dualfield/modes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dualfield::modes {

cplx ModeBasis::phi(int w, const Vec3& x) const {
    const double phase = dot(wavevectors[w].k, x);
    return cplx{std::cos(phase), std::sin(phase)} / std::sqrt(grid.volume());
}

void ModeBasis::attach_fft() { fft_ = std::make_shared<Fft3>(grid.shape); }

ModeBasis build_basis(const GridSpec& grid, double k_max, const Units& units) {
    if (!(grid.box.x > 0) || !(grid.box.y > 0) || !(grid.box.z > 0))
        throw std::invalid_argument("build_basis: box lengths must be positive");
    if (!(k_max > 0)) throw std::invalid_argument("build_basis: k_max must be positive");
    if (!(units.c > 0) || !(units.hbar > 0))
        throw std::invalid_argument("build_basis: scale constants must be positive");

    const double L[3] = {grid.box.x, grid.box.y, grid.box.z};
    int n_max[3];
    for (int d = 0; d < 3; ++d) {
        n_max[d] = static_cast<int>(std::floor(k_max * L[d] / (2 * pi) + 1e-12));
        if (2 * n_max[d] + 1 > grid.shape[d])
            throw std::invalid_argument(
                "build_basis: grid under-resolves k_max (needs at least 2*n_max+1 points per "
                "dimension)");
    }

    ModeBasis basis;
    basis.grid = grid;
    basis.units = units;
    basis.k_max = k_max;

    std::map<std::array<int, 3>, int> index_of;
    for (int nx = -n_max[0]; nx <= n_max[0]; ++nx)
        for (int ny = -n_max[1]; ny <= n_max[1]; ++ny)
            for (int nz = -n_max[2]; nz <= n_max[2]; ++nz) {
                if (nx == 0 && ny == 0 && nz == 0) continue;  // no transverse mode at k = 0
                const Vec3 k{2 * pi * nx / L[0], 2 * pi * ny / L[1], 2 * pi * nz / L[2]};
                if (norm(k) > k_max * (1 + 1e-12)) continue;
                Mode m;
                m.n = {nx, ny, nz};
                m.k = k;
                m.omega = units.c * norm(k);
                const Vec3 khat = normalized(k);
                const Vec3 kxz = cross(k, Vec3{0, 0, 1});
                if (norm(kxz) < 1e-12 * norm(k)) {
                    // k parallel to zhat: fallback pair keeps eps_{-a,1} = -eps_{a,1}
                    m.pol[0] = k.z > 0 ? Vec3{1, 0, 0} : Vec3{-1, 0, 0};
                } else {
                    m.pol[0] = normalized(kxz);
                }
                m.pol[1] = cross(khat, m.pol[0]);
                m.pair = -1;
                index_of[m.n] = static_cast<int>(basis.wavevectors.size());
                basis.wavevectors.push_back(m);
            }

    for (auto& m : basis.wavevectors) {
        const std::array<int, 3> neg{-m.n[0], -m.n[1], -m.n[2]};
        m.pair = index_of.at(neg);
    }

    if (basis.wavevectors.empty())
        throw std::invalid_argument("build_basis: no wavevectors below k_max");
    basis.attach_fft();
    return basis;
}

Mat3 transverse_delta(const ModeBasis& basis, const Vec3& x, const Vec3& xp) {
    const Vec3 r = x - xp;
    const double inv_v = 1.0 / basis.grid.volume();
    CMat3 acc{};
    for (const Mode& m : basis.wavevectors) {
        const double phase = dot(m.k, r);
        const cplx e{std::cos(phase), std::sin(phase)};
        const Vec3 khat = normalized(m.k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double proj = (i == j ? 1.0 : 0.0) - khat[i] * khat[j];
                acc[i][j] += proj * e * inv_v;
            }
    }
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (std::abs(acc[i][j].imag()) > 1e-12)
                throw std::runtime_error(
                    "transverse_delta: imaginary part failed to cancel over the +-k pairing");
            out[i][j] = acc[i][j].real();
        }
    return out;
}

namespace {

// Spectral vector amplitude of the field at the wavevector of `mode`, from
// already-forward-transformed component arrays. Normalization: coefficient
// of Phi_alpha, i.e. F~_c = sum_x f_c(x) Phi*(x) dV.
std::array<cplx, 3> spectral_vec(const GridSpec& g, const std::vector<cplx>& fx,
                                 const std::vector<cplx>& fy, const std::vector<cplx>& fz,
                                 const Mode& m) {
    const int bx = g.bin(m.n[0], 0), by = g.bin(m.n[1], 1), bz = g.bin(m.n[2], 2);
    const int idx = g.index(bx, by, bz);
    const double scale = g.cell_volume() / std::sqrt(g.volume());
    return {fx[idx] * scale, fy[idx] * scale, fz[idx] * scale};
}

}  // namespace

std::vector<cplx> project(const GridField& field, const ModeBasis& basis, ProjectInfo* info) {
    if (!(field.spec == basis.grid))
        throw std::invalid_argument("project: field grid does not match the basis grid");
    const GridSpec& g = basis.grid;
    const int n = g.n();

    std::vector<cplx> fx(field.component(0), field.component(0) + n);
    std::vector<cplx> fy(field.component(1), field.component(1) + n);
    std::vector<cplx> fz(field.component(2), field.component(2) + n);
    basis.fft().forward(fx.data());
    basis.fft().forward(fy.data());
    basis.fft().forward(fz.data());

    std::vector<cplx> out(basis.mode_count());
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        const Mode& m = basis.wavevectors[w];
        const auto v = spectral_vec(g, fx, fy, fz, m);
        for (int j = 0; j < 2; ++j) {
            const Vec3& e = m.pol[j];
            out[ModeBasis::flat_index(w, j)] = v[0] * e.x + v[1] * e.y + v[2] * e.z;
        }
    }

    if (info) {
        // Power fraction in bins that carry no basis wavevector (k = 0, the
        // band above k_max, Nyquist rows): content the projection cannot see.
        std::vector<char> in_band(n, 0);
        for (const Mode& m : basis.wavevectors)
            in_band[g.index(g.bin(m.n[0], 0), g.bin(m.n[1], 1), g.bin(m.n[2], 2))] = 1;
        double total = 0, outside = 0;
        for (int i = 0; i < n; ++i) {
            const double p = std::norm(fx[i]) + std::norm(fy[i]) + std::norm(fz[i]);
            total += p;
            if (!in_band[i]) outside += p;
        }
        info->out_of_band_fraction = total > 0 ? outside / total : 0.0;
    }
    return out;
}

std::vector<cplx> project_reference(const GridField& field, const ModeBasis& basis) {
    const GridSpec& g = basis.grid;
    std::vector<cplx> out(basis.mode_count());
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        for (int j = 0; j < 2; ++j) {
            const Vec3& e = basis.wavevectors[w].pol[j];
            cplx acc = 0;
            for (int i = 0; i < g.n(); ++i) {
                const cplx f_dot_e = field.at(0, i) * e.x + field.at(1, i) * e.y +
                                     field.at(2, i) * e.z;
                acc += f_dot_e * std::conj(basis.phi(w, g.point(i)));
            }
            out[ModeBasis::flat_index(w, j)] = acc * g.cell_volume();
        }
    }
    return out;
}

GridField synthesize(const ModeBasis& basis, std::span<const cplx> u, VecPattern pattern,
                     FieldKind kind) {
    if (static_cast<int>(u.size()) != basis.mode_count())
        throw std::invalid_argument("synthesize: amplitude count does not match the basis");
    const GridSpec& g = basis.grid;
    const int n = g.n();
    GridField out(g, kind);

    std::vector<cplx> spec(3 * static_cast<std::size_t>(n), cplx{0, 0});
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        const Mode& m = basis.wavevectors[w];
        const int bin = g.index(g.bin(m.n[0], 0), g.bin(m.n[1], 1), g.bin(m.n[2], 2));
        const Vec3 khat = normalized(m.k);
        for (int j = 0; j < 2; ++j) {
            const cplx a = u[ModeBasis::flat_index(w, j)];
            const Vec3 p = pattern == VecPattern::Pol ? m.pol[j] : cross(khat, m.pol[j]);
            for (int c2 = 0; c2 < 3; ++c2)
                spec[static_cast<std::size_t>(c2) * n + bin] += a * p[c2];
        }
    }
    const double inv_sqrt_v = 1.0 / std::sqrt(g.volume());
    for (int c2 = 0; c2 < 3; ++c2) {
        cplx* comp = spec.data() + static_cast<std::size_t>(c2) * n;
        basis.fft().backward(comp);
        for (int i = 0; i < n; ++i) out.at(c2, i) = comp[i] * inv_sqrt_v;
    }
    return out;
}

GridField synthesize_reference(const ModeBasis& basis, std::span<const cplx> u,
                               VecPattern pattern, FieldKind kind) {
    const GridSpec& g = basis.grid;
    GridField out(g, kind);
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        const Mode& m = basis.wavevectors[w];
        const Vec3 khat = normalized(m.k);
        for (int j = 0; j < 2; ++j) {
            const cplx a = u[ModeBasis::flat_index(w, j)];
            const Vec3 p = pattern == VecPattern::Pol ? m.pol[j] : cross(khat, m.pol[j]);
            for (int i = 0; i < g.n(); ++i) {
                const cplx term = a * basis.phi(w, g.point(i));
                for (int c2 = 0; c2 < 3; ++c2) out.at(c2, i) += term * p[c2];
            }
        }
    }
    return out;
}

namespace {

// "sum_m pref(w) c_m <pattern> Phi + c.c." folded into one-sided amplitudes:
// the conjugate of mode m lands on its pairing partner with a parity that is
// eta_j for eps patterns and -eta_j for khat x eps patterns.
std::vector<cplx> fold_conjugates(std::span<const cplx> c, const ModeBasis& basis,
                                  const std::function<cplx(double)>& prefactor,
                                  VecPattern pattern) {
    std::vector<cplx> u(c.size());
    for (int m = 0; m < static_cast<int>(c.size()); ++m) {
        const double w = basis.omega_of(m);
        const double parity = (pattern == VecPattern::Pol ? 1.0 : -1.0) *
                              ModeBasis::eta(basis.pol_of(m));
        u[m] = prefactor(w) * c[m] +
               parity * std::conj(prefactor(w) * c[basis.conjugate_mode(m)]);
    }
    return u;
}

}  // namespace

GridField reconstruct_generic(std::span<const cplx> c, const ModeBasis& basis,
                              const std::function<cplx(double)>& prefactor, VecPattern pattern,
                              FieldKind kind) {
    const auto u = fold_conjugates(c, basis, prefactor, pattern);
    return synthesize(basis, u, pattern, kind);
}

GridField reconstruct_F(std::span<const cplx> c, const ModeBasis& basis) {
    const Units& un = basis.units;
    return reconstruct_generic(c, basis, [&](double w) {
        return cplx{0, un.c * std::sqrt(un.hbar / (2 * w))};
    }, VecPattern::Pol, FieldKind::F);
}

GridField reconstruct_D(std::span<const cplx> c, const ModeBasis& basis) {
    const Units& un = basis.units;
    return reconstruct_generic(c, basis, [&](double w) {
        return cplx{-std::sqrt(un.hbar * w / 2), 0};
    }, VecPattern::KCrossPol, FieldKind::D);
}

GridField reconstruct_B(std::span<const cplx> c, const ModeBasis& basis) {
    const Units& un = basis.units;
    return reconstruct_generic(c, basis, [&](double w) {
        return cplx{std::sqrt(un.hbar * w / 2), 0};
    }, VecPattern::Pol, FieldKind::B);
}

FieldTriplet reconstruct_fields(std::span<const cplx> c, const ModeBasis& basis) {
    return {reconstruct_F(c, basis), reconstruct_D(c, basis), reconstruct_B(c, basis)};
}

std::vector<cplx> source_term(const GridField& P, const ModeBasis& basis) {
    if (!(P.spec == basis.grid))
        throw std::invalid_argument("source_term: field grid does not match the basis grid");
    const GridSpec& g = basis.grid;
    const int n = g.n();
    std::vector<cplx> fx(P.component(0), P.component(0) + n);
    std::vector<cplx> fy(P.component(1), P.component(1) + n);
    std::vector<cplx> fz(P.component(2), P.component(2) + n);
    basis.fft().forward(fx.data());
    basis.fft().forward(fy.data());
    basis.fft().forward(fz.data());

    const double c2 = basis.units.c * basis.units.c;
    std::vector<cplx> out(basis.mode_count());
    for (int w = 0; w < basis.n_wavevectors(); ++w) {
        const Mode& m = basis.wavevectors[w];
        const auto v = spectral_vec(g, fx, fy, fz, m);
        // i k x P~
        const cplx curl[3] = {
            cplx{0, 1} * (m.k.y * v[2] - m.k.z * v[1]),
            cplx{0, 1} * (m.k.z * v[0] - m.k.x * v[2]),
            cplx{0, 1} * (m.k.x * v[1] - m.k.y * v[0]),
        };
        for (int j = 0; j < 2; ++j) {
            const Vec3& e = m.pol[j];
            out[ModeBasis::flat_index(w, j)] =
                c2 * (curl[0] * e.x + curl[1] * e.y + curl[2] * e.z);
        }
    }
    return out;
}

namespace {

Vec3 bin_wavevector(const GridSpec& g, int ix, int iy, int iz) {
    return {2 * pi * g.signed_freq(ix, 0) / g.box.x, 2 * pi * g.signed_freq(iy, 1) / g.box.y,
            2 * pi * g.signed_freq(iz, 2) / g.box.z};
}

bool nyquist_bin(const GridSpec& g, int ix, int iy, int iz) {
    const int b[3] = {ix, iy, iz};
    for (int d = 0; d < 3; ++d)
        if (g.shape[d] % 2 == 0 && b[d] == g.shape[d] / 2) return true;
    return false;
}

template <typename F>
GridField spectral_map(const GridField& f, F&& op) {
    const GridSpec& g = f.spec;
    const int n = g.n();
    std::vector<cplx> comp[3];
    Fft3 fft(g.shape);
    for (int c2 = 0; c2 < 3; ++c2) {
        comp[c2].assign(f.component(c2), f.component(c2) + n);
        fft.forward(comp[c2].data());
    }
    GridField out(g, f.kind);
    std::vector<cplx> res[3];
    for (int c2 = 0; c2 < 3; ++c2) res[c2].assign(n, cplx{0, 0});
    for (int ix = 0; ix < g.shape[0]; ++ix)
        for (int iy = 0; iy < g.shape[1]; ++iy)
            for (int iz = 0; iz < g.shape[2]; ++iz) {
                const int idx = g.index(ix, iy, iz);
                const std::array<cplx, 3> v{comp[0][idx], comp[1][idx], comp[2][idx]};
                const auto r = op(bin_wavevector(g, ix, iy, iz), nyquist_bin(g, ix, iy, iz), v);
                for (int c2 = 0; c2 < 3; ++c2) res[c2][idx] = r[c2];
            }
    const double inv_n = 1.0 / n;
    for (int c2 = 0; c2 < 3; ++c2) {
        fft.backward(res[c2].data());
        for (int i = 0; i < n; ++i) out.at(c2, i) = res[c2][i] * inv_n;
    }
    return out;
}

}  // namespace

GridField spectral_curl(const GridField& f) {
    return spectral_map(f, [](const Vec3& k, bool nyq, const std::array<cplx, 3>& v) {
        std::array<cplx, 3> r{};
        if (nyq) return r;  // derivative undefined on unresolved rows
        const cplx i{0, 1};
        r[0] = i * (k.y * v[2] - k.z * v[1]);
        r[1] = i * (k.z * v[0] - k.x * v[2]);
        r[2] = i * (k.x * v[1] - k.y * v[0]);
        return r;
    });
}

std::vector<cplx> spectral_divergence(const GridField& f) {
    const GridSpec& g = f.spec;
    const int n = g.n();
    std::vector<cplx> comp[3];
    Fft3 fft(g.shape);
    for (int c2 = 0; c2 < 3; ++c2) {
        comp[c2].assign(f.component(c2), f.component(c2) + n);
        fft.forward(comp[c2].data());
    }
    std::vector<cplx> div(n, cplx{0, 0});
    for (int ix = 0; ix < g.shape[0]; ++ix)
        for (int iy = 0; iy < g.shape[1]; ++iy)
            for (int iz = 0; iz < g.shape[2]; ++iz) {
                const int idx = g.index(ix, iy, iz);
                if (nyquist_bin(g, ix, iy, iz)) continue;
                const Vec3 k = bin_wavevector(g, ix, iy, iz);
                div[idx] = cplx{0, 1} *
                           (k.x * comp[0][idx] + k.y * comp[1][idx] + k.z * comp[2][idx]);
            }
    fft.backward(div.data());
    for (auto& v : div) v /= static_cast<double>(n);
    return div;
}

GridField transverse_part(const GridField& f) {
    return spectral_map(f, [](const Vec3& k, bool, const std::array<cplx, 3>& v) {
        const double k2 = dot(k, k);
        if (k2 == 0) return v;  // constants are divergence-free
        const cplx k_dot_v = k.x * v[0] + k.y * v[1] + k.z * v[2];
        std::array<cplx, 3> r;
        for (int c2 = 0; c2 < 3; ++c2) r[c2] = v[c2] - k[c2] * k_dot_v / k2;
        return r;
    });
}

GridField longitudinal_part(const GridField& f) {
    return spectral_map(f, [](const Vec3& k, bool, const std::array<cplx, 3>& v) {
        const double k2 = dot(k, k);
        std::array<cplx, 3> r{};
        if (k2 == 0) return r;
        const cplx k_dot_v = k.x * v[0] + k.y * v[1] + k.z * v[2];
        for (int c2 = 0; c2 < 3; ++c2) r[c2] = k[c2] * k_dot_v / k2;
        return r;
    });
}

double field_power(const GridField& f) {
    const int n = f.spec.n();
    std::vector<double> parts(3 * static_cast<std::size_t>(n));
    for (int c2 = 0; c2 < 3; ++c2)
        for (int i = 0; i < n; ++i)
            parts[static_cast<std::size_t>(c2) * n + i] = std::norm(f.at(c2, i));
    return pairwise_sum<double>(parts) * f.spec.cell_volume();
}

}  // namespace dualfield::modes
