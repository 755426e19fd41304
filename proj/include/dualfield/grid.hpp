// grid.hpp — periodic rectangular grid and vector fields sampled on it
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualfield/core.hpp"

namespace dualfield {

// Uniform sampling of the periodic box [0,Lx)x[0,Ly)x[0,Lz).
// Storage is row-major with the z index fastest (FFTW convention).
struct GridSpec {
    Vec3 box{2 * pi, 2 * pi, 2 * pi};
    std::array<int, 3> shape{8, 8, 8};

    int n() const { return shape[0] * shape[1] * shape[2]; }
    double volume() const { return box.x * box.y * box.z; }
    double cell_volume() const { return volume() / n(); }

    int index(int ix, int iy, int iz) const { return (ix * shape[1] + iy) * shape[2] + iz; }

    std::array<int, 3> coords(int idx) const {
        const int iz = idx % shape[2];
        const int iy = (idx / shape[2]) % shape[1];
        const int ix = idx / (shape[1] * shape[2]);
        return {ix, iy, iz};
    }

    Vec3 point(int idx) const {
        const auto c = coords(idx);
        return {box.x * c[0] / shape[0], box.y * c[1] / shape[1], box.z * c[2] / shape[2]};
    }

    // Signed integer frequency of FFT bin b along dimension d.
    int signed_freq(int b, int d) const {
        return b <= shape[d] / 2 ? b : b - shape[d];
    }

    // FFT bin of signed integer frequency n along dimension d.
    int bin(int n, int d) const {
        int b = n % shape[d];
        if (b < 0) b += shape[d];
        return b;
    }

    bool operator==(const GridSpec& o) const {
        return shape == o.shape && box.x == o.box.x && box.y == o.box.y && box.z == o.box.z;
    }
};

enum class FieldKind { Generic, P, E, D, B, F, J };

// Complex-valued 3-vector field on a grid. Physical fields are real; the
// complex storage carries spectral intermediates and lets tests assert that
// imaginary parts stay at the roundoff floor.
struct GridField {
    GridSpec spec;
    FieldKind kind = FieldKind::Generic;
    std::vector<cplx> data;  // component-major: data[c * n + i]

    GridField() = default;
    GridField(const GridSpec& s, FieldKind k = FieldKind::Generic)
        : spec(s), kind(k), data(3 * static_cast<std::size_t>(s.n())) {}

    cplx& at(int comp, int idx) { return data[static_cast<std::size_t>(comp) * spec.n() + idx]; }
    const cplx& at(int comp, int idx) const {
        return data[static_cast<std::size_t>(comp) * spec.n() + idx];
    }
    cplx* component(int comp) { return data.data() + static_cast<std::size_t>(comp) * spec.n(); }
    const cplx* component(int comp) const {
        return data.data() + static_cast<std::size_t>(comp) * spec.n();
    }

    double max_imag() const {
        double m = 0;
        for (const cplx& v : data) m = std::max(m, std::abs(v.imag()));
        return m;
    }

    double max_abs() const {
        double m = 0;
        for (const cplx& v : data) m = std::max(m, std::abs(v));
        return m;
    }
};

inline void require_same_grid(const GridField& a, const GridField& b, const char* what) {
    if (!(a.spec == b.spec))
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

}  // namespace dualfield
