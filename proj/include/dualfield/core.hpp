// core.hpp — shared small types: 3-vectors, units, deterministic reductions
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dualfield {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Scale constants (Lorentz-Heaviside). Defaults are the dimensionless
// desk-scale choice c = hbar = 1; both are carried through every formula.
struct Units {
    double c = 1.0;
    double hbar = 1.0;
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v * (1.0 / norm(v)); }

using Mat3 = std::array<std::array<double, 3>, 3>;
using CMat3 = std::array<std::array<cplx, 3>, 3>;

// Fixed-order pairwise summation. Deterministic for a given buffer regardless
// of how the buffer was filled, and more accurate than a running sum.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    const std::size_t n = v.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

// sin(a*t)/a, stable for small a*t.
inline double sinc_scaled(double a, double t) {
    const double u = a * t;
    if (std::abs(u) < 1e-6) return t * (1.0 - u * u / 6.0);
    return std::sin(u) / a;
}

}  // namespace dualfield
