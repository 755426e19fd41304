// rng.hpp — reproducible random numbers (explicit Box-Muller, no library
// distribution state, so streams are identical across platforms)
#pragma once

#include <cstdint>
#include <random>

#include "dualfield/core.hpp"

namespace dualfield {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // Substream for item `index` of a seeded ensemble (per-realization,
    // per-state, ...). Independent of threading and evaluation order.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(splitmix64(seed ^ splitmix64(index + 1)));
    }

    double uniform() {  // in (0, 1]
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    cplx cgaussian() {  // unit-variance complex: <|z|^2> = 1
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace dualfield
