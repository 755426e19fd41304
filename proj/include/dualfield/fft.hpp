// fft.hpp — thin FFTW wrapper for 3D complex transforms
#pragma once

#include <array>
#include <complex>

namespace dualfield {

// Plans are created once per grid shape with FFTW_ESTIMATE so the chosen
// algorithm (and therefore the roundoff pattern) is identical between runs.
// Execution is const and reentrant; transforms are unnormalized.
class Fft3 {
  public:
    explicit Fft3(std::array<int, 3> shape);
    ~Fft3();
    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    // In place sum_x f(x) e^{-ik.x} on the index lattice.
    void forward(std::complex<double>* data) const;
    // In place sum_k g(k) e^{+ik.x}.
    void backward(std::complex<double>* data) const;

    const std::array<int, 3>& shape() const { return shape_; }

  private:
    std::array<int, 3> shape_;
    void* fwd_ = nullptr;  // fftw_plan, kept out of the public header
    void* bwd_ = nullptr;
};

}  // namespace dualfield
