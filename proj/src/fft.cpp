#include "dualfield/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace dualfield {

namespace {
// FFTW plan creation mutates global planner state.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft3::Fft3(std::array<int, 3> shape) : shape_(shape) {
    const std::size_t n =
        static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
    if (n == 0) throw std::invalid_argument("Fft3: empty grid");
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_3d(shape[0], shape[1], shape[2], buf, buf, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_3d(shape[0], shape[1], shape[2], buf, buf, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw std::runtime_error("Fft3: plan creation failed");
}

Fft3::~Fft3() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft3::forward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), buf, buf);
}

void Fft3::backward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), buf, buf);
}

}  // namespace dualfield
