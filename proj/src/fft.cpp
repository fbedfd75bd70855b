#include "megn/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace megn {

namespace {
std::mutex planner_mutex;  // FFTW planning is not thread-safe
}

// Plans run on an internal SIMD-aligned buffer; data is copied in and out.
// The copies are a small fraction of the transform cost and keep the public
// interface free of allocation constraints.
Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("fft size must be positive");
    std::lock_guard<std::mutex> lock(planner_mutex);
    buf_ = fftw_alloc_complex(n);
    if (!buf_) throw std::bad_alloc();
    auto* buf = static_cast<fftw_complex*>(buf_);
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    fftw_free(buf_);
}

void Fft::forward(cplx* data) const {
    std::memcpy(buf_, data, n_ * sizeof(cplx));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    std::memcpy(data, buf_, n_ * sizeof(cplx));
}

void Fft::inverse(cplx* data) const {
    std::memcpy(buf_, data, n_ * sizeof(cplx));
    fftw_execute(static_cast<fftw_plan>(inv_));
    const double scale = 1.0 / static_cast<double>(n_);
    const cplx* src = reinterpret_cast<const cplx*>(buf_);
    for (std::size_t i = 0; i < n_; ++i) data[i] = src[i] * scale;
}

}  // namespace megn
