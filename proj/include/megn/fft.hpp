#pragma once

#include <cstddef>
#include <vector>

#include "megn/common.hpp"

namespace megn {

// Thin RAII wrapper over complex 1-D FFTW plans. Plans are created with
// FFTW_ESTIMATE (deterministic, no runtime measurement) on an internal
// SIMD-aligned buffer. forward() is unnormalized; inverse() divides by n.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }
    void forward(cplx* data) const;
    void inverse(cplx* data) const;
    void forward(std::vector<cplx>& v) const { forward(v.data()); }
    void inverse(std::vector<cplx>& v) const { inverse(v.data()); }

private:
    std::size_t n_;
    void* buf_;
    void* fwd_;
    void* inv_;
};

}  // namespace megn
