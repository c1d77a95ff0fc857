#pragma once
#include <complex>
#include <cstddef>

#include "atomfocus/grid.hpp"

namespace atomfocus::gpe {

// In-place 3D complex FFT bound to one buffer (FFTW plans are per-address).
// forward() leaves unnormalized coefficients; inverse() divides by the size,
// so inverse(forward(x)) == x to roundoff.
class Fft3 {
public:
    Fft3(const Grid3& grid, std::complex<double>* data, int n_threads = 1);
    ~Fft3();
    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    void forward();
    void inverse();
    int threads() const { return n_threads_; }

private:
    void* fwd_ = nullptr;  // fftw_plan
    void* inv_ = nullptr;
    std::complex<double>* data_ = nullptr;
    std::size_t size_ = 0;
    int n_threads_ = 1;
};

} // namespace atomfocus::gpe
