#include "atomfocus/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace atomfocus::gpe {

namespace {
std::mutex planner_mutex;  // the FFTW planner is not thread-safe
bool threads_ready = false;
} // namespace

Fft3::Fft3(const Grid3& grid, std::complex<double>* data, int n_threads)
    : data_(data), size_(grid.size()), n_threads_(n_threads < 1 ? 1 : n_threads) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (n_threads_ > 1 && !threads_ready) {
        fftw_init_threads();
        threads_ready = true;
    }
    if (threads_ready) fftw_plan_with_nthreads(n_threads_);

    // FFTW_MEASURE clobbers the buffer while planning; preserve the field.
    std::vector<std::complex<double>> saved(data_, data_ + size_);
    auto* p = reinterpret_cast<fftw_complex*>(data_);
    fwd_ = fftw_plan_dft_3d(static_cast<int>(grid.nz), static_cast<int>(grid.ny),
                            static_cast<int>(grid.nx), p, p, FFTW_FORWARD, FFTW_MEASURE);
    inv_ = fftw_plan_dft_3d(static_cast<int>(grid.nz), static_cast<int>(grid.ny),
                            static_cast<int>(grid.nx), p, p, FFTW_BACKWARD, FFTW_MEASURE);
    std::copy(saved.begin(), saved.end(), data_);
}

Fft3::~Fft3() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Fft3::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }

void Fft3::inverse() {
    fftw_execute(static_cast<fftw_plan>(inv_));
    const double s = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= s;
}

} // namespace atomfocus::gpe
