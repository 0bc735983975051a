#include "choquard/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace choquard::fft {

namespace {
// FFTW plan creation mutates global planner state; execution does not.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealTransform::RealTransform(std::vector<int> shape) : shape_(std::move(shape)) {
    if (shape_.empty()) throw std::invalid_argument("RealTransform: empty shape");
    real_size_ = 1;
    for (int s : shape_) {
        if (s < 2) throw std::invalid_argument("RealTransform: axis length < 2");
        real_size_ *= s;
    }
    complex_size_ = real_size_ / shape_.back() * (shape_.back() / 2 + 1);

    real_buf_ = fftw_alloc_real(static_cast<size_t>(real_size_));
    auto* cbuf = fftw_alloc_complex(static_cast<size_t>(complex_size_));
    cplx_buf_ = cbuf;
    if (!real_buf_ || !cbuf) throw std::bad_alloc();

    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c(static_cast<int>(shape_.size()), shape_.data(),
                                  real_buf_, cbuf, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r(static_cast<int>(shape_.size()), shape_.data(),
                                  cbuf, real_buf_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("RealTransform: FFTW planning failed");
}

RealTransform::~RealTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void RealTransform::forward(const double* in, std::complex<double>* out) const {
    std::memcpy(real_buf_, in, sizeof(double) * static_cast<size_t>(real_size_));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, cplx_buf_, sizeof(fftw_complex) * static_cast<size_t>(complex_size_));
}

void RealTransform::backward(const std::complex<double>* in, double* out) const {
    std::memcpy(cplx_buf_, in, sizeof(fftw_complex) * static_cast<size_t>(complex_size_));
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(out, real_buf_, sizeof(double) * static_cast<size_t>(real_size_));
}

}  // namespace choquard::fft
