#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace choquard::fft {

/// Real-to-complex / complex-to-real FFT pair for one fixed row-major shape.
///
/// Thin RAII wrapper around FFTW double-precision plans. Plans are created
/// with FFTW_ESTIMATE so the chosen algorithm depends only on the shape,
/// which keeps repeated runs bit-identical. The wrapper owns aligned
/// scratch buffers; callers pass ordinary vectors and data is staged through
/// the scratch, so a single RealTransform must not be used from two threads
/// at once (make one per thread instead).
class RealTransform {
public:
    explicit RealTransform(std::vector<int> shape);
    ~RealTransform();

    RealTransform(const RealTransform&) = delete;
    RealTransform& operator=(const RealTransform&) = delete;

    /// Unnormalized forward transform. `in` has real_size() entries,
    /// `out` receives complex_size() half-spectrum coefficients.
    void forward(const double* in, std::complex<double>* out) const;

    /// Unnormalized inverse transform (caller divides by real_size()).
    void backward(const std::complex<double>* in, double* out) const;

    const std::vector<int>& shape() const { return shape_; }
    std::int64_t real_size() const { return real_size_; }
    std::int64_t complex_size() const { return complex_size_; }

private:
    std::vector<int> shape_;
    std::int64_t real_size_ = 0;
    std::int64_t complex_size_ = 0;
    void* plan_fwd_ = nullptr;   // fftw_plan
    void* plan_bwd_ = nullptr;   // fftw_plan
    double* real_buf_ = nullptr;
    void* cplx_buf_ = nullptr;   // fftw_complex*
};

}  // namespace choquard::fft
