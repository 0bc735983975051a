#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// A(alpha, N) = Gamma((N-alpha)/2) / (Gamma(alpha/2) 2^alpha pi^{N/2}),
/// the Riesz kernel normalization. Requires 0 < alpha < N.
double riesz_constant(double alpha, int dim);

/// Volume of the unit ball in R^N.
double unit_ball_volume(int dim);

namespace fft {
class RealTransform;
}

/// Precomputed Fourier multiplier of the truncated free-space Riesz kernel
/// for one (grid, alpha) pair.
///
/// The kernel A|x|^{alpha-N} is truncated at R = L sqrt(N) (which covers
/// every pairwise difference of box nodes), sampled on the zero-padded
/// 2n-per-axis difference grid, and the origin cell carries the analytic
/// equal-volume-ball average A N omega_N r_c^alpha / (alpha h^N). The stored
/// multiplier is the real transform of that sample with the h^N quadrature
/// weight and inverse-FFT normalization folded in, so the FFT path and the
/// direct double sum agree to machine precision.
class RieszPlan {
public:
    RieszPlan(const GridSpec& grid, double alpha, std::int64_t memory_cap_bytes = kDefaultMemoryCap);
    ~RieszPlan();
    RieszPlan(const RieszPlan&) = delete;
    RieszPlan& operator=(const RieszPlan&) = delete;

    const GridSpec& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double normalization() const { return riesz_a_; }
    double truncation_radius() const { return trunc_radius_; }
    int pad_factor() const { return 2; }
    const std::vector<double>& multiplier() const { return multiplier_; }
    /// Padded axis length (2n) and half-spectrum extent of the last axis.
    int padded_n() const { return padded_n_; }

    static constexpr std::int64_t kDefaultMemoryCap = 4LL << 30;

private:
    friend Field riesz_convolve(const RieszPlan&, const Field&);
    GridSpec grid_;
    double alpha_ = 0.0;
    double riesz_a_ = 0.0;
    double trunc_radius_ = 0.0;
    int padded_n_ = 0;
    std::vector<double> multiplier_;
    std::unique_ptr<choquard::fft::RealTransform> transform_;
    // scratch shared across calls; the mutex serializes concurrent convolutions
    mutable std::vector<double> pad_scratch_;
    mutable std::mutex scratch_mutex_;
};

using RieszPlanPtr = std::shared_ptr<const RieszPlan>;

RieszPlanPtr plan_riesz(const GridSpec& grid, double alpha,
                        std::int64_t memory_cap_bytes = RieszPlan::kDefaultMemoryCap);

/// (I_alpha * g) on the plan's grid: h^N sum_j K(x_i - x_j) g_j via padded FFT.
Field riesz_convolve(const RieszPlan& plan, const Field& g);

/// Same sum by direct O(n^{2N}) summation with the identical sampled kernel.
/// Oracle for the FFT path; guarded to n^N <= 4096.
Field riesz_convolve_direct(const GridSpec& grid, double alpha, const Field& g);

/// Sampled truncated kernel at a difference vector (origin cell gets the
/// analytic ball average). Shared by the FFT plan and the direct oracle.
double riesz_kernel_sample(const GridSpec& grid, double alpha, double riesz_a,
                           double trunc_radius, const std::array<double, kMaxDim>& diff,
                           bool is_origin_cell);

}  // namespace choquard
