#include "choquard/riesz.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "choquard/fft.hpp"

namespace choquard {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

void check_alpha(double alpha, int dim) {
    if (!(alpha > 0.0) || !(alpha < static_cast<double>(dim)))
        throw std::invalid_argument("riesz: alpha must lie in (0, N)");
}
}  // namespace

double riesz_constant(double alpha, int dim) {
    check_alpha(alpha, dim);
    return std::tgamma(0.5 * (dim - alpha)) /
           (std::tgamma(0.5 * alpha) * std::pow(2.0, alpha) * std::pow(kPi, 0.5 * dim));
}

double unit_ball_volume(int dim) {
    return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double riesz_kernel_sample(const GridSpec& grid, double alpha, double riesz_a,
                           double trunc_radius, const std::array<double, kMaxDim>& diff,
                           bool is_origin_cell) {
    if (is_origin_cell) {
        // equal-volume ball average of A|x|^{alpha-N} over one cell
        const double omega = unit_ball_volume(grid.dim);
        const double cell = grid.cell_volume();
        const double rc = std::pow(cell / omega, 1.0 / grid.dim);
        return riesz_a * grid.dim * omega * std::pow(rc, alpha) / (alpha * cell);
    }
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) r2 += diff[d] * diff[d];
    const double r = std::sqrt(r2);
    if (r > trunc_radius) return 0.0;
    return riesz_a * std::pow(r, alpha - grid.dim);
}

RieszPlan::RieszPlan(const GridSpec& grid, double alpha, std::int64_t memory_cap_bytes)
    : grid_(grid), alpha_(alpha) {
    check_alpha(alpha, grid.dim);
    riesz_a_ = riesz_constant(alpha, grid.dim);
    trunc_radius_ = grid.length * std::sqrt(static_cast<double>(grid.dim));
    padded_n_ = 2 * grid.n;

    std::int64_t padded_total = 1;
    for (int d = 0; d < grid.dim; ++d) padded_total *= padded_n_;
    // real pad buffer + complex spectrum + multiplier, in bytes
    const std::int64_t footprint =
        padded_total * 8 + (padded_total / padded_n_) * (padded_n_ / 2 + 1) * 24;
    if (footprint > memory_cap_bytes)
        throw std::invalid_argument("plan_riesz: padded transform exceeds the memory cap");

    // Sample the kernel on the circular difference grid: index s along an
    // axis stands for offset s*h when s <= n, (s - 2n)*h beyond. Both
    // signs of each offset land on the same |diff|, so the sample is even.
    std::vector<double> kernel(static_cast<size_t>(padded_total));
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> diff{};
    for (std::int64_t flat = 0; flat < padded_total; ++flat) {
        bool origin = true;
        for (int d = 0; d < grid.dim; ++d) {
            int s = idx[d];
            int off = (s <= padded_n_ / 2) ? s : s - padded_n_;
            diff[d] = off * grid.h;
            origin = origin && (off == 0);
        }
        kernel[static_cast<size_t>(flat)] =
            riesz_kernel_sample(grid, alpha, riesz_a_, trunc_radius_, diff, origin);
        for (int d = grid.dim - 1; d >= 0; --d) {
            if (++idx[d] < padded_n_) break;
            idx[d] = 0;
        }
    }

    std::vector<int> shape(static_cast<size_t>(grid.dim), padded_n_);
    transform_ = std::make_unique<choquard::fft::RealTransform>(shape);
    std::vector<std::complex<double>> spec(static_cast<size_t>(transform_->complex_size()));
    transform_->forward(kernel.data(), spec.data());

    // The kernel sample is even in every axis, so the spectrum is real; keep
    // the real part and fold in the h^N quadrature weight and the 1/M
    // inverse-transform normalization.
    const double scale = grid.cell_volume() / static_cast<double>(padded_total);
    multiplier_.resize(spec.size());
    for (size_t i = 0; i < spec.size(); ++i) multiplier_[i] = spec[i].real() * scale;

    // Roundoff can leave a tiny asymmetry across the fully stored axes;
    // average each negation orbit so index negation is an exact symmetry.
    const int m = padded_n_;
    const int nz = m / 2 + 1;
    if (grid.dim >= 2) {
        std::vector<double> sym(multiplier_.size());
        std::array<int, kMaxDim> k{};
        const std::int64_t rows = static_cast<std::int64_t>(multiplier_.size()) / nz;
        for (std::int64_t row = 0; row < rows; ++row) {
            std::int64_t rest = row;
            for (int d = grid.dim - 2; d >= 0; --d) {
                k[d] = static_cast<int>(rest % m);
                rest /= m;
            }
            for (int kz = 0; kz < nz; ++kz) {
                // average over sign flips of the fully stored axes
                double acc = 0.0;
                const int combos = 1 << (grid.dim - 1);
                for (int c = 0; c < combos; ++c) {
                    std::int64_t f = 0;
                    for (int d = 0; d < grid.dim - 1; ++d) {
                        int kk = ((c >> d) & 1) ? (m - k[d]) % m : k[d];
                        f = f * m + kk;
                    }
                    acc += multiplier_[static_cast<size_t>(f * nz + kz)];
                }
                sym[static_cast<size_t>(row * nz + kz)] = acc / combos;
            }
        }
        multiplier_.swap(sym);
    }
    for (double v : multiplier_)
        if (!std::isfinite(v)) throw std::runtime_error("plan_riesz: non-finite multiplier");

    pad_scratch_.resize(static_cast<size_t>(padded_total));
}

RieszPlan::~RieszPlan() = default;

RieszPlanPtr plan_riesz(const GridSpec& grid, double alpha, std::int64_t memory_cap_bytes) {
    return std::make_shared<const RieszPlan>(grid, alpha, memory_cap_bytes);
}

Field riesz_convolve(const RieszPlan& plan, const Field& g) {
    if (g.grid != plan.grid())
        throw std::invalid_argument("riesz_convolve: field grid does not match plan");
    const GridSpec& gr = plan.grid();
    const int n = gr.n;
    const int m = plan.padded_n_;

    std::lock_guard<std::mutex> lock(plan.scratch_mutex_);
    std::vector<double>& pad = plan.pad_scratch_;
    std::fill(pad.begin(), pad.end(), 0.0);
    // embed the n^N block at the low corner of the padded cube
    std::array<int, kMaxDim> idx{};
    const std::int64_t total = gr.total();
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t pf = 0;
        for (int d = 0; d < gr.dim; ++d) pf = pf * m + idx[d];
        pad[static_cast<size_t>(pf)] = g.values[static_cast<size_t>(flat)];
        for (int d = gr.dim - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }

    std::vector<std::complex<double>> spec(static_cast<size_t>(plan.transform_->complex_size()));
    plan.transform_->forward(pad.data(), spec.data());
    for (size_t i = 0; i < spec.size(); ++i) spec[i] *= plan.multiplier_[i];
    plan.transform_->backward(spec.data(), pad.data());

    Field out(gr);
    idx = {};
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t pf = 0;
        for (int d = 0; d < gr.dim; ++d) pf = pf * m + idx[d];
        out.values[static_cast<size_t>(flat)] = pad[static_cast<size_t>(pf)];
        for (int d = gr.dim - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }
    return out;
}

Field riesz_convolve_direct(const GridSpec& grid, double alpha, const Field& g) {
    if (g.grid != grid)
        throw std::invalid_argument("riesz_convolve_direct: field grid does not match");
    if (grid.total() > 4096)
        throw std::invalid_argument("riesz_convolve_direct: grid too large (n^N must be <= 4096)");
    check_alpha(alpha, grid.dim);
    const double a = riesz_constant(alpha, grid.dim);
    const double trunc = grid.length * std::sqrt(static_cast<double>(grid.dim));
    const std::int64_t total = grid.total();

    Field out(grid);
    std::array<double, kMaxDim> diff{};
    for (std::int64_t i = 0; i < total; ++i) {
        const auto xi = grid.coords(i);
        double acc = 0.0;
        for (std::int64_t j = 0; j < total; ++j) {
            const auto xj = grid.coords(j);
            bool origin = true;
            for (int d = 0; d < grid.dim; ++d) {
                diff[d] = xi[d] - xj[d];
                origin = origin && (diff[d] == 0.0);
            }
            acc += riesz_kernel_sample(grid, alpha, a, trunc, diff, origin) *
                   g.values[static_cast<size_t>(j)];
        }
        out.values[static_cast<size_t>(i)] = acc * grid.cell_volume();
    }
    return out;
}

}  // namespace choquard
