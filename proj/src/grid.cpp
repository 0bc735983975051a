#include "choquard/grid.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "choquard/fft.hpp"

namespace choquard {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<int> cube_shape(const GridSpec& g) {
    return std::vector<int>(static_cast<size_t>(g.dim), g.n);
}

/// Signed wavenumber index for DFT bin k of an even-length axis.
inline int signed_freq(int k, int n) { return (k <= n / 2) ? k : k - n; }

/// Transforms are cached per shape; the mutex also serializes use of the
/// cached scratch buffers, keeping the grid operations callable from
/// multiple threads.
std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

fft::RealTransform& cached_transform(const std::vector<int>& shape) {
    static std::map<std::vector<int>, std::unique_ptr<fft::RealTransform>> cache;
    auto it = cache.find(shape);
    if (it == cache.end())
        it = cache.emplace(shape, std::make_unique<fft::RealTransform>(shape)).first;
    return *it->second;
}

/// Forward transform of u, then per-bin visit(k_sq, coeff) over the
/// half-spectrum with the Hermitian pair weight.
template <typename Visit>
void for_each_mode(const GridSpec& g, std::vector<std::complex<double>>& spec, Visit&& visit) {
    const double base = kTwoPi / g.length;
    const int n = g.n;
    const int nz = n / 2 + 1;
    const std::int64_t rows = static_cast<std::int64_t>(spec.size()) / nz;
    for (std::int64_t row = 0; row < rows; ++row) {
        std::int64_t rest = row;
        double ksq_row = 0.0;
        for (int d = g.dim - 2; d >= 0; --d) {
            int kd = static_cast<int>(rest % n);
            rest /= n;
            double w = base * signed_freq(kd, n);
            ksq_row += w * w;
        }
        std::complex<double>* line = spec.data() + row * nz;
        for (int kz = 0; kz < nz; ++kz) {
            double w = base * kz;
            double pair_weight = (kz == 0 || kz == n / 2) ? 1.0 : 2.0;
            visit(ksq_row + w * w, pair_weight, line[kz]);
        }
    }
}

}  // namespace

GridSpec make_grid(int dim, double length, int n) {
    if (dim < 2 || dim > kMaxDim)
        throw std::invalid_argument("make_grid: dimension must be in [2, 4]");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("make_grid: box length must be positive and finite");
    if (n < 8) throw std::invalid_argument("make_grid: need at least 8 points per axis");
    if (n % 2 != 0)
        throw std::invalid_argument(
            "make_grid: points per axis must be even (odd n would place a node at the origin)");
    GridSpec g;
    g.dim = dim;
    g.length = length;
    g.n = n;
    g.h = length / n;
    return g;
}

void validate_field(const Field& u) {
    if (u.values.size() != static_cast<size_t>(u.grid.total()))
        throw std::invalid_argument("field: value count does not match grid");
    for (double v : u.values)
        if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite value");
}

double quadrature(const Field& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return s * u.grid.cell_volume();
}

double gradient_sq_norm(const Field& u) {
    const GridSpec& g = u.grid;
    std::lock_guard<std::mutex> lock(fft_mutex());
    fft::RealTransform& ft = cached_transform(cube_shape(g));
    std::vector<std::complex<double>> spec(static_cast<size_t>(ft.complex_size()));
    ft.forward(u.values.data(), spec.data());
    double sum = 0.0;
    for_each_mode(g, spec, [&](double ksq, double pw, std::complex<double>& c) {
        sum += pw * ksq * std::norm(c);
    });
    return sum * g.cell_volume() / static_cast<double>(g.total());
}

Field laplacian(const Field& u) {
    const GridSpec& g = u.grid;
    std::lock_guard<std::mutex> lock(fft_mutex());
    fft::RealTransform& ft = cached_transform(cube_shape(g));
    std::vector<std::complex<double>> spec(static_cast<size_t>(ft.complex_size()));
    ft.forward(u.values.data(), spec.data());
    for_each_mode(g, spec,
                  [](double ksq, double, std::complex<double>& c) { c *= -ksq; });
    Field out(g);
    ft.backward(spec.data(), out.values.data());
    const double inv = 1.0 / static_cast<double>(g.total());
    for (double& v : out.values) v *= inv;
    return out;
}

GradAndLaplacian grad_sq_and_laplacian(const Field& u) {
    const GridSpec& g = u.grid;
    std::lock_guard<std::mutex> lock(fft_mutex());
    fft::RealTransform& ft = cached_transform(cube_shape(g));
    std::vector<std::complex<double>> spec(static_cast<size_t>(ft.complex_size()));
    ft.forward(u.values.data(), spec.data());
    double sum = 0.0;
    for_each_mode(g, spec, [&](double ksq, double pw, std::complex<double>& c) {
        sum += pw * ksq * std::norm(c);
        c *= -ksq;
    });
    GradAndLaplacian out{sum * g.cell_volume() / static_cast<double>(g.total()), Field(g)};
    ft.backward(spec.data(), out.laplacian.values.data());
    const double inv = 1.0 / static_cast<double>(g.total());
    for (double& v : out.laplacian.values) v *= inv;
    return out;
}

Field inverse_helmholtz(const Field& u, double shift) {
    if (!(shift > 0.0)) throw std::invalid_argument("inverse_helmholtz: shift must be positive");
    const GridSpec& g = u.grid;
    std::lock_guard<std::mutex> lock(fft_mutex());
    fft::RealTransform& ft = cached_transform(cube_shape(g));
    std::vector<std::complex<double>> spec(static_cast<size_t>(ft.complex_size()));
    ft.forward(u.values.data(), spec.data());
    for_each_mode(g, spec, [shift](double ksq, double, std::complex<double>& c) {
        c /= (ksq + shift);
    });
    Field out(g);
    ft.backward(spec.data(), out.values.data());
    const double inv = 1.0 / static_cast<double>(g.total());
    for (double& v : out.values) v *= inv;
    return out;
}

Field spectral_derivative(const Field& u, int axis) {
    const GridSpec& g = u.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("spectral_derivative: bad axis");
    std::lock_guard<std::mutex> lock(fft_mutex());
    fft::RealTransform& ft = cached_transform(cube_shape(g));
    std::vector<std::complex<double>> spec(static_cast<size_t>(ft.complex_size()));
    ft.forward(u.values.data(), spec.data());

    const double base = kTwoPi / g.length;
    const int n = g.n;
    const int nz = n / 2 + 1;
    const std::int64_t rows = static_cast<std::int64_t>(spec.size()) / nz;
    for (std::int64_t row = 0; row < rows; ++row) {
        std::int64_t rest = row;
        int kaxis = 0;
        for (int d = g.dim - 2; d >= 0; --d) {
            int kd = static_cast<int>(rest % n);
            rest /= n;
            if (d == axis) kaxis = signed_freq(kd, n);
        }
        std::complex<double>* line = spec.data() + row * nz;
        for (int kz = 0; kz < nz; ++kz) {
            double w = (axis == g.dim - 1) ? base * kz : base * kaxis;
            // the unpaired Nyquist mode has no odd-derivative counterpart
            if (axis == g.dim - 1 ? kz == n / 2 : std::abs(kaxis) == n / 2) w = 0.0;
            line[kz] *= std::complex<double>(0.0, w);
        }
    }
    Field out(g);
    ft.backward(spec.data(), out.values.data());
    const double inv = 1.0 / static_cast<double>(g.total());
    for (double& v : out.values) v *= inv;
    return out;
}

double interpolate(const Field& u, const std::array<double, kMaxDim>& point) {
    const GridSpec& g = u.grid;
    int base_idx[kMaxDim];
    double frac[kMaxDim];
    for (int d = 0; d < g.dim; ++d) {
        double f = (point[d] + 0.5 * g.length) / g.h - 0.5;
        double fl = std::floor(f);
        base_idx[d] = static_cast<int>(fl);
        frac[d] = f - fl;
    }
    double acc = 0.0;
    const int corners = 1 << g.dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::int64_t flat = 0;
        bool inside = true;
        for (int d = 0; d < g.dim; ++d) {
            int off = (c >> d) & 1;
            int idx = base_idx[d] + off;
            if (idx < 0 || idx >= g.n) {
                inside = false;
                break;
            }
            w *= off ? frac[d] : 1.0 - frac[d];
            flat = flat * g.n + idx;
        }
        if (inside && w != 0.0) acc += w * u.values[static_cast<size_t>(flat)];
    }
    return acc;
}

Field dilate(const Field& u, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("dilate: scale factor must be positive and finite");
    if (t == 1.0) return u;

    const GridSpec& g = u.grid;
    Field out(g);
    const double inv_t = 1.0 / t;
    const std::int64_t total = g.total();
    std::array<double, kMaxDim> p{};
    std::array<int, kMaxDim> idx{};
    for (std::int64_t flat = 0; flat < total; ++flat) {
        for (int d = 0; d < g.dim; ++d) p[d] = g.node(idx[d]) * inv_t;
        out.values[static_cast<size_t>(flat)] = interpolate(u, p);
        for (int d = g.dim - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    return out;
}

double tail_mass_fraction(const Field& u) {
    const GridSpec& g = u.grid;
    const double edge = 0.9 * 0.5 * g.length;
    double tail = 0.0, all = 0.0;
    std::array<int, kMaxDim> idx{};
    const std::int64_t total = g.total();
    for (std::int64_t flat = 0; flat < total; ++flat) {
        double m = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double a = std::fabs(g.node(idx[d]));
            if (a > m) m = a;
        }
        double v2 = u.values[static_cast<size_t>(flat)];
        v2 *= v2;
        all += v2;
        if (m >= edge) tail += v2;
        for (int d = g.dim - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    return all > 0.0 ? tail / all : 0.0;
}

Field gaussian_field(const GridSpec& g, double amplitude, double width,
                     const std::array<double, kMaxDim>& center) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_field: width must be positive");
    Field out(g);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    std::array<int, kMaxDim> idx{};
    const std::int64_t total = g.total();
    for (std::int64_t flat = 0; flat < total; ++flat) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double dx = g.node(idx[d]) - center[d];
            r2 += dx * dx;
        }
        out.values[static_cast<size_t>(flat)] = amplitude * std::exp(-r2 * inv2w2);
        for (int d = g.dim - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    return out;
}

}  // namespace choquard
