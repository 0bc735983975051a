#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace choquard {

constexpr int kMaxDim = 4;

/// Periodic box [-L/2, L/2)^N with n nodes per axis at half-cell offsets
///   x_i = -L/2 + (i + 1/2) h,   h = L/n.
///
/// n is even, so no node ever coincides with the origin; h is computed once
/// and every node coordinate derives from it.
struct GridSpec {
    int dim = 0;
    double length = 0.0;
    int n = 0;
    double h = 0.0;

    std::int64_t total() const {
        std::int64_t t = 1;
        for (int d = 0; d < dim; ++d) t *= n;
        return t;
    }
    double node(int i) const { return -0.5 * length + (i + 0.5) * h; }
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= h;
        return v;
    }

    /// Row-major decode of a flat index into per-axis indices.
    std::array<int, kMaxDim> unflatten(std::int64_t flat) const {
        std::array<int, kMaxDim> idx{};
        for (int d = dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(flat % n);
            flat /= n;
        }
        return idx;
    }
    std::array<double, kMaxDim> coords(std::int64_t flat) const {
        auto idx = unflatten(flat);
        std::array<double, kMaxDim> x{};
        for (int d = 0; d < dim; ++d) x[d] = node(idx[d]);
        return x;
    }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && length == o.length && n == o.n;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Real scalar function sampled on the grid, row-major.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), values(static_cast<size_t>(g.total()), 0.0) {}
};

GridSpec make_grid(int dim, double length, int n);

/// Rectangle rule: h^N * sum(values). Spectrally accurate for smooth
/// periodic integrands.
double quadrature(const Field& u);

/// Verifies all values finite and length n^N; throws otherwise.
void validate_field(const Field& u);

/// ||grad u||_2^2 via Parseval on the spectral side.
double gradient_sq_norm(const Field& u);

/// Spectral Laplacian (multiplier -|2 pi k / L|^2).
Field laplacian(const Field& u);

struct GradAndLaplacian {
    double grad_sq;
    Field laplacian;
};

/// Both spectral quantities from a single forward transform.
GradAndLaplacian grad_sq_and_laplacian(const Field& u);

/// (-lap + shift)^{-1} u via the spectral multiplier 1/(|2 pi k/L|^2 + shift);
/// shift must be positive.
Field inverse_helmholtz(const Field& u, double shift);

/// Spectral partial derivative along one axis.
Field spectral_derivative(const Field& u, int axis);

/// Multilinear interpolation of u at an arbitrary point; zero outside the box.
double interpolate(const Field& u, const std::array<double, kMaxDim>& point);

/// u_t(x) = u(x/t) by multilinear interpolation, zero extension outside the
/// box. t = 1 returns the input bit-exactly.
Field dilate(const Field& u, double t);

/// L^2-mass fraction in the outer 10% shell (sup-norm distance from the
/// boundary). Used as the domain-truncation diagnostic: values above 1e-4
/// mean the box is too small for the field.
double tail_mass_fraction(const Field& u);

/// Gaussian ansatz amplitude * exp(-|x - center|^2 / (2 width^2)).
Field gaussian_field(const GridSpec& g, double amplitude, double width,
                     const std::array<double, kMaxDim>& center = {});

}  // namespace choquard
