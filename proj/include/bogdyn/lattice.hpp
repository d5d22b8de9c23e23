#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "bogdyn/errors.hpp"

namespace bogdyn {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;

constexpr double kPi = 3.14159265358979323846;

// Periodic d-dimensional grid, d in {1,2,3}. Site index is flattened with
// axis 0 fastest: idx = i0 + P*i1 + P^2*i2. Sites sit at x_a = i_a * spacing.
struct Lattice {
    int dim = 1;
    int points_per_dim = 2;
    double box_length = 1.0;
    double spacing = 0.5;
    long sites = 2;  // M = points_per_dim^dim

    // Wavenumbers in FFT order along one axis: 2*pi/L * {0, 1, ..., P/2, -(P/2-1), ..., -1}.
    std::vector<double> axis_wavenumbers;
    // |k|^2 per flattened site index.
    RVec k_squared;

    double volume() const { return std::pow(box_length, dim); }
    double cell_volume() const { return std::pow(spacing, dim); }
    // sqrt of cell volume; GridFunction stores f(x) * weight().
    double weight() const { return std::pow(spacing, 0.5 * dim); }

    std::array<int, 3> site_coords(long idx) const {
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
            c[a] = static_cast<int>(idx % points_per_dim);
            idx /= points_per_dim;
        }
        return c;
    }

    // Minimum-image distance from site idx to the origin.
    double radial_distance(long idx) const {
        auto c = site_coords(idx);
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            double x = c[a] * spacing;
            double d = std::min(x, box_length - x);
            r2 += d * d;
        }
        return std::sqrt(r2);
    }

    // Minimum-image displacement distance between two sites.
    double pair_distance(long i, long j) const {
        auto ci = site_coords(i);
        auto cj = site_coords(j);
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            double x = std::abs(ci[a] - cj[a]) * spacing;
            double d = std::min(x, box_length - x);
            r2 += d * d;
        }
        return std::sqrt(r2);
    }
};

using LatticePtr = std::shared_ptr<const Lattice>;

namespace detail {

inline bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// In-place complex DFT along each axis. forward: unscaled DFT; inverse
// carries the 1/P per axis so inverse(forward(x)) == x.
inline void fft_all_axes(const Lattice& lat, Vec& data, bool forward) {
    Eigen::FFT<double> fft;
    const int P = lat.points_per_dim;
    std::vector<cplx> line(P), tline(P);
    long stride = 1;
    for (int axis = 0; axis < lat.dim; ++axis) {
        const long nlines = lat.sites / P;
        for (long l = 0; l < nlines; ++l) {
            // Base index of this line: distribute l over the non-axis dims.
            const long block = stride * P;
            const long base = (l / stride) * block + (l % stride);
            for (int i = 0; i < P; ++i) line[i] = data[base + i * stride];
            if (forward)
                fft.fwd(tline, line);
            else
                fft.inv(tline, line);
            for (int i = 0; i < P; ++i) data[base + i * stride] = tline[i];
        }
        stride *= P;
    }
}

}  // namespace detail

inline LatticePtr build_lattice(int dim, int points_per_dim, double box_length,
                                bool require_pow2 = true) {
    if (dim < 1 || dim > 3)
        throw config_error("lattice.dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
    if (points_per_dim < 2)
        throw config_error("lattice.points_per_dim must be >= 2");
    if (require_pow2 && !detail::is_power_of_two(points_per_dim))
        throw config_error("lattice.points_per_dim must be a power of two (got " +
                           std::to_string(points_per_dim) + "); set allow_non_pow2 for small oracle grids");
    if (!(box_length > 0.0)) throw config_error("lattice.box_length must be positive");

    auto lat = std::make_shared<Lattice>();
    lat->dim = dim;
    lat->points_per_dim = points_per_dim;
    lat->box_length = box_length;
    lat->spacing = box_length / points_per_dim;
    lat->sites = 1;
    for (int a = 0; a < dim; ++a) lat->sites *= points_per_dim;

    lat->axis_wavenumbers.resize(points_per_dim);
    const double dk = 2.0 * kPi / box_length;
    for (int j = 0; j < points_per_dim; ++j) {
        const int n = (j <= points_per_dim / 2) ? j : j - points_per_dim;
        lat->axis_wavenumbers[j] = dk * n;
    }

    lat->k_squared.resize(lat->sites);
    for (long idx = 0; idx < lat->sites; ++idx) {
        auto c = lat->site_coords(idx);
        double k2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double k = lat->axis_wavenumbers[c[a]];
            k2 += k * k;
        }
        lat->k_squared[idx] = k2;
    }
    return lat;
}

// Complex field on the lattice. coeffs[x] = f(x) * spacing^{dim/2}, so the
// Euclidean inner product of coefficient vectors is the L2 inner product.
struct GridFunction {
    LatticePtr lattice;
    Vec coeffs;

    GridFunction() = default;
    GridFunction(LatticePtr lat, Vec c) : lattice(std::move(lat)), coeffs(std::move(c)) {
        if (coeffs.size() != lattice->sites)
            throw contract_error("GridFunction: coefficient length does not match lattice");
    }

    static GridFunction zero(LatticePtr lat) {
        return GridFunction(lat, Vec::Zero(lat->sites));
    }
    // Build from pointwise values f(x).
    static GridFunction from_values(LatticePtr lat, const Vec& values) {
        return GridFunction(lat, values * lat->weight());
    }

    Vec values() const { return coeffs / lattice->weight(); }
    double norm() const { return coeffs.norm(); }
    double norm_sq() const { return coeffs.squaredNorm(); }
    double sup_norm() const { return coeffs.cwiseAbs().maxCoeff() / lattice->weight(); }
};

inline void require_same_lattice(const GridFunction& f, const GridFunction& g) {
    if (f.lattice.get() != g.lattice.get())
        throw contract_error("operands live on different lattices");
}

// <f, g> on L2, conjugate-linear in the first argument.
inline cplx inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_lattice(f, g);
    return f.coeffs.dot(g.coeffs);  // Eigen's dot conjugates the left factor
}

// Coefficients in the orthonormal plane-wave basis e_k(x) = e^{ikx}/sqrt(V)
// (the unitary DFT of the weighted coefficients).
inline Vec to_fourier(const GridFunction& f) {
    Vec data = f.coeffs;
    detail::fft_all_axes(*f.lattice, data, true);
    return data / std::sqrt(static_cast<double>(f.lattice->sites));
}

inline GridFunction from_fourier(LatticePtr lat, const Vec& fourier_coeffs) {
    Vec data = fourier_coeffs * std::sqrt(static_cast<double>(lat->sites));
    detail::fft_all_axes(*lat, data, false);
    return GridFunction(lat, std::move(data));
}

// Applies -Laplacian (the positive kinetic operator): Fourier multiplier |k|^2.
inline GridFunction laplacian_apply(const GridFunction& f) {
    Vec data = f.coeffs;
    detail::fft_all_axes(*f.lattice, data, true);
    data.array() *= f.lattice->k_squared.array().cast<cplx>();
    detail::fft_all_axes(*f.lattice, data, false);
    return GridFunction(f.lattice, std::move(data));
}

// Periodic convolution (kernel * f)(x) = sum_y kernel(x-y) f(y) h^d, with the
// quadrature weight so a delta-like kernel of mass 1 is the identity.
inline GridFunction convolve(const GridFunction& kernel, const GridFunction& f) {
    require_same_lattice(kernel, f);
    const auto& lat = *f.lattice;
    Vec kv = kernel.values();
    Vec fv = f.values();
    detail::fft_all_axes(lat, kv, true);
    detail::fft_all_axes(lat, fv, true);
    Vec prod = kv.cwiseProduct(fv);
    detail::fft_all_axes(lat, prod, false);
    prod *= lat.cell_volume();
    return GridFunction::from_values(f.lattice, prod);
}

// H^s norm via the multiplier (1+|k|^2)^{s/2}; s = 0 recovers the L2 norm.
inline double sobolev_norm(const GridFunction& f, double s) {
    if (s < 0.0) throw contract_error("sobolev_norm: s must be >= 0");
    Vec fh = to_fourier(f);
    double acc = 0.0;
    for (long i = 0; i < fh.size(); ++i)
        acc += std::pow(1.0 + f.lattice->k_squared[i], s) * std::norm(fh[i]);
    return std::sqrt(acc);
}

}  // namespace bogdyn
