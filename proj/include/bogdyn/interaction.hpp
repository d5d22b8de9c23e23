#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "bogdyn/lattice.hpp"

namespace bogdyn {

enum class PotentialShape { compact_bump, gaussian_truncated, custom_table };

// Parameters of the radial profile w(r). For compact_bump:
//   w(r) = amplitude * (1 - r^2/radius^2)^2 for r <= radius, else 0  (C^1, decreasing).
// For gaussian_truncated: amplitude * exp(-r^2/(2 sigma^2)) for r <= radius, else 0.
// For custom_table: piecewise-linear through (radii[i], table[i]), 0 beyond the last radius.
struct PotentialParams {
    double amplitude = 1.0;
    double radius = 1.0;
    double sigma = 1.0;
    std::vector<double> radii;
    std::vector<double> table;
};

// Base potential w or its rescaling w_N, sampled on the lattice at the
// minimum-image radius. `values` are raw samples (not weighted).
struct PotentialGrid {
    LatticePtr lattice;
    RVec values;
    PotentialShape shape = PotentialShape::compact_bump;
    PotentialParams params;
    bool attractive = false;
    // Scaling state: values sample sign * N^{d beta} w(N^beta r).
    int scale_N = 1;
    double scale_beta = 0.0;
    bool under_resolved = false;

    double integral() const { return values.sum() * lattice->cell_volume(); }
    double l2_norm_sq() const { return values.squaredNorm() * lattice->cell_volume(); }
    double sup_norm() const { return values.cwiseAbs().maxCoeff(); }
};

namespace detail {

inline double radial_profile(PotentialShape shape, const PotentialParams& p, double r) {
    switch (shape) {
        case PotentialShape::compact_bump: {
            if (r >= p.radius) return 0.0;
            const double q = 1.0 - (r * r) / (p.radius * p.radius);
            return p.amplitude * q * q;
        }
        case PotentialShape::gaussian_truncated: {
            if (r >= p.radius) return 0.0;
            return p.amplitude * std::exp(-0.5 * r * r / (p.sigma * p.sigma));
        }
        case PotentialShape::custom_table: {
            const auto& rs = p.radii;
            const auto& vs = p.table;
            if (rs.empty()) return 0.0;
            if (r <= rs.front()) return vs.front();
            if (r >= rs.back()) return 0.0;
            auto it = std::upper_bound(rs.begin(), rs.end(), r);
            const size_t i = static_cast<size_t>(it - rs.begin());
            const double t = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
            return vs[i - 1] + t * (vs[i] - vs[i - 1]);
        }
    }
    return 0.0;
}

// Radius beyond which the profile is identically zero (support radius).
inline double support_radius(PotentialShape shape, const PotentialParams& p) {
    if (shape == PotentialShape::custom_table) return p.radii.empty() ? 0.0 : p.radii.back();
    return p.radius;
}

inline PotentialGrid sample_scaled(PotentialShape shape, const PotentialParams& p,
                                   LatticePtr lat, bool attractive, int N, double beta) {
    PotentialGrid w;
    w.lattice = lat;
    w.shape = shape;
    w.params = p;
    w.attractive = attractive;
    w.scale_N = N;
    w.scale_beta = beta;
    const double stretch = std::pow(static_cast<double>(N), beta);
    const double height = std::pow(static_cast<double>(N), lat->dim * beta);
    const double sign = attractive ? -1.0 : 1.0;
    w.values.resize(lat->sites);
    for (long i = 0; i < lat->sites; ++i)
        w.values[i] = sign * height * radial_profile(shape, p, stretch * lat->radial_distance(i));
    w.under_resolved = support_radius(shape, p) / stretch < 4.0 * lat->spacing;
    return w;
}

}  // namespace detail

inline PotentialGrid sample_w(PotentialShape shape, const PotentialParams& params,
                              LatticePtr lattice, bool attractive = false) {
    if (params.amplitude <= 0.0)
        throw config_error("interaction.params.amplitude must be positive");
    const double r_supp = detail::support_radius(shape, params);
    if (!(r_supp > 0.0)) throw config_error("interaction.params.radius must be positive");
    if (r_supp >= 0.5 * lattice->box_length)
        throw config_error("interaction support radius must stay below box_length/2 (no wrap)");
    if (shape == PotentialShape::custom_table) {
        if (params.radii.size() != params.table.size() || params.radii.size() < 2)
            throw config_error("interaction.params: custom_table needs matching radii/table, length >= 2");
        if (!std::is_sorted(params.radii.begin(), params.radii.end()))
            throw config_error("interaction.params.radii must be increasing");
        for (size_t i = 0; i < params.table.size(); ++i) {
            if (params.table[i] < 0.0)
                throw config_error("interaction.params.table values must be non-negative");
            if (i > 0 && params.table[i] > params.table[i - 1])
                throw config_error("interaction.params.table must be non-increasing in radius");
        }
    }
    return detail::sample_scaled(shape, params, std::move(lattice), attractive, 1, 0.0);
}

// Mean-field rescaling w_N(x) = N^{d beta} w(N^beta x), sampled from the
// analytic profile (the peak value N^{d beta} w(0) is exact by construction).
// An under-resolved support (narrower than 4 spacings) sets the
// under_resolved flag; scaling studies record it in output metadata.
inline PotentialGrid scale_wN(const PotentialGrid& w, int N, double beta) {
    if (N < 2) throw config_error("scaling.N must be >= 2");
    const double beta_max = 1.0 / w.lattice->dim;
    if (beta < 0.0 || beta >= beta_max)
        throw config_error("scaling.beta must satisfy 0 <= beta < 1/dim");
    return detail::sample_scaled(w.shape, w.params, w.lattice, w.attractive, N, beta);
}

// w_N * |u|^2 as a real field on the lattice.
inline GridFunction mean_field_potential(const PotentialGrid& wN, const GridFunction& u) {
    if (wN.lattice.get() != u.lattice.get())
        throw contract_error("mean_field_potential: lattice mismatch");
    Vec density = u.values().cwiseAbs2().cast<cplx>();
    GridFunction rho = GridFunction::from_values(u.lattice, density);
    GridFunction kernel = GridFunction::from_values(u.lattice, wN.values.cast<cplx>());
    GridFunction out = convolve(kernel, rho);
    out.coeffs = out.coeffs.real().cast<cplx>();  // discard rounding-level imaginary part
    return out;
}

// mu_N = 1/2 <|u|^2, w_N * |u|^2>.
inline double mu_N(const PotentialGrid& wN, const GridFunction& u) {
    if (wN.lattice.get() != u.lattice.get()) throw contract_error("mu_N: lattice mismatch");
    GridFunction mf = mean_field_potential(wN, u);
    RVec density = u.values().cwiseAbs2();
    return 0.5 * density.dot(mf.values().real()) * u.lattice->cell_volume();
}

}  // namespace bogdyn
