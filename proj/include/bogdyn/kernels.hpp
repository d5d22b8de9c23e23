#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "bogdyn/hartree.hpp"
#include "bogdyn/interaction.hpp"
#include "bogdyn/lattice.hpp"

namespace bogdyn {

// Dense complex operator in the weighted site basis. With the spacing^{d/2}
// weighting, matrix algebra coincides with L2 operator algebra and the
// Frobenius norm equals the kernel's L2 (Hilbert-Schmidt) norm.
struct OneBodyOperator {
    LatticePtr lattice;
    Mat m;
};

// Symmetric kernel acting conjugate-space -> space (houses K2 and alpha).
struct PairKernel {
    LatticePtr lattice;
    Mat m;
};

inline double spectral_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

// Fourier data shared by the kinetic matrix and the L^{-1} weights of the
// envelope module. Built once per lattice.
struct SpectralCache {
    LatticePtr lattice;
    Mat plane_waves;       // unitary; column p is the orthonormal plane wave e_p
    RVec k_squared;        // |k_p|^2 per column
    Mat minus_laplacian;   // -D in the weighted site basis
    RVec h1_eigs;          // 1 + |k_p|^2  (h1 = -D + 1)

    explicit SpectralCache(LatticePtr lat) : lattice(std::move(lat)) {
        const long M = lattice->sites;
        plane_waves.resize(M, M);
        for (long p = 0; p < M; ++p) {
            Vec unit = Vec::Zero(M);
            unit[p] = 1.0;
            GridFunction e = from_fourier(lattice, unit);
            plane_waves.col(p) = e.coeffs;
        }
        k_squared = lattice->k_squared;
        minus_laplacian =
            plane_waves * k_squared.cast<cplx>().asDiagonal() * plane_waves.adjoint();
        minus_laplacian = 0.5 * (minus_laplacian + minus_laplacian.adjoint()).eval();
        h1_eigs = k_squared.array() + 1.0;
    }
};

// Q = 1 - |u><u|. Requires ||u|| = 1 to 1e-10 unless normalize is set.
inline OneBodyOperator projector_Q(const GridFunction& u, bool normalize = false) {
    Vec c = u.coeffs;
    const double n = c.norm();
    if (std::abs(n - 1.0) > 1e-10) {
        if (!normalize)
            throw contract_error("projector_Q: u is not normalized (||u|| = " + std::to_string(n) + ")");
        c /= n;
    }
    const long M = u.lattice->sites;
    Mat q = Mat::Identity(M, M) - c * c.adjoint();
    return {u.lattice, std::move(q)};
}

namespace detail {

// Site index of the displacement x - y (periodic), where wN is sampled at
// displacement-from-origin sites.
inline long wN_pair_index(const Lattice& lat, long x, long y) {
    auto cx = lat.site_coords(x);
    auto cy = lat.site_coords(y);
    long idx = 0;
    long stride = 1;
    for (int a = 0; a < lat.dim; ++a) {
        int d = cx[a] - cy[a];
        if (d < 0) d += lat.points_per_dim;
        idx += stride * d;
        stride *= lat.points_per_dim;
    }
    return idx;
}

// K~1[x,y] = c_x wN(x-y) conj(c_y), K~2[x,y] = c_x wN(x-y) c_y in the
// weighted basis (the h^d quadrature factor cancels against the weights).
inline Mat tilde_kernel(const GridFunction& u, const PotentialGrid& wN, bool conjugate_right) {
    const auto& lat = *u.lattice;
    const long M = lat.sites;
    Mat k(M, M);
    for (long x = 0; x < M; ++x) {
        for (long y = 0; y < M; ++y) {
            const double w = wN.values[wN_pair_index(lat, x, y)];
            const cplx right = conjugate_right ? std::conj(u.coeffs[y]) : u.coeffs[y];
            k(x, y) = u.coeffs[x] * w * right;
        }
    }
    return k;
}

}  // namespace detail

// K1 = Q K~1 Q, Hermitian.
inline OneBodyOperator build_K1(const GridFunction& u, const PotentialGrid& wN,
                                bool normalize = false) {
    if (u.lattice.get() != wN.lattice.get()) throw contract_error("build_K1: lattice mismatch");
    Mat q = projector_Q(u, normalize).m;
    Mat k = q * detail::tilde_kernel(u, wN, /*conjugate_right=*/true) * q;
    k = 0.5 * (k + k.adjoint()).eval();
    return {u.lattice, std::move(k)};
}

// K2 = Q K~2 Q^T, symmetric; rows orthogonal to u, columns to conj(u).
inline PairKernel build_K2(const GridFunction& u, const PotentialGrid& wN,
                           bool normalize = false) {
    if (u.lattice.get() != wN.lattice.get()) throw contract_error("build_K2: lattice mismatch");
    Mat q = projector_Q(u, normalize).m;
    Mat k = q * detail::tilde_kernel(u, wN, /*conjugate_right=*/false) * q.transpose();
    k = 0.5 * (k + k.transpose()).eval();
    return {u.lattice, std::move(k)};
}

// h = -D + (w_N*|u|^2) - mu_N + K1, split as h = h1 + h2 with
// h1 = -D + 1 (time-independent, strictly positive; the torus Laplacian has a
// zero mode) and h2 = diag(w_N*|u|^2) - mu_N - 1 + K1 (bounded).
struct HSplit {
    OneBodyOperator h, h1, h2;
    double mu = 0.0;
};

inline HSplit build_h(const GridFunction& u, const PotentialGrid& wN, const SpectralCache& cache,
                      bool normalize = false) {
    if (u.lattice.get() != wN.lattice.get()) throw contract_error("build_h: lattice mismatch");
    const long M = u.lattice->sites;
    const double mu = mu_N(wN, u);
    RVec mf = mean_field_potential(wN, u).values().real();

    Mat h2 = build_K1(u, wN, normalize).m;
    h2.diagonal() += (mf.array() - mu - 1.0).matrix().cast<cplx>();
    Mat h1 = cache.minus_laplacian + Mat::Identity(M, M);
    Mat h = h1 + h2;
    h = 0.5 * (h + h.adjoint()).eval();
    return {{u.lattice, std::move(h)}, {u.lattice, std::move(h1)}, {u.lattice, std::move(h2)}, mu};
}

// Time-dependent kernels along a Hartree trajectory: u(t) is interpolated
// linearly between stored steps and renormalized before assembly.
class KernelProvider {
public:
    struct KernelSet {
        GridFunction u;
        Mat h, h1, h2, K2;
        double mu = 0.0;
    };

    // Scalars feeding the envelope formulas at one time.
    struct BoundsSample {
        double xi = 0.0;         // 6 (||K2|| + ||h2||), operator norms
        double linv_k1 = 0.0;    // ||L^{-1} K~2(t)||_HS with L = h1 x 1 + 1 x h1
        double k2_res = 0.0;     // ||K2 - K~2||_HS
        double linv_dk1 = 0.0;   // ||L^{-1} d_t K~2(t)||_HS
    };

    KernelProvider(const HartreeTrajectory& traj, const PotentialGrid& wN)
        : traj_(&traj), wN_(&wN), cache_(std::make_shared<SpectralCache>(traj.lattice)) {}

    const SpectralCache& cache() const { return *cache_; }
    const PotentialGrid& potential() const { return *wN_; }
    const HartreeTrajectory& trajectory() const { return *traj_; }

    GridFunction u_at(double t) const {
        GridFunction u = traj_->at(t);
        const double n = u.norm();
        if (n > 0.0) u.coeffs /= n;
        return u;
    }

    KernelSet at(double t) const {
        GridFunction u = u_at(t);
        HSplit hs = build_h(u, *wN_, *cache_);
        Mat k2 = build_K2(u, *wN_).m;
        return {std::move(u), std::move(hs.h.m), std::move(hs.h1.m), std::move(hs.h2.m),
                std::move(k2), hs.mu};
    }

    BoundsSample bounds_at(double t) const {
        GridFunction u = u_at(t);
        HSplit hs = build_h(u, *wN_, *cache_);
        Mat k2 = build_K2(u, *wN_).m;
        Mat k1 = detail::tilde_kernel(u, *wN_, /*conjugate_right=*/false);

        // d_t K~2 from the Hartree right-hand side i d_t u = (-D + w*|u|^2 - mu) u.
        RVec mf = mean_field_potential(*wN_, u).values().real();
        Vec hu = laplacian_apply(u).coeffs;
        for (long i = 0; i < u.lattice->sites; ++i) hu[i] += (mf[i] - hs.mu) * u.coeffs[i];
        Vec udot = cplx(0.0, -1.0) * hu;
        Mat dk1(k1.rows(), k1.cols());
        const auto& lat = *u.lattice;
        for (long x = 0; x < lat.sites; ++x)
            for (long y = 0; y < lat.sites; ++y) {
                const double w = wN_->values[detail::wN_pair_index(lat, x, y)];
                dk1(x, y) = w * (udot[x] * u.coeffs[y] + u.coeffs[x] * udot[y]);
            }

        BoundsSample b;
        b.xi = 6.0 * (spectral_norm(k2) + spectral_norm(hs.h2.m));
        b.linv_k1 = linv_hs_norm(k1);
        b.k2_res = (k2 - k1).norm();
        b.linv_dk1 = linv_hs_norm(dk1);
        return b;
    }

    // ||L^{-1} k||_HS where L = h1 x 1 + 1 x h1 is diagonal in the Fourier
    // product basis with eigenvalues (1+|k_p|^2) + (1+|k_q|^2).
    double linv_hs_norm(const Mat& kernel) const {
        const Mat& e = cache_->plane_waves;
        Mat khat = e.adjoint() * kernel * e.conjugate();
        double acc = 0.0;
        for (long p = 0; p < khat.rows(); ++p)
            for (long q = 0; q < khat.cols(); ++q) {
                const double denom = cache_->h1_eigs[p] + cache_->h1_eigs[q];
                acc += std::norm(khat(p, q)) / (denom * denom);
            }
        return std::sqrt(acc);
    }

private:
    const HartreeTrajectory* traj_;
    const PotentialGrid* wN_;
    std::shared_ptr<SpectralCache> cache_;
};

}  // namespace bogdyn
