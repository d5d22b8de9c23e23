#pragma once

#include <Eigen/Sparse>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bogdyn/errors.hpp"
#include "bogdyn/interaction.hpp"
#include "bogdyn/kernels.hpp"
#include "bogdyn/lattice.hpp"

namespace bogdyn {

using SpMat = Eigen::SparseMatrix<cplx>;
using Occ = std::vector<int16_t>;

constexpr long kDefaultFockCap = 2'000'000;

// Truncated occupation-number basis over M modes: either all states with
// total <= n_quanta (cutoff) or exactly n_quanta (fixed sector). States are
// stored in lexicographic order of the occupation vector.
struct FockBasis {
    enum class Sector { cutoff, fixed };

    int modes = 1;
    Sector sector = Sector::cutoff;
    int n_quanta = 0;  // N_max or N
    std::vector<Occ> occs;
    std::vector<int> totals;
    long dim = 0;

    static long binom(long n, long k) {
        if (k < 0 || k > n) return 0;
        k = std::min(k, n - k);
        long r = 1;
        for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    static long dimension(int modes, Sector sector, int n_quanta) {
        return sector == Sector::cutoff ? binom(n_quanta + modes, modes)
                                        : binom(n_quanta + modes - 1, modes - 1);
    }

    static std::shared_ptr<const FockBasis> make(int modes, Sector sector, int n_quanta,
                                                 long cap = kDefaultFockCap) {
        if (modes < 1) throw contract_error("FockBasis: modes must be >= 1");
        if (n_quanta < 0) throw contract_error("FockBasis: n_quanta must be >= 0");
        const long d = dimension(modes, sector, n_quanta);
        if (d > cap)
            throw capacity_error("Fock basis dimension " + std::to_string(d) +
                                 " exceeds the memory cap " + std::to_string(cap));
        auto b = std::make_shared<FockBasis>();
        b->modes = modes;
        b->sector = sector;
        b->n_quanta = n_quanta;
        b->occs.reserve(d);
        Occ occ(modes, 0);
        b->enumerate(occ, 0, 0);
        b->dim = static_cast<long>(b->occs.size());
        b->totals.resize(b->dim);
        for (long i = 0; i < b->dim; ++i) {
            int t = 0;
            for (int m = 0; m < modes; ++m) t += b->occs[i][m];
            b->totals[i] = t;
        }
        return b;
    }

    long index_of(const Occ& occ) const {
        auto it = std::lower_bound(occs.begin(), occs.end(), occ);
        if (it == occs.end() || *it != occ) return -1;
        return static_cast<long>(it - occs.begin());
    }

private:
    void enumerate(Occ& occ, int mode, int used) {
        if (mode == modes) {
            if (sector == Sector::cutoff || used == n_quanta) occs.push_back(occ);
            return;
        }
        for (int n = 0; n <= n_quanta - used; ++n) {
            occ[mode] = static_cast<int16_t>(n);
            enumerate(occ, mode + 1, used + n);
        }
        occ[mode] = 0;
    }
};

using FockBasisPtr = std::shared_ptr<const FockBasis>;

inline FockBasisPtr build_fock_cutoff(int modes, int n_max, long cap = kDefaultFockCap) {
    return FockBasis::make(modes, FockBasis::Sector::cutoff, n_max, cap);
}
inline FockBasisPtr build_fock_fixed(int modes, int n_particles, long cap = kDefaultFockCap) {
    return FockBasis::make(modes, FockBasis::Sector::fixed, n_particles, cap);
}

struct FockVector {
    FockBasisPtr basis;
    Vec coeffs;

    FockVector() = default;
    FockVector(FockBasisPtr b, Vec c) : basis(std::move(b)), coeffs(std::move(c)) {
        if (coeffs.size() != basis->dim) throw contract_error("FockVector: wrong length");
    }
    static FockVector zero(FockBasisPtr b) { return FockVector(b, Vec::Zero(b->dim)); }
    static FockVector vacuum(FockBasisPtr b) {
        if (b->sector == FockBasis::Sector::fixed && b->n_quanta != 0)
            throw contract_error("FockVector::vacuum: fixed sector has no vacuum");
        FockVector v = zero(b);
        Occ empty(b->modes, 0);
        v.coeffs[b->index_of(empty)] = 1.0;
        return v;
    }
    double norm() const { return coeffs.norm(); }
};

// Per-mode annihilation matrices on a cutoff basis; a*(i) is the adjoint.
struct LadderSet {
    FockBasisPtr basis;
    std::vector<SpMat> a;

    static LadderSet make(const FockBasisPtr& basis) {
        if (basis->sector != FockBasis::Sector::cutoff)
            throw contract_error("LadderSet: single ladders need the cutoff sector");
        LadderSet ls;
        ls.basis = basis;
        ls.a.resize(basis->modes);
        for (int m = 0; m < basis->modes; ++m) {
            std::vector<Eigen::Triplet<cplx>> trips;
            for (long s = 0; s < basis->dim; ++s) {
                const auto& occ = basis->occs[s];
                if (occ[m] == 0) continue;
                Occ target = occ;
                target[m] -= 1;
                const long t = basis->index_of(target);
                trips.emplace_back(t, s, std::sqrt(static_cast<double>(occ[m])));
            }
            SpMat A(basis->dim, basis->dim);
            A.setFromTriplets(trips.begin(), trips.end());
            ls.a[m] = std::move(A);
        }
        return ls;
    }
};

// dGamma(H) = sum_{m,n} H[m,n] a*_m a_n. Number-conserving, so valid on both
// sector types; Hermitian when H is.
inline SpMat assemble_dGamma(const Mat& H, const FockBasis& basis) {
    if (H.rows() != basis.modes || H.cols() != basis.modes)
        throw contract_error("assemble_dGamma: dimension mismatch");
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<size_t>(basis.dim) * basis.modes);
    const int M = basis.modes;
    for (long s = 0; s < basis.dim; ++s) {
        const auto& occ = basis.occs[s];
        cplx diag = 0.0;
        for (int m = 0; m < M; ++m)
            if (occ[m] > 0) diag += H(m, m) * static_cast<double>(occ[m]);
        if (diag != cplx(0.0)) trips.emplace_back(s, s, diag);
        for (int n = 0; n < M; ++n) {
            if (occ[n] == 0) continue;
            for (int m = 0; m < M; ++m) {
                if (m == n || H(m, n) == cplx(0.0)) continue;
                Occ target = occ;
                target[n] -= 1;
                target[m] += 1;
                const long t = basis.index_of(target);
                if (t < 0) continue;
                const double amp = std::sqrt(static_cast<double>(occ[n]) * (occ[m] + 1.0));
                trips.emplace_back(t, s, H(m, n) * amp);
            }
        }
    }
    SpMat out(basis.dim, basis.dim);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// creation_part = sum_{m,n} K[m,n] a*_m a*_n for symmetric K (raises the
// total by 2; amplitudes beyond the cutoff are dropped). The annihilation
// part is its adjoint.
inline std::pair<SpMat, SpMat> assemble_pair_ops(const Mat& K, const FockBasis& basis) {
    if (K.rows() != basis.modes || K.cols() != basis.modes)
        throw contract_error("assemble_pair_ops: dimension mismatch");
    if ((K - K.transpose()).norm() > 1e-12 * std::max(1.0, K.norm()))
        throw contract_error("assemble_pair_ops: K must be symmetric");
    if (basis.sector != FockBasis::Sector::cutoff)
        throw contract_error("assemble_pair_ops: pair operators need the cutoff sector");
    std::vector<Eigen::Triplet<cplx>> trips;
    const int M = basis.modes;
    for (long s = 0; s < basis.dim; ++s) {
        const auto& occ = basis.occs[s];
        for (int n = 0; n < M; ++n) {
            for (int m = 0; m < M; ++m) {
                if (K(m, n) == cplx(0.0)) continue;
                Occ target = occ;
                target[n] += 1;
                const double amp_n = std::sqrt(static_cast<double>(target[n]));
                target[m] += 1;
                const double amp_m = std::sqrt(static_cast<double>(target[m]));
                const long t = basis.index_of(target);
                if (t < 0) continue;
                trips.emplace_back(t, s, K(m, n) * amp_n * amp_m);
            }
        }
    }
    SpMat cre(basis.dim, basis.dim);
    cre.setFromTriplets(trips.begin(), trips.end());
    SpMat ann = SpMat(cre.adjoint());
    return {std::move(cre), std::move(ann)};
}

// H(t) = dGamma(h) + 1/2 (sum K2 a*a* + h.c.).
inline SpMat assemble_bogoliubov_H(const Mat& h, const Mat& K2, const FockBasis& basis) {
    auto [cre, ann] = assemble_pair_ops(K2, basis);
    SpMat out = assemble_dGamma(h, basis);
    out += SpMat(0.5 * (cre + ann));
    return out;
}

// H_N = dGamma(-D) + 1/(2(N-1)) sum_{ij} w_N(x_i - x_j) a*_i a*_j a_i a_j.
// The two-body part is diagonal in the occupation basis; the quadrature
// weights cancel against the weighted-mode convention, so
// <u^N, H_N u^N>/N equals the Hartree energy exactly for product states.
inline SpMat assemble_HN(const PotentialGrid& wN, int N, const FockBasis& basis,
                         const Mat& minus_laplacian) {
    if (N < 2) throw contract_error("assemble_HN: N must be >= 2");
    if (basis.modes != wN.lattice->sites)
        throw contract_error("assemble_HN: basis modes must match lattice sites");
    SpMat out = assemble_dGamma(minus_laplacian, basis);

    const auto& lat = *wN.lattice;
    const int M = basis.modes;
    Eigen::MatrixXd wpair(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) wpair(i, j) = wN.values[detail::wN_pair_index(lat, i, j)];

    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(basis.dim);
    const double coupling = 0.5 / (N - 1);
    for (long s = 0; s < basis.dim; ++s) {
        const auto& occ = basis.occs[s];
        double val = 0.0;
        for (int i = 0; i < M; ++i) {
            if (occ[i] == 0) continue;
            val -= wpair(i, i) * occ[i];
            for (int j = 0; j < M; ++j)
                if (occ[j] > 0) val += wpair(i, j) * occ[i] * occ[j];
        }
        if (val != 0.0) trips.emplace_back(s, s, coupling * val);
    }
    SpMat twobody(basis.dim, basis.dim);
    twobody.setFromTriplets(trips.begin(), trips.end());
    out += twobody;
    return out;
}

// Diagonal of the number operator.
inline RVec number_diagonal(const FockBasis& basis) {
    RVec d(basis.dim);
    for (long s = 0; s < basis.dim; ++s) d[s] = basis.totals[s];
    return d;
}

// Applies a_m (occupation arithmetic; target must exist in the basis).
inline Vec apply_annihilation(const FockBasis& basis, const Vec& v, int mode) {
    Vec out = Vec::Zero(basis.dim);
    for (long s = 0; s < basis.dim; ++s) {
        const auto& occ = basis.occs[s];
        if (occ[mode] == 0 || v[s] == cplx(0.0)) continue;
        Occ target = occ;
        target[mode] -= 1;
        const long t = basis.index_of(target);
        if (t >= 0) out[t] += std::sqrt(static_cast<double>(occ[mode])) * v[s];
    }
    return out;
}

inline Vec apply_creation(const FockBasis& basis, const Vec& v, int mode) {
    Vec out = Vec::Zero(basis.dim);
    for (long s = 0; s < basis.dim; ++s) {
        const auto& occ = basis.occs[s];
        if (v[s] == cplx(0.0)) continue;
        Occ target = occ;
        target[mode] += 1;
        const long t = basis.index_of(target);
        if (t >= 0) out[t] += std::sqrt(static_cast<double>(target[mode])) * v[s];
    }
    return out;
}

}  // namespace bogdyn
