#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "bogdyn/errors.hpp"
#include "bogdyn/lattice.hpp"

namespace bogdyn {

// Autonne-Takagi factorization A = W diag(s) W^T of a complex symmetric
// matrix, with W unitary and s >= 0 (the singular values). Uses the real
// embedding S = [[X, Y], [Y, -X]] for A = X + iY: an eigenpair S(p;q) = s(p;q)
// gives A conj(w) = s w for w = p + iq, and the nonnegative half of the
// spectrum spans the complex space.
struct TakagiResult {
    Mat W;
    RVec s;
};

inline TakagiResult takagi(const Mat& A, double tol = 1e-12) {
    const long n = A.rows();
    if (A.cols() != n) throw contract_error("takagi: matrix must be square");
    if ((A - A.transpose()).norm() > tol * std::max(1.0, A.norm()))
        throw contract_error("takagi: matrix must be symmetric");

    Eigen::MatrixXd X = A.real(), Y = A.imag();
    Eigen::MatrixXd S(2 * n, 2 * n);
    S << X, Y, Y, -X;
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);

    auto complex_vec = [&](long i) {
        return Vec(es.eigenvectors().col(i).head(n).cast<cplx>() +
                   cplx(0.0, 1.0) * es.eigenvectors().col(i).tail(n).cast<cplx>());
    };

    // Eigenvectors with s > 0 are already complex-orthonormal and satisfy
    // A conj(w) = s w (their -s partners are i*w). The zero cluster is closed
    // under w -> i*w, so there a complex Gram-Schmidt selection is valid.
    const double zero_tol = 1e-10 * std::max(1.0, A.norm());
    std::vector<std::pair<double, Vec>> picked;
    picked.reserve(n);
    for (long i = 2 * n - 1; i >= 0 && static_cast<long>(picked.size()) < n; --i) {
        const double sv = es.eigenvalues()[i];
        if (sv <= zero_tol) break;
        picked.emplace_back(sv, complex_vec(i));
    }
    for (long i = 2 * n - 1; i >= 0 && static_cast<long>(picked.size()) < n; --i) {
        const double sv = es.eigenvalues()[i];
        if (sv > zero_tol || sv < -zero_tol) continue;
        Vec w = complex_vec(i);
        for (auto& [val, prev] : picked) w -= prev.dot(w) * prev;
        const double nr = w.norm();
        if (nr < 0.5) continue;  // complex-dependent partner of an already picked vector
        picked.emplace_back(0.0, w / nr);
    }
    if (static_cast<long>(picked.size()) < n)
        throw numerical_error("takagi: failed to extract a full factor basis");

    TakagiResult r;
    r.W.resize(n, n);
    r.s.resize(n);
    for (long j = 0; j < n; ++j) {
        r.s[j] = picked[static_cast<size_t>(j)].first;
        r.W.col(j) = picked[static_cast<size_t>(j)].second;
    }
    // Polish the phases so W diag(s) W^T reproduces A exactly on the diagonal
    // blocks (the Gram-Schmidt above can rotate degenerate clusters).
    if ((r.W * r.s.cast<cplx>().asDiagonal() * r.W.transpose() - A).norm() >
        1e-9 * std::max(1.0, A.norm()))
        throw numerical_error("takagi: residual too large");
    return r;
}

}  // namespace bogdyn
