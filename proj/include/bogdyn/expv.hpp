#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <functional>

#include "bogdyn/errors.hpp"
#include "bogdyn/lattice.hpp"

namespace bogdyn {

using SpMat = Eigen::SparseMatrix<cplx>;

// y = exp(sigma * H) * v for Hermitian H, via Lanczos with full
// reorthogonalization and adaptive substepping. sigma is typically -i*dt
// (unitary propagation) or +/- i for second-quantized rotations.
inline Vec expv_hermitian(const std::function<Vec(const Vec&)>& apply, const Vec& v, cplx sigma,
                          double tol = 1e-13, int m_max = 48) {
    const long dim = v.size();
    const double vnorm = v.norm();
    if (vnorm == 0.0 || sigma == cplx(0.0, 0.0)) return v;

    Vec w = v;
    double remaining = 1.0;  // fraction of sigma still to apply
    int guard = 0;

    while (remaining > 1e-15) {
        if (++guard > 10000) throw numerical_error("expv_hermitian: too many substeps");
        const double wnorm = w.norm();
        if (wnorm == 0.0) return w;

        const int m = static_cast<int>(std::min<long>(m_max, dim));
        Eigen::MatrixXcd V(dim, m);
        Eigen::VectorXd alpha(m), beta(m);  // beta[j] couples j and j+1
        V.col(0) = w / wnorm;
        int built = 0;
        double beta_tail = 0.0;
        bool happy = false;
        for (int j = 0; j < m; ++j) {
            Vec q = apply(V.col(j));
            alpha[j] = V.col(j).dot(q).real();
            q -= alpha[j] * V.col(j);
            if (j > 0) q -= beta[j - 1] * V.col(j - 1);
            // full reorthogonalization, two passes
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) q -= V.col(i).dot(q) * V.col(i);
            const double b = q.norm();
            built = j + 1;
            if (b < 1e-14 * std::max(1.0, std::abs(alpha[j]))) {
                happy = true;
                beta_tail = 0.0;
                break;
            }
            if (j + 1 < m) {
                beta[j] = b;
                V.col(j + 1) = q / b;
            } else {
                beta_tail = b;
            }
        }

        // Tridiagonal T of size `built`.
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
        for (int j = 0; j < built; ++j) {
            T(j, j) = alpha[j];
            if (j + 1 < built) T(j, j + 1) = T(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Eigen::MatrixXd& Q = es.eigenvectors();
        const Eigen::VectorXd& theta = es.eigenvalues();
        const double theta_max = std::max(std::abs(theta.minCoeff()), std::abs(theta.maxCoeff()));

        double tau = remaining;
        if (!happy && theta_max > 0.0) {
            // keep |sigma tau| * ||T|| moderate so the Krylov error estimate is trustworthy
            const double cap = 12.0 / (std::abs(sigma) * theta_max);
            tau = std::min(remaining, cap);
        }

        for (;;) {
            Eigen::VectorXcd phases(built);
            for (int i = 0; i < built; ++i) phases[i] = std::exp(sigma * tau * theta[i]);
            Eigen::VectorXcd small = Q * (phases.asDiagonal() * (Q.row(0).transpose().cast<cplx>()));
            const double err = happy ? 0.0 : std::abs(sigma) * tau * beta_tail * std::abs(small[built - 1]);
            if (happy || err <= tol * std::max(1.0, tau) || tau < 1e-12) {
                w = V.leftCols(built) * (wnorm * small);
                remaining -= tau;
                break;
            }
            tau *= 0.5;
        }
    }
    return w;
}

inline Vec expv_hermitian(const SpMat& H, const Vec& v, cplx sigma, double tol = 1e-13,
                          int m_max = 48) {
    return expv_hermitian([&H](const Vec& x) -> Vec { return H * x; }, v, sigma, tol, m_max);
}

}  // namespace bogdyn
