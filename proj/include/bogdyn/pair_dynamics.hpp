#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bogdyn/kernels.hpp"
#include "bogdyn/lattice.hpp"

namespace bogdyn {

// Density-matrix pair of the fluctuation state: gamma Hermitian PSD,
// alpha symmetric.
struct PairState {
    LatticePtr lattice;
    Mat gamma;
    Mat alpha;
    double t = 0.0;

    static PairState vacuum(LatticePtr lat) {
        const long M = lat->sites;
        return {lat, Mat::Zero(M, M), Mat::Zero(M, M), 0.0};
    }
};

// Right-hand side of
//   i d_t gamma = h gamma - gamma h + K2 conj(alpha) - alpha conj(K2)
//   i d_t alpha = h alpha + alpha h^T + K2 + K2 gamma^T + gamma K2.
inline std::pair<Mat, Mat> pair_rhs(const Mat& gamma, const Mat& alpha, const Mat& h,
                                    const Mat& K2) {
    if (gamma.rows() != h.rows() || alpha.rows() != h.rows() || K2.rows() != h.rows())
        throw contract_error("pair_rhs: dimension mismatch");
    const cplx mi(0.0, -1.0);
    Mat dgamma = mi * (h * gamma - gamma * h + K2 * alpha.conjugate() - alpha * K2.conjugate());
    Mat dalpha = mi * (h * alpha + alpha * h.transpose() + K2 + K2 * gamma.transpose() + gamma * K2);
    return {std::move(dgamma), std::move(dalpha)};
}

// Supplies h(t) and K2(t) at arbitrary times within the integration window.
using PairGenerator = std::function<std::pair<Mat, Mat>(double)>;

inline PairGenerator make_pair_generator(const KernelProvider& provider) {
    return [&provider](double t) {
        auto ks = provider.at(t);
        return std::make_pair(std::move(ks.h), std::move(ks.K2));
    };
}

// Classical RK4 step followed by exact re-symmetrization
// gamma <- (gamma + gamma^dag)/2, alpha <- (alpha + alpha^T)/2. The
// Hermitian/symmetric structure is preserved by the continuous flow; the
// restoration removes rounding plus truncation drift only.
inline PairState pair_step(const PairState& state, const PairGenerator& gen, double dt) {
    const double t = state.t;
    auto [h0, k0] = gen(t);
    auto [hm, km] = gen(t + 0.5 * dt);
    auto [h1, k1] = gen(t + dt);

    auto [dg1, da1] = pair_rhs(state.gamma, state.alpha, h0, k0);
    auto [dg2, da2] = pair_rhs(state.gamma + 0.5 * dt * dg1, state.alpha + 0.5 * dt * da1, hm, km);
    auto [dg3, da3] = pair_rhs(state.gamma + 0.5 * dt * dg2, state.alpha + 0.5 * dt * da2, hm, km);
    auto [dg4, da4] = pair_rhs(state.gamma + dt * dg3, state.alpha + dt * da3, h1, k1);

    PairState next;
    next.lattice = state.lattice;
    next.gamma = state.gamma + (dt / 6.0) * (dg1 + 2.0 * dg2 + 2.0 * dg3 + dg4);
    next.alpha = state.alpha + (dt / 6.0) * (da1 + 2.0 * da2 + 2.0 * da3 + da4);
    next.gamma = 0.5 * (next.gamma + next.gamma.adjoint()).eval();
    next.alpha = 0.5 * (next.alpha + next.alpha.transpose()).eval();
    next.t = t + dt;
    if (!next.gamma.allFinite() || !next.alpha.allFinite())
        throw numerical_error("pair_step: blowup at t = " + std::to_string(next.t));
    return next;
}

// Frobenius norms of Y3 = gamma + gamma^2 - alpha conj(alpha) and
// Y4 = gamma alpha - alpha gamma^T; both vanish iff the pair is quasi-free.
inline std::pair<double, double> quasi_free_defect(const PairState& s) {
    Mat y3 = s.gamma + s.gamma * s.gamma - s.alpha * s.alpha.conjugate();
    Mat y4 = s.gamma * s.alpha - s.alpha * s.gamma.transpose();
    return {y3.norm(), y4.norm()};
}

inline double particle_expectation(const PairState& s) { return s.gamma.trace().real(); }

// Smallest eigenvalue of the block operator [[gamma, alpha], [alpha^dag, 1+gamma^T]].
inline double admissibility_min_eig(const PairState& s) {
    const long M = s.gamma.rows();
    Mat block(2 * M, 2 * M);
    block.topLeftCorner(M, M) = s.gamma;
    block.topRightCorner(M, M) = s.alpha;
    block.bottomLeftCorner(M, M) = s.alpha.adjoint();
    block.bottomRightCorner(M, M) = Mat::Identity(M, M) + s.gamma.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (block + block.adjoint()),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

struct PairDiagnostics {
    double t = 0.0;
    double trace_gamma = 0.0;
    double hs_gamma = 0.0;
    double hs_alpha = 0.0;
    double y3 = 0.0;
    double y4 = 0.0;
    double min_eig_Gamma = 0.0;
    double min_eig_gamma = 0.0;
};

inline PairDiagnostics pair_diagnostics(const PairState& s) {
    PairDiagnostics d;
    d.t = s.t;
    d.trace_gamma = particle_expectation(s);
    d.hs_gamma = s.gamma.norm();
    d.hs_alpha = s.alpha.norm();
    auto [y3, y4] = quasi_free_defect(s);
    d.y3 = y3;
    d.y4 = y4;
    d.min_eig_Gamma = admissibility_min_eig(s);
    Eigen::SelfAdjointEigenSolver<Mat> es(s.gamma, Eigen::EigenvaluesOnly);
    d.min_eig_gamma = es.eigenvalues().minCoeff();
    return d;
}

struct PairTrajectory {
    std::vector<double> times;          // sampled times
    std::vector<PairState> states;      // sampled states
    std::vector<PairDiagnostics> diagnostics;
};

inline PairTrajectory pair_evolve(const PairState& initial, const PairGenerator& gen,
                                  double t_final, double dt, int sample_every = 1) {
    if (!(t_final > 0.0) || !(dt > 0.0)) throw config_error("pair_evolve: t_final and dt must be positive");
    if (sample_every < 1) throw config_error("pair_evolve: sample_every must be >= 1");

    PairTrajectory traj;
    PairState s = initial;
    auto record = [&](const PairState& st) {
        traj.times.push_back(st.t);
        traj.states.push_back(st);
        traj.diagnostics.push_back(pair_diagnostics(st));
    };
    record(s);
    const long n_steps = static_cast<long>(std::llround(t_final / dt));
    for (long step = 1; step <= n_steps; ++step) {
        s = pair_step(s, gen, dt);
        if (step % sample_every == 0 || step == n_steps) record(s);
    }
    return traj;
}

}  // namespace bogdyn
