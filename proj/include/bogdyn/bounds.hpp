#pragma once

#include <cmath>
#include <vector>

#include "bogdyn/kernels.hpp"

namespace bogdyn {

// xi(t) = 6 (||K2(t)|| + ||h2(t)||), spectral norms.
inline double xi_of_t(const Mat& h2, const Mat& K2) {
    return 6.0 * (spectral_norm(K2) + spectral_norm(h2));
}

// Theta(t) for the split k = k1 + k2 with k1 = K~2 and k2 = K2 - K~2:
//   2||alpha(0)||_HS^2 + 2||gamma(0)||_HS^2
//   + 2 ( ||L^-1 k1(t)|| + ||L^-1 k1(0)|| + int_0^t (||k2(s)|| + ||L^-1 d_s k1(s)||) ds )^2
// with time integrals by the trapezoid rule on the sample grid.
inline std::vector<double> theta_series(const std::vector<double>& times,
                                        const std::vector<double>& linv_k1,
                                        const std::vector<double>& k2_res,
                                        const std::vector<double>& linv_dk1,
                                        double alpha0_hs2, double gamma0_hs2) {
    const size_t n = times.size();
    if (linv_k1.size() != n || k2_res.size() != n || linv_dk1.size() != n)
        throw contract_error("theta_series: misaligned grids");
    std::vector<double> theta(n);
    double integral = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double dt = times[i] - times[i - 1];
            integral += 0.5 * dt *
                        ((k2_res[i] + linv_dk1[i]) + (k2_res[i - 1] + linv_dk1[i - 1]));
        }
        const double bracket = linv_k1[i] + linv_k1[0] + integral;
        theta[i] = 2.0 * alpha0_hs2 + 2.0 * gamma0_hs2 + 2.0 * bracket * bracket;
    }
    return theta;
}

// Theta(t) + int_0^t exp(int_s^t xi(r) dr) xi(s) Theta(s) ds, trapezoid rule.
inline std::vector<double> gronwall_envelope(const std::vector<double>& times,
                                             const std::vector<double>& theta,
                                             const std::vector<double>& xi) {
    const size_t n = times.size();
    if (theta.size() != n || xi.size() != n)
        throw contract_error("gronwall_envelope: misaligned grids");
    // Cumulative Xi(t) = int_0^t xi.
    std::vector<double> cum(n, 0.0);
    for (size_t i = 1; i < n; ++i)
        cum[i] = cum[i - 1] + 0.5 * (times[i] - times[i - 1]) * (xi[i] + xi[i - 1]);
    std::vector<double> env(n);
    for (size_t i = 0; i < n; ++i) {
        double integral = 0.0;
        for (size_t j = 1; j <= i; ++j) {
            const double f0 = std::exp(cum[i] - cum[j - 1]) * xi[j - 1] * theta[j - 1];
            const double f1 = std::exp(cum[i] - cum[j]) * xi[j] * theta[j];
            integral += 0.5 * (times[j] - times[j - 1]) * (f0 + f1);
        }
        env[i] = theta[i] + integral;
    }
    return env;
}

// Particle-number envelope from Theta1(t) = Theta(t) - 2||alpha(0)||^2
// - 2||gamma(0)||^2 + 4(1 + n0)^2, with n0 = trace gamma(0).
inline std::vector<double> particle_envelope(const std::vector<double>& times,
                                             const std::vector<double>& theta,
                                             const std::vector<double>& xi, double n0,
                                             double alpha0_hs2 = 0.0, double gamma0_hs2 = 0.0) {
    if (n0 < 0.0) throw contract_error("particle_envelope: n0 must be >= 0");
    std::vector<double> theta1(theta.size());
    const double shift = -2.0 * alpha0_hs2 - 2.0 * gamma0_hs2 + 4.0 * (1.0 + n0) * (1.0 + n0);
    for (size_t i = 0; i < theta.size(); ++i) theta1[i] = theta[i] + shift;
    return gronwall_envelope(times, theta1, xi);
}

// Sampled envelope data along one trajectory. Checks beyond t = 1 reuse the
// same formulas and are labeled extrapolated in exported output.
struct EnvelopeSeries {
    std::vector<double> times;
    std::vector<double> xi;
    std::vector<double> theta;
    std::vector<double> gronwall;
    std::vector<double> theta1;
    std::vector<double> particle;
    bool extrapolated_beyond_unit_time = false;
};

inline EnvelopeSeries build_envelopes(const KernelProvider& provider,
                                      const std::vector<double>& times, const Mat& gamma0,
                                      const Mat& alpha0) {
    EnvelopeSeries es;
    es.times = times;
    const size_t n = times.size();
    std::vector<double> linv_k1(n), k2_res(n), linv_dk1(n);
    es.xi.resize(n);
    for (size_t i = 0; i < n; ++i) {
        auto b = provider.bounds_at(times[i]);
        es.xi[i] = b.xi;
        linv_k1[i] = b.linv_k1;
        k2_res[i] = b.k2_res;
        linv_dk1[i] = b.linv_dk1;
    }
    const double a0 = alpha0.squaredNorm();
    const double g0 = gamma0.squaredNorm();
    const double n0 = gamma0.trace().real();
    es.theta = theta_series(times, linv_k1, k2_res, linv_dk1, a0, g0);
    es.gronwall = gronwall_envelope(times, es.theta, es.xi);
    es.theta1.resize(n);
    const double shift = -2.0 * a0 - 2.0 * g0 + 4.0 * (1.0 + n0) * (1.0 + n0);
    for (size_t i = 0; i < n; ++i) es.theta1[i] = es.theta[i] + shift;
    es.particle = gronwall_envelope(times, es.theta1, es.xi);
    es.extrapolated_beyond_unit_time = !times.empty() && times.back() > 1.0 + 1e-12;
    return es;
}

}  // namespace bogdyn
