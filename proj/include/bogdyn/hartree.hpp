#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bogdyn/interaction.hpp"
#include "bogdyn/lattice.hpp"

namespace bogdyn {

// Hartree energy <u,-Du> + 1/2 <|u|^2, w_N*|u|^2>  (trap-free functional).
inline double hartree_energy(const GridFunction& u, const PotentialGrid& wN) {
    const double kinetic = inner_product(u, laplacian_apply(u)).real();
    return kinetic + mu_N(wN, u);
}

struct HartreeState {
    GridFunction u;
    double t = 0.0;
    double mu = 0.0;           // cached mu_N at time t
    double mass0 = 0.0;        // initial ||u||^2
    double energy0 = 0.0;      // initial Hartree energy
    double phase_integral = 0.0;  // accumulated int_0^t mu_N(s) ds along the splitting
};

inline HartreeState make_hartree_state(const GridFunction& u0, const PotentialGrid& wN) {
    HartreeState s;
    s.u = u0;
    s.t = 0.0;
    s.mu = mu_N(wN, u0);
    s.mass0 = u0.norm_sq();
    s.energy0 = hartree_energy(u0, wN);
    return s;
}

// One Strang split step of i d_t u = (-D + w_N*|u|^2 - mu_N) u:
// half potential step, full kinetic step in Fourier space, half potential
// step with the post-kinetic density. mu_N is evaluated at the current
// density for each potential half-step; |u|^2 is invariant under both phases,
// so mass is conserved to rounding.
inline HartreeState hartree_step(const HartreeState& state, const PotentialGrid& wN, double dt) {
    if (!(dt > 0.0)) throw contract_error("hartree_step: dt must be positive");
    const auto& lat = *state.u.lattice;
    HartreeState next = state;
    Vec& c = next.u.coeffs;

    auto potential_half = [&](double& mu_out) {
        GridFunction mf = mean_field_potential(wN, next.u);
        mu_out = 0.5 * next.u.values().cwiseAbs2().dot(mf.values().real()) * lat.cell_volume();
        const RVec vr = mf.values().real();
        for (long i = 0; i < lat.sites; ++i)
            c[i] *= std::polar(1.0, -0.5 * dt * (vr[i] - mu_out));
    };

    double mu_first = 0.0, mu_second = 0.0;
    potential_half(mu_first);

    detail::fft_all_axes(lat, c, true);
    for (long i = 0; i < lat.sites; ++i) c[i] *= std::polar(1.0, -dt * lat.k_squared[i]);
    detail::fft_all_axes(lat, c, false);

    potential_half(mu_second);

    if (!c.allFinite())
        throw numerical_error("hartree_step: field blew up at t = " + std::to_string(state.t + dt));

    next.t = state.t + dt;
    next.mu = mu_second;
    next.phase_integral += 0.5 * dt * (mu_first + mu_second);
    return next;
}

// Densely stored Hartree solution on the step grid. sample_every only thins
// exported series; interpolation always works on the full grid.
struct HartreeTrajectory {
    LatticePtr lattice;
    double dt = 0.0;
    int sample_every = 1;
    std::vector<double> times;
    std::vector<Vec> coeffs;   // weighted coefficients at each step
    std::vector<double> mu;
    std::vector<double> phase_integral;
    double max_mass_drift = 0.0;
    double max_energy_drift = 0.0;  // relative

    double t_final() const { return times.empty() ? 0.0 : times.back(); }

    // Linear interpolation between stored steps, renormalized to the initial
    // mass (interpolation shrinks the norm at second order in dt).
    GridFunction at(double t) const {
        if (times.empty()) throw contract_error("HartreeTrajectory::at: empty trajectory");
        const double t0 = times.front(), t1 = times.back();
        if (t < t0 - 1e-12 || t > t1 + 1e-9)
            throw contract_error("HartreeTrajectory::at: t outside stored range");
        double s = (t - t0) / dt;
        long i = static_cast<long>(std::floor(s));
        if (i < 0) i = 0;
        if (i >= static_cast<long>(times.size()) - 1) i = static_cast<long>(times.size()) - 2;
        if (times.size() == 1 || i < 0) return GridFunction(lattice, coeffs.front());
        const double w = s - i;
        Vec c = (1.0 - w) * coeffs[static_cast<size_t>(i)] + w * coeffs[static_cast<size_t>(i) + 1];
        const double n0 = coeffs.front().norm();
        const double n = c.norm();
        if (n > 0.0) c *= n0 / n;
        return GridFunction(lattice, std::move(c));
    }
};

inline HartreeTrajectory hartree_evolve(const GridFunction& u0, const PotentialGrid& wN,
                                        double t_final, double dt, int sample_every = 1) {
    if (!(t_final > 0.0)) throw config_error("time.t_final must be positive");
    if (!(dt > 0.0)) throw config_error("time.dt must be positive");
    if (sample_every < 1) throw config_error("time.sample_every must be >= 1");

    HartreeTrajectory traj;
    traj.lattice = u0.lattice;
    traj.dt = dt;
    traj.sample_every = sample_every;

    HartreeState s = make_hartree_state(u0, wN);
    const long n_steps = static_cast<long>(std::llround(t_final / dt));
    traj.times.reserve(n_steps + 1);
    traj.coeffs.reserve(n_steps + 1);

    auto record = [&](const HartreeState& st) {
        traj.times.push_back(st.t);
        traj.coeffs.push_back(st.u.coeffs);
        traj.mu.push_back(st.mu);
        traj.phase_integral.push_back(st.phase_integral);
        traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(st.u.norm_sq() - s.mass0));
        if (st.t > 0.0) {
            const double e = hartree_energy(st.u, wN);
            const double denom = std::max(std::abs(s.energy0), 1e-300);
            traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(e - s.energy0) / denom);
        }
    };

    record(s);
    for (long step = 0; step < n_steps; ++step) {
        s = hartree_step(s, wN, dt);
        record(s);
    }
    return traj;
}

}  // namespace bogdyn
