#include "ksir/ode_ref.hpp"

#include <algorithm>
#include <cmath>

namespace ksir {

OdeState sir_rhs(const OdeState& s, const OdeParams& p) {
    const double flux = p.beta * p.m * s.I * s.S;
    return {-flux, flux - p.gamma * s.I, p.gamma * s.I};
}

OdeState jet_rhs(const OdeState& s, const OdeParams& p) {
    const double flux = p.beta * p.m * s.I * s.S;
    const double half_in = (1.0 - p.alpha) / 2.0;
    const double half_out = (1.0 + p.alpha) / 2.0;
    return {-flux + p.gamma1 * (-half_out * s.S + half_in * s.R),
            flux - p.gamma * s.I + p.gamma1 * p.alpha * (s.S + s.R),
            p.gamma * s.I + p.gamma1 * (-half_out * s.R + half_in * s.S)};
}

double default_dt(const OdeParams& p) {
    double fastest = std::max(p.beta * p.m, p.gamma);
    if (p.gamma1 > 0.0) fastest = std::max(fastest, p.gamma1);
    return 1.0 / (50.0 * fastest);
}

OdeTrajectory integrate(const OdeRhs& rhs, OdeState y0, const OdeParams& p, double t_end,
                        double dt, long long store_every) {
    if (!(dt > 0.0)) throw OdeError("integrate: dt must be positive");
    const auto nsteps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
    OdeTrajectory traj;
    traj.t.reserve(static_cast<std::size_t>(nsteps / store_every) + 2);
    traj.y.reserve(traj.t.capacity());
    traj.t.push_back(0.0);
    traj.y.push_back(y0);

    OdeState y = y0;
    auto axpy = [](const OdeState& a, double h, const OdeState& b) {
        return OdeState{a.S + h * b.S, a.I + h * b.I, a.R + h * b.R};
    };
    for (long long k = 1; k <= nsteps; ++k) {
        const OdeState k1 = rhs(y, p);
        const OdeState k2 = rhs(axpy(y, dt / 2, k1), p);
        const OdeState k3 = rhs(axpy(y, dt / 2, k2), p);
        const OdeState k4 = rhs(axpy(y, dt, k3), p);
        y.S += dt / 6 * (k1.S + 2 * k2.S + 2 * k3.S + k4.S);
        y.I += dt / 6 * (k1.I + 2 * k2.I + 2 * k3.I + k4.I);
        y.R = 1.0 - y.S - y.I;  // the vector fields sum to zero; pin the simplex

        if (y.S < -1e-9 || y.S > 1.0 + 1e-9 || y.I < -1e-9 || y.I > 1.0 + 1e-9 ||
            y.R < -1e-9 || y.R > 1.0 + 1e-9)
            throw OdeError("StepTooLarge: trajectory left the unit simplex at t=" +
                           std::to_string(k * dt));
        if (k % store_every == 0 || k == nsteps) {
            traj.t.push_back(k * dt);
            traj.y.push_back(y);
        }
    }
    return traj;
}

FinalSize final_size(double beta_over_gamma, double i0) {
    if (!(beta_over_gamma > 0.0)) throw OdeError("final_size: beta/gamma must be positive");
    if (!(i0 >= 0.0 && i0 < 1.0)) throw OdeError("final_size: i0 must lie in [0,1)");
    const double k = beta_over_gamma;
    const double target = (1.0 - i0) * std::exp(-k);
    auto h = [&](double s) { return s * std::exp(-k * s) - target; };

    FinalSize out;
    out.no_epidemic = k <= 1.0;
    // stable branch: below the maximum of y e^{-y} when k > 1, else the
    // unique root in (0,1)
    double lo = 0.0;
    double hi = k > 1.0 ? 1.0 / k : 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    out.s_bar = 0.5 * (lo + hi);
    return out;
}

OdeState jet_stationary(const OdeParams& p) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0 && p.gamma1 > 0.0))
        throw OdeError("jet_stationary: requires alpha in (0,1] and gamma1 > 0");

    const double ga = p.gamma1 * p.alpha;
    auto i_of = [&](double s) { return ga / (p.gamma - p.beta * p.m * s + ga); };
    auto f = [&](double s) {
        const double i = i_of(s);
        const double r = 1.0 - s - i;
        return jet_rhs({s, i, r}, p).S;
    };

    // dI = 0 elimination keeps I in (0,1) for S below the pole
    double lo = 0.0;
    double hi = std::min(1.0, (p.gamma + ga) / (p.beta * p.m) * (1.0 - 1e-12));
    if (f(lo) < 0.0 || f(hi) > 0.0)
        throw OdeError("NoConvergence: stationary bracket not found");

    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fs = f(s);
        if (fs > 0.0) lo = s; else hi = s;
        const double eps = 1e-8 * std::max(1.0, std::abs(s));
        const double dfs = (f(s + eps) - f(s - eps)) / (2.0 * eps);
        double next = dfs != 0.0 ? s - fs / dfs : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // damped fallback
        s = next;
        const double i = i_of(s);
        const OdeState cand{s, i, 1.0 - s - i};
        const OdeState res = jet_rhs(cand, p);
        const double rnorm = std::sqrt(res.S * res.S + res.I * res.I + res.R * res.R);
        if (rnorm <= 1e-12) return cand;
    }
    const double i = i_of(s);
    const OdeState cand{s, i, 1.0 - s - i};
    const OdeState res = jet_rhs(cand, p);
    throw OdeError("NoConvergence: residual " +
                   std::to_string(std::sqrt(res.S * res.S + res.I * res.I + res.R * res.R)) +
                   " after 200 iterations");
}

}  // namespace ksir
