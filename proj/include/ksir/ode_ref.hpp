#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace ksir {

struct OdeState {
    double S = 0.0, I = 0.0, R = 0.0;
};

struct OdeParams {
    double beta = 0.0;
    double gamma = 0.0;
    double m = 1.0;       // collision frequency factor (1/tau when matched to DSMC)
    double gamma1 = 0.0;
    double alpha = 0.0;
};

class OdeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mean-field SIR vector field: (-beta m I S, beta m I S - gamma I, gamma I).
OdeState sir_rhs(const OdeState& s, const OdeParams& p);

// SIR plus the uniform replacement flow (injection channels gamma1, alpha).
OdeState jet_rhs(const OdeState& s, const OdeParams& p);

using OdeRhs = std::function<OdeState(const OdeState&, const OdeParams&)>;

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<OdeState> y;

    const OdeState& back() const { return y.back(); }
};

// Suggested fixed step: resolve the fastest rate with >= 50 points.
double default_dt(const OdeParams& p);

// Classical RK4 with fixed step dt; after each step R is reset to 1 - S - I
// so the simplex constraint cannot drift. Throws StepTooLarge (OdeError) if
// the trajectory leaves [-1e-9, 1+1e-9]^3.
OdeTrajectory integrate(const OdeRhs& rhs, OdeState y0, const OdeParams& p, double t_end,
                        double dt, long long store_every = 1);

struct FinalSize {
    double s_bar = 0.0;
    bool no_epidemic = false;  // beta/gamma <= 1 branch (S_bar -> 1 - i0)
};

// Root of the transcendental final-size relation
//   S e^{-k S} = (1 - i0) e^{-k},  k = beta/gamma,
// on the stable branch below the maximum of y e^{-y} (bisection, abs tol
// 1e-10). Assumes R(0) = 0.
FinalSize final_size(double beta_over_gamma, double i0);

// Stationary point of jet_rhs with S + I + R = 1, from the I-elimination
//   I (gamma - beta m S) = gamma1 alpha (1 - I)
// solved by damped Newton on S with a bisection safeguard; residual norm
// <= 1e-12. Requires alpha in (0, 1], gamma1 > 0.
OdeState jet_stationary(const OdeParams& p);

}  // namespace ksir
