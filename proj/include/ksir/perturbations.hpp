#pragma once

#include <vector>

#include "ksir/core.hpp"

namespace ksir {

// Axis-aligned square region D (supermarket / airport gate), fully inside
// the fundamental domain [0,L)^2.
struct BoxD {
    Vec2 center;
    double side = 0.0;

    static BoxD centered(double L, double d_area_fraction);

    bool contains(Vec2 p) const;
    Vec2 sample_uniform(RngStream& rng) const;
};

// Each particle, at rate gamma1, is teleported to a uniform point of D with
// velocity and label unchanged. Returns the jump count.
long long supermarket_step(std::vector<Particle>& particles, std::size_t first, std::size_t last,
                           const BoxD& D, double gamma1, double t_step, RngStream& rng);

struct AirportCounts {
    long long jumps = 0;
    long long injected_infected = 0;
    // net label flow, needed to keep running S/I/R counts exact
    long long s_to_i = 0, s_to_r = 0, r_to_i = 0, r_to_s = 0;
};

// S and R particles trigger at rate gamma1 and are replaced in place by an
// agent placed uniformly in D carrying label I with probability alpha, S or
// R each with probability (1-alpha)/2. The replacement keeps the triggered
// particle's velocity (an exchangeable draw from the S+R velocity
// distribution). I particles never trigger; N is unchanged.
AirportCounts airport_step(std::vector<Particle>& particles, std::size_t first, std::size_t last,
                           const BoxD& D, double gamma1, double alpha, double t_step,
                           RngStream& rng);

// Spatially uniform replacement flow: S and R particles trigger at rate
// gamma1 and have their label resampled (I : alpha, S and R : (1-alpha)/2
// each); position and velocity untouched.
AirportCounts diffuse_jet_step(std::vector<Particle>& particles, std::size_t first,
                               std::size_t last, double gamma1, double alpha, double t_step,
                               RngStream& rng);

}  // namespace ksir
