#include "ksir/perturbations.hpp"

#include <cmath>

namespace ksir {

BoxD BoxD::centered(double L, double d_area_fraction) {
    BoxD d;
    d.center = {L / 2.0, L / 2.0};
    d.side = L * std::sqrt(d_area_fraction);
    return d;
}

bool BoxD::contains(Vec2 p) const {
    const double h = side / 2.0;
    return p.x >= center.x - h && p.x < center.x + h && p.y >= center.y - h &&
           p.y < center.y + h;
}

Vec2 BoxD::sample_uniform(RngStream& rng) const {
    const double h = side / 2.0;
    return {center.x - h + side * rng.uniform(), center.y - h + side * rng.uniform()};
}

long long supermarket_step(std::vector<Particle>& particles, std::size_t first, std::size_t last,
                           const BoxD& D, double gamma1, double t_step, RngStream& rng) {
    if (gamma1 <= 0.0) return 0;
    const double p = -std::expm1(-gamma1 * t_step);
    long long jumps = 0;
    for (std::size_t i = first; i < last; ++i) {
        if (!rng.bernoulli(p)) continue;
        particles[i].x = D.sample_uniform(rng);
        ++jumps;
    }
    return jumps;
}

namespace {

// label drawn from the injection mixture: I with prob alpha, else S/R evenly
Label injection_label(double alpha, RngStream& rng) {
    const double u = rng.uniform();
    if (u < alpha) return Label::Infected;
    return u < alpha + (1.0 - alpha) / 2.0 ? Label::Susceptible : Label::Recovered;
}

void tally(AirportCounts& c, Label from, Label to) {
    if (from == Label::Susceptible) {
        if (to == Label::Infected) ++c.s_to_i;
        else if (to == Label::Recovered) ++c.s_to_r;
    } else {  // from == Recovered
        if (to == Label::Infected) ++c.r_to_i;
        else if (to == Label::Susceptible) ++c.r_to_s;
    }
    if (to == Label::Infected) ++c.injected_infected;
}

}  // namespace

AirportCounts airport_step(std::vector<Particle>& particles, std::size_t first, std::size_t last,
                           const BoxD& D, double gamma1, double alpha, double t_step,
                           RngStream& rng) {
    AirportCounts counts;
    if (gamma1 <= 0.0) return counts;
    const double p = -std::expm1(-gamma1 * t_step);
    for (std::size_t i = first; i < last; ++i) {
        Particle& pt = particles[i];
        if (pt.label == Label::Infected) continue;
        if (!rng.bernoulli(p)) continue;
        const Label to = injection_label(alpha, rng);
        tally(counts, pt.label, to);
        pt.x = D.sample_uniform(rng);
        pt.label = to;  // velocity retained
        ++counts.jumps;
    }
    return counts;
}

AirportCounts diffuse_jet_step(std::vector<Particle>& particles, std::size_t first,
                               std::size_t last, double gamma1, double alpha, double t_step,
                               RngStream& rng) {
    AirportCounts counts;
    if (gamma1 <= 0.0) return counts;
    const double p = -std::expm1(-gamma1 * t_step);
    for (std::size_t i = first; i < last; ++i) {
        Particle& pt = particles[i];
        if (pt.label == Label::Infected) continue;
        if (!rng.bernoulli(p)) continue;
        const Label to = injection_label(alpha, rng);
        tally(counts, pt.label, to);
        pt.label = to;
        ++counts.jumps;
    }
    return counts;
}

}  // namespace ksir
