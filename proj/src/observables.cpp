#include "ksir/observables.hpp"

#include <algorithm>
#include <cmath>

namespace ksir {

bool TimeSeries::operator==(const TimeSeries& o) const {
    return t == o.t && S == o.S && I == o.I && R == o.R && diag.t == o.diag.t &&
           diag.energy == o.diag.energy && diag.px == o.diag.px && diag.py == o.diag.py &&
           diag.var_vx == o.diag.var_vx && diag.var_vy == o.diag.var_vy &&
           diag.collisions == o.diag.collisions;
}

LabelCounts count_labels(std::span<const Particle> particles) {
    LabelCounts c;
    for (const auto& p : particles) {
        switch (p.label) {
            case Label::Susceptible: ++c.S; break;
            case Label::Infected: ++c.I; break;
            case Label::Recovered: ++c.R; break;
        }
    }
    return c;
}

Fractions sample_fractions(std::span<const Particle> particles) {
    const auto c = count_labels(particles);
    const auto n = static_cast<double>(particles.size());
    return {static_cast<double>(c.S) / n, static_cast<double>(c.I) / n,
            static_cast<double>(c.R) / n};
}

VelocityMoments velocity_moments(std::span<const Particle> particles, RngStream& rng) {
    VelocityMoments m;
    const std::size_t n = particles.size();
    if (n < 2) return m;

    double sx = 0, sy = 0, sxx = 0, syy = 0, sspeed = 0;
    for (const auto& p : particles) {
        sx += p.v.x;
        sy += p.v.y;
        sxx += p.v.x * p.v.x;
        syy += p.v.y * p.v.y;
        sspeed += p.v.norm();
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    m.mean = {sx * inv_n, sy * inv_n};
    m.var_x = sxx * inv_n - m.mean.x * m.mean.x;
    m.var_y = syy * inv_n - m.mean.y * m.mean.y;
    m.mean_speed = sspeed * inv_n;

    const std::size_t n_pairs = std::max<std::size_t>(10000, n);
    double srel = 0;
    for (std::size_t k = 0; k < n_pairs; ++k) {
        const auto a = static_cast<std::size_t>(rng.index(n));
        auto b = static_cast<std::size_t>(rng.index(n - 1));
        if (b >= a) ++b;
        srel += (particles[a].v - particles[b].v).norm();
    }
    m.mean_rel_speed = srel / static_cast<double>(n_pairs);
    return m;
}

double mean_free_time_estimate(std::span<const double> collisions_per_step, long long N,
                               double t_step) {
    if (collisions_per_step.size() < 100)
        throw ObservableError("InsufficientData: need at least 100 collision-count samples, got " +
                              std::to_string(collisions_per_step.size()));
    double total = 0;
    for (double c : collisions_per_step) total += c;
    if (total <= 0.0) throw ObservableError("InsufficientData: no collisions recorded");
    const double mean_per_step = total / static_cast<double>(collisions_per_step.size());
    return static_cast<double>(N) * t_step / (2.0 * mean_per_step);
}

SpatialProfile spatial_profile(std::span<const Particle> particles, int bins, double L) {
    SpatialProfile prof;
    prof.bins = bins;
    prof.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
    std::vector<long long> infected(prof.counts.size(), 0);
    const double scale = bins / L;
    for (const auto& p : particles) {
        auto bx = static_cast<int>(p.x.x * scale);
        auto by = static_cast<int>(p.x.y * scale);
        bx = std::clamp(bx, 0, bins - 1);
        by = std::clamp(by, 0, bins - 1);
        const auto idx = static_cast<std::size_t>(by) * bins + bx;
        ++prof.counts[idx];
        if (p.label == Label::Infected) ++infected[idx];
    }
    prof.infected_frac.resize(prof.counts.size(), 0.0);
    for (std::size_t i = 0; i < prof.counts.size(); ++i)
        if (prof.counts[i] > 0)
            prof.infected_frac[i] =
                static_cast<double>(infected[i]) / static_cast<double>(prof.counts[i]);
    return prof;
}

}  // namespace ksir
