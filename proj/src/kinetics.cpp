#include "ksir/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ksir {

CollisionOutcome collide_elastic(Vec2 v, Vec2 v_star, Vec2 omega) {
    const double h = (v - v_star).dot(omega);
    const Vec2 d = omega * h;
    return {v - d, v_star + d, omega};
}

CollisionOutcome collide_semidiscrete(Vec2 v, Vec2 v_star, Vec2 omega) {
    const Vec2 vp = v - omega * (2.0 * v.dot(omega));
    const Vec2 vsp = v_star - omega * (2.0 * v_star.dot(omega));
    return {vp, vsp, omega};
}

Vec2 sample_omega(Vec2 v_rel, CrossSection cs, RngStream& rng) {
    if (cs == CrossSection::Maxwellian) return rng.unit_vector();
    // Angle relative to v_rel with density cos(theta)/2 on (-pi/2, pi/2):
    // inverse CDF is theta = asin(2u - 1).
    const double theta = std::asin(2.0 * rng.uniform() - 1.0);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double g = v_rel.norm();
    const Vec2 e{v_rel.x / g, v_rel.y / g};
    return {e.x * c - e.y * s, e.x * s + e.y * c};
}

CellCollisionResult collision_step(std::span<const std::uint32_t> cell,
                                   std::vector<Particle>& particles,
                                   const CollisionParams& params, RngStream& rng) {
    CellCollisionResult res;
    const std::size_t n = cell.size();
    if (n < 2) return res;

    const double base = static_cast<double>(n) * static_cast<double>(n - 1) /
                        (2.0 * params.mean_occupancy) * params.t_step / params.tau;

    const bool weighted = params.cross_section != CrossSection::Maxwellian;
    double v_rel_max = 0.0;
    double attempts = base;
    if (weighted) {
        double s_max = 0.0;
        for (auto idx : cell) s_max = std::max(s_max, particles[idx].v.norm2());
        v_rel_max = 2.0 * std::sqrt(s_max);
        if (v_rel_max <= 0.0) return res;
        attempts = base * v_rel_max / params.vrel_mean_estimate;
    }

    // stochastic rounding keeps the expected candidate count unbiased
    auto m = static_cast<long long>(attempts);
    if (rng.uniform() < attempts - static_cast<double>(m)) ++m;

    for (long long k = 0; k < m; ++k) {
        const auto a = static_cast<std::size_t>(rng.index(n));
        auto b = static_cast<std::size_t>(rng.index(n - 1));
        if (b >= a) ++b;
        const std::uint32_t ia = cell[a];
        const std::uint32_t ib = cell[b];
        Particle& pa = particles[ia];
        Particle& pb = particles[ib];

        const Vec2 v_rel = pa.v - pb.v;
        const double g = v_rel.norm();
        ++res.candidates;
        res.vrel_sum += g;

        if (weighted && rng.uniform() * v_rel_max >= g) continue;

        const Vec2 omega = sample_omega(v_rel, params.cross_section, rng);
        if (params.cross_section == CrossSection::Semidiscrete) {
            auto out = collide_semidiscrete(pa.v, pb.v, omega);
            // keep the fixed-speed constraint exact against rounding drift
            pa.v = out.v_prime * (1.0 / out.v_prime.norm());
            pb.v = out.v_star_prime * (1.0 / out.v_star_prime.norm());
        } else {
            auto out = collide_elastic(pa.v, pb.v, omega);
            pa.v = out.v_prime;
            pb.v = out.v_star_prime;
        }
        ++res.accepted;
        res.pairs.emplace_back(ia, ib);
    }
    return res;
}

}  // namespace ksir
