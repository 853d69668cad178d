#include "ksir/init.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace ksir {

std::vector<Particle> build_population(const SimConfig& cfg, RngStream& rng) {
    const auto n = static_cast<std::size_t>(cfg.N);
    std::vector<Particle> particles(n);
    for (auto& p : particles) {
        p.x = {cfg.L * rng.uniform(), cfg.L * rng.uniform()};
        p.v = rng.unit_vector();
        p.label = Label::Susceptible;
    }

    const auto n_infected =
        static_cast<std::size_t>(std::llround(static_cast<double>(cfg.N) * cfg.i0));

    // partial Fisher-Yates picks the infected subset uniformly
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    for (std::size_t k = 0; k < n_infected; ++k) {
        const auto j = k + static_cast<std::size_t>(rng.index(n - k));
        std::swap(idx[k], idx[j]);
    }

    const double disk_radius = cfg.L * std::sqrt(0.005 / std::numbers::pi);
    const Vec2 center{cfg.L / 2.0, cfg.L / 2.0};
    for (std::size_t k = 0; k < n_infected; ++k) {
        Particle& p = particles[idx[k]];
        p.label = Label::Infected;
        if (cfg.initial_condition == InitialCondition::ConcentratedDisk) {
            const double r = disk_radius * std::sqrt(rng.uniform());
            const Vec2 dir = rng.unit_vector();
            p.x = center + dir * r;
        }
    }
    return particles;
}

}  // namespace ksir
