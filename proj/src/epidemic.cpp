#include "ksir/epidemic.hpp"

#include <cmath>

namespace ksir {

long long apply_infection(std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs,
                          std::vector<Particle>& particles, double beta, RngStream& rng) {
    long long infected = 0;
    for (auto [ia, ib] : pairs) {
        Particle& a = particles[ia];
        Particle& b = particles[ib];
        Particle* s = nullptr;
        if (a.label == Label::Susceptible && b.label == Label::Infected) s = &a;
        else if (b.label == Label::Susceptible && a.label == Label::Infected) s = &b;
        if (s == nullptr) continue;
        if (rng.bernoulli(beta)) {
            s->label = Label::Infected;
            ++infected;
        }
    }
    return infected;
}

long long apply_recovery(std::vector<Particle>& particles, std::size_t first, std::size_t last,
                         double gamma, double t_step, RngStream& rng) {
    if (gamma <= 0.0) return 0;
    const double p = -std::expm1(-gamma * t_step);
    long long recovered = 0;
    for (std::size_t i = first; i < last; ++i) {
        Particle& pt = particles[i];
        if (pt.label != Label::Infected) continue;
        if (rng.bernoulli(p)) {
            pt.label = Label::Recovered;
            ++recovered;
        }
    }
    return recovered;
}

}  // namespace ksir
