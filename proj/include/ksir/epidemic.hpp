#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ksir/core.hpp"

namespace ksir {

// For every collided {S, I} pair, the S particle turns I with probability
// beta. Other label combinations are inert. Returns the number of S -> I
// flips.
long long apply_infection(std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs,
                          std::vector<Particle>& particles, double beta, RngStream& rng);

// Geometric discretization of the exponential recovery clock: each I flips
// to R with probability 1 - exp(-gamma * t_step). Returns the number of
// recoveries. `first`/`last` select an index chunk so the sweep can be split
// across per-chunk streams.
long long apply_recovery(std::vector<Particle>& particles, std::size_t first, std::size_t last,
                         double gamma, double t_step, RngStream& rng);

}  // namespace ksir
