#pragma once

#include <vector>

#include "ksir/core.hpp"

namespace ksir {

// Fresh population for a validated config: positions i.i.d. uniform on
// [0,L)^2, velocities i.i.d. uniform on the unit circle, round(N*i0)
// infected (rest susceptible, no recovered). For the concentrated initial
// condition the infected get their positions resampled uniformly in a disk
// of area 0.005 L^2 centered at (L/2, L/2).
std::vector<Particle> build_population(const SimConfig& cfg, RngStream& rng);

}  // namespace ksir
