#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ksir/core.hpp"

namespace ksir {

struct CollisionOutcome {
    Vec2 v_prime;
    Vec2 v_star_prime;
    Vec2 omega;
};

// Elastic exchange along the impact direction: momentum and energy conserved.
CollisionOutcome collide_elastic(Vec2 v, Vec2 v_star, Vec2 omega);

// Fixed-speed reflection across the line orthogonal to omega: each speed is
// preserved (energy conserved, momentum not).
CollisionOutcome collide_semidiscrete(Vec2 v, Vec2 v_star, Vec2 omega);

// Impact direction sample: density proportional to max(omega . v_rel, 0) on
// the unit circle for the velocity-weighted kernels, uniform angle for
// Maxwellian molecules. Degenerate v_rel for the weighted kernels is the
// caller's responsibility (collision_step rejects such pairs).
Vec2 sample_omega(Vec2 v_rel, CrossSection cs, RngStream& rng);

// Tuning of the per-cell candidate count. Candidates per cell and step:
//   M = Nc (Nc-1) / (2 mean_occupancy) * (t_step / tau) * majorant_factor
// with acceptance probability |v_rel| / v_rel_max for the velocity-weighted
// kernels (majorant_factor = v_rel_max / vrel_mean_estimate) and acceptance 1
// for Maxwellian molecules. Scaling by the local occupancy makes the
// per-particle collision frequency proportional to the local density, equal
// to 1/tau at the homogeneous equilibrium.
struct CollisionParams {
    CrossSection cross_section = CrossSection::HardSphere;
    double t_step = 0.0;
    double tau = 0.0;
    double mean_occupancy = 0.0;
    double vrel_mean_estimate = 0.0;  // running estimate of <|v_rel|> over pairs
};

struct CellCollisionResult {
    long long accepted = 0;
    long long candidates = 0;
    double vrel_sum = 0.0;  // sum of |v_rel| over all candidate pairs
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // global indices
};

// One DSMC collision sub-step for a single cell. `cell` holds the global
// indices of the particles in the cell; velocities are updated in place.
CellCollisionResult collision_step(std::span<const std::uint32_t> cell,
                                   std::vector<Particle>& particles,
                                   const CollisionParams& params, RngStream& rng);

}  // namespace ksir
