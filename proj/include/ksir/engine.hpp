#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ksir/core.hpp"
#include "ksir/observables.hpp"

namespace ksir {

// Uniform grid of delta x delta cells over the torus. Buckets are stored as
// a counting sort: cell c owns order[start[c] .. start[c+1]).
struct CellGrid {
    int cells_per_side = 0;
    double delta = 0.0;
    std::vector<std::uint32_t> start;  // cells^2 + 1 offsets
    std::vector<std::uint32_t> order;  // particle indices grouped by cell

    CellGrid() = default;
    CellGrid(int cells_per_side, double delta);

    std::size_t cell_count() const {
        return static_cast<std::size_t>(cells_per_side) * cells_per_side;
    }
    std::size_t cell_of(Vec2 x) const;
};

// Free flight with periodic wrap: x <- (x + v t) mod L.
void stream(std::vector<Particle>& particles, std::size_t first, std::size_t last, double t_step,
            double L);

// Rebuild the grid buckets from current positions (stable in particle order).
void rebin(const std::vector<Particle>& particles, CellGrid& grid);

struct RunOptions {
    int threads = 1;
    // called at every sample point (step, time, population)
    std::function<void(long long, double, const std::vector<Particle>&)> observer;
};

struct RunResult {
    TimeSeries series;
    std::vector<Particle> final_particles;
    long long total_collisions = 0;
    long long total_infections = 0;
    long long total_recoveries = 0;
    long long total_injected_infected = 0;
};

// Full DSMC loop: stream -> rebin -> per-cell collisions + infection ->
// recovery -> perturbation, sampling the label fractions every
// cfg.sample_every steps and diagnostics ~100 times per run. RNG streams
// are indexed by (step, phase, cell-or-chunk), so the result is identical
// for any thread count.
RunResult run(const SimConfig& cfg, const RunOptions& opts = {});

}  // namespace ksir
