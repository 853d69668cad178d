#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ksir/core.hpp"

namespace ksir {

struct Fractions {
    double S = 0.0, I = 0.0, R = 0.0;
};

struct LabelCounts {
    long long S = 0, I = 0, R = 0;
    long long total() const { return S + I + R; }
};

// Sampled run output. Fraction channels are exact integer counts over N.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> S, I, R;

    struct Diagnostics {
        std::vector<double> t;
        std::vector<double> energy;       // sum |v|^2 / 2
        std::vector<double> px, py;       // total momentum
        std::vector<double> var_vx, var_vy;
        std::vector<double> collisions;   // accepted collisions in the step
    } diag;

    bool operator==(const TimeSeries& o) const;
};

class ObservableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

LabelCounts count_labels(std::span<const Particle> particles);
Fractions sample_fractions(std::span<const Particle> particles);

struct VelocityMoments {
    Vec2 mean;
    double var_x = 0.0, var_y = 0.0;
    double mean_speed = 0.0;
    double mean_rel_speed = 0.0;  // from a random pair subsample
};

// Sample moments of the velocity distribution. The relative-speed channel
// subsamples max(10^4, N) random pairs instead of all N^2.
VelocityMoments velocity_moments(std::span<const Particle> particles, RngStream& rng);

// tau_hat = N * t_step / (2 * mean collisions per step); every collision
// terminates two free flights. Throws InsufficientData if fewer than 100
// samples or no collisions at all.
double mean_free_time_estimate(std::span<const double> collisions_per_step, long long N,
                               double t_step);

struct SpatialProfile {
    int bins = 0;
    std::vector<long long> counts;      // bins x bins, row-major
    std::vector<double> infected_frac;  // 0 where a bin is empty
};

SpatialProfile spatial_profile(std::span<const Particle> particles, int bins, double L);

}  // namespace ksir
