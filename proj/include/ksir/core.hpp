#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ksir {

// ---------------------------------------------------------------------------
// Small 2D vector
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }

    bool operator==(const Vec2&) const = default;
};

// ---------------------------------------------------------------------------
// Epidemic label and particle state
// ---------------------------------------------------------------------------

enum class Label : std::uint8_t { Susceptible = 0, Infected = 1, Recovered = 2 };

struct Particle {
    Vec2 x;
    Vec2 v;
    Label label = Label::Susceptible;
};

enum class CrossSection { HardSphere, Semidiscrete, Maxwellian };
enum class Perturbation { None, Supermarket, Airport, DiffuseJet };
enum class InitialCondition { Homogeneous, ConcentratedDisk };

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

class ConfigError : public std::runtime_error {
public:
    enum class Code { OccupancyTooLow, InvalidRate, GeometryError, ParseError };

    ConfigError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Code code() const { return code_; }

private:
    Code code_;
};

// Quantities derived during validation. delta is rounded so the grid tiles
// the torus exactly: delta = L / ceil(L / (lambda/3)), and the resolved mean
// free path is 3*delta.
struct DerivedConfig {
    double delta = 0.0;
    int cells_per_side = 0;
    double lambda_resolved = 0.0;
    double mean_speed = 0.0;      // <v> at the thermalized state, per kernel
    double tau = 0.0;             // lambda_resolved / mean_speed
    double t_step = 0.0;          // tau / 4
    double mean_occupancy = 0.0;  // N / cells^2
};

struct SimConfig {
    double L = 1000.0;
    long long N = 180000;
    double beta = 0.75;
    double gamma = 1.0 / 120.0;
    double gamma1 = 0.0;
    double alpha = 0.0;
    CrossSection cross_section = CrossSection::HardSphere;
    Perturbation perturbation = Perturbation::None;
    double lambda = 49.5;
    double d_area_fraction = 0.01;
    InitialCondition initial_condition = InitialCondition::Homogeneous;
    double i0 = 0.005;
    double t_end = 2500.0;
    std::uint64_t seed = 1;
    long long sample_every = 1;

    DerivedConfig derived;  // populated by validate_config

    bool operator==(const SimConfig& o) const;
};

// Mean thermal speed used to convert lambda into tau for a given kernel:
// sqrt(pi)/2 for the Maxwellian-equilibrium kernels, exactly 1 for the
// fixed-speed semidiscrete model.
double mean_speed_for(CrossSection cs);

// Checks rates/geometry/occupancy and fills cfg.derived. Throws ConfigError.
SimConfig validate_config(SimConfig cfg);

// Flat key = value text format, '#' comments. Derived keys are written to
// the resolved form and accepted (ignored) on input.
SimConfig parse_config(std::istream& in);
void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value);
SimConfig parse_config_file(const std::string& path);
void write_config(std::ostream& out, const SimConfig& cfg);

std::string to_string(CrossSection cs);
std::string to_string(Perturbation p);
std::string to_string(InitialCondition ic);

// ---------------------------------------------------------------------------
// Deterministic random number streams
// ---------------------------------------------------------------------------

// 64-bit mixing (splitmix64 finalizer); used to derive stream identifiers.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// xoshiro256** seeded from (master seed, stream index). Identical
// (seed, stream) pairs produce identical sequences on every platform.
// Instances are single-owner; derive a fresh stream per task instead of
// sharing one across threads.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // uniform in [0, 1), 53-bit resolution
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n), n > 0
    std::uint64_t index(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    // unit vector with uniform angle
    Vec2 unit_vector();

private:
    std::array<std::uint64_t, 4> s_;
};

}  // namespace ksir
