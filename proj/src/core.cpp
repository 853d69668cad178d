#include "ksir/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace ksir {

bool SimConfig::operator==(const SimConfig& o) const {
    return L == o.L && N == o.N && beta == o.beta && gamma == o.gamma &&
           gamma1 == o.gamma1 && alpha == o.alpha &&
           cross_section == o.cross_section && perturbation == o.perturbation &&
           lambda == o.lambda && d_area_fraction == o.d_area_fraction &&
           initial_condition == o.initial_condition && i0 == o.i0 &&
           t_end == o.t_end && seed == o.seed && sample_every == o.sample_every;
}

double mean_speed_for(CrossSection cs) {
    if (cs == CrossSection::Semidiscrete) return 1.0;
    // <|v|> of the 2D Maxwellian with per-component variance 1/2
    return std::sqrt(std::numbers::pi) / 2.0;
}

SimConfig validate_config(SimConfig cfg) {
    if (!(cfg.beta > 0.0 && cfg.beta <= 1.0))
        throw ConfigError(ConfigError::Code::InvalidRate,
                          "InvalidRate: beta must lie in (0,1], got " + std::to_string(cfg.beta));
    if (!(cfg.gamma > 0.0))
        throw ConfigError(ConfigError::Code::InvalidRate,
                          "InvalidRate: gamma must be positive, got " + std::to_string(cfg.gamma));
    if (cfg.gamma1 < 0.0)
        throw ConfigError(ConfigError::Code::InvalidRate, "InvalidRate: gamma1 must be >= 0");
    if (cfg.alpha < 0.0 || cfg.alpha > 1.0)
        throw ConfigError(ConfigError::Code::InvalidRate, "InvalidRate: alpha must lie in [0,1]");
    if (!(cfg.i0 > 0.0 && cfg.i0 < 1.0))
        throw ConfigError(ConfigError::Code::InvalidRate, "InvalidRate: i0 must lie in (0,1)");
    if (!(cfg.L > 0.0) || !(cfg.lambda > 0.0) || cfg.N <= 0)
        throw ConfigError(ConfigError::Code::GeometryError,
                          "GeometryError: L, lambda and N must be positive");
    if (cfg.perturbation == Perturbation::Supermarket ||
        cfg.perturbation == Perturbation::Airport) {
        if (!(cfg.d_area_fraction > 0.0 && cfg.d_area_fraction < 1.0))
            throw ConfigError(ConfigError::Code::GeometryError,
                              "GeometryError: d_area_fraction must lie in (0,1) for a localized "
                              "perturbation");
    }
    if (cfg.t_end <= 0.0 || cfg.sample_every <= 0)
        throw ConfigError(ConfigError::Code::GeometryError,
                          "GeometryError: t_end and sample_every must be positive");

    DerivedConfig d;
    const double delta_target = cfg.lambda / 3.0;
    const auto cells_target = static_cast<int>(std::ceil(cfg.L / delta_target - 1e-12));
    // coarsen the grid where needed so that every cell averages >= 20
    // particles; reject if that would leave the mean free path badly
    // under-resolved
    const auto cells_cap =
        static_cast<int>(std::floor(std::sqrt(static_cast<double>(cfg.N) / 20.0)));
    d.cells_per_side = std::max(1, std::min(cells_target, cells_cap));
    d.delta = cfg.L / d.cells_per_side;
    if (cells_cap < 1 || 3.0 * d.delta > 1.5 * cfg.lambda) {
        std::ostringstream os;
        os << "OccupancyTooLow: N=" << cfg.N << " cannot fill a grid resolving lambda="
           << cfg.lambda << " with 20 particles per cell (largest admissible grid "
           << std::max(cells_cap, 0) << "x" << std::max(cells_cap, 0) << ")";
        throw ConfigError(ConfigError::Code::OccupancyTooLow, os.str());
    }
    d.lambda_resolved = 3.0 * d.delta;
    d.mean_speed = mean_speed_for(cfg.cross_section);
    d.tau = d.lambda_resolved / d.mean_speed;
    d.t_step = d.tau / 4.0;
    d.mean_occupancy =
        static_cast<double>(cfg.N) / (static_cast<double>(d.cells_per_side) * d.cells_per_side);
    cfg.derived = d;
    return cfg;
}

std::string to_string(CrossSection cs) {
    switch (cs) {
        case CrossSection::HardSphere: return "hard_sphere";
        case CrossSection::Semidiscrete: return "semidiscrete";
        case CrossSection::Maxwellian: return "maxwellian";
    }
    return "?";
}

std::string to_string(Perturbation p) {
    switch (p) {
        case Perturbation::None: return "none";
        case Perturbation::Supermarket: return "supermarket";
        case Perturbation::Airport: return "airport";
        case Perturbation::DiffuseJet: return "diffuse_jet";
    }
    return "?";
}

std::string to_string(InitialCondition ic) {
    return ic == InitialCondition::Homogeneous ? "homogeneous" : "concentrated_disk";
}

namespace {

CrossSection parse_cross_section(const std::string& s) {
    if (s == "hard_sphere") return CrossSection::HardSphere;
    if (s == "semidiscrete") return CrossSection::Semidiscrete;
    if (s == "maxwellian") return CrossSection::Maxwellian;
    throw ConfigError(ConfigError::Code::ParseError, "unknown cross_section: " + s);
}

Perturbation parse_perturbation(const std::string& s) {
    if (s == "none") return Perturbation::None;
    if (s == "supermarket") return Perturbation::Supermarket;
    if (s == "airport") return Perturbation::Airport;
    if (s == "diffuse_jet") return Perturbation::DiffuseJet;
    throw ConfigError(ConfigError::Code::ParseError, "unknown perturbation: " + s);
}

InitialCondition parse_initial_condition(const std::string& s) {
    if (s == "homogeneous") return InitialCondition::Homogeneous;
    if (s == "concentrated_disk") return InitialCondition::ConcentratedDisk;
    throw ConfigError(ConfigError::Code::ParseError, "unknown initial_condition: " + s);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "l") cfg.L = std::stod(value);
        else if (key == "n") cfg.N = std::stoll(value);
        else if (key == "beta") cfg.beta = std::stod(value);
        else if (key == "gamma") cfg.gamma = std::stod(value);
        else if (key == "gamma1") cfg.gamma1 = std::stod(value);
        else if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "cross_section") cfg.cross_section = parse_cross_section(value);
        else if (key == "perturbation") cfg.perturbation = parse_perturbation(value);
        else if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "d_area_fraction") cfg.d_area_fraction = std::stod(value);
        else if (key == "initial_condition") cfg.initial_condition = parse_initial_condition(value);
        else if (key == "i0") cfg.i0 = std::stod(value);
        else if (key == "t_end") cfg.t_end = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "sample_every") cfg.sample_every = std::stoll(value);
        else if (key == "delta" || key == "tau" || key == "t_step" ||
                 key == "cells_per_side" || key == "lambda_resolved" ||
                 key == "mean_speed" || key == "mean_occupancy") {
            // resolved-output keys, recomputed on validation
        } else {
            throw ConfigError(ConfigError::Code::ParseError, "unknown config key: " + key);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(ConfigError::Code::ParseError,
                          "bad value for key '" + key + "': " + value);
    }
}

SimConfig parse_config(std::istream& in) {
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ConfigError(ConfigError::Code::ParseError,
                              "line " + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(ConfigError::Code::ParseError, "cannot open config file: " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const SimConfig& cfg) {
    out << "l = " << fmt(cfg.L) << "\n";
    out << "n = " << cfg.N << "\n";
    out << "beta = " << fmt(cfg.beta) << "\n";
    out << "gamma = " << fmt(cfg.gamma) << "\n";
    out << "gamma1 = " << fmt(cfg.gamma1) << "\n";
    out << "alpha = " << fmt(cfg.alpha) << "\n";
    out << "cross_section = " << to_string(cfg.cross_section) << "\n";
    out << "perturbation = " << to_string(cfg.perturbation) << "\n";
    out << "lambda = " << fmt(cfg.lambda) << "\n";
    out << "d_area_fraction = " << fmt(cfg.d_area_fraction) << "\n";
    out << "initial_condition = " << to_string(cfg.initial_condition) << "\n";
    out << "i0 = " << fmt(cfg.i0) << "\n";
    out << "t_end = " << fmt(cfg.t_end) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "sample_every = " << cfg.sample_every << "\n";
    if (cfg.derived.cells_per_side > 0) {
        out << "# resolved\n";
        out << "delta = " << fmt(cfg.derived.delta) << "\n";
        out << "cells_per_side = " << cfg.derived.cells_per_side << "\n";
        out << "lambda_resolved = " << fmt(cfg.derived.lambda_resolved) << "\n";
        out << "mean_speed = " << fmt(cfg.derived.mean_speed) << "\n";
        out << "tau = " << fmt(cfg.derived.tau) << "\n";
        out << "t_step = " << fmt(cfg.derived.t_step) << "\n";
        out << "mean_occupancy = " << fmt(cfg.derived.mean_occupancy) << "\n";
    }
}

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ mix64(stream);
    for (auto& w : s_) {
        z += 0x9e3779b97f4a7c15ULL;
        w = mix64(z);
    }
    // all-zero state is invalid for xoshiro
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::index(std::uint64_t n) {
    // Lemire's multiply-shift with rejection of the biased zone
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t t = (0 - n) % n;
        while (lo < t) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

Vec2 RngStream::unit_vector() {
    const double theta = uniform() * 2.0 * std::numbers::pi;
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace ksir
