#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ksir/kinetics.hpp"

using namespace ksir;

namespace {

double gauss(RngStream& rng, double sigma) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TEST_CASE("elastic collision law") {
    SUBCASE("head-on exchange") {
        auto out = collide_elastic({1, 0}, {-1, 0}, {1, 0});
        CHECK(out.v_prime == Vec2{-1, 0});
        CHECK(out.v_star_prime == Vec2{1, 0});
    }
    SUBCASE("grazing: relative velocity orthogonal to omega") {
        auto out = collide_elastic({1, 0}, {-1, 0}, {0, 1});
        CHECK(out.v_prime == Vec2{1, 0});
        CHECK(out.v_star_prime == Vec2{-1, 0});
    }
    SUBCASE("hand-worked oblique case") {
        auto out = collide_elastic({1, 1}, {0, 0}, {1, 0});
        CHECK(out.v_prime.x == doctest::Approx(0.0));
        CHECK(out.v_prime.y == doctest::Approx(1.0));
        CHECK(out.v_star_prime.x == doctest::Approx(1.0));
        CHECK(out.v_star_prime.y == doctest::Approx(0.0));
    }
}

TEST_CASE("semidiscrete reflection law") {
    SUBCASE("velocity along omega reverses") {
        auto out = collide_semidiscrete({1, 0}, {0, 1}, {1, 0});
        CHECK(out.v_prime == Vec2{-1, 0});
    }
    SUBCASE("velocity orthogonal to omega is unchanged") {
        auto out = collide_semidiscrete({0, 1}, {1, 0}, {1, 0});
        CHECK(out.v_prime == Vec2{0, 1});
    }
    SUBCASE("45 degree reflection") {
        const double h = std::sqrt(2.0) / 2.0;
        auto out = collide_semidiscrete({h, h}, {1, 0}, {1, 0});
        CHECK(out.v_prime.x == doctest::Approx(-h));
        CHECK(out.v_prime.y == doctest::Approx(h));
    }
}

TEST_CASE("elastic conservation over a long random sequence") {
    RngStream rng(1234, 0);
    Vec2 p_tot{0, 0};
    double e_tot = 0;
    std::vector<std::pair<Vec2, Vec2>> pairs;
    const int n = 1000000;
    pairs.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec2 v{gauss(rng, 1.0), gauss(rng, 1.0)};
        Vec2 w{gauss(rng, 1.0), gauss(rng, 1.0)};
        pairs.emplace_back(v, w);
        p_tot += v + w;
        e_tot += v.norm2() + w.norm2();
    }
    Vec2 p_after{0, 0};
    double e_after = 0;
    for (auto& [v, w] : pairs) {
        const Vec2 vrel = v - w;
        if (vrel.norm2() == 0.0) continue;
        RngStream omega_rng(rng.next_u64(), 0);
        auto out = collide_elastic(v, w, sample_omega(vrel, CrossSection::HardSphere, omega_rng));
        p_after += out.v_prime + out.v_star_prime;
        e_after += out.v_prime.norm2() + out.v_star_prime.norm2();
    }
    const double p_scale = std::sqrt(static_cast<double>(n));
    CHECK(std::abs(p_after.x - p_tot.x) / p_scale <= 1e-10);
    CHECK(std::abs(p_after.y - p_tot.y) / p_scale <= 1e-10);
    CHECK(std::abs(e_after - e_tot) / e_tot <= 1e-10);
}

TEST_CASE("semidiscrete speeds stay exactly unit") {
    RngStream rng(77, 0);
    Vec2 v = rng.unit_vector();
    Vec2 w = rng.unit_vector();
    for (int i = 0; i < 100000; ++i) {
        const Vec2 vrel = v - w;
        if (vrel.norm2() < 1e-30) {
            w = rng.unit_vector();
            continue;
        }
        auto out =
            collide_semidiscrete(v, w, sample_omega(vrel, CrossSection::Semidiscrete, rng));
        v = out.v_prime * (1.0 / out.v_prime.norm());
        w = out.v_star_prime * (1.0 / out.v_star_prime.norm());
        CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(w.norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("maxwellian omega is isotropic") {
    RngStream rng(5, 0);
    Vec2 mean{0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i) mean += sample_omega({1, 0}, CrossSection::Maxwellian, rng);
    // per-component variance of a uniform unit vector is 1/2
    const double three_sigma = 3.0 * std::sqrt(0.5 / n);
    CHECK(std::abs(mean.x / n) < three_sigma);
    CHECK(std::abs(mean.y / n) < three_sigma);
}

TEST_CASE("hard-sphere omega follows the cosine law") {
    RngStream rng(6, 0);
    const Vec2 vrel{1, 0};
    const int n = 1000000;
    double mean_dot = 0;
    int negative = 0;
    std::vector<double> sines;
    sines.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 w = sample_omega(vrel, CrossSection::HardSphere, rng);
        mean_dot += w.dot(vrel);
        if (w.dot(vrel) < 0) ++negative;
        sines.push_back(w.y);  // sin(theta) relative to vrel direction
    }
    // E[cos theta] with density cos/2 is pi/4; MC 3-sigma ~ 7e-4
    CHECK(mean_dot / n == doctest::Approx(std::numbers::pi / 4).epsilon(0.004));
    CHECK(negative == 0);

    // KS distance against the analytic CDF F(theta) = (1 + sin theta)/2
    std::sort(sines.begin(), sines.end());
    double ks = 0;
    for (int i = 0; i < n; ++i) {
        const double f = (1.0 + sines[i]) / 2.0;
        ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    CHECK(ks <= 0.01);
}

TEST_CASE("collision_step: empty and singleton cells") {
    std::vector<Particle> particles(1);
    particles[0].v = {1, 0};
    std::vector<std::uint32_t> cell{0};
    CollisionParams params{CrossSection::HardSphere, 1.0, 4.0, 20.0, 1.27};
    RngStream rng(3, 0);
    CHECK(collision_step(std::span<const std::uint32_t>{}, particles, params, rng).accepted == 0);
    CHECK(collision_step(cell, particles, params, rng).accepted == 0);
}

TEST_CASE("maxwellian candidate count at mean occupancy") {
    // Nc = 40 at mean occupancy 40, t_step = tau/4:
    // Nc (Nc-1) / (2 * 40) / 4 = 4.875 expected candidates, all accepted
    const int nc = 40;
    std::vector<Particle> particles(nc);
    std::vector<std::uint32_t> cell(nc);
    RngStream vel_rng(11, 0);
    for (int i = 0; i < nc; ++i) {
        particles[i].v = vel_rng.unit_vector();
        cell[i] = static_cast<std::uint32_t>(i);
    }
    CollisionParams params{CrossSection::Maxwellian, 1.0, 4.0, 40.0, 4.0 / std::numbers::pi};
    RngStream rng(12, 0);
    const int reps = 20000;
    long long total_candidates = 0, total_accepted = 0;
    for (int r = 0; r < reps; ++r) {
        auto res = collision_step(cell, particles, params, rng);
        total_candidates += res.candidates;
        total_accepted += res.accepted;
    }
    CHECK(static_cast<double>(total_candidates) / reps == doctest::Approx(4.875).epsilon(0.01));
    CHECK(total_accepted == total_candidates);
}

TEST_CASE("hard-sphere acceptance is calibrated to 1/tau at equilibrium") {
    // thermalized Maxwellian cell, estimate fed with the true pair mean:
    // accepted collisions per particle per step must equal t_step/tau
    const int nc = 50;
    const double tau = 8.0;
    const double t_step = tau / 4.0;
    RngStream vel_rng(21, 0);
    std::vector<Particle> base(nc);
    for (auto& p : base) p.v = {gauss(vel_rng, std::sqrt(0.5)), gauss(vel_rng, std::sqrt(0.5))};

    // exact pair mean of |v_rel| for this fixed population
    double vrel_mean = 0;
    int cnt = 0;
    for (int i = 0; i < nc; ++i)
        for (int j = i + 1; j < nc; ++j) {
            vrel_mean += (base[i].v - base[j].v).norm();
            ++cnt;
        }
    vrel_mean /= cnt;

    std::vector<std::uint32_t> cell(nc);
    for (int i = 0; i < nc; ++i) cell[i] = static_cast<std::uint32_t>(i);
    CollisionParams params{CrossSection::HardSphere, t_step, tau, double(nc), vrel_mean};

    RngStream rng(22, 0);
    const int reps = 40000;
    long long accepted = 0;
    for (int r = 0; r < reps; ++r) {
        auto particles = base;  // velocities reset so the pair mean stays exact
        accepted += collision_step(cell, particles, params, rng).accepted;
    }
    const double per_particle_rate =
        2.0 * static_cast<double>(accepted) / (static_cast<double>(reps) * nc * t_step);
    // fixed cell: each particle sees nc-1 partners instead of the Poisson mean
    CHECK(per_particle_rate == doctest::Approx((nc - 1.0) / (nc * tau)).epsilon(0.01));
}

TEST_CASE("degenerate pairs are rejected, not errors") {
    std::vector<Particle> particles(2);
    particles[0].v = {0.5, 0.5};
    particles[1].v = {0.5, 0.5};
    std::vector<std::uint32_t> cell{0, 1};
    CollisionParams params{CrossSection::HardSphere, 10.0, 1.0, 2.0, 1.0};
    RngStream rng(1, 0);
    for (int i = 0; i < 100; ++i) {
        auto res = collision_step(cell, particles, params, rng);
        CHECK(res.accepted == 0);
    }
}
