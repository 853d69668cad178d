#include <doctest.h>

#include <cmath>
#include <vector>

#include "ksir/observables.hpp"
#include "ksir/perturbations.hpp"

using namespace ksir;

namespace {

std::vector<Particle> uniform_population(int n, double L, RngStream& rng) {
    std::vector<Particle> p(n);
    for (auto& q : p) {
        q.x = {L * rng.uniform(), L * rng.uniform()};
        q.v = rng.unit_vector();
        q.label = Label::Susceptible;
    }
    return p;
}

}  // namespace

TEST_CASE("box geometry") {
    const auto box = BoxD::centered(1000.0, 0.01);
    CHECK(box.side == doctest::Approx(100.0));
    CHECK(box.center.x == 500.0);
    CHECK(box.contains({500, 500}));
    CHECK_FALSE(box.contains({449, 500}));
    RngStream rng(1, 0);
    for (int i = 0; i < 1000; ++i) CHECK(box.contains(box.sample_uniform(rng)));
}

TEST_CASE("supermarket: gamma1 = 0 is the identity") {
    RngStream rng(2, 0);
    auto particles = uniform_population(500, 100.0, rng);
    const auto before = particles;
    const auto box = BoxD::centered(100.0, 0.01);
    CHECK(supermarket_step(particles, 0, particles.size(), box, 0.0, 1.0, rng) == 0);
    for (std::size_t i = 0; i < particles.size(); ++i) CHECK(particles[i].x == before[i].x);
}

TEST_CASE("supermarket jump count is binomial and only positions move") {
    const int n = 100000;
    RngStream rng(3, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    const auto before = particles;
    const auto box = BoxD::centered(1000.0, 0.01);
    const double gamma1_t = 1e-3;
    const auto jumps = supermarket_step(particles, 0, particles.size(), box, gamma1_t, 1.0, rng);
    CHECK(std::abs(static_cast<double>(jumps) - 100.0) < 40.0);  // 3 sigma ~ 30
    for (std::size_t i = 0; i < particles.size(); ++i) {
        CHECK(particles[i].v == before[i].v);
        CHECK(particles[i].label == before[i].label);
    }
}

TEST_CASE("supermarket accumulates density in D without transport") {
    const int n = 20000;
    const double L = 1000.0;
    RngStream rng(4, 0);
    auto particles = uniform_population(n, L, rng);
    const auto box = BoxD::centered(L, 0.01);
    for (int step = 0; step < 200; ++step)
        supermarket_step(particles, 0, particles.size(), box, 0.05, 1.0, rng);
    long long inside = 0;
    for (const auto& p : particles) inside += box.contains(p.x) ? 1 : 0;
    // nearly everyone has jumped at least once by now
    CHECK(static_cast<double>(inside) / n > 0.99);
}

TEST_CASE("airport: alpha = 1 injects only infected") {
    const int n = 10000;
    RngStream rng(5, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    const auto box = BoxD::centered(1000.0, 0.01);
    const auto c = airport_step(particles, 0, particles.size(), box, 5.0, 1.0, 1.0, rng);
    CHECK(c.jumps > 0);
    CHECK(c.injected_infected == c.jumps);
    CHECK(particles.size() == static_cast<std::size_t>(n));
}

TEST_CASE("airport: alpha = 0 never injects infected, I never flies") {
    const int n = 10000;
    RngStream rng(6, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    for (int i = 0; i < n / 2; ++i) particles[i].label = Label::Infected;
    const auto before = particles;
    const auto box = BoxD::centered(1000.0, 0.01);
    const auto c = airport_step(particles, 0, particles.size(), box, 5.0, 0.0, 1.0, rng);
    CHECK(c.injected_infected == 0);
    CHECK(count_labels(particles).I == n / 2);
    for (int i = 0; i < n / 2; ++i) CHECK(particles[i].x == before[i].x);
}

TEST_CASE("airport replacement labels follow the alpha mixture") {
    const int n = 40000;
    RngStream rng(7, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    const auto box = BoxD::centered(1000.0, 0.01);
    // trigger everyone: gamma1 * t >> 1
    const auto c = airport_step(particles, 0, particles.size(), box, 50.0, 0.5, 1.0, rng);
    CHECK(c.jumps > n * 0.999);
    const auto counts = count_labels(particles);
    const double sd3 = 3.0 * std::sqrt(0.5 * 0.5 * n);  // ~ 300
    CHECK(std::abs(static_cast<double>(counts.I) - 0.5 * c.jumps) < sd3);
    CHECK(std::abs(static_cast<double>(counts.S) - 0.25 * c.jumps) < sd3);
    CHECK(std::abs(static_cast<double>(counts.R) - 0.25 * c.jumps) < sd3);
    // velocity is retained by the replacement
    CHECK(counts.total() == n);
}

TEST_CASE("diffuse jet: alpha = 0 equilibrates S and R to one half") {
    const int n = 50000;
    RngStream rng(8, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    for (int step = 0; step < 100; ++step)
        diffuse_jet_step(particles, 0, particles.size(), 0.1, 0.0, 1.0, rng);
    const auto counts = count_labels(particles);
    CHECK(counts.I == 0);
    CHECK(static_cast<double>(counts.S) / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(static_cast<double>(counts.R) / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("diffuse jet: alpha = 1 absorbs into all infected") {
    const int n = 2000;
    RngStream rng(9, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    for (int step = 0; step < 200; ++step)
        diffuse_jet_step(particles, 0, particles.size(), 0.1, 1.0, 1.0, rng);
    CHECK(count_labels(particles).I == n);
}

TEST_CASE("diffuse jet: positions and velocities never move") {
    const int n = 5000;
    RngStream rng(10, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    const auto before = particles;
    diffuse_jet_step(particles, 0, particles.size(), 10.0, 0.3, 1.0, rng);
    for (int i = 0; i < n; ++i) {
        CHECK(particles[i].x == before[i].x);
        CHECK(particles[i].v == before[i].v);
    }
}

TEST_CASE("diffuse jet injection count at small rates") {
    const int n = 100000;
    RngStream rng(11, 0);
    auto particles = uniform_population(n, 1000.0, rng);
    long long injected = 0;
    for (int r = 0; r < 100; ++r) {
        for (auto& p : particles) p.label = Label::Susceptible;
        injected += diffuse_jet_step(particles, 0, particles.size(), 1e-3, 0.01, 1.0, rng)
                        .injected_infected;
    }
    // mean 1 per step
    CHECK(std::abs(static_cast<double>(injected) / 100.0 - 1.0) < 0.5);
}
