#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ksir/observables.hpp"

using namespace ksir;

namespace {

double gauss(RngStream& rng, double sigma) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TEST_CASE("fractions from labels") {
    std::vector<Particle> p(1000);
    for (auto& q : p) q.label = Label::Susceptible;
    auto f = sample_fractions(p);
    CHECK(f.S == 1.0);
    CHECK(f.I == 0.0);

    for (int i = 0; i < 5; ++i) p[i].label = Label::Infected;
    f = sample_fractions(p);
    CHECK(f.S == 0.995);
    CHECK(f.I == 0.005);
    CHECK(f.S + f.I + f.R == 1.0);
}

TEST_CASE("velocity moments of a synthetic Maxwellian population") {
    const int n = 200000;
    const double sigma = std::sqrt(0.5);
    RngStream rng(1, 0);
    std::vector<Particle> p(n);
    for (auto& q : p) q.v = {gauss(rng, sigma), gauss(rng, sigma)};
    RngStream mrng(2, 0);
    const auto m = velocity_moments(p, mrng);
    CHECK(m.mean.x == doctest::Approx(0.0).epsilon(1).scale(0.01));
    CHECK(m.mean.y == doctest::Approx(0.0).epsilon(1).scale(0.01));
    CHECK(m.var_x == doctest::Approx(0.5).epsilon(0.02));
    CHECK(m.var_y == doctest::Approx(0.5).epsilon(0.02));
    // <|v|> = sigma sqrt(pi/2)
    CHECK(m.mean_speed == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(0.01));
    // relative velocity is Gaussian with doubled per-component variance
    CHECK(m.mean_rel_speed == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(0.02));
}

TEST_CASE("velocity moments of a unit-speed population") {
    RngStream rng(3, 0);
    std::vector<Particle> p(50000);
    for (auto& q : p) q.v = rng.unit_vector();
    RngStream mrng(4, 0);
    const auto m = velocity_moments(p, mrng);
    CHECK(m.mean_speed == doctest::Approx(1.0).epsilon(1e-12));
    // mean relative speed of two uniform unit vectors is 4/pi
    CHECK(m.mean_rel_speed == doctest::Approx(4.0 / std::numbers::pi).epsilon(0.02));
}

TEST_CASE("mean free time estimator") {
    std::vector<double> collisions(200, 150.0);
    // tau = N t / (2 c) = 12000 * 2.5 / 300
    CHECK(mean_free_time_estimate(collisions, 12000, 2.5) == doctest::Approx(100.0));

    std::vector<double> few(50, 150.0);
    CHECK_THROWS_AS(mean_free_time_estimate(few, 12000, 2.5), ObservableError);

    std::vector<double> zeros(200, 0.0);
    CHECK_THROWS_AS(mean_free_time_estimate(zeros, 12000, 2.5), ObservableError);
}

TEST_CASE("spatial profile bins counts and infected fractions") {
    std::vector<Particle> p(4);
    p[0].x = {0.5, 0.5};
    p[1].x = {0.6, 0.4};
    p[1].label = Label::Infected;
    p[2].x = {9.5, 9.5};
    p[3].x = {9.5, 0.5};
    const auto prof = spatial_profile(p, 10, 10.0);
    CHECK(prof.counts[0] == 2);
    CHECK(prof.infected_frac[0] == 0.5);
    CHECK(prof.counts[9 * 10 + 9] == 1);
    CHECK(prof.counts[9] == 1);
    long long total = 0;
    for (auto c : prof.counts) total += c;
    CHECK(total == 4);
}
