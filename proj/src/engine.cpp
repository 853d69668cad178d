#include "ksir/engine.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "ksir/epidemic.hpp"
#include "ksir/init.hpp"
#include "ksir/kinetics.hpp"
#include "ksir/perturbations.hpp"

namespace ksir {

namespace {

// RNG phase tags; stream id = mix64(phase, mix64(step, index))
constexpr std::uint64_t kPhaseInit = 0xA1;
constexpr std::uint64_t kPhaseCollide = 0xA2;
constexpr std::uint64_t kPhaseRecover = 0xA3;
constexpr std::uint64_t kPhasePerturb = 0xA4;
constexpr std::uint64_t kPhaseObserve = 0xA5;

constexpr std::size_t kChunk = 16384;  // particle-sweep chunk, one RNG stream each

std::uint64_t stream_id(std::uint64_t phase, std::uint64_t step, std::uint64_t index) {
    return mix64(phase, mix64(step, index));
}

// Runs fn(item) for item in [0, n), split contiguously across threads.
// Work per item must be independent; determinism comes from per-item RNG
// streams, not from execution order.
template <typename Fn>
void parallel_items(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const auto t = static_cast<std::size_t>(threads);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        const std::size_t lo = n * w / t;
        const std::size_t hi = n * (w + 1) / t;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

CellGrid::CellGrid(int cells, double d) : cells_per_side(cells), delta(d) {
    start.assign(cell_count() + 1, 0);
}

std::size_t CellGrid::cell_of(Vec2 x) const {
    auto cx = static_cast<int>(x.x / delta);
    auto cy = static_cast<int>(x.y / delta);
    // positions live in [0, L); guard the x == L rounding corner
    if (cx >= cells_per_side) cx = cells_per_side - 1;
    if (cy >= cells_per_side) cy = cells_per_side - 1;
    return static_cast<std::size_t>(cy) * cells_per_side + cx;
}

void stream(std::vector<Particle>& particles, std::size_t first, std::size_t last, double t_step,
            double L) {
    for (std::size_t i = first; i < last; ++i) {
        auto& p = particles[i];
        double px = p.x.x + p.v.x * t_step;
        double py = p.x.y + p.v.y * t_step;
        px -= L * std::floor(px / L);
        py -= L * std::floor(py / L);
        if (px >= L) px -= L;
        if (py >= L) py -= L;
        if (px < 0.0) px = 0.0;
        if (py < 0.0) py = 0.0;
        p.x = {px, py};
    }
}

void rebin(const std::vector<Particle>& particles, CellGrid& grid) {
    const std::size_t cells = grid.cell_count();
    grid.order.resize(particles.size());
    std::vector<std::uint32_t> count(cells, 0);
    std::vector<std::uint32_t> cell_of(particles.size());
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const auto c = static_cast<std::uint32_t>(grid.cell_of(particles[i].x));
        cell_of[i] = c;
        ++count[c];
    }
    grid.start.assign(cells + 1, 0);
    for (std::size_t c = 0; c < cells; ++c) grid.start[c + 1] = grid.start[c] + count[c];
    std::vector<std::uint32_t> cursor(grid.start.begin(), grid.start.end() - 1);
    for (std::size_t i = 0; i < particles.size(); ++i)
        grid.order[cursor[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

RunResult run(const SimConfig& cfg, const RunOptions& opts) {
    const auto& d = cfg.derived;
    if (d.cells_per_side <= 0)
        throw ConfigError(ConfigError::Code::GeometryError, "run: config was not validated");
    const int threads = std::max(1, opts.threads);

    RngStream init_rng(cfg.seed, stream_id(kPhaseInit, 0, 0));
    std::vector<Particle> particles = build_population(cfg, init_rng);
    const std::size_t n = particles.size();

    LabelCounts counts = count_labels(particles);
    CellGrid grid(d.cells_per_side, d.delta);
    const BoxD box = BoxD::centered(cfg.L, cfg.d_area_fraction);

    const auto nsteps = static_cast<long long>(std::ceil(cfg.t_end / d.t_step - 1e-9));
    const long long diag_stride = std::max<long long>(1, nsteps / 100);
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    const std::size_t n_cells = grid.cell_count();

    // mean |v - v*| over random pairs of unit vectors; self-calibrates to the
    // thermalized value through the EMA below
    double vrel_mean_est = 4.0 / std::numbers::pi;

    RunResult result;
    TimeSeries& ts = result.series;

    auto sample = [&](long long step) {
        const double t = step * d.t_step;
        const auto nn = static_cast<double>(n);
        ts.t.push_back(t);
        ts.S.push_back(static_cast<double>(counts.S) / nn);
        ts.I.push_back(static_cast<double>(counts.I) / nn);
        ts.R.push_back(static_cast<double>(counts.R) / nn);
        if (opts.observer) opts.observer(step, t, particles);
    };

    auto record_diag = [&](long long step, double collisions) {
        double e = 0, px = 0, py = 0, sxx = 0, syy = 0;
        for (const auto& p : particles) {
            e += p.v.norm2();
            px += p.v.x;
            py += p.v.y;
            sxx += p.v.x * p.v.x;
            syy += p.v.y * p.v.y;
        }
        const auto nn = static_cast<double>(n);
        auto& dg = ts.diag;
        dg.t.push_back(step * d.t_step);
        dg.energy.push_back(0.5 * e);
        dg.px.push_back(px);
        dg.py.push_back(py);
        dg.var_vx.push_back(sxx / nn - (px / nn) * (px / nn));
        dg.var_vy.push_back(syy / nn - (py / nn) * (py / nn));
        dg.collisions.push_back(collisions);

        // exact-count cross-check against the incrementally maintained tallies
        const LabelCounts fresh = count_labels(particles);
        if (fresh.S != counts.S || fresh.I != counts.I || fresh.R != counts.R) {
            std::ostringstream os;
            os << "label accounting broken at step " << step << ": counted (" << fresh.S << ","
               << fresh.I << "," << fresh.R << ") vs tallied (" << counts.S << "," << counts.I
               << "," << counts.R << ")";
            throw std::logic_error(os.str());
        }
    };

    sample(0);
    record_diag(0, 0.0);

    CollisionParams cparams;
    cparams.cross_section = cfg.cross_section;
    cparams.t_step = d.t_step;
    cparams.tau = d.tau;
    cparams.mean_occupancy = d.mean_occupancy;

    std::vector<long long> cell_accepted(n_cells), cell_candidates(n_cells),
        cell_infections(n_cells);
    std::vector<double> cell_vrel(n_cells);
    std::vector<long long> chunk_count(n_chunks);
    std::vector<AirportCounts> chunk_flow(n_chunks);

    for (long long step = 1; step <= nsteps; ++step) {
        const auto ustep = static_cast<std::uint64_t>(step);
        const long long i_begin = counts.I;

        parallel_items(n_chunks, threads, [&](std::size_t c) {
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            stream(particles, lo, hi, d.t_step, cfg.L);
        });

        rebin(particles, grid);

        cparams.vrel_mean_estimate = vrel_mean_est;
        parallel_items(n_cells, threads, [&](std::size_t c) {
            RngStream rng(cfg.seed, stream_id(kPhaseCollide, ustep, c));
            const std::span<const std::uint32_t> bucket{grid.order.data() + grid.start[c],
                                                        grid.order.data() + grid.start[c + 1]};
            auto res = collision_step(bucket, particles, cparams, rng);
            cell_accepted[c] = res.accepted;
            cell_candidates[c] = res.candidates;
            cell_vrel[c] = res.vrel_sum;
            cell_infections[c] = apply_infection(res.pairs, particles, cfg.beta, rng);
        });

        long long step_collisions = 0, step_candidates = 0, step_infections = 0;
        double step_vrel = 0;
        for (std::size_t c = 0; c < n_cells; ++c) {
            step_collisions += cell_accepted[c];
            step_candidates += cell_candidates[c];
            step_infections += cell_infections[c];
            step_vrel += cell_vrel[c];
        }

        parallel_items(n_chunks, threads, [&](std::size_t c) {
            RngStream rng(cfg.seed, stream_id(kPhaseRecover, ustep, c));
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            chunk_count[c] = apply_recovery(particles, lo, hi, cfg.gamma, d.t_step, rng);
        });
        long long step_recoveries = 0;
        for (auto v : chunk_count) step_recoveries += v;

        long long step_injected = 0;
        if (cfg.perturbation != Perturbation::None && cfg.gamma1 > 0.0) {
            parallel_items(n_chunks, threads, [&](std::size_t c) {
                RngStream rng(cfg.seed, stream_id(kPhasePerturb, ustep, c));
                const std::size_t lo = c * kChunk;
                const std::size_t hi = std::min(n, lo + kChunk);
                switch (cfg.perturbation) {
                    case Perturbation::Supermarket:
                        chunk_flow[c] = {};
                        chunk_flow[c].jumps =
                            supermarket_step(particles, lo, hi, box, cfg.gamma1, d.t_step, rng);
                        break;
                    case Perturbation::Airport:
                        chunk_flow[c] = airport_step(particles, lo, hi, box, cfg.gamma1,
                                                     cfg.alpha, d.t_step, rng);
                        break;
                    case Perturbation::DiffuseJet:
                        chunk_flow[c] = diffuse_jet_step(particles, lo, hi, cfg.gamma1, cfg.alpha,
                                                         d.t_step, rng);
                        break;
                    default: break;
                }
            });
            for (const auto& f : chunk_flow) {
                counts.S += f.r_to_s - f.s_to_i - f.s_to_r;
                counts.I += f.s_to_i + f.r_to_i;
                counts.R += f.s_to_r - f.r_to_i - f.r_to_s;
                step_injected += f.injected_infected;
            }
        }

        counts.S -= step_infections;
        counts.I += step_infections - step_recoveries;
        counts.R += step_recoveries;
        // per-step accounting identity: dI = infections - recoveries + injected
        if (counts.I - i_begin != step_infections - step_recoveries + step_injected ||
            counts.total() != static_cast<long long>(n)) {
            throw std::logic_error("per-step label accounting identity violated");
        }

        result.total_collisions += step_collisions;
        result.total_infections += step_infections;
        result.total_recoveries += step_recoveries;
        result.total_injected_infected += step_injected;

        if (step_candidates > 0) {
            const double step_mean = step_vrel / static_cast<double>(step_candidates);
            vrel_mean_est += 0.1 * (step_mean - vrel_mean_est);
        }

        if (step % cfg.sample_every == 0 || step == nsteps) sample(step);
        if (step % diag_stride == 0 || step == nsteps)
            record_diag(step, static_cast<double>(step_collisions));
    }

    (void)kPhaseObserve;
    result.final_particles = std::move(particles);
    return result;
}

}  // namespace ksir
