#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksir/core.hpp"
#include "ksir/observables.hpp"

namespace ksir {

class CliError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One figure panel: a primary DSMC run (-> series.csv), optional tagged
// variant runs (-> series_<tag>.csv) and an optional mean-field reference
// trajectory with m = 1/tau (-> series_ode.csv).
struct Experiment {
    SimConfig primary;
    std::vector<std::pair<std::string, SimConfig>> variants;
    bool with_ode = false;
    bool ode_jet = false;  // jet_rhs instead of sir_rhs
};

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);

// Experiment for a preset name at full reference scale.
Experiment preset_experiment(const std::string& name);

// Applies --scale f: N -> N*f and L -> L*sqrt(f), preserving density,
// occupancy and every rate; physics is unchanged up to Monte Carlo noise
// and the domain extent.
SimConfig apply_scale(SimConfig cfg, double scale);

struct RunExperimentOptions {
    double scale = 1.0;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;  // key=value pairs
};

// Runs a preset or a config file and writes series.csv, diagnostics.csv,
// config.resolved and plot.gp into out_dir ("table1" writes table1.csv).
// Returns the process exit status; partial outputs are removed on failure.
int run_experiment(const std::string& preset_or_path, const std::string& out_dir,
                   const RunExperimentOptions& opts);

// Writes the 8-row stationary table (gamma1_inv, S, I, R) as CSV.
void write_table1_csv(const std::string& path);

struct SeriesData {
    std::vector<double> t, S, I, R;
};

void write_series_csv(const std::string& path, const SeriesData& s);
void write_series_csv(const std::string& path, const TimeSeries& ts);
// Throws SchemaMismatch / EmptySeries (CliError) on malformed input.
SeriesData read_series_csv(const std::string& path);

struct CompareReport {
    double max_dS = 0.0, max_dI = 0.0, max_dR = 0.0;
    // averages over the last 10% of each series' own horizon
    Fractions tail_a, tail_b;
};

CompareReport compare(const SeriesData& a, const SeriesData& b);
CompareReport compare_files(const std::string& path_a, const std::string& path_b);

}  // namespace ksir
