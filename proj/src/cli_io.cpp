#include "ksir/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ksir/engine.hpp"
#include "ksir/ode_ref.hpp"

namespace fs = std::filesystem;

namespace ksir {

namespace {

SimConfig base_config(CrossSection cs, long long n, double beta, double gamma, double lambda,
                      double t_end) {
    SimConfig cfg;
    cfg.cross_section = cs;
    cfg.N = n;
    cfg.beta = beta;
    cfg.gamma = gamma;
    cfg.lambda = lambda;
    cfg.t_end = t_end;
    return cfg;
}

Experiment free_model_figure(CrossSection cs, long long n, double beta, double gamma,
                             double lambda, double t_end) {
    Experiment e;
    e.primary = base_config(cs, n, beta, gamma, lambda, t_end);
    SimConfig conc = e.primary;
    conc.initial_condition = InitialCondition::ConcentratedDisk;
    e.variants.emplace_back("concentrated", conc);
    e.with_ode = true;
    return e;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig1",  "fig2", "fig3", "fig4L",   "fig4R",     "fig5",
            "fig6",  "fig7", "fig8top", "fig8bottom", "table1"};
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

Experiment preset_experiment(const std::string& name) {
    if (name == "fig1")
        return free_model_figure(CrossSection::Maxwellian, 1800000, 1.0, 1.0 / 20.0, 9.8, 500.0);
    if (name == "fig2")
        return free_model_figure(CrossSection::HardSphere, 180000, 0.75, 1.0 / 120.0, 49.5,
                                 4000.0);
    if (name == "fig3")
        return free_model_figure(CrossSection::Semidiscrete, 300000, 0.5, 1.0 / 75.0, 25.0,
                                 2000.0);
    if (name == "fig4L" || name == "fig4R") {
        Experiment e;
        SimConfig cfg =
            base_config(CrossSection::HardSphere, 180000, 0.7, 1.0 / 75.0, 33.5, 4000.0);
        cfg.perturbation = Perturbation::Supermarket;
        if (name == "fig4L") {
            cfg.d_area_fraction = 0.01;
        } else {
            cfg.d_area_fraction = 0.006;
            cfg.initial_condition = InitialCondition::ConcentratedDisk;
        }
        cfg.gamma1 = 1.0 / 1000.0;
        e.primary = cfg;
        for (int i : {2, 3}) {
            SimConfig v = cfg;
            v.gamma1 = 1.0 / (i * 1000.0);
            e.variants.emplace_back("g" + std::to_string(i * 1000), v);
        }
        SimConfig freec = cfg;
        freec.gamma1 = 0.0;
        freec.perturbation = Perturbation::None;
        e.variants.emplace_back("free", freec);
        return e;
    }
    if (name == "fig5") {
        Experiment e;
        SimConfig cfg =
            base_config(CrossSection::HardSphere, 180000, 0.9, 1.0 / 100.0, 33.4, 30000.0);
        cfg.perturbation = Perturbation::Airport;
        cfg.d_area_fraction = 0.01;
        cfg.alpha = 0.0;
        cfg.initial_condition = InitialCondition::ConcentratedDisk;
        cfg.gamma1 = 1.0 / 2000.0;
        e.primary = cfg;
        for (int i : {4, 6}) {
            SimConfig v = cfg;
            v.gamma1 = 1.0 / (i * 1000.0);
            e.variants.emplace_back("g" + std::to_string(i * 1000), v);
        }
        SimConfig freec = cfg;
        freec.gamma1 = 0.0;
        freec.perturbation = Perturbation::None;
        e.variants.emplace_back("free", freec);
        return e;
    }
    if (name == "fig6") {
        Experiment e;
        SimConfig cfg =
            base_config(CrossSection::HardSphere, 180000, 0.9, 1.0 / 100.0, 33.4, 60000.0);
        cfg.perturbation = Perturbation::Airport;
        cfg.d_area_fraction = 0.01;
        cfg.alpha = 2e-5;
        cfg.gamma1 = 1e-4;
        cfg.initial_condition = InitialCondition::ConcentratedDisk;
        e.primary = cfg;
        return e;
    }
    if (name == "fig7") {
        Experiment e;
        SimConfig cfg =
            base_config(CrossSection::HardSphere, 180000, 0.9, 1.0 / 80.0, 33.4, 30000.0);
        cfg.perturbation = Perturbation::Airport;
        cfg.d_area_fraction = 0.01;
        cfg.alpha = 1e-4;
        cfg.initial_condition = InitialCondition::ConcentratedDisk;
        cfg.gamma1 = 1.0 / 1000.0;
        e.primary = cfg;
        for (int i : {2, 3, 4}) {
            SimConfig v = cfg;
            v.gamma1 = 1.0 / (i * 1000.0);
            e.variants.emplace_back("g" + std::to_string(i * 1000), v);
        }
        SimConfig freec = cfg;
        freec.gamma1 = 0.0;
        freec.perturbation = Perturbation::None;
        e.variants.emplace_back("free", freec);
        return e;
    }
    if (name == "fig8top" || name == "fig8bottom") {
        Experiment e;
        SimConfig cfg =
            base_config(CrossSection::HardSphere, 200000, 0.95, 1.0 / 100.0, 29.9, 20000.0);
        cfg.perturbation = Perturbation::DiffuseJet;
        cfg.alpha = 2e-4;
        cfg.gamma1 = name == "fig8top" ? 1.0 / 2000.0 : 1.0 / 4000.0;
        e.primary = cfg;
        SimConfig conc = cfg;
        conc.initial_condition = InitialCondition::ConcentratedDisk;
        e.variants.emplace_back("concentrated", conc);
        e.with_ode = true;
        e.ode_jet = true;
        return e;
    }
    throw CliError("unknown preset: " + name);
}

SimConfig apply_scale(SimConfig cfg, double scale) {
    if (scale == 1.0) return cfg;
    if (!(scale > 0.0)) throw CliError("--scale must be positive");
    cfg.N = std::llround(static_cast<double>(cfg.N) * scale);
    cfg.L *= std::sqrt(scale);
    return cfg;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

void write_rows(std::ofstream& out, const std::vector<double>& t, const std::vector<double>& S,
                const std::vector<double>& I, const std::vector<double>& R) {
    out << "t,S,I,R\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < t.size(); ++i)
        out << t[i] << ',' << S[i] << ',' << I[i] << ',' << R[i] << '\n';
}

}  // namespace

void write_series_csv(const std::string& path, const SeriesData& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path);
    write_rows(out, s.t, s.S, s.I, s.R);
}

void write_series_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path);
    write_rows(out, ts.t, ts.S, ts.I, ts.R);
}

SeriesData read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw CliError("EmptySeries: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,S,I,R")
        throw CliError("SchemaMismatch: expected header 't,S,I,R' in " + path + ", got '" +
                       line + "'");
    SeriesData s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[4];
        char comma;
        if (!(row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3]))
            throw CliError("SchemaMismatch: bad row in " + path + ": " + line);
        s.t.push_back(v[0]);
        s.S.push_back(v[1]);
        s.I.push_back(v[2]);
        s.R.push_back(v[3]);
    }
    if (s.t.empty()) throw CliError("EmptySeries: " + path);
    return s;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

namespace {

double interp(const std::vector<double>& t, const std::vector<double>& y, double x) {
    auto it = std::lower_bound(t.begin(), t.end(), x);
    if (it == t.begin()) return y.front();
    if (it == t.end()) return y.back();
    const auto i = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
}

Fractions tail_average(const SeriesData& s) {
    const double t0 = s.t.front() + 0.9 * (s.t.back() - s.t.front());
    double sum_s = 0, sum_i = 0, sum_r = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < t0) continue;
        sum_s += s.S[i];
        sum_i += s.I[i];
        sum_r += s.R[i];
        ++n;
    }
    const auto nn = static_cast<double>(std::max<std::size_t>(n, 1));
    return {sum_s / nn, sum_i / nn, sum_r / nn};
}

}  // namespace

CompareReport compare(const SeriesData& a, const SeriesData& b) {
    if (a.t.empty() || b.t.empty()) throw CliError("EmptySeries");
    const double lo = std::max(a.t.front(), b.t.front());
    const double hi = std::min(a.t.back(), b.t.back());
    if (!(hi >= lo)) throw CliError("SchemaMismatch: series do not overlap in time");

    CompareReport rep;
    const int grid = 1000;
    for (int k = 0; k <= grid; ++k) {
        const double x = lo + (hi - lo) * k / grid;
        rep.max_dS = std::max(rep.max_dS, std::abs(interp(a.t, a.S, x) - interp(b.t, b.S, x)));
        rep.max_dI = std::max(rep.max_dI, std::abs(interp(a.t, a.I, x) - interp(b.t, b.I, x)));
        rep.max_dR = std::max(rep.max_dR, std::abs(interp(a.t, a.R, x) - interp(b.t, b.R, x)));
    }
    rep.tail_a = tail_average(a);
    rep.tail_b = tail_average(b);
    return rep;
}

CompareReport compare_files(const std::string& path_a, const std::string& path_b) {
    return compare(read_series_csv(path_a), read_series_csv(path_b));
}

// ---------------------------------------------------------------------------
// experiments
// ---------------------------------------------------------------------------

void write_table1_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path);
    OdeParams p;
    p.beta = 3.0 / 40.0;
    p.gamma = 1.0 / 30.0;
    p.alpha = 0.01;
    p.m = 1.0;
    out << "gamma1_inv,S,I,R\n" << std::setprecision(9);
    for (double inv : {10.0, 20.0, 50.0, 100.0, 300.0, 1000.0, 5000.0, 10000.0}) {
        p.gamma1 = 1.0 / inv;
        const OdeState s = jet_stationary(p);
        out << inv << ',' << s.S << ',' << s.I << ',' << s.R << '\n';
    }
}

namespace {

void write_ode_series(const std::string& path, const SimConfig& cfg, bool jet) {
    OdeParams p;
    p.beta = cfg.beta;
    p.gamma = cfg.gamma;
    p.m = 1.0 / cfg.derived.tau;
    p.gamma1 = jet ? cfg.gamma1 : 0.0;
    p.alpha = cfg.alpha;
    const double dt = default_dt(p);
    const auto store =
        std::max<long long>(1, static_cast<long long>(cfg.t_end / dt) / 4000);
    const OdeRhs rhs = jet ? OdeRhs(jet_rhs) : OdeRhs(sir_rhs);
    const auto traj =
        integrate(rhs, {1.0 - cfg.i0, cfg.i0, 0.0}, p, cfg.t_end, dt, store);
    SeriesData s;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        s.t.push_back(traj.t[i]);
        s.S.push_back(traj.y[i].S);
        s.I.push_back(traj.y[i].I);
        s.R.push_back(traj.y[i].R);
    }
    write_series_csv(path, s);
}

void write_diagnostics_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path);
    out << "t,energy,px,py,var_vx,var_vy,collisions\n" << std::setprecision(17);
    const auto& d = ts.diag;
    for (std::size_t i = 0; i < d.t.size(); ++i)
        out << d.t[i] << ',' << d.energy[i] << ',' << d.px[i] << ',' << d.py[i] << ','
            << d.var_vx[i] << ',' << d.var_vy[i] << ',' << d.collisions[i] << '\n';
}

void write_plot_script(const std::string& path, const std::vector<std::string>& series_files,
                       bool with_ode) {
    std::ofstream out(path);
    if (!out) throw CliError("cannot write " + path);
    out << "# gnuplot script; run:  gnuplot plot.gp\n"
        << "set datafile separator ','\n"
        << "set key outside\n"
        << "set xlabel 't'\n"
        << "set ylabel 'fraction'\n"
        << "set yrange [0:1]\n"
        << "set terminal pngcairo size 1200,700\n"
        << "set output 'figure.png'\n"
        << "plot \\\n";
    bool first = true;
    auto add = [&](const std::string& file, const std::string& tag, const char* dash) {
        for (int col = 2; col <= 4; ++col) {
            static const char* names[] = {"S", "I", "R"};
            if (!first) out << ", \\\n";
            first = false;
            out << "  '" << file << "' using 1:" << col << " with lines " << dash << " title '"
                << names[col - 2] << (tag.empty() ? "" : " (" + tag + ")") << "'";
        }
    };
    for (const auto& f : series_files) {
        std::string tag;
        if (f != "series.csv") {
            tag = f.substr(std::string("series_").size());
            tag = tag.substr(0, tag.size() - 4);
        }
        add(f, tag, f == "series.csv" ? "" : "dashtype 2");
    }
    if (with_ode) add("series_ode.csv", "ode", "dashtype 3");
    out << "\n";
}

}  // namespace

int run_experiment(const std::string& preset_or_path, const std::string& out_dir,
                   const RunExperimentOptions& opts) {
    std::vector<fs::path> written;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
    };
    try {
        fs::create_directories(out_dir);
        const auto in_dir = [&](const std::string& name) {
            fs::path p = fs::path(out_dir) / name;
            written.push_back(p);
            return p.string();
        };

        if (preset_or_path == "table1") {
            write_table1_csv(in_dir("table1.csv"));
            return 0;
        }

        Experiment exp;
        if (is_preset(preset_or_path)) {
            exp = preset_experiment(preset_or_path);
        } else {
            exp.primary = parse_config_file(preset_or_path);
        }

        auto finalize = [&](SimConfig cfg) {
            cfg = apply_scale(cfg, opts.scale);
            if (opts.seed) cfg.seed = *opts.seed;
            for (const auto& ov : opts.overrides) {
                const auto eq = ov.find('=');
                if (eq == std::string::npos)
                    throw CliError("override must be key=value: " + ov);
                apply_config_key(cfg, ov.substr(0, eq), ov.substr(eq + 1));
            }
            return validate_config(cfg);
        };

        const SimConfig primary = finalize(exp.primary);
        {
            std::ofstream out(in_dir("config.resolved"));
            if (!out) throw CliError("cannot write config.resolved");
            write_config(out, primary);
        }

        RunOptions ropts;
        ropts.threads = opts.threads;

        std::vector<std::string> series_files{"series.csv"};
        const RunResult primary_result = run(primary, ropts);
        write_series_csv(in_dir("series.csv"), primary_result.series);
        write_diagnostics_csv(in_dir("diagnostics.csv"), primary_result.series);

        for (const auto& [tag, vcfg] : exp.variants) {
            const RunResult r = run(finalize(vcfg), ropts);
            const std::string name = "series_" + tag + ".csv";
            write_series_csv(in_dir(name), r.series);
            series_files.push_back(name);
        }
        if (exp.with_ode)
            write_ode_series(in_dir("series_ode.csv"), primary, exp.ode_jet);

        write_plot_script(in_dir("plot.gp"), series_files, exp.with_ode);
        return 0;
    } catch (const std::exception& e) {
        cleanup();
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ksir
