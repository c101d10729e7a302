// Command-line front end: equilibrium reports, trajectory simulation, phase
// portraits, basin geometry, parameter sweeps, and the entry-exit table.
// Exit codes: 0 success, 2 config error, 3 integration failure, 4 regime
// precondition unmet.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "animfa/animfa.hpp"
#include "animfa/responses_json.hpp"
#include "svg.hpp"

namespace {

using namespace animfa;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double v) {
    if (v == 0.0) return "0";  // normalize negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Options shared by the model-based subcommands.
struct Common {
    std::string model;
    std::string config;
    double tau = 0.0, omega = 0.0, zeta = 0.0, xi = 0.0, epsilon = 0.0;
    std::string out;
    std::string format = "csv";
    CLI::Option* omega_opt = nullptr;
    CLI::Option* zeta_opt = nullptr;
    CLI::Option* xi_opt = nullptr;
    CLI::Option* eps_opt = nullptr;

    bool has_epsilon() const { return eps_opt && eps_opt->count() > 0; }
};

void add_model_options(CLI::App* cmd, Common& c, bool tau_required = true) {
    cmd->add_option("--model", c.model, "builtin model: rlad|linear_break|asis|aid");
    cmd->add_option("--config", c.config,
                    "custom response JSON file {\"fbr\":[c0,c1,...],\"fcr\":[...]}");
    auto* tau = cmd->add_option("--tau", c.tau, "effective infection rate tau");
    if (tau_required) tau->required();
    c.omega_opt = cmd->add_option("--omega", c.omega, "effective link-breaking rate zeta/xi");
    c.zeta_opt = cmd->add_option("--zeta", c.zeta, "scaled link-breaking rate");
    c.xi_opt = cmd->add_option("--xi", c.xi, "scaled link-creation rate");
}

void add_epsilon_option(CLI::App* cmd, Common& c) {
    c.eps_opt = cmd->add_option("--epsilon", c.epsilon,
                                "timescale separation: run with zeta*eps, xi*eps");
}

void add_output_options(CLI::App* cmd, Common& c, const char* default_format) {
    cmd->add_option("--out", c.out, "output path (default stdout)");
    c.format = default_format;
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
}

FunctionalResponsePair make_responses(const Common& c) {
    if (!c.model.empty() && !c.config.empty())
        throw ConfigError("give --model or --config, not both");
    if (!c.config.empty()) return from_json_string(read_file(c.config));
    if (c.model.empty()) throw ConfigError("one of --model or --config is required");
    const auto b = builtin_from_string(c.model);
    if (!b) throw ConfigError("unknown model '" + c.model + "'");
    return builtin(*b);
}

ModelParams make_params(const Common& c) {
    const bool has_omega = c.omega_opt->count() > 0;
    const bool has_zeta = c.zeta_opt->count() > 0;
    const bool has_xi = c.xi_opt->count() > 0;
    if (has_omega && (has_zeta || has_xi))
        throw ConfigError("give either --omega or the pair --zeta --xi, not both");
    if (has_omega) return ModelParams::from_omega(c.tau, c.omega);
    if (has_zeta && has_xi) return ModelParams(c.tau, c.zeta, c.xi);
    throw ConfigError("link rates required: --omega, or both --zeta and --xi");
}

std::string model_name(const Common& c) { return c.config.empty() ? c.model : "custom"; }

std::string json_eigenvalues(const StabilityReport& rep) {
    std::string s = "[[" + g17(rep.eigenvalues[0].real()) + ", " +
                    g17(rep.eigenvalues[0].imag()) + "], [" + g17(rep.eigenvalues[1].real()) +
                    ", " + g17(rep.eigenvalues[1].imag()) + "]]";
    return s;
}

// ---------------------------------------------------------------- equilibria

struct AnalyzedEquilibria {
    Equilibrium dfe_eq;
    DfeCaseReport dfe_rep;
    std::vector<Equilibrium> endemic;
    std::vector<StabilityReport> endemic_reps;
};

AnalyzedEquilibria analyze(const ModelParams& p, const FunctionalResponsePair& fr) {
    AnalyzedEquilibria a;
    a.dfe_eq = dfe(p, fr);
    a.dfe_rep = dfe_case_analysis(p, fr);
    a.endemic = endemic_equilibria(p, fr);
    for (const auto& eq : a.endemic) a.endemic_reps.push_back(classify(p, fr, eq));
    return a;
}

bool is_stable(Classification c) {
    return c == Classification::stable_node || c == Classification::stable_spiral;
}

std::string equilibria_json(const Common& c, const ModelParams& p,
                            const AnalyzedEquilibria& a, std::optional<double> r0_value,
                            bool include_aid_r0, double r0_aid_value) {
    std::string s = "{\n";
    s += "  \"model\": \"" + model_name(c) + "\",\n";
    s += "  \"tau\": " + g17(p.tau) + ",\n";
    s += "  \"omega\": " + g17(p.omega) + ",\n";
    s += "  \"zeta\": " + g17(p.zeta) + ",\n";
    s += "  \"xi\": " + g17(p.xi) + ",\n";
    s += "  \"r0\": " + (r0_value ? g17(*r0_value) : std::string("\"not_applicable\"")) + ",\n";
    if (include_aid_r0) s += "  \"r0_aid\": " + g17(r0_aid_value) + ",\n";
    s += "  \"equilibria\": [\n";
    s += "    {\"kind\": \"dfe\", \"case\": " + std::to_string(a.dfe_rep.case_id) +
         ", \"y\": 0, \"z\": " +
         (a.dfe_eq.z_is_free ? std::string("\"free_variable\"") : g17(a.dfe_eq.z)) +
         ", \"eigenvalues\": " + json_eigenvalues(a.dfe_rep.report) +
         ", \"classification\": \"" + std::string(to_string(a.dfe_rep.report.classification)) +
         "\"}";
    for (std::size_t i = 0; i < a.endemic.size(); ++i) {
        const auto& eq = a.endemic[i];
        const auto& rep = a.endemic_reps[i];
        s += ",\n    {\"kind\": \"endemic\", \"y\": " + g17(eq.y) + ", \"z\": " + g17(eq.z) +
             ", \"multiplicity\": " + std::to_string(eq.multiplicity) +
             ", \"eigenvalues\": " + json_eigenvalues(rep) + ", \"classification\": \"" +
             std::string(to_string(rep.classification)) + "\"}";
    }
    s += "\n  ]\n}\n";
    return s;
}

int run_equilibria(const Common& c) {
    if (c.format != "json") throw ConfigError("equilibria emits json");
    const auto fr = make_responses(c);
    const auto p = make_params(c);
    const auto a = analyze(p, fr);
    write_output(c.out, equilibria_json(c, p, a, r0(p, fr), c.model == "aid", r0_aid(p)));
    return 0;
}

int run_r0(const Common& c) {
    if (c.format != "json") throw ConfigError("r0 emits json");
    const auto fr = make_responses(c);
    const auto p = make_params(c);
    const auto r = r0(p, fr);
    std::string s = "{\n";
    s += "  \"model\": \"" + model_name(c) + "\",\n";
    s += "  \"tau\": " + g17(p.tau) + ",\n";
    s += "  \"omega\": " + g17(p.omega) + ",\n";
    s += "  \"r0\": " + (r ? g17(*r) : std::string("\"not_applicable\""));
    if (c.model == "aid") s += ",\n  \"r0_aid\": " + g17(r0_aid(p));
    s += "\n}\n";
    write_output(c.out, s);
    return 0;
}

// ------------------------------------------------------------------ simulate

struct SimulateOptions {
    double y0 = 0.0, z0 = 0.0;
    double t_end = 0.0;
    double rtol = 1e-8, atol = 1e-10, max_step = 0.0;
    int samples = 0;
};

std::string trajectory_csv(const Trajectory& traj) {
    std::string s = "t,y,z\n";
    for (const auto& row : traj.samples)
        s += g17(row.t) + "," + g17(row.y) + "," + g17(row.z) + "\n";
    return s;
}

void draw_equilibria(svg::Canvas& canvas, const AnalyzedEquilibria& a) {
    if (!a.dfe_eq.z_is_free) {
        if (is_stable(a.dfe_rep.report.classification))
            canvas.marker_stable(0.0, a.dfe_eq.z);
        else
            canvas.marker_unstable(0.0, a.dfe_eq.z);
    }
    for (std::size_t i = 0; i < a.endemic.size(); ++i) {
        if (is_stable(a.endemic_reps[i].classification))
            canvas.marker_stable(a.endemic[i].y, a.endemic[i].z);
        else
            canvas.marker_unstable(a.endemic[i].y, a.endemic[i].z);
    }
}

void draw_critical_manifold(svg::Canvas& canvas, double tau) {
    if (tau <= 1.0) return;
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i <= 256; ++i) {
        const double z = 1.0 / tau + (1.0 - 1.0 / tau) * i / 256.0;
        pts.push_back({(tau * z - 1.0) / (tau * z), z});
    }
    canvas.polyline(pts, "black", 2.0);
}

Trajectory simulate_one(const Common& c, const ModelParams& p,
                        const FunctionalResponsePair& fr, const State& s0,
                        const SimulateOptions& so) {
    IntegratorConfig cfg;
    cfg.rtol = so.rtol;
    cfg.atol = so.atol;
    cfg.max_step = so.max_step;
    cfg.t_end = so.t_end;
    if (so.samples > 0) {
        cfg.sample_times.reserve(so.samples);
        for (int i = 0; i < so.samples; ++i)
            cfg.sample_times.push_back(so.t_end * (i + 1.0) / so.samples);
        cfg.sample_times.insert(cfg.sample_times.begin(), 0.0);
    }
    Trajectory traj;
    if (c.has_epsilon()) {
        if (so.samples > 0)
            throw ConfigError("--samples is not supported together with --epsilon "
                              "(slow-fast runs record every accepted step)");
        SlowFastParams sf(p, c.epsilon);
        traj = simulate_slowfast(sf, fr, s0, cfg).trajectory;
    } else {
        traj = integrate(p, fr, s0, cfg);
    }
    if (traj.terminal == Terminal::step_failure)
        throw IntegrationError("step size underflow (stiffness beyond tolerances)");
    return traj;
}

int run_simulate(const Common& c, const SimulateOptions& so) {
    const auto fr = make_responses(c);
    const auto p = make_params(c);
    const State s0(so.y0, so.z0);
    const auto traj = simulate_one(c, p, fr, s0, so);

    if (c.format == "csv") {
        write_output(c.out, trajectory_csv(traj));
    } else if (c.format == "svg") {
        svg::Canvas canvas;
        if (c.has_epsilon()) draw_critical_manifold(canvas, p.tau);
        std::vector<std::array<double, 2>> pts;
        pts.reserve(traj.samples.size());
        for (const auto& row : traj.samples) pts.push_back({row.y, row.z});
        canvas.polyline(pts, "steelblue", 2.0);
        draw_equilibria(canvas, analyze(p, fr));
        canvas.marker_start(so.y0, so.z0);
        write_output(c.out, canvas.finish());
    } else {
        throw ConfigError("simulate emits csv or svg");
    }
    return 0;
}

// ------------------------------------------------------------ phase portrait

int run_phase_portrait(const Common& c, const SimulateOptions& so, int grid) {
    if (c.format != "svg") throw ConfigError("phase-portrait emits svg");
    if (grid < 1) throw ConfigError("--grid must be >= 1");
    const auto fr = make_responses(c);
    const auto p = make_params(c);

    svg::Canvas canvas;
    if (c.has_epsilon()) draw_critical_manifold(canvas, p.tau);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const State s0((i + 0.5) / grid, (j + 0.5) / grid);
            const auto traj = simulate_one(c, p, fr, s0, so);
            std::vector<std::array<double, 2>> pts;
            pts.reserve(traj.samples.size());
            for (const auto& row : traj.samples) pts.push_back({row.y, row.z});
            canvas.polyline(pts, "steelblue", 1.2);
            canvas.marker_special(s0.y(), s0.z(), "#999999");
        }
    }
    draw_equilibria(canvas, analyze(p, fr));
    write_output(c.out, canvas.finish());
    return 0;
}

// --------------------------------------------------------------------- basin

std::string roa_json(const RegionOfAttraction& roa) {
    std::string s = "{\n";
    s += "  \"P\": [[" + g17(roa.P.m11) + ", " + g17(roa.P.m12) + "], [" + g17(roa.P.m21) +
         ", " + g17(roa.P.m22) + "]],\n";
    s += "  \"c_star\": " + g17(roa.c_star) + ",\n";
    s += "  \"center\": [" + g17(roa.center.y()) + ", " + g17(roa.center.z()) + "]\n";
    s += "}\n";
    return s;
}

std::vector<std::array<double, 2>> roa_ellipse(const RegionOfAttraction& roa) {
    const auto e = animfa::detail::sym_eigen(roa.P);
    std::vector<std::array<double, 2>> pts;
    for (int k = 0; k <= 256; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 256;
        const double w1 = std::sqrt(roa.c_star / e.mu1) * std::cos(th);
        const double w2 = std::sqrt(roa.c_star / e.mu2) * std::sin(th);
        pts.push_back({roa.center.y() + w1 * e.v1[0] + w2 * e.v2[0],
                       roa.center.z() + w1 * e.v1[1] + w2 * e.v2[1]});
    }
    return pts;
}

int run_basin(const Common& c) {
    if (c.format == "json") throw ConfigError("basin emits csv (+json files) or svg");
    if (c.out.empty()) throw ConfigError("basin writes several files; --out prefix required");
    const auto fr = make_responses(c);
    const auto p = make_params(c);
    const auto a = analyze(p, fr);

    std::vector<Equilibrium> stable;
    if (!a.dfe_eq.z_is_free && is_stable(a.dfe_rep.report.classification))
        stable.push_back(a.dfe_eq);
    std::optional<Equilibrium> saddle_eq;
    for (std::size_t i = 0; i < a.endemic.size(); ++i) {
        if (is_stable(a.endemic_reps[i].classification)) stable.push_back(a.endemic[i]);
        if (a.endemic_reps[i].classification == Classification::saddle && !saddle_eq)
            saddle_eq = a.endemic[i];
    }
    if (stable.size() < 2)
        throw RegimeError("no bistable regime at these parameters (" +
                          std::to_string(stable.size()) + " stable equilibria)");
    if (!saddle_eq) throw RegimeError("no saddle separating the stable equilibria");

    const auto sep = separatrix(p, fr, *saddle_eq);
    std::string sep_csv = "y,z\n";
    for (const auto& pt : sep.polyline) sep_csv += g17(pt[0]) + "," + g17(pt[1]) + "\n";
    write_output(c.out + "_separatrix.csv", sep_csv);

    std::vector<RegionOfAttraction> roas;
    for (std::size_t k = 0; k < stable.size(); ++k) {
        roas.push_back(estimate_roa(p, fr, stable[k]));
        write_output(c.out + "_roa_" + std::to_string(k) + ".json", roa_json(roas.back()));
    }

    if (c.format == "svg") {
        svg::Canvas canvas;
        for (const auto& roa : roas) canvas.polyline(roa_ellipse(roa), "orange", 2.0);
        canvas.polyline(sep.polyline, "#7fc4dd", 2.5);
        draw_equilibria(canvas, a);
        write_output(c.out + ".svg", canvas.finish());
    }
    return 0;
}

// --------------------------------------------------------------------- sweep

struct Range {
    double lo = 0.0, hi = 0.0;
};

Range parse_range(const std::string& text) {
    Range r;
    char trailing = '\0';
    if (std::sscanf(text.c_str(), "%lf:%lf%c", &r.lo, &r.hi, &trailing) != 2 ||
        !(r.lo > 0.0) || !(r.hi >= r.lo))
        throw ConfigError("malformed range '" + text + "' (want MIN:MAX with 0 < MIN <= MAX)");
    return r;
}

int run_sweep(const Common& c, const std::string& tau_range, const std::string& omega_range,
              int grid, int jobs) {
    const auto fr = make_responses(c);
    if (grid < 2) throw ConfigError("--grid must be >= 2");
    const Range tr = parse_range(tau_range);
    const Range om = parse_range(omega_range);

    auto value = [grid](const Range& r, int i) {
        return r.lo + (r.hi - r.lo) * i / (grid - 1);
    };

    const int cells = grid * grid;
    std::vector<std::string> rows(cells);
    auto worker = [&](int begin, int step) {
        for (int idx = begin; idx < cells; idx += step) {
            const double tau = value(tr, idx / grid);
            const double omega = value(om, idx % grid);
            const ModelParams p = ModelParams::from_omega(tau, omega);
            const auto r = r0(p, fr);
            const auto eqs = endemic_equilibria(p, fr);
            const auto drep = dfe_case_analysis(p, fr);
            std::string ee_classes;
            for (std::size_t k = 0; k < eqs.size(); ++k) {
                if (k) ee_classes += ';';
                ee_classes += to_string(classify(p, fr, eqs[k]).classification);
            }
            rows[idx] = g17(tau) + "," + g17(omega) + "," +
                        (r ? g17(*r) : std::string("not_applicable")) + "," +
                        std::to_string(eqs.size()) + "," +
                        std::string(to_string(drep.report.classification)) + "," + ee_classes;
        }
    };

    if (jobs < 1) jobs = 1;
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t, jobs);
        for (auto& th : pool) th.join();
    }

    std::string csv = "tau,omega,r0,num_ee,dfe_class,ee_classes\n";
    for (const auto& row : rows) csv += row + "\n";
    write_output(c.out, csv);
    return 0;
}

// ---------------------------------------------------------------- entry-exit

int run_entry_exit(const Common& c, double tau, const std::vector<double>& z_in,
                   double y_thresh) {
    if (!(tau > 1.0)) throw ConfigError("entry-exit needs --tau > 1");
    if (z_in.empty()) throw ConfigError("at least one --z-in required");
    for (const double z : z_in)
        if (!(z >= 0.0 && z < 1.0 / tau))
            throw ConfigError("z_in = " + std::to_string(z) + " not in [0, 1/tau)");

    // the map itself is independent of zeta and xi; they only shape the
    // measured-validation runs
    const bool has_rates = c.omega_opt->count() || c.zeta_opt->count() || c.xi_opt->count();
    Common cc = c;
    cc.tau = tau;
    const ModelParams p = has_rates ? make_params(cc) : ModelParams(tau, 1.0, 1.0);
    const auto fr = builtin(BuiltinModel::linear_break);

    std::string csv = "tau,z_in,z_out_predicted,z_out_measured,epsilon\n";
    for (const double z : z_in) {
        const double pred = entry_exit(tau, z);
        std::string measured, eps_cell;
        if (c.has_epsilon()) {
            eps_cell = g17(c.epsilon);
            SlowFastParams sf(p, c.epsilon);
            IntegratorConfig cfg;
            cfg.t_end = (std::log((1.0 - z) / (1.0 - pred)) + 3.0) / (p.xi * c.epsilon) + 100.0;
            const auto run = simulate_slowfast(sf, fr, State(y_thresh, z), cfg, y_thresh);
            if (run.trajectory.terminal == Terminal::step_failure)
                throw IntegrationError("step size underflow in measured run");
            if (run.exit_z) measured = g17(*run.exit_z);
        }
        csv += g17(tau) + "," + g17(z) + "," + g17(pred) + "," + measured + "," + eps_cell + "\n";
    }
    write_output(c.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar prevalence/link-density dynamics of SIS epidemics on "
                 "adaptively rewiring contact networks"};
    app.require_subcommand(1);

    Common ceq, cr0, csim, cpp, cbasin, csweep, cee;
    SimulateOptions so_sim, so_pp;
    int pp_grid = 4;
    std::string sweep_tau_range, sweep_omega_range;
    int sweep_grid = 21;
    int sweep_jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (sweep_jobs < 1) sweep_jobs = 1;
    double ee_tau = 0.0, ee_y_thresh = 1e-3;
    std::vector<double> ee_z_in;

    auto* cmd_eq = app.add_subcommand("equilibria",
                                      "disease-free and endemic equilibria with stability");
    add_model_options(cmd_eq, ceq);
    add_output_options(cmd_eq, ceq, "json");

    auto* cmd_r0 = app.add_subcommand("r0", "basic reproduction number");
    add_model_options(cmd_r0, cr0);
    add_output_options(cmd_r0, cr0, "json");

    auto* cmd_sim = app.add_subcommand("simulate", "integrate one trajectory");
    add_model_options(cmd_sim, csim);
    add_epsilon_option(cmd_sim, csim);
    cmd_sim->add_option("--y0", so_sim.y0, "initial prevalence")->required();
    cmd_sim->add_option("--z0", so_sim.z0, "initial link density")->required();
    cmd_sim->add_option("--t-end", so_sim.t_end, "time horizon")->required();
    cmd_sim->add_option("--rtol", so_sim.rtol, "relative tolerance");
    cmd_sim->add_option("--atol", so_sim.atol, "absolute tolerance");
    cmd_sim->add_option("--max-step", so_sim.max_step, "step size cap");
    cmd_sim->add_option("--samples", so_sim.samples,
                        "number of uniform sample times (0 = every accepted step)");
    add_output_options(cmd_sim, csim, "csv");

    auto* cmd_pp = app.add_subcommand("phase-portrait",
                                      "orbits from a lattice of initial conditions");
    add_model_options(cmd_pp, cpp);
    add_epsilon_option(cmd_pp, cpp);
    cmd_pp->add_option("--t-end", so_pp.t_end, "time horizon per orbit");
    cmd_pp->add_option("--grid", pp_grid, "starts per axis");
    cmd_pp->add_option("--rtol", so_pp.rtol, "relative tolerance");
    cmd_pp->add_option("--atol", so_pp.atol, "absolute tolerance");
    add_output_options(cmd_pp, cpp, "svg");

    auto* cmd_basin = app.add_subcommand(
        "basin", "separatrix and Lyapunov attraction regions of a bistable regime");
    add_model_options(cmd_basin, cbasin);
    add_output_options(cmd_basin, cbasin, "csv");

    auto* cmd_sweep = app.add_subcommand("sweep", "regime map over a (tau, omega) grid");
    cmd_sweep->add_option("--model", csweep.model, "builtin model");
    cmd_sweep->add_option("--config", csweep.config, "custom response JSON file");
    cmd_sweep->add_option("--tau-range", sweep_tau_range, "tau range MIN:MAX")->required();
    cmd_sweep->add_option("--omega-range", sweep_omega_range, "omega range MIN:MAX")->required();
    cmd_sweep->add_option("--grid", sweep_grid, "values per axis");
    cmd_sweep->add_option("--jobs", sweep_jobs, "worker threads");
    cmd_sweep->add_option("--out", csweep.out, "output path (default stdout)");

    auto* cmd_ee = app.add_subcommand("entry-exit",
                                      "delayed-loss-of-stability exit points near y = 0");
    cmd_ee->add_option("--tau", ee_tau, "effective infection rate (> 1)")->required();
    cmd_ee->add_option("--z-in", ee_z_in, "entry link densities in [0, 1/tau)")->required();
    cee.omega_opt = cmd_ee->add_option("--omega", cee.omega, "effective link-breaking rate");
    cee.zeta_opt = cmd_ee->add_option("--zeta", cee.zeta, "scaled link-breaking rate");
    cee.xi_opt = cmd_ee->add_option("--xi", cee.xi, "scaled link-creation rate");
    add_epsilon_option(cmd_ee, cee);
    cmd_ee->add_option("--y-thresh", ee_y_thresh, "slab half-width for measured runs");
    cmd_ee->add_option("--out", cee.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_eq->parsed()) return run_equilibria(ceq);
        if (cmd_r0->parsed()) return run_r0(cr0);
        if (cmd_sim->parsed()) return run_simulate(csim, so_sim);
        if (cmd_pp->parsed()) {
            if (so_pp.t_end <= 0.0) so_pp.t_end = 50.0;
            return run_phase_portrait(cpp, so_pp, pp_grid);
        }
        if (cmd_basin->parsed()) return run_basin(cbasin);
        if (cmd_sweep->parsed())
            return run_sweep(csweep, sweep_tau_range, sweep_omega_range, sweep_grid, sweep_jobs);
        if (cmd_ee->parsed()) return run_entry_exit(cee, ee_tau, ee_z_in, ee_y_thresh);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return 3;
    } catch (const RegimeError& e) {
        std::cerr << "regime precondition unmet: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
