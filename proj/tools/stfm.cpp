// stfm command line: simulate | ensemble | verify | convergence
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 check failure.

#include "stfm/config.hpp"
#include "stfm/errors.hpp"
#include "stfm/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace stfm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<std::string> out;
    int workers = 0;
    std::optional<int> snapshot_stride;
    bool per_path_csv = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl, bool config_required) {
    auto* c = cmd->add_option("--config", fl.config_path, "run configuration JSON");
    if (config_required) c->required();
    cmd->add_option("--seed", fl.seed, "master seed override");
    cmd->add_option("--paths", fl.paths, "ensemble path count override");
    cmd->add_option("--out", fl.out, "output directory override");
    cmd->add_option("--workers", fl.workers, "worker threads (default: logical cores)");
    cmd->add_option("--snapshot-stride", fl.snapshot_stride,
                    "field snapshot stride override (0 = off)");
}

RunConfig resolve_config(const CommonFlags& fl) {
    RunConfig cfg = load_config(fl.config_path);
    if (fl.seed) cfg.master_seed = *fl.seed;
    if (fl.paths) cfg.M_paths = *fl.paths;
    if (fl.out) cfg.out_dir = *fl.out;
    if (fl.snapshot_stride) cfg.snapshot_stride = *fl.snapshot_stride;
    return cfg;
}

json estimate_json(const MomentEstimate& e) {
    return json{{"mean", e.mean}, {"se", e.se}};
}

json manifest_json(const RunConfig& cfg) {
    json m;
    m["tool"] = kVersionString;
    m["config_hash"] = config_hash(cfg);
    m["master_seed"] = cfg.master_seed;
    m["config"] = json::parse(serialize_config(cfg));
    return m;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonFlags& fl) {
    const RunConfig cfg = resolve_config(fl);
    const SimulationSetup setup = make_setup(cfg);
    fs::create_directories(cfg.out_dir);

    SplitOptions opt;
    opt.diag_stride = 1;
    opt.record_states = cfg.snapshot_stride > 0;
    const RngLease lease{cfg.master_seed, 0};

    const SplitTrajectory traj = run_split(setup.initial, setup.schedule, setup.det,
                                           setup.stoch, setup.basis, lease, opt);
    for (const auto& w : traj.warnings) std::cerr << "warning: " << w << "\n";

    json manifest = manifest_json(cfg);
    json intervals = json::array();
    for (int j = 1; j <= setup.schedule.intervals(); ++j) {
        const std::string det_name = "det_" + std::to_string(j) + ".csv";
        const std::string sto_name = "stoch_" + std::to_string(j) + ".csv";
        write_diagnostics_csv(traj.det_diag[static_cast<std::size_t>(j - 1)],
                              (fs::path(cfg.out_dir) / det_name).string());
        write_diagnostics_csv(traj.stoch_diag[static_cast<std::size_t>(j - 1)],
                              (fs::path(cfg.out_dir) / sto_name).string());
        intervals.push_back(json{{"interval", j},
                                 {"start", setup.schedule.start(j)},
                                 {"end", setup.schedule.end(j)},
                                 {"det_csv", det_name},
                                 {"stoch_csv", sto_name}});
    }
    manifest["intervals"] = intervals;

    if (opt.record_states) {
        json snaps = json::array();
        for (int j = 0; j < setup.schedule.intervals(); ++j) {
            const auto& segs = {std::make_pair("det", &traj.det_path[static_cast<std::size_t>(j)]),
                                std::make_pair("stoch", &traj.stoch_path[static_cast<std::size_t>(j)])};
            for (const auto& [phase, seg] : segs) {
                for (std::size_t i = 0; i < seg->states.size();
                     i += static_cast<std::size_t>(cfg.snapshot_stride)) {
                    const std::string name = std::string("snap_") + phase + "_" +
                                             std::to_string(j + 1) + "_" +
                                             std::to_string(i) + ".stfm";
                    write_snapshot(seg->states[i], (fs::path(cfg.out_dir) / name).string());
                    snaps.push_back(name);
                }
            }
        }
        manifest["snapshots"] = snaps;
    }

    const Field& final_state = traj.stoch_end.back();
    write_snapshot(final_state, (fs::path(cfg.out_dir) / "final.stfm").string());
    write_field_csv(final_state, (fs::path(cfg.out_dir) / "final.csv").string());
    manifest["final"] = {{"mass", mass(final_state)},
                         {"min", min_value(final_state)},
                         {"sup_h1_sq", traj.sup_h1_sq}};
    write_text_file((fs::path(cfg.out_dir) / "manifest.json").string(),
                    manifest.dump(2) + "\n");

    std::cout << "trajectory written to " << cfg.out_dir << " (final mass "
              << format_double(mass(final_state)) << ")\n";
    return 0;
}

// ---------------------------------------------------------------- ensemble

json stats_to_json(const EnsembleStats& stats) {
    json r;
    r["paths"] = stats.paths_requested;
    r["completed"] = stats.paths_completed;
    r["completion_fraction"] = stats.completion_fraction();
    r["p_list"] = stats.p_list;
    json samples = json::array();
    for (const auto& ts : stats.samples) {
        json s;
        s["t"] = ts.t;
        s["mass"] = estimate_json(ts.mass);
        s["var_mass"] = ts.var_mass;
        s["min_min"] = ts.min_min;
        json mp = json::object(), hp = json::object();
        for (std::size_t i = 0; i < stats.p_list.size(); ++i) {
            const std::string key = format_double(stats.p_list[i]);
            mp[key] = estimate_json(ts.mass_p[i]);
            hp[key] = estimate_json(ts.h1_p[i]);
        }
        s["mass_p"] = mp;
        s["h1_p"] = hp;
        samples.push_back(s);
    }
    r["samples"] = samples;
    json sup = json::object();
    for (std::size_t i = 0; i < stats.p_list.size(); ++i)
        sup[format_double(stats.p_list[i])] = estimate_json(stats.sup_h1_p[i]);
    r["sup_h1_p"] = sup;
    r["min_over_ensemble"] = stats.min_over_ensemble;
    r["failures"] = stats.failures;
    return r;
}

int cmd_ensemble(const CommonFlags& fl) {
    const RunConfig cfg = resolve_config(fl);
    const SimulationSetup setup = make_setup(cfg);
    fs::create_directories(cfg.out_dir);

    const EnsembleStats stats =
        run_ensemble(setup, cfg.M_paths, cfg.master_seed, fl.workers);

    json report = manifest_json(cfg);
    report["stats"] = stats_to_json(stats);

    if (fl.per_path_csv) {
        std::ostringstream os;
        os << "path,completed,mass_final,sup_h1_sq,min\n";
        for (const auto& row : stats.per_path)
            os << row.path << ',' << (row.completed ? 1 : 0) << ','
               << format_double(row.mass_final) << ',' << format_double(row.sup_h1_sq)
               << ',' << format_double(row.min_over_path) << '\n';
        write_text_file((fs::path(cfg.out_dir) / "paths.csv").string(), os.str());
    }

    json checks;
    const TimeSample& last = stats.samples.back();
    const double mass0 = stats.samples.front().mass.mean;
    checks["mean_mass_within_3se"] =
        std::abs(last.mass.mean - mass0) <= 3.0 * last.mass.se;
    json moment_checks = json::array();
    for (double p : cfg.p_list) {
        const MassMomentReport rep = mass_moment_check(stats, p, 0.0);
        moment_checks.push_back(json{{"p", p},
                                     {"smallest_passing_c", rep.smallest_passing_c},
                                     {"fitted_c", rep.fitted_c}});
    }
    checks["mass_moment"] = moment_checks;
    report["checks"] = checks;

    write_text_file((fs::path(cfg.out_dir) / "report.json").string(),
                    report.dump(2) + "\n");
    std::cout << "ensemble report written to " << cfg.out_dir << " ("
              << stats.paths_completed << "/" << stats.paths_requested
              << " paths)\n";
    if (!stats.failures.empty()) {
        for (const auto& f : stats.failures) std::cerr << "path failure: " << f << "\n";
        return kExitSolver;
    }
    return 0;
}

// ------------------------------------------------------------------ verify

class CheckRunner {
public:
    void run(const std::string& name, bool pass, const std::string& detail = "") {
        std::cout << (pass ? "[ ok ] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << "  " << detail;
        std::cout << "\n";
        if (!pass) ++failures_;
    }
    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

Field random_smooth_positive(int M, double L, std::uint64_t seed) {
    Field f = make_field(M, L, 0.5);
    for (int m = 1; m <= 3; ++m) {
        const double a =
            0.12 * rng::to_unit(rng::mix64(seed * 97ull + static_cast<std::uint64_t>(m)));
        const double phase =
            2.0 * M_PI *
            rng::to_unit(rng::mix64(seed * 131ull + static_cast<std::uint64_t>(m) + 7ull));
        for (int i = 0; i < M; ++i) {
            const double x = (L * i) / M;
            f.values[i] += a * std::cos(2.0 * M_PI * m * x / L + phase);
        }
    }
    return f;
}

int cmd_verify() {
    CheckRunner c;

    { // basis orthonormality under the H^2 inner product, fine quadrature
        const SpectralBasis b = build_basis(1.7, 8);
        const int Q = 4096;
        const Eigen::ArrayXd x = b.grid_nodes(Q);
        const double dxq = b.L / Q;
        double worst = 0.0;
        std::vector<Eigen::ArrayXd> v0, v1, v2;
        for (int k = -b.K; k <= b.K; ++k) {
            const Eigen::ArrayXd s = b.sample(k, x);
            const auto d1 = b.derivative(k, 1);
            const auto d2 = b.derivative(k, 2);
            v0.push_back(s);
            v1.push_back(d1.coefficient * b.sample(d1.partner, x));
            v2.push_back(d2.coefficient * b.sample(d2.partner, x));
        }
        for (std::size_t a = 0; a < v0.size(); ++a)
            for (std::size_t bb = 0; bb < v0.size(); ++bb) {
                const double ip = dxq * (v0[a] * v0[bb] + v1[a] * v1[bb] + v2[a] * v2[bb]).sum();
                worst = std::max(worst, std::abs(ip - (a == bb ? 1.0 : 0.0)));
            }
        c.run("basis H2 orthonormality", worst < 1e-8,
              "(max dev " + format_double(worst) + ")");
    }

    { // derivative identities compose exactly
        const SpectralBasis b = build_basis(2.0 * M_PI, 8);
        bool ok = true;
        for (int k = -8; k <= 8; ++k) {
            const auto d1 = b.derivative(k, 1);
            const auto d1b = b.derivative(d1.partner, 1);
            const auto d2 = b.derivative(k, 2);
            ok = ok && (d1.coefficient * d1b.coefficient == d2.coefficient) &&
                 (d1b.partner == d2.partner);
        }
        const auto z = b.derivative(0, 3);
        ok = ok && z.coefficient == 0.0 && z.partner == 0;
        c.run("derivative identities compose bitwise", ok);
    }

    { // exact periodicity
        const SpectralBasis b = build_basis(0.7, 8);
        bool ok = true;
        for (int k = -8; k <= 8; ++k) ok = ok && (b.eval(k, 0.0) == b.eval(k, b.L));
        c.run("basis periodicity eval(k,0) == eval(k,L)", ok);
    }

    { // coloring condition validation
        bool threw = false;
        try {
            build_noise_spectrum(SpectrumFamily::power_law(1.0, 0.4),
                                 SpectrumFamily::zero(), 4);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        c.run("power law s <= 1/2 rejected", threw);
    }

    { // deterministic ODE oracles on constant data
        DetParams p;
        p.r = 1.0;
        p.dt = 1e-4;
        const Field u0 = make_field(16, 1.0, 1.0);
        const double got1 = det_evolve(u0, 0.0, 0.5, p, 0).field.values[0];
        const double err1 = std::abs(got1 - std::exp(-0.5));
        p.r = 2.0;
        const double got2 = det_evolve(u0, 0.0, 0.5, p, 0).field.values[0];
        const double err2 = std::abs(got2 - 1.0 / 1.5);
        c.run("absorption ODE oracle r=1", err1 < 1e-4, "(err " + format_double(err1) + ")");
        c.run("absorption ODE oracle r=2", err2 < 1e-4, "(err " + format_double(err2) + ")");
    }

    { // mass monotonicity over random smooth non-negative data
        DetParams p;
        p.r = 2.0;
        p.dt = 1e-6;
        double worst = -std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 20; ++trial) {
            const Field u = random_smooth_positive(32, 1.0, 1000 + trial);
            const Field v = det_step(u, p);
            worst = std::max(worst, mass(v) - mass(u));
        }
        c.run("det mass monotone on 20 random fields", worst <= 1e-12,
              "(worst d_mass " + format_double(worst) + ")");
    }

    { // pathwise mass conservation, gamma = 0
        const SpectralBasis basis = build_basis(1.0, 2);
        StochParams sp;
        sp.eps = 0.01;
        sp.dt = 1e-3;
        sp.spectrum = build_noise_spectrum(SpectrumFamily::power_law(0.4, 1.0),
                                           SpectrumFamily::zero(), 2);
        const Field w0 = random_smooth_positive(32, 1.0, 7);
        double worst = 0.0;
        for (int path = 0; path < 5; ++path) {
            const auto res = stoch_evolve(w0, 0.0, 0.1, basis, sp,
                                          RngLease{99, static_cast<std::uint64_t>(path)},
                                          0, 0);
            worst = std::max(worst, std::abs(mass(res.field) - mass(w0)));
        }
        c.run("pathwise mass conservation (gamma = 0)", worst <= 1e-10,
              "(worst |d_mass| " + format_double(worst) + ")");
    }

    { // geometric Brownian motion oracle for the k=0 Ito noise
        SimulationSetup setup;
        setup.basis = build_basis(1.0, 0);
        setup.schedule = make_schedule(1.0, 4);
        setup.det.absorption_on = false;
        setup.det.dt = 0.05;
        setup.stoch.dt = 1e-3;
        setup.stoch.spectrum = build_noise_spectrum(
            SpectrumFamily::zero(), SpectrumFamily::explicit_modes({{0, 1.0}}), 0);
        setup.stoch.f = LipschitzCoefficient{LipschitzCoefficient::Kind::linear, 0.5};
        setup.initial = make_field(16, 1.0, 1.0);
        const EnsembleStats stats = run_ensemble(setup, 400, 2024);
        const TimeSample& last = stats.samples.back();
        const double dev = std::abs(last.mass.mean - 1.0);
        c.run("GBM mean mass within 3 SE", dev <= 3.0 * last.mass.se,
              "(|mean-1| " + format_double(dev) + ", 3SE " +
                  format_double(3.0 * last.mass.se) + ")");
        const double sigma = 0.5 * setup.basis.coeff(0) * M_SQRT1_2;
        const MassMomentReport rep = mass_moment_check(stats, 2.0, sigma * sigma);
        c.run("GBM p=2 moment bounded by exp(sigma^2 t)", rep.pass,
              "(fitted C " + format_double(rep.fitted_c) + ", oracle " +
                  format_double(sigma * sigma) + ")");
    }

    { // splitting consistency with all noise off
        const Field u0 = random_smooth_positive(32, 1.0, 5);
        DetParams dp;
        dp.r = 2.0;
        dp.dt = 1e-3;
        StochParams sp;
        sp.dt = 1e-2;
        sp.spectrum =
            build_noise_spectrum(SpectrumFamily::zero(), SpectrumFamily::zero(), 0);
        const SpectralBasis basis = build_basis(1.0, 0);
        const Field ref = det_evolve(u0, 0.0, 1.0, dp, 0).field;
        double worst = 0.0;
        for (int N : {0, 3}) {
            const auto traj = run_split(u0, make_schedule(1.0, N), dp, sp, basis,
                                        RngLease{1, 0}, SplitOptions{0, false});
            worst = std::max(
                worst, (traj.stoch_end.back().values - ref.values).abs().maxCoeff());
        }
        c.run("splitting consistency (noise off)", worst <= 1e-10,
              "(max dev " + format_double(worst) + ")");
    }

    { // reproducibility of ensemble statistics
        SimulationSetup setup;
        setup.basis = build_basis(1.0, 1);
        setup.schedule = make_schedule(0.2, 1);
        setup.det.dt = 0.01;
        setup.stoch.dt = 5e-3;
        setup.stoch.eps = 0.01;
        setup.stoch.spectrum = build_noise_spectrum(
            SpectrumFamily::power_law(0.3, 1.0),
            SpectrumFamily::explicit_modes({{0, 0.2}}), 1);
        setup.initial = make_field(16, 1.0, 0.8);
        const EnsembleStats a = run_ensemble(setup, 16, 77);
        const EnsembleStats b = run_ensemble(setup, 16, 77);
        bool same = a.paths_completed == b.paths_completed;
        for (std::size_t i = 0; same && i < a.samples.size(); ++i)
            same = a.samples[i].mass.mean == b.samples[i].mass.mean &&
                   a.samples[i].mass_p[0].mean == b.samples[i].mass_p[0].mean;
        c.run("ensemble statistics reproducible", same);
    }

    if (c.failures() > 0) {
        std::cout << c.failures() << " check(s) failed\n";
        return kExitCheck;
    }
    std::cout << "all checks passed\n";
    return 0;
}

// -------------------------------------------------------------- convergence

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

json det_dt_study() {
    DetParams p;
    p.r = 2.0;
    const Field u0 = make_field(32, 1.0, 1.0);
    const double T = 0.5;
    const double exact = 1.0 / (1.0 + T); // u' = -u^2, u(0) = 1
    std::vector<double> dts{1e-2, 5e-3, 2e-3, 1e-3, 5e-4};
    std::vector<double> errs;
    json rows = json::array();
    for (double dt : dts) {
        p.dt = dt;
        const double got = det_evolve(u0, 0.0, T, p, 0).field.values[0];
        errs.push_back(std::abs(got - exact));
        rows.push_back(json{{"dt", dt}, {"error", errs.back()}});
    }
    const double slope = fit_log_slope(dts, errs);
    std::cout << "det dt study (implicit Euler, absorption ODE): slope "
              << format_double(slope) << "\n";
    return json{{"study", "det_dt"}, {"rows", rows}, {"slope", slope}};
}

json em_strong_order_study() {
    const int M = 32;
    const SpectralBasis basis = build_basis(1.0, 1);
    const SampledBasis sb = sample_basis(basis, M);
    StochParams sp;
    sp.spectrum = build_noise_spectrum(SpectrumFamily::explicit_modes({{1, 0.6}}),
                                       SpectrumFamily::zero(), 1);
    Field u0 = make_field(M, 1.0, 0.5);
    for (int i = 0; i < M; ++i)
        u0.values[i] += 0.25 * std::cos(2.0 * M_PI * i / M);

    const double T = 0.1;
    const double dt_ref = 1e-5;
    const auto n_ref = static_cast<std::uint64_t>(std::llround(T / dt_ref));
    const std::vector<std::uint64_t> ratios{1000, 200, 50, 10};
    const int paths = 24;

    std::vector<double> sq_err(ratios.size(), 0.0);
    for (int path = 0; path < paths; ++path) {
        const RngLease lease{4242, static_cast<std::uint64_t>(path)};
        std::vector<WienerIncrements> fine(n_ref);
        for (std::uint64_t s = 0; s < n_ref; ++s)
            fine[s] = draw_increments(lease, s, 1, dt_ref);

        Field ref = u0;
        for (std::uint64_t s = 0; s < n_ref; ++s) ref = stoch_step(ref, sp, sb, fine[s]);

        for (std::size_t lev = 0; lev < ratios.size(); ++lev) {
            const std::uint64_t R = ratios[lev];
            const double dt = dt_ref * static_cast<double>(R);
            Field w = u0;
            for (std::uint64_t m = 0; m < n_ref / R; ++m) {
                WienerIncrements inc = zero_increments(1, dt);
                for (std::uint64_t s = m * R; s < (m + 1) * R; ++s) {
                    inc.d_transport += fine[s].d_transport;
                    inc.d_ito += fine[s].d_ito;
                }
                w = stoch_step(w, sp, sb, inc);
            }
            const double dxg = w.dx();
            sq_err[lev] += dxg * (w.values - ref.values).square().sum();
        }
    }
    std::vector<double> dts, rms;
    json rows = json::array();
    for (std::size_t lev = 0; lev < ratios.size(); ++lev) {
        dts.push_back(dt_ref * static_cast<double>(ratios[lev]));
        rms.push_back(std::sqrt(sq_err[lev] / paths));
        rows.push_back(json{{"dt", dts.back()}, {"rms_error", rms.back()}});
    }
    const double slope = fit_log_slope(dts, rms);
    std::cout << "Euler-Maruyama strong order study: slope " << format_double(slope)
              << "\n";
    return json{{"study", "em_strong"}, {"rows", rows}, {"slope", slope}};
}

json split_refinement_study(int workers) {
    // flat start with a noticeable Ito noise, so the running H1 supremum is
    // set by the stochastic dynamics rather than the initial condition
    SimulationSetup setup;
    setup.basis = build_basis(1.0, 2);
    setup.det.r = 2.0;
    setup.det.dt = 2e-4;
    setup.stoch.dt = 1e-3;
    setup.stoch.eps = 1e-3;
    setup.stoch.spectrum = build_noise_spectrum(
        SpectrumFamily::power_law(0.2, 1.0), SpectrumFamily::power_law(0.45, 1.0), 2);
    setup.stoch.f = LipschitzCoefficient{LipschitzCoefficient::Kind::linear, 1.0};
    setup.initial = make_field(64, 1.0, 1.0);

    json rows = json::array();
    double prev = 0.0;
    std::cout << "N-refinement study (E sup_t h1^2):\n";
    for (int N : {4, 8, 16}) {
        setup.schedule = make_schedule(0.2, N);
        const EnsembleStats stats = run_ensemble(setup, 100, 515, workers);
        const MomentEstimate est = supnorm_moment_estimate(stats, 2.0);
        const double ratio = prev > 0.0 ? est.mean / prev : 1.0;
        rows.push_back(json{{"N", N}, {"sup_h1_sq", est.mean}, {"se", est.se},
                            {"ratio_to_previous", ratio}});
        std::cout << "  N = " << N << ": " << format_double(est.mean) << " (ratio "
                  << format_double(ratio) << ")\n";
        prev = est.mean;
    }
    return json{{"study", "split_N"}, {"rows", rows}};
}

int cmd_convergence(const CommonFlags& fl) {
    json studies = json::array();
    studies.push_back(det_dt_study());
    studies.push_back(em_strong_order_study());
    studies.push_back(split_refinement_study(fl.workers));
    if (fl.out) {
        fs::create_directories(*fl.out);
        json report;
        report["tool"] = kVersionString;
        report["studies"] = studies;
        write_text_file((fs::path(*fl.out) / "convergence.json").string(),
                        report.dump(2) + "\n");
        std::cout << "report written to " << *fl.out << "/convergence.json\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic thin-film simulator"};
    app.require_subcommand(1);

    CommonFlags fl_sim, fl_ens, fl_conv;
    auto* sim = app.add_subcommand("simulate", "run one trajectory");
    add_common(sim, fl_sim, true);
    auto* ens = app.add_subcommand("ensemble", "run an independent-path ensemble");
    add_common(ens, fl_ens, true);
    ens->add_flag("--per-path-csv", fl_ens.per_path_csv, "also write per-path summaries");
    auto* ver = app.add_subcommand("verify", "run the built-in invariant suite");
    (void)ver;
    auto* conv = app.add_subcommand("convergence", "run refinement studies");
    add_common(conv, fl_conv, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(fl_sim);
        if (ens->parsed()) return cmd_ensemble(fl_ens);
        if (ver->parsed()) return cmd_verify();
        if (conv->parsed()) return cmd_convergence(fl_conv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
