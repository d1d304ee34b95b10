#include "stfm/config.hpp"

#include "stfm/errors.hpp"
#include "stfm/io.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace stfm {

const char* const kVersionString = "stfm 0.1.0";

using json = nlohmann::ordered_json;

namespace {

SpectrumConfig parse_spectrum(const json& j, const std::string& name,
                              std::vector<std::string>& errs) {
    SpectrumConfig sc;
    if (!j.contains(name)) return sc;
    const json& s = j.at(name);
    sc.family = s.value("family", std::string("explicit"));
    if (sc.family == "power_law") {
        sc.a = s.value("a", 0.0);
        sc.s = s.value("s", 1.0);
    } else if (sc.family == "explicit") {
        if (s.contains("values"))
            for (const auto& [key, v] : s.at("values").items())
                sc.values[std::stoi(key)] = v.get<double>();
    } else {
        errs.push_back("stoch." + name + ".family must be 'explicit' or 'power_law'");
    }
    return sc;
}

json spectrum_to_json(const SpectrumConfig& sc) {
    json s;
    s["family"] = sc.family;
    if (sc.family == "power_law") {
        s["a"] = sc.a;
        s["s"] = sc.s;
    } else {
        json vals = json::object();
        for (const auto& [k, v] : sc.values) vals[std::to_string(k)] = v;
        s["values"] = vals;
    }
    return s;
}

void validate_spectrum(const SpectrumConfig& sc, const std::string& name, bool nonneg,
                       std::vector<std::string>& errs) {
    if (sc.family == "power_law") {
        if (sc.a < 0.0) errs.push_back("stoch." + name + ".a must be non-negative");
        if (sc.a > 0.0 && !(sc.s > 0.5))
            errs.push_back("stoch." + name + ".s = " + std::to_string(sc.s) +
                           " violates the coloring condition (requires s > 1/2)");
    } else if (nonneg) {
        for (const auto& [k, v] : sc.values)
            if (v < 0.0)
                errs.push_back("stoch." + name + "[" + std::to_string(k) +
                               "] must be non-negative");
    }
}

} // namespace

SpectrumFamily to_family(const SpectrumConfig& sc) {
    if (sc.family == "power_law") return SpectrumFamily::power_law(sc.a, sc.s);
    return SpectrumFamily::explicit_modes(sc.values);
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }

    std::vector<std::string> errs;
    RunConfig cfg;
    try {
        if (j.contains("domain")) {
            cfg.L = j["domain"].value("L", cfg.L);
            cfg.M = j["domain"].value("M", cfg.M);
        }
        if (j.contains("horizon")) {
            cfg.T = j["horizon"].value("T", cfg.T);
            cfg.N_split = j["horizon"].value("N_split", cfg.N_split);
        }
        if (j.contains("det")) {
            const json& d = j["det"];
            cfg.det.eps = d.value("eps", cfg.det.eps);
            cfg.det.r = d.value("r", cfg.det.r);
            cfg.det.dt = d.value("dt", cfg.det.dt);
            cfg.det.theta = d.value("theta", cfg.det.theta);
            cfg.det.absorption_on = d.value("absorption", cfg.det.absorption_on);
            cfg.det.c_safe = d.value("c_safe", cfg.det.c_safe);
        }
        if (j.contains("stoch")) {
            const json& s = j["stoch"];
            cfg.stoch_eps = s.value("eps", cfg.stoch_eps);
            cfg.stoch_dt = s.value("dt", cfg.stoch_dt);
            cfg.K_modes = s.value("K_modes", cfg.K_modes);
            cfg.lambda = parse_spectrum(s, "lambda", errs);
            cfg.gamma = parse_spectrum(s, "gamma", errs);
            if (s.contains("f")) {
                const std::string kind = s["f"].value("kind", std::string("linear"));
                if (kind == "linear")
                    cfg.f.kind = LipschitzCoefficient::Kind::linear;
                else if (kind == "saturating")
                    cfg.f.kind = LipschitzCoefficient::Kind::saturating;
                else
                    errs.push_back("stoch.f.kind must be 'linear' or 'saturating'");
                cfg.f.c = s["f"].value("c", cfg.f.c);
            }
        }
        if (j.contains("initial_condition")) {
            const json& ic = j["initial_condition"];
            cfg.ic.kind = ic.value("kind", cfg.ic.kind);
            cfg.ic.c = ic.value("c", cfg.ic.c);
            cfg.ic.center = ic.value("center", cfg.ic.center);
            cfg.ic.width = ic.value("width", cfg.ic.width);
            cfg.ic.floor = ic.value("floor", cfg.ic.floor);
            cfg.ic.file = ic.value("file", cfg.ic.file);
        }
        if (j.contains("ensemble")) {
            cfg.M_paths = j["ensemble"].value("M_paths", cfg.M_paths);
            if (j["ensemble"].contains("p_list"))
                cfg.p_list = j["ensemble"]["p_list"].get<std::vector<double>>();
        }
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("output")) {
            cfg.out_dir = j["output"].value("directory", cfg.out_dir);
            cfg.snapshot_stride = j["output"].value("snapshot_stride", cfg.snapshot_stride);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config structure error: ") + e.what());
    }

    // Aggregated semantic validation, mirroring the constituent modules.
    if (!(cfg.L > 0.0)) errs.push_back("domain.L must be positive");
    if (cfg.M < 8 || cfg.M % 2 != 0) errs.push_back("domain.M must be even and >= 8");
    if (!(cfg.T > 0.0)) errs.push_back("horizon.T must be positive");
    if (cfg.N_split < 0) errs.push_back("horizon.N_split must be >= 0");
    if (!(cfg.det.eps > 0.0 && cfg.det.eps <= 1.0))
        errs.push_back("det.eps must lie in (0, 1]");
    if (!(cfg.det.r >= 1.0)) errs.push_back("det.r must be >= 1");
    if (!(cfg.det.dt > 0.0)) errs.push_back("det.dt must be positive");
    if (!(cfg.det.theta >= 0.5 && cfg.det.theta <= 1.0))
        errs.push_back("det.theta must lie in [1/2, 1]");
    if (cfg.stoch_eps < 0.0) errs.push_back("stoch.eps must be >= 0");
    if (!(cfg.stoch_dt > 0.0)) errs.push_back("stoch.dt must be positive");
    if (cfg.K_modes < 0) errs.push_back("stoch.K_modes must be >= 0");
    validate_spectrum(cfg.lambda, "lambda", true, errs);
    validate_spectrum(cfg.gamma, "gamma", false, errs);
    for (const auto& [k, v] : cfg.lambda.values)
        if (std::abs(k) > cfg.K_modes)
            errs.push_back("stoch.lambda mode " + std::to_string(k) +
                           " outside cutoff K_modes");
    for (const auto& [k, v] : cfg.gamma.values)
        if (std::abs(k) > cfg.K_modes)
            errs.push_back("stoch.gamma mode " + std::to_string(k) +
                           " outside cutoff K_modes");
    if (cfg.f.c < 0.0) errs.push_back("stoch.f.c must be >= 0");
    if (cfg.ic.kind != "constant" && cfg.ic.kind != "bump" && cfg.ic.kind != "samples")
        errs.push_back("initial_condition.kind must be constant|bump|samples");
    if (cfg.ic.kind == "bump" && !(cfg.ic.width > 0.0))
        errs.push_back("initial_condition.width must be positive");
    if (cfg.ic.kind == "samples" && cfg.ic.file.empty())
        errs.push_back("initial_condition.file required for kind 'samples'");
    if (cfg.M_paths < 1) errs.push_back("ensemble.M_paths must be >= 1");
    for (double p : cfg.p_list)
        if (!(p >= 1.0)) errs.push_back("ensemble.p_list entries must be >= 1");
    if (cfg.snapshot_stride < 0) errs.push_back("output.snapshot_stride must be >= 0");

    if (!errs.empty()) {
        std::ostringstream os;
        os << "config rejected (" << errs.size() << " violation"
           << (errs.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errs) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["domain"] = {{"L", cfg.L}, {"M", cfg.M}};
    j["horizon"] = {{"T", cfg.T}, {"N_split", cfg.N_split}};
    j["det"] = {{"eps", cfg.det.eps},     {"r", cfg.det.r},
                {"dt", cfg.det.dt},       {"theta", cfg.det.theta},
                {"absorption", cfg.det.absorption_on}, {"c_safe", cfg.det.c_safe}};
    json s;
    s["eps"] = cfg.stoch_eps;
    s["dt"] = cfg.stoch_dt;
    s["K_modes"] = cfg.K_modes;
    s["lambda"] = spectrum_to_json(cfg.lambda);
    s["gamma"] = spectrum_to_json(cfg.gamma);
    s["f"] = {{"kind", cfg.f.kind == LipschitzCoefficient::Kind::linear ? "linear"
                                                                        : "saturating"},
              {"c", cfg.f.c}};
    j["stoch"] = s;
    json ic;
    ic["kind"] = cfg.ic.kind;
    if (cfg.ic.kind == "constant") ic["c"] = cfg.ic.c;
    if (cfg.ic.kind == "bump") {
        ic["center"] = cfg.ic.center;
        ic["width"] = cfg.ic.width;
        ic["floor"] = cfg.ic.floor;
    }
    if (cfg.ic.kind == "samples") ic["file"] = cfg.ic.file;
    j["initial_condition"] = ic;
    j["ensemble"] = {{"M_paths", cfg.M_paths}, {"p_list", cfg.p_list}};
    j["master_seed"] = cfg.master_seed;
    j["output"] = {{"directory", cfg.out_dir}, {"snapshot_stride", cfg.snapshot_stride}};
    return j.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Field make_initial_condition(const RunConfig& cfg) {
    if (cfg.ic.kind == "constant") return make_field(cfg.M, cfg.L, cfg.ic.c);
    if (cfg.ic.kind == "bump") {
        // Periodic bump floor + exp(kappa*(cos(2*pi*(x-center)/L) - 1)); the
        // von Mises profile is smooth and exactly periodic, and approaches a
        // Gaussian of the given width for width << L.
        Field f = make_field(cfg.M, cfg.L);
        const double kappa =
            std::pow(cfg.L / (2.0 * M_PI * cfg.ic.width), 2.0);
        for (int i = 0; i < cfg.M; ++i) {
            const double x = (cfg.L * i) / cfg.M;
            const double th = 2.0 * M_PI * (x - cfg.ic.center) / cfg.L;
            f.values[i] = cfg.ic.floor + std::exp(kappa * (std::cos(th) - 1.0));
        }
        return f;
    }
    // samples
    Field f = cfg.ic.file.size() > 5 &&
                      cfg.ic.file.compare(cfg.ic.file.size() - 5, 5, ".stfm") == 0
                  ? read_snapshot(cfg.ic.file)
                  : read_field_csv(cfg.ic.file, cfg.L);
    if (f.size() != cfg.M)
        throw ConfigError("initial_condition.file has " + std::to_string(f.size()) +
                          " samples, domain.M is " + std::to_string(cfg.M));
    f.L = cfg.L;
    return f;
}

SimulationSetup make_setup(const RunConfig& cfg) {
    SimulationSetup setup;
    setup.basis = build_basis(cfg.L, cfg.K_modes);
    setup.schedule = make_schedule(cfg.T, cfg.N_split);
    setup.det = cfg.det;
    setup.stoch.eps = cfg.stoch_eps;
    setup.stoch.dt = cfg.stoch_dt;
    setup.stoch.spectrum =
        build_noise_spectrum(to_family(cfg.lambda), to_family(cfg.gamma), cfg.K_modes);
    setup.stoch.f = cfg.f;
    setup.initial = make_initial_condition(cfg);
    setup.p_list = cfg.p_list;
    return setup;
}

} // namespace stfm
