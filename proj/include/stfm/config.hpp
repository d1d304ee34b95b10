#pragma once

#include "stfm/montecarlo.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stfm {

struct SpectrumConfig {
    std::string family = "explicit"; // "explicit" | "power_law"
    double a = 0.0, s = 1.0;         // power law a*(1+|k|)^(-s)
    std::map<int, double> values;    // explicit modes
};

struct InitialConditionConfig {
    std::string kind = "constant"; // "constant" | "bump" | "samples"
    double c = 1.0;
    double center = 0.5, width = 0.1, floor = 0.0;
    std::string file; // CSV (x,value) or .stfm snapshot
};

// Full run description; round-trips losslessly through JSON.
struct RunConfig {
    double L = 1.0;
    int M = 64;
    double T = 1.0;
    int N_split = 0;

    DetParams det;

    double stoch_eps = 0.0;
    double stoch_dt = 1e-3;
    int K_modes = 0;
    SpectrumConfig lambda, gamma;
    LipschitzCoefficient f;

    InitialConditionConfig ic;

    int M_paths = 2;
    std::vector<double> p_list{2.0};

    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
    int snapshot_stride = 0;
};

// Parses and validates. Throws ConfigError with line info on JSON syntax
// errors, or with one line per aggregated semantic violation.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& cfg);

// FNV-1a over the canonical serialization.
std::string config_hash(const RunConfig& cfg);

SpectrumFamily to_family(const SpectrumConfig& sc);

Field make_initial_condition(const RunConfig& cfg);

// Builds basis, schedule, spectrum and initial field from a validated config.
SimulationSetup make_setup(const RunConfig& cfg);

extern const char* const kVersionString;

} // namespace stfm
