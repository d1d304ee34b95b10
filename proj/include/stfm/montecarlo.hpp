#pragma once

#include "stfm/splitting.hpp"

#include <cstdint>
#include <vector>

namespace stfm {

// Everything run_ensemble needs to launch one trajectory.
struct SimulationSetup {
    SpectralBasis basis;
    SplitSchedule schedule;
    DetParams det;
    StochParams stoch;
    Field initial;
    std::vector<double> p_list{2.0};
};

struct MomentEstimate {
    double mean = 0.0;
    double se = 0.0; // sample std / sqrt(paths)
};

// Statistics at one sample time of the concatenated path. Samples are taken
// at t = 0 and, per interval j, at the half point (deterministic endpoint)
// and the interval end (stochastic endpoint).
struct TimeSample {
    double t = 0.0;
    MomentEstimate mass;
    double var_mass = 0.0;
    std::vector<MomentEstimate> mass_p; // aligned with p_list
    std::vector<MomentEstimate> h1_p;   // E ||.||_{1,2}^p
    double min_min = 0.0;               // min over ensemble of the grid minimum
};

struct PathSummaryRow {
    int path = 0;
    bool completed = false;
    double mass_final = 0.0;
    double sup_h1_sq = 0.0;
    double min_over_path = 0.0;
};

struct EnsembleStats {
    std::uint64_t master_seed = 0;
    int paths_requested = 0;
    int paths_completed = 0;
    std::vector<double> p_list;
    std::vector<TimeSample> samples;
    std::vector<MomentEstimate> sup_h1_p; // E sup_t ||.||_{1,2}^p, streaming maxima
    double min_over_ensemble = 0.0;
    std::vector<PathSummaryRow> per_path; // one row per requested path
    std::vector<std::string> failures;    // one message per failed path

    double completion_fraction() const {
        return paths_requested == 0
                   ? 0.0
                   : static_cast<double>(paths_completed) / paths_requested;
    }
};

// M independent run_split trajectories on per-path substreams of
// master_seed, merged in path-index order (schedule-independent, so equal
// (setup, M, seed) gives identical bytes regardless of worker count).
// Paths that fail are recorded and excluded from the statistics.
// pre: M >= 2.
EnsembleStats run_ensemble(const SimulationSetup& setup, int paths,
                           std::uint64_t master_seed, int workers = 0);

struct MassMomentRow {
    double t = 0.0;
    double mean_p = 0.0;
    double se_rel = 0.0;
    double bound = 0.0;
    bool pass = true;
};

struct MassMomentReport {
    double p = 2.0;
    double c_input = 0.0;
    bool pass = true;
    // Smallest constant passing the slackened per-sample test
    //   mean mass(t)^p <= exp(C t) * mass(0)^p * (1 + 3*SE_rel).
    double smallest_passing_c = 0.0;
    // Slack-free exponential growth constant: through-origin least-squares
    // slope of log(mean mass(t)^p / mass(0)^p) against t, floored at zero.
    double fitted_c = 0.0;
    std::vector<MassMomentRow> rows;
};

// pre: stats carries >= 3 time samples and p is in stats.p_list.
MassMomentReport mass_moment_check(const EnsembleStats& stats, double p, double c_fit);

// MC estimate of E sup_t ||.||_{1,2}^p. pre: p in stats.p_list.
MomentEstimate supnorm_moment_estimate(const EnsembleStats& stats, double p = 2.0);

} // namespace stfm
