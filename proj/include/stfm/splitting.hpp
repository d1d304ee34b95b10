#pragma once

#include "stfm/det_solver.hpp"
#include "stfm/stoch_solver.hpp"

#include <string>
#include <vector>

namespace stfm {

// Equi-partition of [0,T) into N+1 intervals of length delta = T/(N+1).
struct SplitSchedule {
    double T = 1.0;
    int N = 0;
    double delta = 1.0;

    int intervals() const { return N + 1; }
    double start(int j) const { return delta * static_cast<double>(j - 1); } // j in 1..N+1
    double end(int j) const { return delta * static_cast<double>(j); }
};

// pre: T > 0, N >= 0.
SplitSchedule make_schedule(double T, int N);

// Recorded states of one phase on one interval, on the substep grid
// t0 + i*dt, i = 0..n.
struct SegmentPath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Field> states;
};

// One trajectory of the alternated dynamics. Per interval j the
// deterministic phase runs for a full delta from the previous handoff
// state, its endpoint is copied bitwise as the stochastic initial state,
// and the stochastic endpoint seeds interval j+1. The raw endpoint
// sequence is the primary data; the double-speed concatenated view is
// derived on demand from recorded segment paths.
struct SplitTrajectory {
    SplitSchedule schedule;
    Field initial;
    std::vector<Field> det_end;   // v at its interval end, per interval
    std::vector<Field> stoch_end; // w at its interval end, per interval
    std::vector<std::vector<DiagnosticsRecord>> det_diag, stoch_diag;
    std::vector<SegmentPath> det_path, stoch_path; // only when record_states
    double sup_h1_sq = 0.0;
    double min_over_path = std::numeric_limits<double>::infinity();
    std::uint64_t stoch_substeps = 0;
    bool recorded = false;
    std::vector<std::string> warnings;
};

struct SplitOptions {
    int diag_stride = 1;        // 0 = summaries only
    bool record_states = false; // keep full segment paths (memory-heavy)
};

SplitTrajectory run_split(const Field& u0, const SplitSchedule& s, const DetParams& dp,
                          const StochParams& sp, const SpectralBasis& basis,
                          const RngLease& lease, const SplitOptions& opt = {});

// Double-speed interleave: on [(j-1)d, (j-1/2)d) the deterministic segment
// replayed at local time 2t-(j-1)d, on [(j-1/2)d, jd) the stochastic
// segment at 2t-jd. States are sampled at the last substep <= the local
// time. pre: t in [0,T), trajectory recorded with record_states.
Field concatenate(const SplitTrajectory& traj, double t);

} // namespace stfm
