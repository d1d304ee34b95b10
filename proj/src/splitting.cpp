#include "stfm/splitting.hpp"

#include "stfm/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stfm {

SplitSchedule make_schedule(double T, int N) {
    if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
    if (N < 0) throw std::invalid_argument("partition parameter N must be >= 0");
    return SplitSchedule{T, N, T / static_cast<double>(N + 1)};
}

SplitTrajectory run_split(const Field& u0, const SplitSchedule& s, const DetParams& dp,
                          const StochParams& sp, const SpectralBasis& basis,
                          const RngLease& lease, const SplitOptions& opt) {
    SplitTrajectory traj;
    traj.schedule = s;
    traj.initial = u0;
    traj.recorded = opt.record_states;

    const double u0_min = min_value(u0);
    if (u0_min < 0.0)
        traj.warnings.push_back("initial condition has negative entries (min = " +
                                std::to_string(u0_min) + "); proceeding");

    Field state = u0;
    std::uint64_t substep_offset = 0;

    for (int j = 1; j <= s.intervals(); ++j) {
        EvolveResult det;
        try {
            det = det_evolve(state, s.start(j), s.end(j), dp, opt.diag_stride,
                             opt.record_states);
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string(e.what()) + " (interval " +
                                std::to_string(j) + ", phase D)");
        }
        traj.sup_h1_sq = std::max(traj.sup_h1_sq, det.sup_h1_sq);
        traj.min_over_path = std::min(traj.min_over_path, det.min_over_steps);
        traj.det_end.push_back(det.field);
        traj.det_diag.push_back(std::move(det.diagnostics));
        if (opt.record_states) {
            const double dt_seg =
                s.delta / static_cast<double>(det.substeps > 0 ? det.substeps : 1);
            traj.det_path.push_back(SegmentPath{s.start(j), dt_seg, std::move(det.states)});
        }

        // (DS) handoff: the stochastic phase starts from the deterministic
        // endpoint, copied exactly.
        EvolveResult sto;
        try {
            sto = stoch_evolve(det.field, s.start(j), s.end(j), basis, sp, lease,
                               substep_offset, opt.diag_stride, opt.record_states);
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string(e.what()) + " (interval " +
                                std::to_string(j) + ", phase S)");
        }
        substep_offset += sto.substeps;
        traj.sup_h1_sq = std::max(traj.sup_h1_sq, sto.sup_h1_sq);
        traj.min_over_path = std::min(traj.min_over_path, sto.min_over_steps);
        traj.stoch_end.push_back(sto.field);
        traj.stoch_diag.push_back(std::move(sto.diagnostics));
        if (opt.record_states) {
            const double dt_seg =
                s.delta / static_cast<double>(sto.substeps > 0 ? sto.substeps : 1);
            traj.stoch_path.push_back(
                SegmentPath{s.start(j), dt_seg, std::move(sto.states)});
        }

        state = traj.stoch_end.back();
    }
    traj.stoch_substeps = substep_offset;
    return traj;
}

namespace {

const Field& sample_segment(const SegmentPath& seg, double local_t) {
    // last substep state at or before local_t
    const auto n = static_cast<std::ptrdiff_t>(seg.states.size()) - 1;
    auto idx = static_cast<std::ptrdiff_t>(
        std::floor((local_t - seg.t0) / seg.dt + 1e-9));
    if (idx < 0) idx = 0;
    if (idx > n) idx = n;
    return seg.states[static_cast<std::size_t>(idx)];
}

} // namespace

Field concatenate(const SplitTrajectory& traj, double t) {
    if (!traj.recorded)
        throw std::logic_error("concatenate requires a trajectory recorded with "
                               "record_states");
    const SplitSchedule& s = traj.schedule;
    if (!(t >= 0.0) || !(t < s.T))
        throw std::invalid_argument("concatenate time outside [0, T)");

    int j = static_cast<int>(std::floor(t / s.delta)) + 1;
    if (j > s.intervals()) j = s.intervals();
    const double half = (static_cast<double>(j) - 0.5) * s.delta;

    if (t < half) {
        const double tau = 2.0 * t - s.start(j);
        return sample_segment(traj.det_path[static_cast<std::size_t>(j - 1)], tau);
    }
    const double tau = 2.0 * t - s.end(j);
    return sample_segment(traj.stoch_path[static_cast<std::size_t>(j - 1)], tau);
}

} // namespace stfm
