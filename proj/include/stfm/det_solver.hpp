#pragma once

#include "stfm/field.hpp"

#include <limits>
#include <vector>

namespace stfm {

struct DetParams {
    double eps = 1e-6;       // mobility regularization, in (0,1]
    double r = 1.0;          // absorption exponent, >= 1
    double dt = 1e-4;        // requested substep
    double theta = 1.0;      // implicitness weight in [1/2, 1]
    bool absorption_on = true;
    double c_safe = 0.5;     // explicit-portion dt cap factor (theta < 1)
    int retry_cap = 8;       // dt halvings allowed on a failed linear solve
};

// Regularized mobility u^4/(eps + u^2), the continuous extension of
// u^6/(eps*u^2 + u^4); equals 0 at u = 0 and tends to u^2 as eps -> 0.
double mobility_reg(double u, double eps);

// Absorption drift -|u|^{r-1} u.
double absorption(double u, double r);

// One semi-implicit step of u_t = -d/dx(mobility_reg(u) u_xxx) - |u|^{r-1} u.
//
// The transport flux is kept in conservative form: midpoint mobilities
// m_{i+1/2} = mobility_reg((u_i+u_{i+1})/2) frozen from the current state,
// third derivative at midpoints (u_{i+2}-3u_{i+1}+3u_i-u_{i-1})/dx^3, and
// the divergence taken as a flux difference. The discrete mass of the
// transport part then telescopes exactly, and testing the update against
// the discrete Laplacian reproduces the gradient-norm energy estimate with
// no spatial quadrature defect. The linear periodic penta-diagonal system
// is solved once per step; absorption is applied pointwise implicitly by a
// scalar Newton solve per node.
//
// A singular/failed linear solve rejects the step and retries with halved
// dt (recursively, up to retry_cap); exhausting the cap throws SolverFailure.
Field det_step(const Field& u, const DetParams& p);

struct EvolveResult {
    Field field;
    std::vector<DiagnosticsRecord> diagnostics;
    double sup_h1_sq = 0.0;
    double min_over_steps = std::numeric_limits<double>::infinity();
    double energy_residual = 0.0; // |E(t1) + dissipation - E(t0)|, E = 0.5*||u_x||^2
    std::uint64_t substeps = 0;
    std::vector<Field> states; // filled only when record_states
};

// Repeated det_step over [t0, t1] with dt adjusted to divide the interval
// exactly. diag_stride: 0 = no per-substep records (scalar summaries are
// still tracked), n = every n-th substep plus the endpoint. Diagnostics
// carry the running energy-identity residual.
EvolveResult det_evolve(const Field& u0, double t0, double t1, const DetParams& p,
                        int diag_stride = 1, bool record_states = false);

} // namespace stfm
