#pragma once

#include "stfm/basis.hpp"
#include "stfm/det_solver.hpp" // EvolveResult
#include "stfm/field.hpp"
#include "stfm/rng.hpp"

#include <cstdint>
#include <vector>

namespace stfm {

// Globally Lipschitz coefficient with f(0) = 0 and constant c:
//   linear     f(u) = c*u
//   saturating f(u) = c*u/(1+|u|)
// derivative() is exposed for diagnostics only; the integrator never uses it.
struct LipschitzCoefficient {
    enum class Kind { linear, saturating };
    Kind kind = Kind::linear;
    double c = 1.0;

    double value(double u) const {
        return kind == Kind::linear ? c * u : c * u / (1.0 + std::abs(u));
    }
    double derivative(double u) const {
        if (kind == Kind::linear) return c;
        const double d = 1.0 + std::abs(u);
        return c / (d * d);
    }
};

// Per-mode Gaussian(0, dt) increments for one substep, two independent
// families (transport and Ito), stored at index k+K.
struct WienerIncrements {
    int K = 0;
    double dt = 0.0;
    Eigen::ArrayXd d_transport;
    Eigen::ArrayXd d_ito;
};

WienerIncrements zero_increments(int K, double dt);
WienerIncrements draw_increments(const RngLease& lease, std::uint64_t substep, int K,
                                 double dt);

struct StochParams {
    double eps = 0.0; // viscosity of the regularized sub-dynamics, >= 0
    double dt = 1e-3; // requested Euler-Maruyama substep
    NoiseSpectrum spectrum;
    LipschitzCoefficient f;
    double c_stab = 0.5; // parabolic cap factor for the explicit drift
};

// Basis modes sampled once on an M-point grid; the mode arrays are reused
// across substeps.
struct SampledBasis {
    int K = 0;
    std::vector<Eigen::ArrayXd> modes; // index k+K

    const Eigen::ArrayXd& mode(int k) const { return modes[static_cast<std::size_t>(k + K)]; }
};
SampledBasis sample_basis(const SpectralBasis& basis, int M);

// Ito-form drift of the stochastic sub-dynamics,
//   0.5 * sum_k lambda_k^2 D1(Psi_k * D1(Psi_k * w)) + eps * D2 w,
// with both pieces in divergence form so the discrete mass telescopes.
Field stochastic_drift(const Field& w, const SampledBasis& sb,
                       const NoiseSpectrum& spectrum, double eps);
Field stochastic_drift(const Field& w, const SpectralBasis& basis,
                       const NoiseSpectrum& spectrum, double eps);

// Noise increment
//   sum_k lambda_k D1(Psi_k * w) dB_k + sum_k gamma_k Psi_k f(w) dB1_k.
// pre: inc.K == spectrum.K.
Field apply_noise(const Field& w, const SampledBasis& sb, const NoiseSpectrum& spectrum,
                  const LipschitzCoefficient& f, const WienerIncrements& inc);
Field apply_noise(const Field& w, const SpectralBasis& basis,
                  const NoiseSpectrum& spectrum, const LipschitzCoefficient& f,
                  const WienerIncrements& inc);

// Explicit Euler-Maruyama: w + dt*drift + noise. Throws SolverFailure on a
// non-finite result.
Field stoch_step(const Field& w, const StochParams& p, const SampledBasis& sb,
                 const WienerIncrements& inc);

// Parabolic cap c_stab * dx^2 / (eps + sum_k lambda_k^2 max Psi_k^2);
// +inf when the denominator vanishes.
double stability_cap(const StochParams& p, const SpectralBasis& basis, double dx);

// Repeated stoch_step over [t0, t1]; dt is the smaller of the requested
// substep and the stability cap, rounded so substeps tile the interval.
// Increments are drawn from (lease, substep_offset + s, mode, family), so a
// trajectory is reproducible for any interval decomposition that preserves
// the global substep numbering.
EvolveResult stoch_evolve(const Field& w0, double t0, double t1,
                          const SpectralBasis& basis, const StochParams& p,
                          const RngLease& lease, std::uint64_t substep_offset = 0,
                          int diag_stride = 1, bool record_states = false);

} // namespace stfm
