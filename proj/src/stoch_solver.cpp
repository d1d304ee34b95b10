#include "stfm/stoch_solver.hpp"

#include "stfm/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stfm {

WienerIncrements zero_increments(int K, double dt) {
    return {K, dt, Eigen::ArrayXd::Zero(2 * K + 1), Eigen::ArrayXd::Zero(2 * K + 1)};
}

WienerIncrements draw_increments(const RngLease& lease, std::uint64_t substep, int K,
                                 double dt) {
    WienerIncrements inc = zero_increments(K, dt);
    const double sd = std::sqrt(dt);
    for (int k = -K; k <= K; ++k) {
        inc.d_transport[k + K] = sd * wiener_draw(lease, substep, k, NoiseFamily::transport);
        inc.d_ito[k + K] = sd * wiener_draw(lease, substep, k, NoiseFamily::ito);
    }
    return inc;
}

SampledBasis sample_basis(const SpectralBasis& basis, int M) {
    SampledBasis sb;
    sb.K = basis.K;
    const Eigen::ArrayXd x = basis.grid_nodes(M);
    sb.modes.reserve(static_cast<std::size_t>(2 * basis.K + 1));
    for (int k = -basis.K; k <= basis.K; ++k) sb.modes.push_back(basis.sample(k, x));
    return sb;
}

namespace {

// Centered first derivative; a flux difference, so its grid sum telescopes.
Eigen::ArrayXd d1(const Eigen::ArrayXd& v, double dx) {
    return (roll(v, 1) - roll(v, -1)) / (2.0 * dx);
}

Eigen::ArrayXd d2(const Eigen::ArrayXd& v, double dx) {
    return (roll(v, 1) - 2.0 * v + roll(v, -1)) / (dx * dx);
}

void require_cutoff(int a, int b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) + " cutoff mismatch: " +
                                    std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

Field stochastic_drift(const Field& w, const SampledBasis& sb,
                       const NoiseSpectrum& spectrum, double eps) {
    require_cutoff(sb.K, spectrum.K, "sampled basis / spectrum");
    const double dx = w.dx();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(w.size());
    for (int k = -spectrum.K; k <= spectrum.K; ++k) {
        const double lam = spectrum.lambda_at(k);
        if (lam == 0.0) continue;
        const Eigen::ArrayXd& psi = sb.mode(k);
        out += (0.5 * lam * lam) * d1((psi * d1(psi * w.values, dx)).eval(), dx);
    }
    if (eps != 0.0) out += eps * d2(w.values, dx);
    return Field{std::move(out), w.L};
}

Field stochastic_drift(const Field& w, const SpectralBasis& basis,
                       const NoiseSpectrum& spectrum, double eps) {
    return stochastic_drift(w, sample_basis(basis, w.size()), spectrum, eps);
}

Field apply_noise(const Field& w, const SampledBasis& sb, const NoiseSpectrum& spectrum,
                  const LipschitzCoefficient& f, const WienerIncrements& inc) {
    require_cutoff(sb.K, spectrum.K, "sampled basis / spectrum");
    require_cutoff(inc.K, spectrum.K, "increments / spectrum");
    const double dx = w.dx();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(w.size());

    Eigen::ArrayXd fw;
    bool have_fw = false;
    for (int k = -spectrum.K; k <= spectrum.K; ++k) {
        const double lam = spectrum.lambda_at(k);
        const double gam = spectrum.gamma_at(k);
        if (lam != 0.0) {
            const double db = inc.d_transport[k + spectrum.K];
            if (db != 0.0) out += (lam * db) * d1((sb.mode(k) * w.values).eval(), dx);
        }
        if (gam != 0.0) {
            const double db1 = inc.d_ito[k + spectrum.K];
            if (db1 != 0.0) {
                if (!have_fw) {
                    fw = w.values.unaryExpr([&](double u) { return f.value(u); });
                    have_fw = true;
                }
                out += (gam * db1) * (sb.mode(k) * fw);
            }
        }
    }
    return Field{std::move(out), w.L};
}

Field apply_noise(const Field& w, const SpectralBasis& basis,
                  const NoiseSpectrum& spectrum, const LipschitzCoefficient& f,
                  const WienerIncrements& inc) {
    return apply_noise(w, sample_basis(basis, w.size()), spectrum, f, inc);
}

Field stoch_step(const Field& w, const StochParams& p, const SampledBasis& sb,
                 const WienerIncrements& inc) {
    Field out = w;
    out.values += inc.dt * stochastic_drift(w, sb, p.spectrum, p.eps).values;
    out.values += apply_noise(w, sb, p.spectrum, p.f, inc).values;
    if (!all_finite(out)) throw SolverFailure("non-finite state after stochastic step");
    return out;
}

double stability_cap(const StochParams& p, const SpectralBasis& basis, double dx) {
    double denom = p.eps;
    for (int k = -p.spectrum.K; k <= p.spectrum.K; ++k) {
        const double lam = p.spectrum.lambda_at(k);
        if (lam == 0.0) continue;
        const double amp = basis.coeff(k) * (k == 0 ? M_SQRT1_2 : 1.0);
        denom += lam * lam * amp * amp;
    }
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return p.c_stab * dx * dx / denom;
}

EvolveResult stoch_evolve(const Field& w0, double t0, double t1,
                          const SpectralBasis& basis, const StochParams& p,
                          const RngLease& lease, std::uint64_t substep_offset,
                          int diag_stride, bool record_states) {
    if (!(t1 > t0)) throw std::invalid_argument("stoch_evolve requires t1 > t0");
    if (!(p.dt > 0.0)) throw std::invalid_argument("stoch dt must be positive");
    if (!all_finite(w0)) throw SolverFailure("non-finite input to stoch_evolve");

    const double dt_eff = std::min(p.dt, stability_cap(p, basis, w0.dx()));
    const double span = t1 - t0;
    const auto n = static_cast<std::uint64_t>(std::ceil(span / dt_eff - 1e-12));
    const double dt = span / static_cast<double>(n);

    const SampledBasis sb = sample_basis(basis, w0.size());

    EvolveResult res;
    res.field = w0;
    res.substeps = n;

    auto observe = [&](double t, bool record) {
        const FieldNorms nn = norms(res.field);
        res.sup_h1_sq = std::max(res.sup_h1_sq, nn.h1 * nn.h1);
        res.min_over_steps = std::min(res.min_over_steps, min_value(res.field));
        if (record) res.diagnostics.push_back(probe(res.field, t));
    };

    observe(t0, diag_stride > 0);
    if (record_states) res.states.push_back(res.field);

    for (std::uint64_t s = 0; s < n; ++s) {
        const WienerIncrements inc =
            draw_increments(lease, substep_offset + s, p.spectrum.K, dt);
        try {
            res.field = stoch_step(res.field, p, sb, inc);
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string(e.what()) + " at t = " +
                                std::to_string(t0 + dt * static_cast<double>(s)) +
                                "; last good state: mass = " +
                                std::to_string(mass(res.field)) + ", min = " +
                                std::to_string(min_value(res.field)));
        }
        const double t = t0 + dt * static_cast<double>(s + 1);
        const bool record =
            diag_stride > 0 &&
            (((s + 1) % static_cast<std::uint64_t>(diag_stride) == 0) || s + 1 == n);
        observe(t, record);
        if (record_states) res.states.push_back(res.field);
    }
    return res;
}

} // namespace stfm
