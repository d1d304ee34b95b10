#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>

namespace stfm {

// Trigonometric family on [0,L], orthonormal in the H^2 inner product
// (u,v) = int(uv + u'v' + u''v'') dx, indexed k in {-K,...,K}:
//
//   mode k > 0 : c_k * cos(2*pi*k*x/L)
//   mode k = 0 : c_0 / sqrt(2)
//   mode k < 0 : c_k * sin(2*pi*k*x/L)
//
// with c_k = sqrt(2 / (L*(1 + w^2 + w^4))), w = 2*pi*k/L.
//
// The family is kept symbolic (amplitude + frequency + branch); sampled
// views for a grid are produced on demand. Derivatives of any mode are an
// exact scalar multiple of another mode, so the derivative identities hold
// to machine precision.
struct SpectralBasis {
    double L = 1.0;
    int K = 0;

    static double two_pi() { return 2.0 * M_PI; }

    // Canonical frequency, evaluated as (2*pi*k)/L in exactly this
    // association. derivative() coefficients are products of these values,
    // so composing first derivatives reproduces higher orders bitwise.
    double omega(int k) const { return (two_pi() * static_cast<double>(k)) / L; }

    double coeff(int k) const {
        const double w = omega(k);
        const double w2 = w * w;
        return std::sqrt(2.0 / (L * (1.0 + w2 + w2 * w2)));
    }

    // Exact closed-form evaluation. The phase is reduced through
    // t = |k| * (x/L) mod 1, which makes eval(k, 0) == eval(k, L) exact.
    double eval(int k, double x) const;

    // d^order/dx^order Psi_k = coefficient * Psi_partner, order in 1..4.
    struct Derivative {
        double coefficient = 0.0;
        int partner = 0;
    };
    Derivative derivative(int k, int order) const;

    Eigen::ArrayXd sample(int k, const Eigen::ArrayXd& x) const;

    // Nodes of the uniform periodic grid x_i = i*L/M, i = 0..M-1.
    Eigen::ArrayXd grid_nodes(int M) const;
};

// pre: L > 0, K >= 0.
SpectralBasis build_basis(double L, int K);

// Truncated noise amplitude sequences lambda_k >= 0 and gamma_k for
// |k| <= K, stored at index k+K.
struct NoiseSpectrum {
    int K = 0;
    Eigen::ArrayXd lambda;
    Eigen::ArrayXd gamma;

    double lambda_at(int k) const { return lambda[k + K]; }
    double gamma_at(int k) const { return gamma[k + K]; }

    // Truncated coloring sum  sum_{|k|<=K} (lambda_k^2 + gamma_k^2).
    double coloring_sum() const { return lambda.square().sum() + gamma.square().sum(); }
};

// Amplitude family for one of the two sequences: an explicit mode->value
// list, or the power law a*(1+|k|)^(-s). The untruncated power-law coloring
// sum converges iff s > 1/2, which is validated at construction.
class SpectrumFamily {
public:
    static SpectrumFamily zero();
    static SpectrumFamily explicit_modes(std::map<int, double> values);
    static SpectrumFamily power_law(double a, double s);

    // pre for power law: a >= 0 and s > 1/2; explicit keys must have
    // |k| <= K and, when require_nonnegative, values >= 0.
    Eigen::ArrayXd materialize(int K, bool require_nonnegative) const;

    bool is_power_law() const { return power_; }
    double amplitude() const { return a_; }
    double exponent() const { return s_; }
    const std::map<int, double>& values() const { return values_; }

private:
    bool power_ = false;
    double a_ = 0.0, s_ = 0.0;
    std::map<int, double> values_;
};

NoiseSpectrum build_noise_spectrum(const SpectrumFamily& lambda_family,
                                   const SpectrumFamily& gamma_family, int K);

} // namespace stfm
