#include "stfm/basis.hpp"

#include <stdexcept>
#include <string>

namespace stfm {

namespace {

void require_mode(int k, int K) {
    if (std::abs(k) > K)
        throw std::invalid_argument("mode index " + std::to_string(k) +
                                    " outside cutoff |k| <= " + std::to_string(K));
}

} // namespace

double SpectralBasis::eval(int k, double x) const {
    require_mode(k, K);
    if (k == 0) return coeff(0) * M_SQRT1_2;

    const int m = std::abs(k);
    double t = static_cast<double>(m) * (x / L);
    t -= std::floor(t);
    const double arg = two_pi() * t;
    // k < 0: sin(2*pi*k*x/L) = -sin(2*pi*|k|*x/L)
    return (k > 0) ? coeff(k) * std::cos(arg) : -coeff(k) * std::sin(arg);
}

SpectralBasis::Derivative SpectralBasis::derivative(int k, int order) const {
    require_mode(k, K);
    if (order < 1 || order > 4)
        throw std::invalid_argument("derivative order must be in 1..4, got " +
                                    std::to_string(order));
    if (k == 0) return {0.0, 0};

    const double w = omega(k);
    switch (order) {
        case 1: return {w, -k};
        case 2: return {-(w * w), k};
        case 3: return {-((w * w) * w), -k};
        default: return {((w * w) * w) * w, k};
    }
}

Eigen::ArrayXd SpectralBasis::sample(int k, const Eigen::ArrayXd& x) const {
    Eigen::ArrayXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = eval(k, x[i]);
    return out;
}

Eigen::ArrayXd SpectralBasis::grid_nodes(int M) const {
    Eigen::ArrayXd x(M);
    for (int i = 0; i < M; ++i) x[i] = (L * static_cast<double>(i)) / static_cast<double>(M);
    return x;
}

SpectralBasis build_basis(double L, int K) {
    if (!(L > 0.0)) throw std::invalid_argument("domain length L must be positive");
    if (K < 0) throw std::invalid_argument("mode cutoff K must be non-negative");
    return SpectralBasis{L, K};
}

SpectrumFamily SpectrumFamily::zero() { return SpectrumFamily{}; }

SpectrumFamily SpectrumFamily::explicit_modes(std::map<int, double> values) {
    SpectrumFamily f;
    f.values_ = std::move(values);
    return f;
}

SpectrumFamily SpectrumFamily::power_law(double a, double s) {
    SpectrumFamily f;
    f.power_ = true;
    f.a_ = a;
    f.s_ = s;
    return f;
}

Eigen::ArrayXd SpectrumFamily::materialize(int K, bool require_nonnegative) const {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(2 * K + 1);
    if (power_) {
        if (a_ < 0.0)
            throw std::invalid_argument("power-law amplitude must be non-negative");
        if (a_ > 0.0 && !(s_ > 0.5))
            throw std::invalid_argument(
                "power-law exponent s = " + std::to_string(s_) +
                " violates the coloring condition (requires s > 1/2)");
        for (int k = -K; k <= K; ++k)
            out[k + K] = a_ * std::pow(1.0 + std::abs(k), -s_);
        return out;
    }
    for (const auto& [k, v] : values_) {
        if (std::abs(k) > K)
            throw std::invalid_argument("explicit spectrum mode " + std::to_string(k) +
                                        " outside cutoff K = " + std::to_string(K));
        if (require_nonnegative && v < 0.0)
            throw std::invalid_argument("transport amplitude for mode " +
                                        std::to_string(k) + " must be non-negative");
        out[k + K] = v;
    }
    return out;
}

NoiseSpectrum build_noise_spectrum(const SpectrumFamily& lambda_family,
                                   const SpectrumFamily& gamma_family, int K) {
    if (K < 0) throw std::invalid_argument("spectrum cutoff K must be non-negative");
    NoiseSpectrum s;
    s.K = K;
    s.lambda = lambda_family.materialize(K, /*require_nonnegative=*/true);
    s.gamma = gamma_family.materialize(K, /*require_nonnegative=*/false);
    return s;
}

} // namespace stfm
