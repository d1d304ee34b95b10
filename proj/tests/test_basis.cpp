#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stfm/basis.hpp"

#include <cmath>

using namespace stfm;

TEST_CASE("build_basis validates inputs") {
    CHECK_THROWS_AS(build_basis(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(1.0, -1), std::invalid_argument);
    CHECK_NOTHROW(build_basis(1.0, 0));
}

TEST_CASE("normalization constants match the closed form") {
    // L = 2*pi makes omega(1) = 1, so c_1 = sqrt(2/(2*pi*3)) = 1/sqrt(3*pi).
    const SpectralBasis b = build_basis(2.0 * M_PI, 4);
    CHECK(b.coeff(1) == doctest::Approx(1.0 / std::sqrt(3.0 * M_PI)).epsilon(1e-14));
    CHECK(b.coeff(1) == doctest::Approx(0.32574).epsilon(1e-4));
    // c_0 = sqrt(2/L)
    CHECK(b.coeff(0) == doctest::Approx(std::sqrt(2.0 / b.L)).epsilon(1e-15));
    // even in k
    CHECK(b.coeff(-3) == b.coeff(3));
}

TEST_CASE("evaluation matches the closed form") {
    const SpectralBasis b1 = build_basis(1.0, 8);
    // constant branch: c_0/sqrt(2) = sqrt(2)/sqrt(2) = 1 for L = 1
    CHECK(b1.eval(0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b1.eval(0, 0.0) == b1.eval(0, 0.77));

    // cosine branch at x = 0
    CHECK(b1.eval(5, 0.0) == doctest::Approx(b1.coeff(5)).epsilon(1e-15));
    // sine branch at x = 0
    CHECK(b1.eval(-2, 0.0) == 0.0);
    // cosine zero at quarter period
    CHECK(std::abs(b1.eval(1, b1.L / 4.0)) < 1e-15);

    // against direct trig for a handful of points
    const SpectralBasis b = build_basis(1.7, 6);
    for (double x : {0.1, 0.456, 1.2, 1.69}) {
        CHECK(b.eval(3, x) ==
              doctest::Approx(b.coeff(3) * std::cos(2.0 * M_PI * 3.0 * x / b.L))
                  .epsilon(1e-12));
        CHECK(b.eval(-3, x) ==
              doctest::Approx(b.coeff(3) * std::sin(2.0 * M_PI * (-3.0) * x / b.L))
                  .epsilon(1e-12));
    }
}

TEST_CASE("periodicity is exact at the endpoints") {
    for (double L : {1.0, 0.7, 2.0 * M_PI, 3.3}) {
        const SpectralBasis b = build_basis(L, 8);
        for (int k = -8; k <= 8; ++k) CHECK(b.eval(k, 0.0) == b.eval(k, L));
    }
}

TEST_CASE("mode cutoff is enforced") {
    const SpectralBasis b = build_basis(1.0, 3);
    CHECK_THROWS_AS(b.eval(4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(b.derivative(-4, 1), std::invalid_argument);
    CHECK_THROWS_AS(b.derivative(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(b.derivative(2, 5), std::invalid_argument);
}

TEST_CASE("derivative pairs match the analytic identities") {
    const SpectralBasis b = build_basis(1.0, 4);

    // (k=3, order=1), L=1 -> (6*pi, -3); canonical form (2*pi*k)/L
    const auto d = b.derivative(3, 1);
    CHECK(d.coefficient == (2.0 * M_PI * 3.0) / 1.0);
    CHECK(d.partner == -3);

    // derivative of the constant mode vanishes at every order
    for (int order = 1; order <= 4; ++order) {
        const auto z = b.derivative(0, order);
        CHECK(z.coefficient == 0.0);
        CHECK(z.partner == 0);
    }

    // (k=2, order=4), L=2*pi -> coefficient exactly 16, partner 2
    const SpectralBasis b2 = build_basis(2.0 * M_PI, 4);
    const auto q = b2.derivative(2, 4);
    CHECK(q.coefficient == 16.0);
    CHECK(q.partner == 2);

    // signs and magnitudes of all four orders for one mode
    const double w = b.omega(2);
    CHECK(b.derivative(2, 2).coefficient == -(w * w));
    CHECK(b.derivative(2, 2).partner == 2);
    CHECK(b.derivative(2, 3).coefficient == -((w * w) * w));
    CHECK(b.derivative(2, 3).partner == -2);
}

TEST_CASE("first-derivative composition reproduces higher orders bitwise") {
    for (double L : {1.0, 0.7, 2.0 * M_PI}) {
        const SpectralBasis b = build_basis(L, 8);
        for (int k = -8; k <= 8; ++k) {
            const auto d1 = b.derivative(k, 1);
            const auto d2 = b.derivative(d1.partner, 1);
            const auto d3 = b.derivative(d2.partner, 1);
            const auto d4 = b.derivative(d3.partner, 1);

            CHECK(d1.coefficient * d2.coefficient == b.derivative(k, 2).coefficient);
            CHECK(d2.partner == b.derivative(k, 2).partner);
            CHECK(d1.coefficient * d2.coefficient * d3.coefficient ==
                  b.derivative(k, 3).coefficient);
            CHECK(d3.partner == b.derivative(k, 3).partner);
            CHECK(d1.coefficient * d2.coefficient * d3.coefficient * d4.coefficient ==
                  b.derivative(k, 4).coefficient);
            CHECK(d4.partner == b.derivative(k, 4).partner);
        }
    }
}

TEST_CASE("sampled derivatives agree with finite differences of eval") {
    const SpectralBasis b = build_basis(1.3, 5);
    const double h = 1e-6;
    for (int k : {-4, -1, 2, 5}) {
        const auto d = b.derivative(k, 1);
        for (double x : {0.2, 0.9}) {
            const double fd = (b.eval(k, x + h) - b.eval(k, x - h)) / (2.0 * h);
            CHECK(d.coefficient * b.eval(d.partner, x) ==
                  doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("H2 orthonormality holds under fine quadrature") {
    const SpectralBasis b = build_basis(1.7, 8);
    const int Q = 4096;
    const Eigen::ArrayXd x = b.grid_nodes(Q);
    const double dxq = b.L / Q;
    std::vector<Eigen::ArrayXd> v0, v1, v2;
    for (int k = -b.K; k <= b.K; ++k) {
        v0.push_back(b.sample(k, x));
        const auto d1 = b.derivative(k, 1);
        const auto d2 = b.derivative(k, 2);
        v1.push_back(d1.coefficient * b.sample(d1.partner, x));
        v2.push_back(d2.coefficient * b.sample(d2.partner, x));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i)
        for (std::size_t j = 0; j < v0.size(); ++j) {
            const double ip =
                dxq * (v0[i] * v0[j] + v1[i] * v1[j] + v2[i] * v2[j]).sum();
            worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("noise spectrum construction and the coloring condition") {
    // single explicit mode: sum = 0.5^2
    const NoiseSpectrum single = build_noise_spectrum(
        SpectrumFamily::explicit_modes({{0, 0.5}}), SpectrumFamily::zero(), 0);
    CHECK(single.coloring_sum() == doctest::Approx(0.25).epsilon(1e-15));

    // power law a=1, s=1, K=2: 1 + 2*(1/2)^2 + 2*(1/3)^2
    const NoiseSpectrum pl = build_noise_spectrum(SpectrumFamily::power_law(1.0, 1.0),
                                                  SpectrumFamily::zero(), 2);
    const double expected = 1.0 + 2.0 * 0.25 + 2.0 / 9.0;
    CHECK(pl.coloring_sum() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(pl.coloring_sum() == doctest::Approx(1.7222).epsilon(1e-4));
    CHECK(pl.lambda_at(-2) == pl.lambda_at(2));

    // validation failures
    CHECK_THROWS_AS(build_noise_spectrum(SpectrumFamily::power_law(1.0, 0.4),
                                         SpectrumFamily::zero(), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_noise_spectrum(SpectrumFamily::power_law(-1.0, 1.0),
                                         SpectrumFamily::zero(), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_noise_spectrum(SpectrumFamily::explicit_modes({{1, -0.1}}),
                                         SpectrumFamily::zero(), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_noise_spectrum(SpectrumFamily::explicit_modes({{5, 0.1}}),
                                         SpectrumFamily::zero(), 2),
                    std::invalid_argument);

    // gamma may be negative; zero power-law amplitude needs no exponent bound
    CHECK_NOTHROW(build_noise_spectrum(SpectrumFamily::zero(),
                                       SpectrumFamily::explicit_modes({{1, -0.3}}), 2));
    CHECK_NOTHROW(build_noise_spectrum(SpectrumFamily::power_law(0.0, 0.1),
                                       SpectrumFamily::zero(), 2));
}
