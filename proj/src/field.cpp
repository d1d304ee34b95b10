#include "stfm/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stfm {

namespace {

void validate_shape(int M, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("field domain length must be positive");
    if (M < 8 || M % 2 != 0)
        throw std::invalid_argument("grid size must be even and >= 8, got " +
                                    std::to_string(M));
}

} // namespace

Field make_field(int M, double L, double fill) {
    validate_shape(M, L);
    return Field{Eigen::ArrayXd::Constant(M, fill), L};
}

Field field_from_samples(Eigen::ArrayXd values, double L) {
    validate_shape(static_cast<int>(values.size()), L);
    return Field{std::move(values), L};
}

bool all_finite(const Field& f) { return f.values.isFinite().all(); }

Eigen::ArrayXd roll(const Eigen::ArrayXd& v, int s) {
    const int M = static_cast<int>(v.size());
    Eigen::ArrayXd out(M);
    const int shift = ((s % M) + M) % M;
    for (int i = 0; i < M; ++i) {
        int j = i + shift;
        if (j >= M) j -= M;
        out[i] = v[j];
    }
    return out;
}

double mass(const Field& f) { return f.dx() * f.values.sum(); }

Field diff(const Field& f, int order) {
    const double dx = f.dx();
    const Eigen::ArrayXd& u = f.values;
    Eigen::ArrayXd out;
    switch (order) {
        case 1:
            out = (roll(u, 1) - roll(u, -1)) / (2.0 * dx);
            break;
        case 2:
            out = (roll(u, 1) - 2.0 * u + roll(u, -1)) / (dx * dx);
            break;
        case 3:
            out = (roll(u, 2) - 2.0 * roll(u, 1) + 2.0 * roll(u, -1) - roll(u, -2)) /
                  (2.0 * dx * dx * dx);
            break;
        case 4:
            out = (roll(u, 2) - 4.0 * roll(u, 1) + 6.0 * u - 4.0 * roll(u, -1) +
                   roll(u, -2)) /
                  (dx * dx * dx * dx);
            break;
        default:
            throw std::invalid_argument("diff order must be in 1..4, got " +
                                        std::to_string(order));
    }
    return Field{std::move(out), f.L};
}

FieldNorms norms(const Field& f) {
    FieldNorms n;
    n.l2 = std::sqrt(f.dx() * f.values.square().sum());
    n.dx_l2 = std::sqrt(f.dx() * diff(f, 1).values.square().sum());
    n.h1 = std::sqrt(n.l2 * n.l2 + n.dx_l2 * n.dx_l2);
    return n;
}

double min_value(const Field& f) { return f.values.minCoeff(); }

double positivity_measure(const Field& f, double threshold) {
    const auto count = (f.values > threshold).count();
    return static_cast<double>(count) / static_cast<double>(f.size());
}

DiagnosticsRecord probe(const Field& f, double t, double energy_residual) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.mass = mass(f);
    const FieldNorms n = norms(f);
    rec.l2 = n.l2;
    rec.h1 = n.h1;
    rec.dx_l2 = n.dx_l2;
    rec.min_value = min_value(f);
    rec.energy_residual = energy_residual;
    rec.positivity_measure = positivity_measure(f, 0.0);
    return rec;
}

} // namespace stfm
