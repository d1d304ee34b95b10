#pragma once

#include <Eigen/Dense>

#include <limits>

namespace stfm {

// Real-valued function sampled on the uniform periodic grid
// x_i = i*L/M, i = 0..M-1. Value semantics: operations return new fields.
//
// Discrete calculus uses centered second-order stencils with periodic wrap;
// mass uses the rectangle rule, which on this grid is exact for trig
// polynomials below the Nyquist frequency.
struct Field {
    Eigen::ArrayXd values;
    double L = 1.0;

    int size() const { return static_cast<int>(values.size()); }
    double dx() const { return L / static_cast<double>(size()); }
};

// pre: M >= 8 and even (clean stencil wrap), L > 0.
Field make_field(int M, double L, double fill = 0.0);
Field field_from_samples(Eigen::ArrayXd values, double L);

bool all_finite(const Field& f);

// values[(i+s) mod M]
Eigen::ArrayXd roll(const Eigen::ArrayXd& v, int s);

double mass(const Field& f);

// Centered periodic finite differences, order-2 accurate:
//   1: (u_{i+1}-u_{i-1}) / 2dx
//   2: (u_{i+1}-2u_i+u_{i-1}) / dx^2
//   3: (u_{i+2}-2u_{i+1}+2u_{i-1}-u_{i-2}) / 2dx^3   (sign per Taylor)
//   4: (u_{i+2}-4u_{i+1}+6u_i-4u_{i-1}+u_{i-2}) / dx^4
Field diff(const Field& f, int order);

struct FieldNorms {
    double l2 = 0.0;
    double dx_l2 = 0.0;
    double h1 = 0.0; // sqrt(l2^2 + dx_l2^2), exact by construction
};
FieldNorms norms(const Field& f);

double min_value(const Field& f);

// Fraction of grid nodes with value > threshold.
double positivity_measure(const Field& f, double threshold);

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
    double dx_l2 = 0.0;
    double min_value = 0.0;
    double energy_residual = 0.0;
    double positivity_measure = 0.0; // fraction of grid with u > 0
};

DiagnosticsRecord probe(const Field& f, double t, double energy_residual = 0.0);

} // namespace stfm
