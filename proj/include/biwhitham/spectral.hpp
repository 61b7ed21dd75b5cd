#pragma once

#include "biwhitham/types.hpp"

namespace biwhitham {

// Cosine collocation grid on the half-period (0, pi): midpoint nodes
// x_m = (2m-1) pi / (2N) for m = 1..N, discrete cosine transform weights
// w(0) = 1/N, w(n) = 2/N, and the dense matrix representing the Fourier
// multiplier operator in nodal values.
struct CollocationGrid {
    int n_modes = 0;
    Vector nodes;         // size N
    Vector mode_weights;  // size N
    Matrix cosines;       // (m, n) entry: cos(n * x_m)
    Matrix multiplier;    // N x N nodal representation of the multiplier operator

    // Quadrature weight of each node for the midpoint rule on (0, pi).
    double node_weight() const { return pi / n_modes; }
};

// A 2*pi-periodic even wave, stored as its speed and its values at the
// collocation nodes of some grid.
struct WaveProfile {
    double c = 0.0;
    Vector values;
};

CollocationGrid build_grid(int n_modes);

// Discrete cosine coefficients of nodal values:
// coeffs[n] = w(n) * sum_m values[m] cos(n x_m).
Vector cosine_coefficients(const Vector& values, const CollocationGrid& grid);

// Nodal values of a cosine series: values[m] = sum_n coeffs[n] cos(n x_m).
Vector cosine_synthesis(const Vector& coeffs, const CollocationGrid& grid);

// Pointwise evaluation of a cosine series at an arbitrary location.
double evaluate_series(const Vector& coeffs, double x);

// Apply the multiplier operator to nodal values via the cached dense matrix.
Vector apply_multiplier(const Vector& values, const CollocationGrid& grid);

// Same operator via analyze -> scale by symbol -> synthesize; agrees with the
// matrix route to rounding and exists as an independent evaluation path.
Vector apply_multiplier_transform(const Vector& values, const CollocationGrid& grid);

}  // namespace biwhitham
