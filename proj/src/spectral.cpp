#include "biwhitham/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "biwhitham/kernel.hpp"

namespace biwhitham {

namespace {

void check_values(const Vector& values, const CollocationGrid& grid, const char* where) {
    if (values.size() != grid.n_modes) {
        throw std::invalid_argument(std::string(where) + ": values length does not match grid");
    }
}

}  // namespace

CollocationGrid build_grid(int n_modes) {
    if (n_modes < 2) {
        throw std::invalid_argument("build_grid: n_modes must be >= 2");
    }
    CollocationGrid grid;
    grid.n_modes = n_modes;
    grid.nodes.resize(n_modes);
    grid.mode_weights.resize(n_modes);
    for (int m = 0; m < n_modes; ++m) {
        grid.nodes[m] = (2.0 * m + 1.0) * pi / (2.0 * n_modes);
        grid.mode_weights[m] = (m == 0) ? 1.0 / n_modes : 2.0 / n_modes;
    }
    grid.cosines.resize(n_modes, n_modes);
    for (int m = 0; m < n_modes; ++m) {
        for (int n = 0; n < n_modes; ++n) {
            grid.cosines(m, n) = std::cos(n * grid.nodes[m]);
        }
    }
    // Multiplier matrix: synthesize * diag(symbol(n) * w(n)) * analyze, so its
    // (i, m) entry is sum_n symbol(n) w(n) cos(n x_m) cos(n x_i) and its
    // spectrum is exactly {symbol(n) : n = 0..N-1}.
    Vector scaled(n_modes);
    for (int n = 0; n < n_modes; ++n) {
        scaled[n] = symbol(static_cast<double>(n)) * grid.mode_weights[n];
    }
    grid.multiplier = grid.cosines * scaled.asDiagonal() * grid.cosines.transpose();
    return grid;
}

Vector cosine_coefficients(const Vector& values, const CollocationGrid& grid) {
    check_values(values, grid, "cosine_coefficients");
    return grid.mode_weights.asDiagonal() * (grid.cosines.transpose() * values);
}

Vector cosine_synthesis(const Vector& coeffs, const CollocationGrid& grid) {
    check_values(coeffs, grid, "cosine_synthesis");
    return grid.cosines * coeffs;
}

double evaluate_series(const Vector& coeffs, double x) {
    double sum = 0.0;
    for (Eigen::Index n = coeffs.size() - 1; n >= 0; --n) {
        sum += coeffs[n] * std::cos(n * x);
    }
    return sum;
}

Vector apply_multiplier(const Vector& values, const CollocationGrid& grid) {
    check_values(values, grid, "apply_multiplier");
    return grid.multiplier * values;
}

Vector apply_multiplier_transform(const Vector& values, const CollocationGrid& grid) {
    check_values(values, grid, "apply_multiplier_transform");
    Vector coeffs = cosine_coefficients(values, grid);
    for (int n = 0; n < grid.n_modes; ++n) {
        coeffs[n] *= symbol(static_cast<double>(n));
    }
    return cosine_synthesis(coeffs, grid);
}

}  // namespace biwhitham
