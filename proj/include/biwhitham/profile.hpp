#pragma once

#include <optional>
#include <vector>

#include "biwhitham/spectral.hpp"
#include "biwhitham/types.hpp"

namespace biwhitham {

// Crest limit gamma(c) = c (1 - 1/sqrt(3)): the first critical value of the
// nonlinearity and the height at which the limiting wave forms its cusp.
double gamma_crest(double c);

// Cubic nonlinearity N(phi; c) = phi (c - phi/2) (c - phi).
double nonlinearity(double phi, double c);

// d/dphi N(phi; c) = c^2 - 3 c phi + (3/2) phi^2
//                  = (3/2) (gamma - phi) (gamma - phi + 2c/sqrt(3)).
double nonlinearity_deriv(double phi, double c);

// Constant solutions N(phi) = phi: Gamma_{+/-}(c) = (3c +/- sqrt(8 + c^2))/2.
// sign must be +1 or -1.
double trivial_branch(double c, int sign);

// State packing for the discretized equation: y = (c, values[0..N-1]).
Vector pack_state(double c, const Vector& values);
WaveProfile unpack_state(const Vector& y);

// Collocation residual f_i(y) = N(values[i]; c) - (multiplier * values)[i].
Vector residual(const Vector& y, const CollocationGrid& grid);

// Jacobian of the residual with respect to (c, values): N x (N+1).
// Column 0 holds d f_i / dc = values[i] (2c - (3/2) values[i]); the remaining
// block is diag(N'(values; c)) - multiplier.
Matrix jacobian(const Vector& y, const CollocationGrid& grid);

struct NewtonParams {
    double tolerance = 1e-12;  // on the max norm of the residual
    int max_iterations = 25;
};

// Optional linear constraint row appended to the square Newton system:
// coefficients . y = rhs.  Without it the wave speed is held fixed.
struct LinearConstraint {
    Vector coefficients;  // length N+1
    double rhs = 0.0;
};

struct NewtonResult {
    enum class Status { converged, no_convergence, singular_jacobian };
    Status status = Status::no_convergence;
    Vector y;                 // final iterate
    int iterations = 0;
    double residual_norm = 0.0;
    std::vector<double> residual_history;  // max norm per iterate, including y0
    bool ok() const { return status == Status::converged; }
};

// Damped-free Newton iteration on the collocation system, either with the
// speed held fixed (square N system in the values) or with a bordered
// (N+1) x (N+1) system closed by the constraint row.
NewtonResult newton_solve(const Vector& y0, const CollocationGrid& grid,
                          const std::optional<LinearConstraint>& constraint = std::nullopt,
                          const NewtonParams& params = {});

}  // namespace biwhitham
