#include "biwhitham/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace biwhitham {

namespace {

constexpr double inv_sqrt3 = 0.57735026918962576451;

void check_state(const Vector& y, const CollocationGrid& grid, const char* where) {
    if (y.size() != grid.n_modes + 1) {
        throw std::invalid_argument(std::string(where) + ": state length must be n_modes + 1");
    }
}

bool lu_is_singular(const Eigen::PartialPivLU<Matrix>& lu, int n) {
    const auto diag = lu.matrixLU().diagonal();
    const double largest = diag.cwiseAbs().maxCoeff();
    if (!(largest > 0.0) || !std::isfinite(largest)) {
        return true;
    }
    return diag.cwiseAbs().minCoeff() <= largest * n * 1e-16;
}

}  // namespace

double gamma_crest(double c) { return c * (1.0 - inv_sqrt3); }

double nonlinearity(double phi, double c) {
    return phi * (c - 0.5 * phi) * (c - phi);
}

double nonlinearity_deriv(double phi, double c) {
    return c * c - 3.0 * c * phi + 1.5 * phi * phi;
}

double trivial_branch(double c, int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("trivial_branch: sign must be +1 or -1");
    }
    return 0.5 * (3.0 * c + sign * std::sqrt(8.0 + c * c));
}

Vector pack_state(double c, const Vector& values) {
    Vector y(values.size() + 1);
    y[0] = c;
    y.tail(values.size()) = values;
    return y;
}

WaveProfile unpack_state(const Vector& y) {
    if (y.size() < 2) {
        throw std::invalid_argument("unpack_state: state must hold a speed and at least one value");
    }
    WaveProfile profile;
    profile.c = y[0];
    profile.values = y.tail(y.size() - 1);
    return profile;
}

Vector residual(const Vector& y, const CollocationGrid& grid) {
    check_state(y, grid, "residual");
    const double c = y[0];
    const Vector phi = y.tail(grid.n_modes);
    Vector f = -apply_multiplier(phi, grid);
    for (int i = 0; i < grid.n_modes; ++i) {
        f[i] += nonlinearity(phi[i], c);
    }
    return f;
}

Matrix jacobian(const Vector& y, const CollocationGrid& grid) {
    check_state(y, grid, "jacobian");
    const double c = y[0];
    const Vector phi = y.tail(grid.n_modes);
    Matrix jac(grid.n_modes, grid.n_modes + 1);
    for (int i = 0; i < grid.n_modes; ++i) {
        jac(i, 0) = phi[i] * (2.0 * c - 1.5 * phi[i]);
    }
    jac.rightCols(grid.n_modes) = -grid.multiplier;
    for (int i = 0; i < grid.n_modes; ++i) {
        jac(i, i + 1) += nonlinearity_deriv(phi[i], c);
    }
    return jac;
}

NewtonResult newton_solve(const Vector& y0, const CollocationGrid& grid,
                          const std::optional<LinearConstraint>& constraint,
                          const NewtonParams& params) {
    check_state(y0, grid, "newton_solve");
    if (!(params.tolerance > 0.0)) {
        throw std::invalid_argument("newton_solve: tolerance must be positive");
    }
    if (params.max_iterations < 1) {
        throw std::invalid_argument("newton_solve: max_iterations must be >= 1");
    }
    if (constraint && constraint->coefficients.size() != grid.n_modes + 1) {
        throw std::invalid_argument("newton_solve: constraint row length must be n_modes + 1");
    }

    const int n = grid.n_modes;
    NewtonResult result;
    result.y = y0;

    auto total_norm = [&](const Vector& y) {
        double norm = residual(y, grid).cwiseAbs().maxCoeff();
        if (constraint) {
            norm = std::max(norm, std::abs(constraint->coefficients.dot(y) - constraint->rhs));
        }
        return norm;
    };

    double norm = total_norm(result.y);
    result.residual_history.push_back(norm);

    for (int iter = 0; iter <= params.max_iterations; ++iter) {
        result.residual_norm = norm;
        result.iterations = iter;
        if (norm <= params.tolerance) {
            result.status = NewtonResult::Status::converged;
            return result;
        }
        if (iter == params.max_iterations) {
            break;
        }
        if (!std::isfinite(norm)) {
            break;
        }

        if (constraint) {
            Matrix bordered(n + 1, n + 1);
            bordered.topRows(n) = jacobian(result.y, grid);
            bordered.row(n) = constraint->coefficients.transpose();
            Vector rhs(n + 1);
            rhs.head(n) = -residual(result.y, grid);
            rhs[n] = -(constraint->coefficients.dot(result.y) - constraint->rhs);
            Eigen::PartialPivLU<Matrix> lu(bordered);
            if (lu_is_singular(lu, n + 1)) {
                result.status = NewtonResult::Status::singular_jacobian;
                return result;
            }
            result.y += lu.solve(rhs);
        } else {
            // Speed held fixed: square system in the nodal values alone.
            Matrix jac = jacobian(result.y, grid).rightCols(n);
            Eigen::PartialPivLU<Matrix> lu(jac);
            if (lu_is_singular(lu, n)) {
                result.status = NewtonResult::Status::singular_jacobian;
                return result;
            }
            result.y.tail(n) += lu.solve(-residual(result.y, grid));
        }

        norm = total_norm(result.y);
        result.residual_history.push_back(norm);
    }

    result.status = NewtonResult::Status::no_convergence;
    result.residual_norm = norm;
    return result;
}

}  // namespace biwhitham
