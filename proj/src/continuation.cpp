#include "biwhitham/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biwhitham/kernel.hpp"

namespace biwhitham {

namespace {

// Newton iteration counts at or below this grow the step for the next try.
constexpr int fast_iteration_count = 4;
constexpr double step_growth = 1.3;

BranchPoint make_branch_point(const Vector& y, const Vector& tangent, double arclength,
                              double step_used, int newton_iterations,
                              const CollocationGrid& grid) {
    BranchPoint point;
    point.profile = unpack_state(y);
    point.tangent = tangent;
    point.arclength = arclength;
    point.waveheight = point.profile.values[0] - point.profile.values[grid.n_modes - 1];
    point.gap = gamma_crest(point.profile.c) - point.profile.values[0];
    point.step_used = step_used;
    point.newton_iterations = newton_iterations;
    return point;
}

void validate(const ContinuationConfig& config) {
    if (config.n_modes < 2) {
        throw std::invalid_argument("ContinuationConfig: n_modes must be >= 2");
    }
    if (config.wave_number < 1) {
        throw std::invalid_argument("ContinuationConfig: wave_number must be >= 1");
    }
    if (!(config.epsilon0 > 0.0)) {
        throw std::invalid_argument("ContinuationConfig: epsilon0 must be positive");
    }
    if (!(config.h_min > 0.0) || !(config.h_min <= config.h0) || !(config.h0 <= config.h_max)) {
        throw std::invalid_argument("ContinuationConfig: need 0 < h_min <= h0 <= h_max");
    }
    if (!(config.gap_threshold_rel > 0.0) || !(config.gap_threshold_rel < 1.0)) {
        throw std::invalid_argument("ContinuationConfig: gap_threshold_rel must lie in (0, 1)");
    }
    if (config.max_steps < 1) {
        throw std::invalid_argument("ContinuationConfig: max_steps must be >= 1");
    }
}

}  // namespace

double bifurcation_speed(int k) {
    if (k < 1) {
        throw std::invalid_argument("bifurcation_speed: k must be >= 1");
    }
    return std::sqrt(symbol(static_cast<double>(k)));
}

WaveProfile local_profile(double epsilon, int k, const CollocationGrid& grid) {
    if (k < 1) {
        throw std::invalid_argument("local_profile: k must be >= 1");
    }
    const double ck = bifurcation_speed(k);
    const double c2k = bifurcation_speed(2 * k);
    const double ck2 = ck * ck;
    const double mean_shift = 1.0 / (ck2 - 1.0);
    const double second_mode = 1.0 / (ck2 - c2k * c2k);

    WaveProfile profile;
    profile.c = ck + (3.0 * epsilon * epsilon / 8.0) *
                         (-1.0 / (2.0 * ck) + 3.0 * ck * (mean_shift + 0.5 * second_mode));
    profile.values.resize(grid.n_modes);
    const double quad = 0.75 * ck * epsilon * epsilon;
    for (int m = 0; m < grid.n_modes; ++m) {
        const double x = grid.nodes[m];
        profile.values[m] =
            epsilon * std::cos(k * x) + quad * (mean_shift + second_mode * std::cos(2.0 * k * x));
    }
    return profile;
}

Vector seed_tangent(double epsilon0, int k, const CollocationGrid& grid) {
    if (k < 1) {
        throw std::invalid_argument("seed_tangent: k must be >= 1");
    }
    const double ck = bifurcation_speed(k);
    const double c2k = bifurcation_speed(2 * k);
    const double ck2 = ck * ck;
    const double dc = (3.0 * epsilon0 / 4.0) *
                      (-1.0 / ck + 3.0 * ck * (1.0 / (ck2 - 1.0) + 0.5 / (ck2 - c2k * c2k)));
    Vector tangent(grid.n_modes + 1);
    tangent[0] = dc;
    for (int m = 0; m < grid.n_modes; ++m) {
        tangent[m + 1] = std::cos(k * grid.nodes[m]);
    }
    tangent.normalize();
    return tangent;
}

StepResult arclength_step(const BranchPoint& from, double h, const CollocationGrid& grid,
                          const NewtonParams& params) {
    StepResult result;
    const Vector y_from = pack_state(from.profile.c, from.profile.values);
    const Vector y_pred = y_from + h * from.tangent;

    LinearConstraint plane;
    plane.coefficients = from.tangent;
    plane.rhs = from.tangent.dot(y_pred);
    const NewtonResult corrector = newton_solve(y_pred, grid, plane, params);
    if (corrector.status == NewtonResult::Status::singular_jacobian) {
        result.status = StepResult::Status::singular_system;
        return result;
    }
    if (!corrector.ok()) {
        result.status = StepResult::Status::newton_failed;
        return result;
    }

    // New tangent from { Df(y) z = 0, z_old . z = 1 }, then normalized; the
    // normalization preserves the positive inner product with the previous
    // tangent, which fixes the orientation of the march.
    const int n = grid.n_modes;
    Matrix bordered(n + 1, n + 1);
    bordered.topRows(n) = jacobian(corrector.y, grid);
    bordered.row(n) = from.tangent.transpose();
    Vector rhs = Vector::Zero(n + 1);
    rhs[n] = 1.0;
    Eigen::PartialPivLU<Matrix> lu(bordered);
    Vector tangent = lu.solve(rhs);
    const double norm = tangent.norm();
    if (!std::isfinite(norm) || norm == 0.0) {
        result.status = StepResult::Status::singular_system;
        return result;
    }
    tangent /= norm;

    result.status = StepResult::Status::accepted;
    result.point = make_branch_point(corrector.y, tangent, from.arclength + h, h,
                                     corrector.iterations, grid);
    return result;
}

Branch run_branch(const ContinuationConfig& config) {
    validate(config);

    Branch branch;
    branch.grid = build_grid(config.n_modes);
    const CollocationGrid& grid = branch.grid;

    // Seed: converge the second-order small-amplitude wave at fixed speed.
    const WaveProfile seed = local_profile(config.epsilon0, config.wave_number, grid);
    const Vector y_seed = pack_state(seed.c, seed.values);
    const NewtonResult seeded = newton_solve(y_seed, grid, std::nullopt, config.newton);
    if (!seeded.ok()) {
        throw std::runtime_error("run_branch: Newton failed to converge on the seed profile");
    }
    const Vector tangent0 = seed_tangent(config.epsilon0, config.wave_number, grid);
    branch.points.push_back(
        make_branch_point(seeded.y, tangent0, 0.0, 0.0, seeded.iterations, grid));

    double h = config.h0;
    branch.termination = Termination::max_steps;
    for (int step = 0; step < config.max_steps; ++step) {
        bool accepted = false;
        while (true) {
            const StepResult trial = arclength_step(branch.points.back(), h, grid, config.newton);
            // A corrected point at or beyond the crest limit is rejected like a
            // failed step, so every accepted point keeps gap > 0.
            if (trial.ok() && trial.point.gap > 0.0) {
                branch.points.push_back(trial.point);
                if (trial.point.newton_iterations <= fast_iteration_count) {
                    h = std::min(h * step_growth, config.h_max);
                }
                accepted = true;
                break;
            }
            h *= 0.5;
            if (h < config.h_min) {
                break;
            }
        }
        if (!accepted) {
            branch.termination = Termination::step_underflow;
            break;
        }
        const BranchPoint& tip = branch.points.back();
        if (tip.gap <= config.gap_threshold_rel * gamma_crest(tip.profile.c)) {
            branch.termination = Termination::gap_below_threshold;
            break;
        }
    }
    return branch;
}

WaveProfile refine_profile(const WaveProfile& profile, const CollocationGrid& coarse,
                           const CollocationGrid& fine, const NewtonParams& params) {
    if (profile.values.size() != coarse.n_modes) {
        throw std::invalid_argument("refine_profile: profile does not match the coarse grid");
    }
    if (fine.n_modes < coarse.n_modes) {
        throw std::invalid_argument("refine_profile: target grid must be at least as fine");
    }
    const Vector coeffs = cosine_coefficients(profile.values, coarse);
    Vector values(fine.n_modes);
    for (int m = 0; m < fine.n_modes; ++m) {
        values[m] = evaluate_series(coeffs, fine.nodes[m]);
    }
    // Near the highest wave the interpolant overshoots the crest and the
    // fixed-speed linearization degenerates at the fold, so the fine solve
    // pins the crest-node value at the coarse crest value (a well-conditioned
    // parameterization of the branch) and lets the speed adjust.
    const double crest = profile.values[0];
    for (int m = 0; m < fine.n_modes; ++m) {
        values[m] = std::min(values[m], crest);
    }
    LinearConstraint pin;
    pin.coefficients = Vector::Zero(fine.n_modes + 1);
    pin.coefficients[1] = 1.0;
    pin.rhs = crest;
    const NewtonResult refined = newton_solve(pack_state(profile.c, values), fine, pin, params);
    if (!refined.ok()) {
        throw std::runtime_error("refine_profile: Newton failed to re-converge on the fine grid");
    }
    return unpack_state(refined.y);
}

}  // namespace biwhitham
