// Acceptance suite for the traveling-wave toolkit: thirteen end-to-end
// criteria, one pass/fail line each, exit code equal to the number of
// failures.  Tolerances and runtime budgets are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "biwhitham/continuation.hpp"
#include "biwhitham/diagnostics.hpp"
#include "biwhitham/io.hpp"
#include "biwhitham/kernel.hpp"
#include "biwhitham/profile.hpp"
#include "biwhitham/spectral.hpp"
#include "biwhitham/types.hpp"

using namespace biwhitham;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int number, bool ok, const std::string& name, const std::string& detail,
            double elapsed) {
    if (!ok) {
        ++failures;
    }
    std::printf("[%s] %02d %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str(), elapsed);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// Shared fixtures, computed on first use.
struct Fixtures {
    std::optional<Branch> branch512;
    std::optional<Branch> branch64;
    std::optional<CollocationGrid> grid1024;
    std::optional<WaveProfile> refined1024;
    double branch512_seconds = 0.0;

    const Branch& big_branch() {
        if (!branch512) {
            const auto start = Clock::now();
            ContinuationConfig config;
            config.n_modes = 512;
            branch512 = run_branch(config);
            branch512_seconds = seconds_since(start);
        }
        return *branch512;
    }

    const Branch& small_branch() {
        if (!branch64) {
            ContinuationConfig config;
            config.n_modes = 64;
            branch64 = run_branch(config);
        }
        return *branch64;
    }

    const CollocationGrid& fine_grid() {
        if (!grid1024) {
            grid1024 = build_grid(1024);
        }
        return *grid1024;
    }

    const WaveProfile& refined_terminal() {
        if (!refined1024) {
            const Branch& branch = big_branch();
            refined1024 =
                refine_profile(branch.points.back().profile, branch.grid, fine_grid());
        }
        return *refined1024;
    }
};

Fixtures fixtures;

// --- 1: kernel mass on the line and on the period ---------------------------

void criterion_1() {
    const auto start = Clock::now();
    const double line = kernel_l1_norm(40.0);
    const double periodized = periodized_kernel_l1_norm();
    const double err_line = std::abs(line - 1.0);
    const double err_per = std::abs(periodized - 1.0);
    const double elapsed = seconds_since(start);
    const bool ok = err_line < 1e-6 && err_per < 1e-6 && elapsed < 1.0;
    report(1, ok, "kernel mass equals one",
           "line |1-mass|=" + fmt(err_line) + ", periodized |1-mass|=" + fmt(err_per),
           elapsed);
}

// --- 2: closed form against the inverse-transform oracle --------------------

void criterion_2() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double x = 0.1 + (5.0 - 0.1) * i / 49.0;
        worst = std::max(worst, std::abs(kernel(x) - kernel_via_inverse_fourier(x)));
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst < 1e-6 && elapsed < 10.0;
    report(2, ok, "closed form matches transform oracle",
           "max |closed - integral| = " + fmt(worst) + " over 50 points in [0.1, 5]", elapsed);
}

// --- 3: complete-monotonicity certificate up to order four ------------------

void criterion_3() {
    const auto start = Clock::now();
    KernelSpec spec;
    spec.quadrature_cutoff = 20.0;  // also the upper end of the line-kernel grid
    const MonotonicityReport mono = certify_monotonicity(spec, 4, 64);
    double worst = 0.0;
    for (const MonotonicityOrder& order : mono.orders) {
        worst = std::min(worst, std::min(order.kernel_worst, order.periodized_worst));
    }
    const double elapsed = seconds_since(start);
    const bool ok = mono.all_passed() && worst >= -1e-9 && elapsed < 1.0;
    report(3, ok, "alternating differences certify complete monotonicity",
           "orders 0..4, worst signed value " + fmt(worst), elapsed);
}

// --- 4: constant solutions annihilate the residual --------------------------

void criterion_4() {
    const auto start = Clock::now();
    const CollocationGrid grid = build_grid(128);
    double worst_constant = 0.0;
    double worst_zero = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double c = 1.5 * i / 19.0;
        worst_zero = std::max(
            worst_zero, residual(pack_state(c, Vector::Zero(128)), grid).cwiseAbs().maxCoeff());
        for (int sign : {+1, -1}) {
            const Vector constant = Vector::Constant(128, trivial_branch(c, sign));
            worst_constant = std::max(
                worst_constant, residual(pack_state(c, constant), grid).cwiseAbs().maxCoeff());
        }
    }
    const bool ok = worst_zero == 0.0 && worst_constant < 1e-12;
    report(4, ok, "trivial solutions solve the collocation system",
           "zero residual " + fmt(worst_zero) + " (exact), constants " + fmt(worst_constant),
           seconds_since(start));
}

// --- 5: convergence order of the small-amplitude expansion ------------------

void criterion_5() {
    const auto start = Clock::now();
    const CollocationGrid grid = build_grid(256);
    const int n = grid.n_modes;

    NewtonParams params;
    params.tolerance = 5e-15;  // the speed error at the smallest amplitude is ~1e-12
    params.max_iterations = 50;

    const double epsilons[3] = {2e-3, 1e-3, 5e-4};
    double phi_err[3] = {0.0, 0.0, 0.0};
    double c_err[3] = {0.0, 0.0, 0.0};
    bool solved = true;
    for (int i = 0; i < 3; ++i) {
        const double eps = epsilons[i];
        const WaveProfile seed = local_profile(eps, 1, grid);
        // First-cosine-coefficient normalization: the seed satisfies it
        // exactly, and the bordered system stays well conditioned where a
        // fixed-speed solve turns singular as the amplitude shrinks.
        LinearConstraint amplitude;
        amplitude.coefficients = Vector::Zero(n + 1);
        for (int m = 0; m < n; ++m) {
            amplitude.coefficients[1 + m] = (2.0 / n) * std::cos(grid.nodes[m]);
        }
        amplitude.rhs = eps;
        const NewtonResult result =
            newton_solve(pack_state(seed.c, seed.values), grid, amplitude, params);
        if (!result.ok()) {
            solved = false;
            break;
        }
        const WaveProfile wave = unpack_state(result.y);
        phi_err[i] = (wave.values - seed.values).cwiseAbs().maxCoeff();
        c_err[i] = std::abs(wave.c - seed.c);
    }

    bool ok = solved;
    std::string detail;
    if (solved) {
        const double phi_ratio_1 = phi_err[0] / phi_err[1];
        const double phi_ratio_2 = phi_err[1] / phi_err[2];
        const double c_ratio_1 = c_err[0] / c_err[1];
        const double c_ratio_2 = c_err[1] / c_err[2];
        // Third order in amplitude: 8 per halving, within 25%.  Fourth order
        // for the speed: 16 per halving, with a wider band for the smaller
        // absolute errors.
        ok = phi_ratio_1 > 6.0 && phi_ratio_1 < 10.0 && phi_ratio_2 > 6.0 &&
             phi_ratio_2 < 10.0 && c_ratio_1 > 10.0 && c_ratio_1 < 26.0 &&
             c_ratio_2 > 10.0 && c_ratio_2 < 26.0;
        detail = "profile-error ratios " + fmt(phi_ratio_1) + ", " + fmt(phi_ratio_2) +
                 " (want 8 +/- 25%); speed-error ratios " + fmt(c_ratio_1) + ", " +
                 fmt(c_ratio_2) + " (want ~16)";
    } else {
        detail = "constrained solve failed to converge";
    }
    report(5, ok, "expansion errors shrink at third and fourth order", detail,
           seconds_since(start));
}

// --- 6: subcritical bifurcation with a fold ---------------------------------

void criterion_6() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.big_branch();
    const double c1 = bifurcation_speed(1);

    bool subcritical = true;
    for (const BranchPoint& point : branch.points) {
        if (point.waveheight < 0.1 && !(point.profile.c < c1)) {
            subcritical = false;
        }
    }
    bool sign_change = false;
    for (std::size_t i = 1; i < branch.points.size(); ++i) {
        if (branch.points[i - 1].tangent[0] < 0.0 && branch.points[i].tangent[0] > 0.0) {
            sign_change = true;
        }
    }
    const bool ok = subcritical && sign_change && fixtures.branch512_seconds < 600.0 &&
                    branch.points.size() >= 2;
    report(6, ok, "branch bifurcates subcritically and folds back",
           "points " + std::to_string(branch.points.size()) + ", run time " +
               fmt(fixtures.branch512_seconds) + " s, fold " +
               (sign_change ? "detected" : "missing"),
           seconds_since(start));
}

// --- 7: wave speeds stay inside a compact window ----------------------------

void criterion_7() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.big_branch();
    double c_min = 1.0, c_max = 0.0;
    for (const BranchPoint& point : branch.points) {
        c_min = std::min(c_min, point.profile.c);
        c_max = std::max(c_max, point.profile.c);
    }
    const bool ok = c_min > 0.01 && c_max < 0.999;
    report(7, ok, "wave speeds confined to (0.01, 0.999)",
           "observed [" + fmt(c_min) + ", " + fmt(c_max) + "]", seconds_since(start));
}

// --- 8: nodal pattern at every accepted point -------------------------------

void criterion_8() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.big_branch();
    int failed_points = 0;
    int monotone_fail = 0;
    int below_gamma_fail = 0;
    int crest_sign_fail = 0;
    int trough_sign_fail = 0;
    double crest_fail_gap_max = 0.0;
    for (const BranchPoint& point : branch.points) {
        const NodalReport nodal = check_nodal(point.profile, branch.grid);
        if (!nodal.passed()) {
            ++failed_points;
        }
        if (!nodal.monotone_ok) ++monotone_fail;
        if (!nodal.below_gamma_ok) ++below_gamma_fail;
        if (!nodal.crest_sign_ok) {
            ++crest_sign_fail;
            crest_fail_gap_max = std::max(crest_fail_gap_max, point.gap);
        }
        if (!nodal.trough_sign_ok) ++trough_sign_fail;
    }
    std::string detail = std::to_string(branch.points.size() - failed_points) + "/" +
                         std::to_string(branch.points.size()) + " points pass all checks";
    if (failed_points > 0) {
        detail += " [monotone " + std::to_string(monotone_fail) + " fail, below-crest-limit " +
                  std::to_string(below_gamma_fail) + " fail, crest-curvature-sign " +
                  std::to_string(crest_sign_fail) + " fail (all at gap <= " +
                  fmt(crest_fail_gap_max) +
                  ", where the one-sided stencil samples the convex cusp flank), "
                  "trough-curvature-sign " +
                  std::to_string(trough_sign_fail) + " fail]";
    }
    report(8, failed_points == 0,
           "nodal pattern (monotone, below crest limit, curvature signs) at every point",
           detail, seconds_since(start));
}

// --- 9: a-priori amplitude bound at every accepted point --------------------

void criterion_9() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.big_branch();
    int failed_points = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const BranchPoint& point : branch.points) {
        const AprioriReport bound = check_apriori_bounds(point.profile, branch.grid);
        if (!bound.passed()) {
            ++failed_points;
        }
        min_margin = std::min(min_margin, bound.margin);
    }
    report(9, failed_points == 0, "amplitude bound holds at every point",
           "smallest margin " + fmt(min_margin), seconds_since(start));
}

// --- 10: cusp law of the limiting wave --------------------------------------

void criterion_10() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.big_branch();
    const BranchPoint& tip = branch.points.back();
    const bool terminal_ok =
        branch.termination == Termination::gap_below_threshold &&
        tip.gap <= 1e-3 * gamma_crest(tip.profile.c);

    const CuspFit coarse_fit =
        cusp_fit(tip.profile, branch.grid, 4.0 * pi / branch.grid.n_modes, 0.3);
    const WaveProfile& refined = fixtures.refined_terminal();
    const CollocationGrid& fine = fixtures.fine_grid();
    const CuspFit fine_fit = cusp_fit(refined, fine, 4.0 * pi / fine.n_modes, 0.3);

    const double lb_lo = std::min(coarse_fit.lower_bound_min, fine_fit.lower_bound_min);
    const double lb_hi = std::max(coarse_fit.lower_bound_min, fine_fit.lower_bound_min);
    const bool ok = terminal_ok && fine_fit.slope > 0.9 && fine_fit.slope < 1.1 &&
                    fine_fit.r_squared >= 0.98 && lb_lo > 0.0 && lb_hi <= 2.0 * lb_lo;
    report(10, ok, "crest deficit follows the x log x law",
           "slope " + fmt(fine_fit.slope) + ", r^2 " + fmt(fine_fit.r_squared) +
               ", lower bounds " + fmt(coarse_fit.lower_bound_min) + " / " +
               fmt(fine_fit.lower_bound_min),
           seconds_since(start));
}

// --- 11: analytic Jacobian against finite differences -----------------------

void criterion_11() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.small_branch();
    const CollocationGrid& grid = branch.grid;
    const int n = grid.n_modes;

    std::mt19937 rng(20260821u);
    std::uniform_int_distribution<std::size_t> pick(0, branch.points.size() - 1);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const BranchPoint& point = branch.points[pick(rng)];
        const Vector y = pack_state(point.profile.c, point.profile.values);
        const Matrix analytic = jacobian(y, grid);
        Matrix numeric(n, n + 1);
        for (int j = 0; j <= n; ++j) {
            const double h = 1e-6 * (1.0 + std::abs(y[j]));
            Vector forward = y, backward = y;
            forward[j] += h;
            backward[j] -= h;
            numeric.col(j) = (residual(forward, grid) - residual(backward, grid)) / (2.0 * h);
        }
        const double rel = (analytic - numeric).cwiseAbs().maxCoeff() /
                           analytic.cwiseAbs().maxCoeff();
        worst = std::max(worst, rel);
    }
    const bool ok = worst < 1e-6;
    report(11, ok, "jacobian matches central differences at branch points",
           "worst relative error " + fmt(worst) + " over 5 random points", seconds_since(start));
}

// --- 12: sign-flip symmetry of converged solutions --------------------------

void criterion_12() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.small_branch();
    const CollocationGrid& grid = branch.grid;
    double worst = 0.0;
    const std::size_t picks[3] = {0, branch.points.size() / 2, branch.points.size() - 1};
    for (std::size_t index : picks) {
        const WaveProfile& wave = branch.points[index].profile;
        const Vector mirrored = pack_state(-wave.c, Vector(-wave.values));
        worst = std::max(worst, residual(mirrored, grid).cwiseAbs().maxCoeff());
    }
    const bool ok = worst < 1e-12;
    report(12, ok, "mirrored waves solve the mirrored equation",
           "worst mirrored residual " + fmt(worst), seconds_since(start));
}

// --- 13: lossless serialization and deterministic plots ---------------------

void criterion_13() {
    const auto start = Clock::now();
    const Branch& branch = fixtures.small_branch();
    const auto dir = std::filesystem::temp_directory_path() / "biwhitham_acceptance";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    bool ok = true;

    // Flat key=value configuration round trip.
    RunConfig config;
    config.n_modes = 64;
    config.epsilon0 = 0.012345678901234567;
    config.gap_threshold_rel = 1.0000000000000002e-3;
    config.output_dir = "runs/acceptance";
    config.emit_svg = true;
    ok = ok && parse_config_text(config_to_text(config)) == config;

    // Branch table round trip, bit-for-bit.
    const std::string csv_path = (dir / "branch.csv").string();
    write_branch_csv(branch, csv_path);
    const std::vector<BranchRow> rows = read_branch_csv(csv_path);
    ok = ok && rows.size() == branch.points.size();
    if (ok) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const BranchPoint& p = branch.points[i];
            ok = ok && rows[i].arclength == p.arclength && rows[i].c == p.profile.c &&
                 rows[i].waveheight == p.waveheight && rows[i].crest == p.profile.values[0] &&
                 rows[i].gap == p.gap && rows[i].step == p.step_used &&
                 rows[i].newton_iters == p.newton_iterations;
        }
    }

    // Profile document round trip, bit-for-bit.
    const std::string json_path = (dir / "profile.json").string();
    const WaveProfile& wave = branch.points.back().profile;
    write_profile_json(wave, branch.grid, json_path, {{"gap", branch.points.back().gap}});
    const LoadedProfile loaded = read_profile_json(json_path);
    ok = ok && loaded.profile.c == wave.c && loaded.n_modes == branch.grid.n_modes;
    if (ok) {
        for (int m = 0; m < branch.grid.n_modes; ++m) {
            ok = ok && loaded.profile.values[m] == wave.values[m] &&
                 loaded.nodes[m] == branch.grid.nodes[m];
        }
    }

    // Run-metadata round trip.
    const std::string meta_path = (dir / "meta.json").string();
    write_branch_metadata(branch, config, meta_path);
    const BranchMetadata meta = read_branch_metadata(meta_path);
    ok = ok && meta.config == config &&
         meta.termination == termination_name(branch.termination) &&
         meta.n_points == static_cast<int>(branch.points.size());

    // Identical inputs produce identical plot bytes.
    ok = ok && branch_svg(branch) == branch_svg(branch);
    const std::vector<WaveProfile> gallery = {branch.points.front().profile,
                                              branch.points.back().profile};
    ok = ok && profiles_svg(gallery, branch.grid) == profiles_svg(gallery, branch.grid);

    report(13, ok, "serialization round trips and plots are deterministic",
           "config/table/profile/metadata round trips plus identical plot bytes",
           seconds_since(start));
}

}  // namespace

int main() {
    std::printf("acceptance suite: thirteen criteria\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    std::printf("%d/13 criteria passed\n", 13 - failures);
    return failures;
}
