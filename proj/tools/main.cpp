// Command-line front end: branch continuation runs, single-profile solves,
// kernel certification, and cusp regression on stored profiles.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biwhitham/continuation.hpp"
#include "biwhitham/diagnostics.hpp"
#include "biwhitham/io.hpp"
#include "biwhitham/kernel.hpp"
#include "biwhitham/profile.hpp"
#include "biwhitham/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace biwhitham;

constexpr const char* output_dir_env = "BIWHITHAM_OUTPUT_DIR";

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string real_to_string(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int run_branch_command(const std::string& config_path,
                       const std::map<std::string, std::string>& flag_overrides) {
    std::map<std::string, std::string> overrides;
    if (const char* env = std::getenv(output_dir_env)) {
        overrides["output_dir"] = env;
    }
    for (const auto& [key, value] : flag_overrides) {
        overrides[key] = value;
    }
    const RunConfig config = config_path.empty() ? parse_config_text("", overrides)
                                                 : parse_config_file(config_path, overrides);

    const Branch branch = run_branch(to_continuation_config(config));
    const BranchPoint& tip = branch.points.back();

    fs::create_directories(config.output_dir);
    write_branch_csv(branch, join_path(config.output_dir, "branch.csv"));
    write_branch_metadata(branch, config, join_path(config.output_dir, "branch_meta.json"));

    std::map<std::string, double> meta;
    meta["gap"] = tip.gap;
    meta["gap_threshold"] = config.gap_threshold_rel * gamma_crest(tip.profile.c);
    meta["waveheight"] = tip.waveheight;
    meta["arclength"] = tip.arclength;
    write_profile_json(tip.profile, branch.grid,
                       join_path(config.output_dir, "terminal_profile.json"), meta);

    if (config.refine_terminal) {
        const CollocationGrid fine = build_grid(2 * config.n_modes);
        const NewtonParams params{config.newton_tol, config.newton_max_iter};
        const WaveProfile refined = refine_profile(tip.profile, branch.grid, fine, params);
        std::map<std::string, double> refined_meta;
        refined_meta["gap"] = gamma_crest(refined.c) - refined.values[0];
        refined_meta["refined_from_n_modes"] = config.n_modes;
        write_profile_json(refined, fine,
                           join_path(config.output_dir, "terminal_profile_refined.json"),
                           refined_meta);
    }

    if (config.emit_svg) {
        write_text_file(branch_svg(branch), join_path(config.output_dir, "branch.svg"));
        // Gallery: a few waves spread evenly in waveheight up to the terminal one.
        std::vector<WaveProfile> gallery;
        const std::size_t count = std::min<std::size_t>(4, branch.points.size());
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const double target = tip.waveheight * static_cast<double>(i + 1) /
                                  static_cast<double>(count);
            while (cursor + 1 < branch.points.size() &&
                   branch.points[cursor].waveheight < target) {
                ++cursor;
            }
            gallery.push_back(branch.points[cursor].profile);
        }
        write_text_file(profiles_svg(gallery, branch.grid),
                        join_path(config.output_dir, "profiles.svg"));
    }

    std::cout << "branch: " << branch.points.size() << " points, termination "
              << termination_name(branch.termination) << "\n"
              << "terminal: c = " << tip.profile.c << ", waveheight = " << tip.waveheight
              << ", gap = " << tip.gap << "\n"
              << "outputs written to " << config.output_dir << "\n";
    return 0;
}

int run_solve_command(std::optional<double> c_target, std::optional<double> epsilon, int k,
                      int n_modes, const std::string& out_path) {
    const CollocationGrid grid = build_grid(n_modes);
    const NewtonParams params;

    double seed_epsilon = 0.0;
    double fixed_c = 0.0;
    if (epsilon) {
        seed_epsilon = *epsilon;
        if (!(seed_epsilon > 0.0)) {
            throw std::runtime_error("solve: epsilon must be positive");
        }
        fixed_c = local_profile(seed_epsilon, k, grid).c;
    } else {
        // Invert the local speed expansion c(eps) = c_k + c2 eps^2 to pick the
        // seeding amplitude; only speeds just below the bifurcation speed are
        // reachable this way.
        const double ck = bifurcation_speed(k);
        const double dc = *c_target - ck;
        const double eps_ref = 1e-3;
        const double c2 = (local_profile(eps_ref, k, grid).c - ck) / (eps_ref * eps_ref);
        const double eps_sq = dc / c2;
        if (!(eps_sq > 0.0)) {
            throw std::runtime_error(
                "solve: requested speed is not below the bifurcation speed of mode k");
        }
        seed_epsilon = std::sqrt(eps_sq);
        if (seed_epsilon > 0.2) {
            throw std::runtime_error(
                "solve: requested speed is too far from the bifurcation point for a direct "
                "solve; run a branch continuation instead");
        }
        fixed_c = *c_target;
    }

    WaveProfile seed = local_profile(seed_epsilon, k, grid);
    seed.c = fixed_c;
    const NewtonResult result = newton_solve(pack_state(seed.c, seed.values), grid,
                                             std::nullopt, params);
    if (!result.ok()) {
        throw std::runtime_error("solve: Newton did not converge from the local seed");
    }
    const WaveProfile wave = unpack_state(result.y);

    std::map<std::string, double> meta;
    meta["gap"] = gamma_crest(wave.c) - wave.values[0];
    meta["seed_epsilon"] = seed_epsilon;
    meta["newton_iterations"] = result.iterations;
    write_profile_json(wave, grid, out_path, meta);

    std::cout << "solve: converged in " << result.iterations << " iterations, c = " << wave.c
              << ", waveheight = " << waveheight(wave, grid) << "\n"
              << "profile written to " << out_path << "\n";
    return 0;
}

int run_kernel_check_command(int max_order, int grid_size, double cutoff) {
    KernelSpec spec;
    spec.quadrature_cutoff = cutoff;

    const double l1_line = kernel_l1_norm(40.0);
    const double l1_periodic = periodized_kernel_l1_norm(spec);
    const MonotonicityReport report = certify_monotonicity(spec, max_order, grid_size);

    std::cout << "kernel certification (translates " << spec.periodization_range
              << ", grid " << grid_size << ", tolerance " << spec.tolerance << ")\n";
    std::cout << "  L1 norm, line kernel over [-40, 40]:  " << l1_line
              << "  (|1 - value| = " << std::abs(1.0 - l1_line) << ")\n";
    std::cout << "  L1 norm, periodized over (-pi, pi):   " << l1_periodic
              << "  (|1 - value| = " << std::abs(1.0 - l1_periodic) << ")\n";
    for (const MonotonicityOrder& entry : report.orders) {
        std::cout << "  order " << entry.order << ": line kernel on (0, " << cutoff << ") "
                  << (entry.kernel_ok ? "PASS" : "FAIL") << " (worst " << entry.kernel_worst
                  << "), periodized on (0, pi) " << (entry.periodized_ok ? "PASS" : "FAIL")
                  << " (worst " << entry.periodized_worst << ")\n";
    }

    const bool l1_ok = std::abs(1.0 - l1_line) < 1e-6 && std::abs(1.0 - l1_periodic) < 1e-6;
    std::cout << "overall: " << ((report.all_passed() && l1_ok) ? "PASS" : "FAIL") << "\n";
    if (!report.all_passed() || !l1_ok) {
        std::cerr << "error: kernel-check: certification failed\n";
        return 2;
    }
    return 0;
}

int run_cusp_fit_command(const std::string& profile_path, const std::string& window,
                         bool with_holder) {
    const LoadedProfile loaded = read_profile_json(profile_path);
    const CollocationGrid grid = build_grid(loaded.n_modes);
    if ((grid.nodes - loaded.nodes).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::runtime_error("cusp-fit: stored nodes do not match the collocation grid");
    }

    double x_lo = 4.0 * pi / loaded.n_modes;
    double x_hi = 0.3;
    if (!window.empty()) {
        const auto comma = window.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("cusp-fit: window must be of the form LO,HI");
        }
        x_lo = std::stod(window.substr(0, comma));
        x_hi = std::stod(window.substr(comma + 1));
    }

    const CuspFit fit = cusp_fit(loaded.profile, grid, x_lo, x_hi);
    std::cout << "{\n"
              << "  \"window\": [" << fit.x_lo << ", " << fit.x_hi << "],\n"
              << "  \"n_points\": " << fit.n_points << ",\n"
              << "  \"slope\": " << fit.slope << ",\n"
              << "  \"intercept\": " << fit.intercept << ",\n"
              << "  \"r_squared\": " << fit.r_squared << ",\n"
              << "  \"lower_bound_min\": " << fit.lower_bound_min << "\n"
              << "}\n";

    if (with_holder) {
        const std::vector<double> alphas = {0.25, 0.5, 0.75, 0.9, 0.99};
        const auto seminorms = holder_seminorms(loaded.profile, grid, alphas);
        std::cout << "holder seminorm sweep:\n";
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            std::cout << "  alpha = " << alphas[i] << ": " << seminorms[i] << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral continuation toolkit for periodic traveling waves of the "
                 "bidirectional Whitham equation"};
    app.set_version_flag("--version", std::string(toolkit_version));
    app.require_subcommand(1);

    // branch
    auto* branch_cmd = app.add_subcommand(
        "branch", "Continue the bifurcation branch from small amplitude to the cusped limit");
    std::string config_path;
    branch_cmd->add_option("--config", config_path,
                           "Run configuration file (key=value lines); defaults apply without it");
    std::optional<int> opt_n_modes;
    std::optional<int> opt_k;
    std::optional<double> opt_epsilon0;
    std::optional<std::string> opt_out;
    bool flag_svg = false;
    bool flag_refine = false;
    branch_cmd->add_option("--n-modes", opt_n_modes, "Override n_modes");
    branch_cmd->add_option("--k", opt_k, "Override wave_number");
    branch_cmd->add_option("--epsilon0", opt_epsilon0, "Override epsilon0");
    branch_cmd->add_option("--out", opt_out, "Override output_dir");
    branch_cmd->add_flag("--emit-svg", flag_svg, "Write branch and profile gallery SVG plots");
    branch_cmd->add_flag("--refine-terminal", flag_refine,
                         "Re-converge the terminal profile at twice the resolution");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve for a single wave profile");
    std::optional<double> opt_c;
    std::optional<double> opt_epsilon;
    int solve_k = 1;
    int solve_n_modes = 256;
    std::string solve_out = "profile.json";
    auto* c_opt = solve_cmd->add_option("--c", opt_c, "Wave speed (near the bifurcation point)");
    auto* eps_opt = solve_cmd->add_option("--epsilon", opt_epsilon, "Seed amplitude");
    c_opt->excludes(eps_opt);
    eps_opt->excludes(c_opt);
    solve_cmd->add_option("--k", solve_k, "Wave number of the bifurcating mode");
    solve_cmd->add_option("--n-modes", solve_n_modes, "Collocation size");
    solve_cmd->add_option("--out", solve_out, "Output profile path");

    // kernel-check
    auto* kernel_cmd = app.add_subcommand(
        "kernel-check", "Certify kernel positivity/monotonicity and the unit integral");
    int max_order = 4;
    int grid_size = 64;
    double cutoff = 20.0;
    kernel_cmd->add_option("--max-order", max_order, "Highest divided-difference order");
    kernel_cmd->add_option("--grid-size", grid_size, "Sample grid size");
    kernel_cmd->add_option("--cutoff", cutoff, "Right end of the line-kernel sample interval");

    // cusp-fit
    auto* cusp_cmd = app.add_subcommand("cusp-fit", "Fit the cusp law on a stored profile");
    std::string profile_path;
    std::string window;
    bool with_holder = false;
    cusp_cmd->add_option("--profile", profile_path, "Profile JSON produced by branch/solve")
        ->required();
    cusp_cmd->add_option("--window", window, "Fit window LO,HI (default 4*pi/N,0.3)");
    cusp_cmd->add_flag("--holder", with_holder, "Also print a Hoelder seminorm sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (branch_cmd->parsed()) {
            std::map<std::string, std::string> overrides;
            if (opt_n_modes) overrides["n_modes"] = std::to_string(*opt_n_modes);
            if (opt_k) overrides["wave_number"] = std::to_string(*opt_k);
            if (opt_epsilon0) overrides["epsilon0"] = real_to_string(*opt_epsilon0);
            if (opt_out) overrides["output_dir"] = *opt_out;
            if (flag_svg) overrides["emit_svg"] = "true";
            if (flag_refine) overrides["refine_terminal"] = "true";
            return run_branch_command(config_path, overrides);
        }
        if (solve_cmd->parsed()) {
            if (!opt_c && !opt_epsilon) {
                throw std::runtime_error("solve: exactly one of --c or --epsilon is required");
            }
            return run_solve_command(opt_c, opt_epsilon, solve_k, solve_n_modes, solve_out);
        }
        if (kernel_cmd->parsed()) {
            return run_kernel_check_command(max_order, grid_size, cutoff);
        }
        if (cusp_cmd->parsed()) {
            return run_cusp_fit_command(profile_path, window, with_holder);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
