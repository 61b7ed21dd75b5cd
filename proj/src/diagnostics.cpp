#include "biwhitham/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "biwhitham/profile.hpp"

namespace biwhitham {

namespace {

void check_profile(const WaveProfile& profile, const CollocationGrid& grid, const char* where) {
    if (profile.values.size() != grid.n_modes) {
        throw std::invalid_argument(std::string(where) + ": profile does not match grid");
    }
}

}  // namespace

double waveheight(const WaveProfile& profile, const CollocationGrid& grid) {
    check_profile(profile, grid, "waveheight");
    return profile.values[0] - profile.values[grid.n_modes - 1];
}

NodalReport check_nodal(const WaveProfile& profile, const CollocationGrid& grid) {
    check_profile(profile, grid, "check_nodal");
    const int n = grid.n_modes;
    if (n < 3) {
        throw std::invalid_argument("check_nodal: needs at least 3 nodes");
    }

    // Orientation: the sign flip (phi, c) -> (-phi, -c) maps solutions to
    // solutions, so a negative-speed wave is checked through its mirror image
    // and only the curvature proxies keep the original sign.
    const double sign = (profile.c < 0.0) ? -1.0 : 1.0;
    const Vector oriented = sign * profile.values;
    const double c_oriented = sign * profile.c;

    NodalReport report;
    report.monotone_ok = true;
    for (int m = 0; m + 1 < n; ++m) {
        if (!(oriented[m] > oriented[m + 1])) {
            report.monotone_ok = false;
            break;
        }
    }
    report.below_gamma_ok = oriented.maxCoeff() < gamma_crest(c_oriented);

    const double h = pi / n;
    report.curvature_crest =
        (profile.values[0] - 2.0 * profile.values[1] + profile.values[2]) / (h * h);
    report.curvature_trough =
        (profile.values[n - 3] - 2.0 * profile.values[n - 2] + profile.values[n - 1]) / (h * h);
    report.crest_sign_ok = sign * report.curvature_crest < 0.0;
    report.trough_sign_ok = sign * report.curvature_trough > 0.0;
    return report;
}

AprioriReport check_apriori_bounds(const WaveProfile& profile, const CollocationGrid& grid) {
    check_profile(profile, grid, "check_apriori_bounds");
    const double sign = (profile.c < 0.0) ? -1.0 : 1.0;
    const double c = sign * profile.c;

    AprioriReport report;
    report.amplitude_bound = 0.5 * (3.0 * c + std::sqrt(8.0 + 17.0 * c * c));
    report.max_abs = profile.values.cwiseAbs().maxCoeff();
    report.margin = report.amplitude_bound - report.max_abs;
    report.amplitude_ok = report.max_abs <= report.amplitude_bound;
    report.wavespeed_ok = c > 0.0 && c < 1.0;
    return report;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("fit_line: needs two same-length samples of size >= 2");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_line: abscissae are degenerate");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

CuspFit cusp_fit(const WaveProfile& profile, const CollocationGrid& grid,
                 double x_lo, double x_hi) {
    check_profile(profile, grid, "cusp_fit");
    if (!(x_lo > 0.0) || !(x_lo < x_hi)) {
        throw std::invalid_argument("cusp_fit: need 0 < x_lo < x_hi");
    }
    if (!(x_hi <= 0.25 * pi)) {
        throw std::invalid_argument("cusp_fit: window must stay inside (0, pi/4]");
    }

    const double gamma = gamma_crest(profile.c);
    std::vector<double> xs, ys;
    double lower_min = std::numeric_limits<double>::infinity();
    for (int m = 0; m < grid.n_modes; ++m) {
        const double x = grid.nodes[m];
        if (x < x_lo || x > x_hi) {
            continue;
        }
        const double deficit = gamma - profile.values[m];
        if (!(deficit > 0.0)) {
            throw std::runtime_error("cusp_fit: profile reaches the crest limit inside the window");
        }
        const double abslog = std::abs(std::log(x));
        xs.push_back(std::log(x * (1.0 + abslog)));
        ys.push_back(std::log(deficit));
        lower_min = std::min(lower_min, deficit * (1.0 + profile.c) / (x * abslog));
    }
    if (xs.size() < 12) {
        throw std::invalid_argument("cusp_fit: window must contain at least 12 nodes");
    }

    const LineFit line = fit_line(xs, ys);
    CuspFit fit;
    fit.x_lo = x_lo;
    fit.x_hi = x_hi;
    fit.n_points = static_cast<int>(xs.size());
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    fit.lower_bound_min = lower_min;
    return fit;
}

DistanceReport compare_profiles(const WaveProfile& a, const CollocationGrid& grid_a,
                                const WaveProfile& b, const CollocationGrid& grid_b) {
    check_profile(a, grid_a, "compare_profiles");
    check_profile(b, grid_b, "compare_profiles");

    const bool a_is_fine = grid_a.n_modes >= grid_b.n_modes;
    const WaveProfile& fine = a_is_fine ? a : b;
    const WaveProfile& coarse = a_is_fine ? b : a;
    const CollocationGrid& grid_fine = a_is_fine ? grid_a : grid_b;
    const CollocationGrid& grid_coarse = a_is_fine ? grid_b : grid_a;

    Vector other = coarse.values;
    if (grid_fine.n_modes != grid_coarse.n_modes) {
        const Vector coeffs = cosine_coefficients(coarse.values, grid_coarse);
        other.resize(grid_fine.n_modes);
        for (int m = 0; m < grid_fine.n_modes; ++m) {
            other[m] = evaluate_series(coeffs, grid_fine.nodes[m]);
        }
    }

    const Vector diff = fine.values - other;
    DistanceReport report;
    report.max_abs = diff.cwiseAbs().maxCoeff();
    report.weighted_l2 = std::sqrt(grid_fine.node_weight() * diff.squaredNorm());
    return report;
}

std::vector<double> holder_seminorms(const WaveProfile& profile, const CollocationGrid& grid,
                                     const std::vector<double>& alphas) {
    check_profile(profile, grid, "holder_seminorms");
    std::vector<double> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        if (!(alpha > 0.0) || !(alpha <= 1.0)) {
            throw std::invalid_argument("holder_seminorms: exponents must lie in (0, 1]");
        }
        double worst = 0.0;
        for (int i = 0; i < grid.n_modes; ++i) {
            for (int j = i + 1; j < grid.n_modes; ++j) {
                const double num = std::abs(profile.values[i] - profile.values[j]);
                const double den = std::pow(grid.nodes[j] - grid.nodes[i], alpha);
                worst = std::max(worst, num / den);
            }
        }
        out.push_back(worst);
    }
    return out;
}

}  // namespace biwhitham
