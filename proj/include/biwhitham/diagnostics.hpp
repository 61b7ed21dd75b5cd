#pragma once

#include <vector>

#include "biwhitham/spectral.hpp"
#include "biwhitham/types.hpp"

namespace biwhitham {

// Crest-to-trough height: values at the first node minus values at the last.
double waveheight(const WaveProfile& profile, const CollocationGrid& grid);

// Nodal-pattern report for a computed wave: strict monotonicity from crest to
// trough, crest values strictly below the crest limit gamma, and one-sided
// second-difference curvature proxies at the crest and the trough.  The checks
// are orientation-aware: a sign-flipped wave (-phi, -c) yields the same
// booleans with negated curvature values.
struct NodalReport {
    bool monotone_ok = false;
    bool below_gamma_ok = false;
    double curvature_crest = 0.0;
    double curvature_trough = 0.0;
    bool crest_sign_ok = false;
    bool trough_sign_ok = false;
    bool passed() const {
        return monotone_ok && below_gamma_ok && crest_sign_ok && trough_sign_ok;
    }
};

NodalReport check_nodal(const WaveProfile& profile, const CollocationGrid& grid);

// A-priori bound report: sup |phi| <= (3c + sqrt(8 + 17 c^2))/2 and the
// wave speed inside (0, 1).
struct AprioriReport {
    double amplitude_bound = 0.0;
    double max_abs = 0.0;
    double margin = 0.0;  // bound minus attained maximum
    bool amplitude_ok = false;
    bool wavespeed_ok = false;
    bool passed() const { return amplitude_ok && wavespeed_ok; }
};

AprioriReport check_apriori_bounds(const WaveProfile& profile, const CollocationGrid& grid);

// Ordinary least squares fit y = slope * x + intercept with the coefficient of
// determination.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// Cusp regression on a near-limiting wave: fits log(gamma - phi(x)) against
// log(x (1 + |log x|)) over the nodes inside [x_lo, x_hi].  A slope near 1
// identifies the |x log x| cusp law; a Lipschitz corner would fit distinctly
// above 1 and a half-power cusp distinctly below.  Also reports the smallest
// scaled lower-bound ratio (gamma - phi) (1 + c) / (x |log x|) over the
// window, which stays bounded away from zero for the cusp law.
struct CuspFit {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int n_points = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double lower_bound_min = 0.0;
};

CuspFit cusp_fit(const WaveProfile& profile, const CollocationGrid& grid,
                 double x_lo, double x_hi);

// Max-norm and weighted-L2 distance between two waves; a coarser wave is
// compared through its cosine interpolant on the finer grid.
struct DistanceReport {
    double max_abs = 0.0;
    double weighted_l2 = 0.0;
};

DistanceReport compare_profiles(const WaveProfile& a, const CollocationGrid& grid_a,
                                const WaveProfile& b, const CollocationGrid& grid_b);

// Discrete Hoelder seminorm estimates sup |phi(x) - phi(y)| / |x - y|^alpha
// over node pairs, one per requested exponent.  Reported as an observational
// diagnostic for regularity sweeps; finite growth under refinement for
// alpha < 1 is consistent with the cusped limit.
std::vector<double> holder_seminorms(const WaveProfile& profile, const CollocationGrid& grid,
                                     const std::vector<double>& alphas);

}  // namespace biwhitham
