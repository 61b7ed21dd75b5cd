#pragma once

#include <vector>

#include "biwhitham/profile.hpp"
#include "biwhitham/spectral.hpp"
#include "biwhitham/types.hpp"

namespace biwhitham {

struct ContinuationConfig {
    int n_modes = 512;
    int wave_number = 1;       // mode k at which the branch bifurcates
    double epsilon0 = 1e-2;    // amplitude of the small-amplitude seed
    double h0 = 1e-2;          // initial arclength step
    double h_min = 1e-8;
    double h_max = 0.1;
    double gap_threshold_rel = 1e-3;  // stop when gap <= rel * gamma(c)
    int max_steps = 2000;
    NewtonParams newton;
};

struct BranchPoint {
    WaveProfile profile;
    Vector tangent;      // unit tangent in R^(N+1), speed component first
    double arclength = 0.0;
    double waveheight = 0.0;  // crest value minus trough value
    double gap = 0.0;         // gamma(c) - crest value
    double step_used = 0.0;
    int newton_iterations = 0;
};

enum class Termination { gap_below_threshold, max_steps, step_underflow };

struct Branch {
    CollocationGrid grid;
    std::vector<BranchPoint> points;
    Termination termination = Termination::max_steps;
};

// Bifurcation speed c_k = sqrt(tanh(k)/k) for mode k.
double bifurcation_speed(int k);

// Second-order small-amplitude wave at amplitude epsilon:
//   phi = eps cos(kx) + (3 c_k eps^2 / 4) [ 1/(c_k^2 - 1) + cos(2kx)/(c_k^2 - c_2k^2) ]
// with the matching speed expansion c(eps).
WaveProfile local_profile(double epsilon, int k, const CollocationGrid& grid);

// Normalized initial tangent (c'(eps0), cos(k x_1), ..., cos(k x_N)) of the
// small-amplitude branch, oriented toward growing amplitude.
Vector seed_tangent(double epsilon0, int k, const CollocationGrid& grid);

struct StepResult {
    enum class Status { accepted, newton_failed, singular_system };
    Status status = Status::newton_failed;
    BranchPoint point;  // meaningful only when accepted
    bool ok() const { return status == Status::accepted; }
};

// One pseudo-arclength step of size h from a converged branch point: tangent
// predictor, Newton corrector in the hyperplane orthogonal to the tangent,
// then the new unit tangent from the bordered system, oriented so consecutive
// tangents have positive inner product.
StepResult arclength_step(const BranchPoint& from, double h,
                          const CollocationGrid& grid, const NewtonParams& params);

// Full branch run: seed from the small-amplitude wave, continue with adaptive
// step control (halve on rejection, grow after fast convergence), stop when
// the crest-to-limit gap drops below its threshold, the step underflows, or
// the step budget is exhausted.  Every accepted point satisfies gap > 0.
Branch run_branch(const ContinuationConfig& config);

// Re-converge a profile on a finer grid, seeding Newton with the cosine
// interpolant of the coarse values.  The crest-node value is pinned at the
// coarse crest value and the speed left free, which stays well conditioned
// next to the fold where a fixed-speed solve degenerates.
WaveProfile refine_profile(const WaveProfile& profile, const CollocationGrid& coarse,
                           const CollocationGrid& fine, const NewtonParams& params = {});

}  // namespace biwhitham
