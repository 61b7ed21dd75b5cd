#pragma once

#include <stdexcept>
#include <vector>

namespace biwhitham {

// Parameters shared by the kernel evaluation and certification routines:
// how many translates the periodized image sum keeps, the half-width of
// real-line integrals, and the sign slack allowed in monotonicity checks.
struct KernelSpec {
    int periodization_range = 8;
    double quadrature_cutoff = 200.0;
    double tolerance = 1e-9;
};

// Thrown when a kernel is evaluated at a logarithmic singularity
// (x = 0 for the line kernel, x in 2*pi*Z for the periodized one).
struct SingularPointError : std::domain_error {
    using std::domain_error::domain_error;
};

// Fourier multiplier tanh(xi)/xi, extended by its limit 1 at xi = 0.
double symbol(double xi);

// Convolution kernel on the line: K(x) = 2 log|coth(pi x / 4)|.
// Even, positive, singular at x = 0, decaying like 4 exp(-pi|x|/2).
double kernel(double x);

// Regular part of the kernel near the origin:
// kernel(x) + 2 log|pi x / 4| for x != 0, extended continuously by 0 at 0.
// Behaves like pi^2 x^2 / 24 as x -> 0.
double kernel_regular(double x);

// Periodized kernel: sum of kernel(x + 2*pi*k) over |k| <= periodization_range.
double periodized_kernel(double x, const KernelSpec& spec = {});

// Mass of the kernel: the integral over [-cutoff, cutoff] normalized by the
// transform convention (divided by 2*pi), so it converges to symbol(0) = 1 as
// the cutoff grows.  The logarithmic part near the origin is integrated in
// closed form.
double kernel_l1_norm(double cutoff);

// Mass of the periodized kernel: the integral over one period (-pi, pi)
// normalized by 2*pi; equals 1 up to the truncation of the image sum.
double periodized_kernel_l1_norm(const KernelSpec& spec = {});

// Independent evaluation of the kernel as the inverse Fourier transform of the
// multiplier: 2 * int_0^X tanh(xi)/xi * cos(xi x) dxi plus an asymptotic
// correction for the oscillatory tail beyond the cutoff X, in the
// normalization of the closed form.  Used as a cross-check of the closed
// form, not as a hot path.
double kernel_via_inverse_fourier(double x, const KernelSpec& spec = {});

struct MonotonicityOrder {
    int order = 0;
    // Worst signed divided difference over the sample grid, after multiplying
    // by (-1)^order; complete monotonicity requires this to be >= -tolerance.
    double kernel_worst = 0.0;
    double periodized_worst = 0.0;
    bool kernel_ok = false;
    bool periodized_ok = false;
};

struct MonotonicityReport {
    std::vector<MonotonicityOrder> orders;
    bool all_passed() const;
};

// Certifies complete monotonicity of the kernel on (0, cutoff) and of the
// periodized kernel on the half-period (0, pi) by checking the sign pattern
// (-1)^n * (n-th divided difference) >= -tolerance for n = 0..max_order.
// The kernel is sampled on a logarithmic grid, the periodized kernel on a
// uniform grid on (margin, pi - margin).
MonotonicityReport certify_monotonicity(const KernelSpec& spec, int max_order,
                                        int grid_size, double margin = 0.05);

}  // namespace biwhitham
