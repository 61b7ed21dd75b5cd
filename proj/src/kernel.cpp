#include "biwhitham/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "biwhitham/quadrature.hpp"
#include "biwhitham/types.hpp"

namespace biwhitham {

namespace {

void validate(const KernelSpec& spec) {
    if (spec.periodization_range < 1) {
        throw std::invalid_argument("KernelSpec: periodization_range must be >= 1");
    }
    if (!(spec.quadrature_cutoff > 0.0)) {
        throw std::invalid_argument("KernelSpec: quadrature_cutoff must be positive");
    }
    if (!(spec.tolerance > 0.0)) {
        throw std::invalid_argument("KernelSpec: tolerance must be positive");
    }
}

// Cosine integral Ci(z) for large z via the standard asymptotic expansion
// Ci(z) = f(z) sin z - g(z) cos z with
//   f(z) ~ (1/z)   * sum_m (-1)^m (2m)!   / z^(2m),
//   g(z) ~ (1/z^2) * sum_m (-1)^m (2m+1)! / z^(2m),
// truncated before the terms start growing.
double cosine_integral_asymptotic(double z) {
    const double z2 = z * z;
    double f = 0.0;
    double g = 0.0;
    double tf = 1.0 / z;
    double tg = 1.0 / z2;
    for (int m = 0; m < 40; ++m) {
        f += tf;
        g += tg;
        const double nf = -tf * (2 * m + 1) * (2 * m + 2) / z2;
        const double ng = -tg * (2 * m + 2) * (2 * m + 3) / z2;
        if (std::abs(nf) >= std::abs(tf) || std::abs(ng) >= std::abs(tg)) {
            break;
        }
        tf = nf;
        tg = ng;
        if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * std::abs(g)) {
            f += tf;
            g += tg;
            break;
        }
    }
    return f * std::sin(z) - g * std::cos(z);
}

// n-th order divided differences of the samples (x_i, f_i) over every window
// of n+1 consecutive grid points.
std::vector<double> divided_differences(const std::vector<double>& x,
                                        const std::vector<double>& f, int order) {
    std::vector<double> dd = f;
    for (int level = 1; level <= order; ++level) {
        for (std::size_t i = 0; i + level < x.size(); ++i) {
            dd[i] = (dd[i + 1] - dd[i]) / (x[i + level] - x[i]);
        }
    }
    dd.resize(x.size() - static_cast<std::size_t>(order));
    return dd;
}

}  // namespace

double symbol(double xi) {
    if (xi == 0.0) {
        return 1.0;
    }
    return std::tanh(xi) / xi;
}

double kernel(double x) {
    if (x == 0.0) {
        throw SingularPointError("kernel: singular at x = 0");
    }
    // 2 log coth(pi|x|/4) = 2 log1p(2 / expm1(pi|x|/2)), stable for all x != 0.
    const double e = std::expm1(0.5 * pi * std::abs(x));
    if (std::isinf(e)) {
        return 0.0;
    }
    return 2.0 * std::log1p(2.0 / e);
}

double kernel_regular(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return kernel(x) + 2.0 * std::log(std::abs(0.25 * pi * x));
}

double periodized_kernel(double x, const KernelSpec& spec) {
    validate(spec);
    if (std::remainder(x, 2.0 * pi) == 0.0) {
        throw SingularPointError("periodized_kernel: singular at multiples of 2*pi");
    }
    double sum = 0.0;
    for (int k = -spec.periodization_range; k <= spec.periodization_range; ++k) {
        const double shifted = x + 2.0 * pi * k;
        if (shifted == 0.0) {
            throw SingularPointError("periodized_kernel: singular at multiples of 2*pi");
        }
        sum += kernel(shifted);
    }
    return sum;
}

double kernel_l1_norm(double cutoff) {
    if (!(cutoff > 0.0)) {
        throw std::invalid_argument("kernel_l1_norm: cutoff must be positive");
    }
    const double a = std::min(1.0, cutoff);
    // int_0^a -2 log(pi x/4) dx = 2a(1 - log(pi a/4)), the singular log part in
    // closed form; the remainder of the integrand is smooth.
    double half = 2.0 * a * (1.0 - std::log(0.25 * pi * a));
    half += adaptive_simpson([](double x) { return kernel_regular(x); }, 0.0, a, 1e-10);
    if (cutoff > a) {
        half += adaptive_simpson([](double x) { return kernel(x); }, a, cutoff, 1e-10);
    }
    return 2.0 * half / (2.0 * pi);
}

double periodized_kernel_l1_norm(const KernelSpec& spec) {
    validate(spec);
    // Smooth part of the periodized kernel on [0, pi]: the regular part of the
    // central image plus all shifted images, each finite at x = 0.
    auto smooth = [&spec](double x) {
        double s = kernel_regular(x);
        for (int k = 1; k <= spec.periodization_range; ++k) {
            s += kernel(x + 2.0 * pi * k) + kernel(x - 2.0 * pi * k);
        }
        return s;
    };
    double half = 2.0 * pi * (1.0 - std::log(0.25 * pi * pi));
    half += adaptive_simpson(smooth, 0.0, pi, 1e-10);
    return 2.0 * half / (2.0 * pi);
}

double kernel_via_inverse_fourier(double x, const KernelSpec& spec) {
    validate(spec);
    if (x == 0.0) {
        throw SingularPointError("kernel_via_inverse_fourier: singular at x = 0");
    }
    const double ax = std::abs(x);
    // Extend the cutoff if needed so the tail correction's asymptotic series
    // is evaluated at an argument large enough to converge.
    const double cutoff = std::max(spec.quadrature_cutoff, 15.0 / ax);
    // Integrate over half-period panels of the oscillation so the adaptive
    // rule never straddles many sign changes.
    const double panel = pi / ax;
    const int n_panels = static_cast<int>(std::ceil(cutoff / panel));
    auto integrand = [ax](double xi) { return symbol(xi) * std::cos(xi * ax); };
    const double panel_tol = 1e-12 / n_panels;
    double integral = 0.0;
    double lo = 0.0;
    while (lo < cutoff) {
        const double hi = std::min(lo + panel, cutoff);
        integral += adaptive_simpson(integrand, lo, hi, panel_tol);
        lo = hi;
    }
    // Beyond the cutoff tanh(xi) is 1 to machine accuracy, so the tail is the
    // cosine-integral remainder int_cutoff^inf cos(xi x)/xi dxi = -Ci(x*cutoff).
    const double tail = -cosine_integral_asymptotic(ax * cutoff);
    // The closed-form kernel normalization carries a factor 2 against the
    // half-line cosine transform of the symbol.
    return 2.0 * (integral + tail);
}

bool MonotonicityReport::all_passed() const {
    for (const auto& entry : orders) {
        if (!entry.kernel_ok || !entry.periodized_ok) {
            return false;
        }
    }
    return !orders.empty();
}

MonotonicityReport certify_monotonicity(const KernelSpec& spec, int max_order,
                                        int grid_size, double margin) {
    validate(spec);
    if (max_order < 0) {
        throw std::invalid_argument("certify_monotonicity: max_order must be >= 0");
    }
    if (grid_size < max_order + 2) {
        throw std::invalid_argument("certify_monotonicity: grid_size too small for max_order");
    }
    if (!(margin > 0.0) || !(margin < 0.5 * pi)) {
        throw std::invalid_argument("certify_monotonicity: margin must lie in (0, pi/2)");
    }

    // Logarithmic grid over (0, cutoff] for the line kernel: spacing follows
    // the kernel's own scale so the divided differences stay well conditioned
    // near the singularity.
    std::vector<double> xk(grid_size), fk(grid_size);
    const double x_lo = 1e-4 * spec.quadrature_cutoff;
    const double ratio = spec.quadrature_cutoff / x_lo;
    for (int i = 0; i < grid_size; ++i) {
        xk[i] = x_lo * std::pow(ratio, static_cast<double>(i) / (grid_size - 1));
        fk[i] = kernel(xk[i]);
    }

    // Uniform grid on (margin, pi - margin) for the periodized kernel.
    std::vector<double> xp(grid_size), fp(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        xp[i] = margin + (pi - 2.0 * margin) * static_cast<double>(i) / (grid_size - 1);
        fp[i] = periodized_kernel(xp[i], spec);
    }

    MonotonicityReport report;
    for (int order = 0; order <= max_order; ++order) {
        MonotonicityOrder entry;
        entry.order = order;
        const double sign = (order % 2 == 0) ? 1.0 : -1.0;

        const auto ddk = divided_differences(xk, fk, order);
        entry.kernel_worst = sign * ddk[0];
        for (double v : ddk) {
            entry.kernel_worst = std::min(entry.kernel_worst, sign * v);
        }
        entry.kernel_ok = entry.kernel_worst >= -spec.tolerance;

        const auto ddp = divided_differences(xp, fp, order);
        entry.periodized_worst = sign * ddp[0];
        for (double v : ddp) {
            entry.periodized_worst = std::min(entry.periodized_worst, sign * v);
        }
        entry.periodized_ok = entry.periodized_worst >= -spec.tolerance;

        report.orders.push_back(entry);
    }
    return report;
}

}  // namespace biwhitham
