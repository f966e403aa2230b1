#ifndef OMNIDRIS_OPTIMIZER_HPP
#define OMNIDRIS_OPTIMIZER_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cubic.hpp"
#include "rate_model.hpp"

namespace omnidris {

// Stationarity of the two-term series rate
//   xi (N - theta)/ln2 * (u - u^2/2),  u = alpha/(N^2 psi),
// with theta held constant. After clearing the non-vanishing factor
// alpha xi / (2 ln2 psi^2 N^5) this is
//   2 psi N^3 - 4 psi theta N^2 - 3 alpha N + 4 alpha theta = 0.
inline CubicCoefficients build_cubic(const ReducedParams& red, double theta)
{
    validate(red);
    detail::require(theta >= 0.0, "theta must be >= 0");
    return {2.0 * red.psi, -4.0 * red.psi * theta, -3.0 * red.alpha, 4.0 * red.alpha * theta};
}

// Two-term series rate without the convergence-domain check; the optimizer
// uses it as a polynomial approximant on either side of its stationary point.
inline double two_term_rate(const ReducedParams& red, double n, double active)
{
    const double u = series_argument(red, n);
    return red.xi * active / std::numbers::ln2 * (u - 0.5 * u * u);
}

struct NoInteriorMaximum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <typename F>
double central_difference(F&& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace detail

// Picks the cubic root that is the rate-maximizing element count: it must
// exceed theta and 1, must be a local maximum of the two-term series (the
// central-difference derivative changes sign from + to - across it, step
// 1e-6 N), and among such roots it has the largest exact rate.
inline double meaningful_root(std::span<const double> roots, const ReducedParams& red, double theta)
{
    validate(red);
    const auto series = [&](double n) { return two_term_rate(red, n, n - theta); };

    std::optional<double> best;
    double best_rate = 0.0;
    for (const double n : roots) {
        if (!std::isfinite(n) || n <= theta || n < 1.0) continue;
        const double h = 1e-6 * n;
        const bool rising = detail::central_difference(series, n - h, h) > 0.0;
        const bool falling = detail::central_difference(series, n + h, h) < 0.0;
        if (!rising || !falling) continue;
        const double r = rate_total(red, n, theta).rate;
        if (!best || r > best_rate) {
            best = n;
            best_rate = r;
        }
    }
    if (!best) throw NoInteriorMaximum("no cubic root is an interior maximum with N > theta");
    return *best;
}

// Root t* of ln(1 + t) = 2 t / (1 + t) on (0, 100]. With theta proportional
// to N the exact rate is stationary exactly where alpha/(psi N^2) = t*.
inline double universal_stationary_ratio()
{
    static const double t_star = [] {
        const auto g = [](double t) { return std::log1p(t) - 2.0 * t / (1.0 + t); };
        // g < 0 on (0, t*) and g > 0 beyond; g(0) = 0 is the trivial root.
        double lo = 1e-3;
        double hi = 100.0;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return t_star;
}

struct ArgmaxResult {
    double n = 0.0;
    double rate = 0.0;
    bool at_boundary = false;
};

namespace detail {

// d/dN of (active(N) * ln(1 + u)), u = alpha/(N^2 psi). The xi factor is
// omitted so the sign is independent of it.
inline double exact_rate_slope(const ReducedParams& red, const AbsorbingMode& mode, double n)
{
    const double u = series_argument(red, n);
    const double active = n - absorbing_count(mode, n);
    const double active_slope = std::holds_alternative<FixedAbsorbing>(mode)
                                    ? 1.0
                                    : 1.0 - std::get<AbsorbingFraction>(mode).fraction;
    return active_slope * std::log1p(u) - active * 2.0 * u / (n * (1.0 + u));
}

} // namespace detail

// Verification oracle: maximizes the exact rate over [n_min, n_max].
// Uniform grid scan (ties keep the smallest index), golden-section search
// in the winning bracket to 1e-8 relative, then bisection on the sign of
// the analytic derivative to machine precision.
inline ArgmaxResult brute_force_argmax(const ReducedParams& red, const AbsorbingMode& mode,
                                       double n_min, double n_max, int grid)
{
    validate(red);
    validate(mode);
    detail::require(std::isfinite(n_min) && n_min >= 1.0, "n_min must be >= 1");
    detail::require(std::isfinite(n_max) && n_max > n_min, "n_max must exceed n_min");
    detail::require(grid >= 1000, "grid must have at least 1000 points");

    const auto f = [&](double n) { return rate_at(red, mode, n); };
    const double step = (n_max - n_min) / (grid - 1);
    const auto node = [&](int i) { return i == grid - 1 ? n_max : n_min + i * step; };

    int best = 0;
    double best_rate = f(node(0));
    for (int i = 1; i < grid; ++i) {
        const double r = f(node(i));
        if (r > best_rate) {
            best = i;
            best_rate = r;
        }
    }

    const auto slope = [&](double n) { return detail::exact_rate_slope(red, mode, n); };
    if (best == grid - 1 && slope(n_max) >= 0.0) return {n_max, f(n_max), true};
    if (best == 0 && slope(n_min) <= 0.0) return {n_min, f(n_min), true};

    double lo = node(std::max(best - 1, 0));
    double hi = node(std::min(best + 1, grid - 1));
    const double bracket_lo = lo;
    const double bracket_hi = hi;

    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-8 * std::abs(0.5 * (lo + hi))) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    double n_best = 0.5 * (lo + hi);

    // Polish on the analytic slope; float ties make golden-section decisions
    // noisy in the last iterations.
    double a = std::max(bracket_lo, lo - 1e-6 * n_best);
    double b = std::min(bracket_hi, hi + 1e-6 * n_best);
    if (a - absorbing_count(mode, a) > 0.0 && slope(a) > 0.0 && slope(b) < 0.0) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            (slope(mid) > 0.0 ? a : b) = mid;
        }
        n_best = 0.5 * (a + b);
    }
    return {n_best, f(n_best), false};
}

struct PowerOfTwoChoice {
    std::int64_t lower = 1;  // 2^floor(log2 n*)
    std::int64_t upper = 1;  // 2^ceil(log2 n*)
    double rate_lower = 0.0;
    double rate_upper = 0.0;
    std::int64_t selected = 1;
    double selected_rate = 0.0;
    int selected_bits = 0;
    bool below_one = false;  // n* < 1: collapsed to a single element
};

// Chooses between the powers of two bracketing n_star, keeping the one with
// the larger rate; a tie goes to the smaller element count.
template <typename RateOfCount>
    requires std::invocable<RateOfCount&, std::int64_t>
PowerOfTwoChoice select_power_of_two(double n_star, RateOfCount&& rate_of)
{
    detail::require(std::isfinite(n_star) && n_star > 0.0, "n_star must be a positive finite number");
    PowerOfTwoChoice c;
    if (n_star < 1.0) {
        c.below_one = true;
        c.rate_lower = c.rate_upper = c.selected_rate = static_cast<double>(rate_of(std::int64_t{1}));
        return c;
    }
    detail::require(n_star <= 0x1p62, "n_star too large for an element count");
    const auto whole = static_cast<std::uint64_t>(std::floor(n_star));
    c.lower = static_cast<std::int64_t>(std::bit_floor(whole));
    c.upper = static_cast<double>(c.lower) == n_star ? c.lower : 2 * c.lower;
    c.rate_lower = static_cast<double>(rate_of(c.lower));
    c.rate_upper = c.upper == c.lower ? c.rate_lower : static_cast<double>(rate_of(c.upper));
    const bool take_upper = c.rate_upper > c.rate_lower;
    c.selected = take_upper ? c.upper : c.lower;
    c.selected_rate = take_upper ? c.rate_upper : c.rate_lower;
    c.selected_bits = std::countr_zero(static_cast<std::uint64_t>(c.selected));
    return c;
}

inline PowerOfTwoChoice select_power_of_two(double n_star, const ReducedParams& red, const AbsorbingMode& mode)
{
    return select_power_of_two(n_star, [&](std::int64_t n) { return rate_at_elements(red, mode, n); });
}

struct OptimizeOptions {
    double n_min = 1.0;
    std::optional<double> n_max;  // default: max(50, 8 (theta + sqrt(alpha/psi)))
    int grid = 100000;
};

struct OptimumReport {
    AbsorbingMode mode;

    double n_star_cubic = 0.0;      // two-term series stationary point
    double f_at_cubic = 0.0;        // two-term series rate there ("calculated")
    double f_exact_at_cubic = 0.0;  // exact rate there
    bool cubic_fallback = false;    // no interior root; oracle used instead

    double n_star_exact = 0.0;  // oracle argmax of the exact rate
    double f_at_exact = 0.0;
    bool exact_at_boundary = false;

    double n_star = 0.0;  // continuous optimum used for power-of-two selection
    double f_at_n_star = 0.0;

    PowerOfTwoChoice selection;
};

namespace detail {

inline ArgmaxResult run_oracle(const ReducedParams& red, const AbsorbingMode& mode, double theta,
                               const OptimizeOptions& opt)
{
    const double n_max = opt.n_max.value_or(
        std::max(50.0, 8.0 * (theta + std::sqrt(red.alpha / red.psi))));
    return brute_force_argmax(red, mode, opt.n_min, std::max(n_max, opt.n_min + 1.0), opt.grid);
}

} // namespace detail

// theta held fixed as N varies.
inline OptimumReport optimize_fixed_theta(const ReducedParams& red, double theta, const OptimizeOptions& opt = {})
{
    validate(red);
    detail::require(theta >= 0.0, "theta must be >= 0");

    OptimumReport rep;
    rep.mode = FixedAbsorbing{theta};

    const ArgmaxResult oracle = detail::run_oracle(red, rep.mode, theta, opt);
    rep.n_star_exact = oracle.n;
    rep.f_at_exact = oracle.rate;
    rep.exact_at_boundary = oracle.at_boundary;

    const auto roots = solve_cubic(build_cubic(red, theta));
    try {
        rep.n_star_cubic = meaningful_root(roots, red, theta);
    } catch (const NoInteriorMaximum&) {
        rep.n_star_cubic = oracle.n;
        rep.cubic_fallback = true;
    }
    rep.f_at_cubic = two_term_rate(red, rep.n_star_cubic, rep.n_star_cubic - theta);
    rep.f_exact_at_cubic = rate_total(red, rep.n_star_cubic, theta).rate;

    rep.n_star = rep.n_star_cubic;
    rep.f_at_n_star = rep.f_exact_at_cubic;
    rep.selection = select_power_of_two(rep.n_star, red, rep.mode);
    return rep;
}

// theta = (1 - active_fraction) N. The rate xi q N log2(1 + alpha/(psi N^2))
// peaks where alpha/(psi N^2) = t*, independent of q and xi.
inline OptimumReport optimize_proportional(const ReducedParams& red, double active_fraction,
                                           const OptimizeOptions& opt = {})
{
    validate(red);
    detail::require(active_fraction > 0.0 && active_fraction <= 1.0, "active fraction must lie in (0, 1]");

    OptimumReport rep;
    rep.mode = active_fraction_mode(active_fraction);
    const double q = active_fraction;

    const ArgmaxResult oracle = detail::run_oracle(red, rep.mode, 0.0, opt);
    rep.n_star_exact = oracle.n;
    rep.f_at_exact = oracle.rate;
    rep.exact_at_boundary = oracle.at_boundary;

    // theta = 0 two-term root, for reference.
    rep.n_star_cubic = std::sqrt(1.5 * red.alpha / red.psi);
    rep.f_at_cubic = two_term_rate(red, rep.n_star_cubic, q * rep.n_star_cubic);
    rep.f_exact_at_cubic = rate_at(red, rep.mode, rep.n_star_cubic);

    const double t_star = universal_stationary_ratio();
    rep.n_star = std::sqrt(red.alpha / (red.psi * t_star));
    rep.f_at_n_star = red.xi * q * rep.n_star * std::log2(1.0 + t_star);
    rep.selection = select_power_of_two(rep.n_star, red, rep.mode);
    return rep;
}

struct ClosedFormRoot {
    double real = 0.0;
    double imag = 0.0;  // residue left after assembling the expression
};

// Reference closed-form approximation of the meaningful cubic root, evaluated
// with principal complex square and cube roots (its inner radicand is
// negative for every positive parameter set). Comparison only; the optimizer
// uses solve_cubic.
inline ClosedFormRoot closed_form_root_eq11(const ReducedParams& red, double theta)
{
    validate(red);
    detail::require(theta > 0.0, "closed form degenerates for theta = 0");
    using cd = std::complex<double>;
    const double a = red.alpha;
    const double p = red.psi;
    const double t = theta;

    const cd radicand{-a * (128.0 * p * p * t * t * t * t + 18.0 * a * p * t * t + 27.0 * a * a) / p, 0.0};
    const cd inner = std::sqrt(radicand) / (std::pow(6.0, 1.5) * p) + 8.0 * t * t * t / 27.0
                     + (6.0 * a * t / (2.0 * p) - 6.0 * t * a / p) / 6.0;
    const cd cube = std::pow(inner, 1.0 / 3.0);
    const cd n = cube - (-4.0 * t * t / 9.0 - 3.0 * a / (6.0 * p)) / cube + 2.0 * t / 3.0;
    return {n.real(), n.imag()};
}

} // namespace omnidris

#endif // OMNIDRIS_OPTIMIZER_HPP
