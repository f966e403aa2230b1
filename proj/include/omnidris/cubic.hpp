#ifndef OMNIDRIS_CUBIC_HPP
#define OMNIDRIS_CUBIC_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace omnidris {

// c3 x^3 + c2 x^2 + c1 x + c0
template <std::floating_point Real>
struct Cubic {
    Real c3{1}, c2{0}, c1{0}, c0{0};

    constexpr Real operator()(Real x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
    constexpr Real derivative(Real x) const { return (Real(3) * c3 * x + Real(2) * c2) * x + c1; }
};

using CubicCoefficients = Cubic<double>;

namespace detail {

template <std::floating_point Real>
Real newton_polish(const Cubic<Real>& c, Real x)
{
    const Real d = c.derivative(x);
    if (d == Real(0)) return x;
    const Real candidate = x - c(x) / d;
    return std::abs(c(candidate)) < std::abs(c(x)) ? candidate : x;
}

} // namespace detail

// All real roots of a cubic, ascending, repeated according to multiplicity.
//
// Depressed form t^3 + p t + q with x = t - a/3. Three distinct real roots
// (casus irreducibilis) use the trigonometric form; a single real root uses
// real Cardano cube roots. Each root gets one Newton step.
template <std::floating_point Real>
std::vector<Real> solve_cubic(const Cubic<Real>& c)
{
    if (c.c3 == Real(0)) throw std::invalid_argument("leading cubic coefficient must be non-zero");

    const Real a = c.c2 / c.c3;
    const Real b = c.c1 / c.c3;
    const Real d = c.c0 / c.c3;
    const Real shift = a / Real(3);
    const Real p = b - a * a / Real(3);
    const Real q = Real(2) * a * a * a / Real(27) - a * b / Real(3) + d;

    const Real half_q = q / Real(2);
    const Real third_p = p / Real(3);
    const Real disc = half_q * half_q + third_p * third_p * third_p;
    const Real scale = std::max(half_q * half_q, std::abs(third_p * third_p * third_p));
    const Real tiny = Real(64) * std::numeric_limits<Real>::epsilon() * scale;

    std::vector<Real> roots;
    if (scale == Real(0)) {
        roots = {-shift, -shift, -shift};
    } else if (std::abs(disc) <= tiny) {
        // Double root plus a simple one.
        const Real u = std::cbrt(-half_q);
        roots = {Real(2) * u - shift, -u - shift, -u - shift};
    } else if (disc < Real(0)) {
        const Real m = Real(2) * std::sqrt(-third_p);
        const Real arg = std::clamp(Real(3) * q / (Real(2) * p) * std::sqrt(Real(-3) / p), Real(-1), Real(1));
        const Real phi = std::acos(arg) / Real(3);
        const Real step = Real(2) * std::numbers::pi_v<Real> / Real(3);
        roots = {m * std::cos(phi) - shift, m * std::cos(phi - step) - shift, m * std::cos(phi - Real(2) * step) - shift};
    } else {
        const Real sq = std::sqrt(disc);
        roots = {std::cbrt(-half_q + sq) + std::cbrt(-half_q - sq) - shift};
    }

    for (auto& r : roots) r = detail::newton_polish(c, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace omnidris

#endif // OMNIDRIS_CUBIC_HPP
