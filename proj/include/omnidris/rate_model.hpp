#ifndef OMNIDRIS_RATE_MODEL_HPP
#define OMNIDRIS_RATE_MODEL_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "channel.hpp"

namespace omnidris {

// e / (2 pi): the constant in the optical intensity-channel capacity bound.
inline constexpr double capacity_constant = std::numbers::e / (2.0 * std::numbers::pi);

struct SystemParams {
    double bandwidth = 1e6;            // W, Hz
    double total_transmit_power = 10;  // P_t, W
    int num_light_sources = 1;         // L
    int num_users = 1;                 // M
    double oe_conversion = 0.5;        // rho, (0, 1]
    double noise_psd = 2.0;            // Lambda_0, W/Hz; noise variance is Lambda_0 / 2
};

inline void validate(const SystemParams& s)
{
    using detail::require;
    require(std::isfinite(s.bandwidth) && s.bandwidth > 0.0, "bandwidth must be > 0");
    require(std::isfinite(s.total_transmit_power) && s.total_transmit_power > 0.0,
            "total_transmit_power must be > 0");
    require(s.num_light_sources >= 1, "num_light_sources must be >= 1");
    require(s.num_users >= 1, "num_users must be >= 1");
    require(s.oe_conversion > 0.0 && s.oe_conversion <= 1.0, "oe_conversion must lie in (0, 1]");
    require(std::isfinite(s.noise_psd) && s.noise_psd > 0.0, "noise_psd must be > 0");
}

// How many of the N elements absorb instead of reflecting/refracting.
struct FixedAbsorbing {
    double count = 0.0;
};

// theta = fraction * N. Evaluated exactly on the continuum and rounded
// half-to-even at integer element counts.
struct AbsorbingFraction {
    double fraction = 0.0;  // in [0, 1)
};

using AbsorbingMode = std::variant<FixedAbsorbing, AbsorbingFraction>;

inline void validate(const AbsorbingMode& mode)
{
    if (const auto* f = std::get_if<FixedAbsorbing>(&mode)) {
        detail::require(std::isfinite(f->count) && f->count >= 0.0, "absorbing count must be >= 0");
    } else {
        const double q = std::get<AbsorbingFraction>(mode).fraction;
        detail::require(q >= 0.0 && q < 1.0, "absorbing fraction must lie in [0, 1)");
    }
}

inline AbsorbingMode active_fraction_mode(double active_fraction)
{
    return AbsorbingFraction{1.0 - active_fraction};
}

// Absorbing count for a continuous element count.
inline double absorbing_count(const AbsorbingMode& mode, double n)
{
    if (const auto* f = std::get_if<FixedAbsorbing>(&mode)) return f->count;
    return std::get<AbsorbingFraction>(mode).fraction * n;
}

// Absorbing count for a hardware element count; fraction mode rounds
// half-to-even (nearbyint under the default rounding mode).
inline double absorbing_count_at(const AbsorbingMode& mode, std::int64_t n)
{
    if (const auto* f = std::get_if<FixedAbsorbing>(&mode)) return f->count;
    return std::nearbyint(std::get<AbsorbingFraction>(mode).fraction * static_cast<double>(n));
}

struct RisConfig {
    std::int64_t num_elements = 1;
    AbsorbingMode absorbing = FixedAbsorbing{};

    double absorbing_count() const { return absorbing_count_at(absorbing, num_elements); }
    double active_count() const { return static_cast<double>(num_elements) - absorbing_count(); }

    // k such that N = 2^k; empty when N is not a power of two.
    std::optional<int> bits_per_sequence() const
    {
        if (num_elements < 1 || !std::has_single_bit(static_cast<std::uint64_t>(num_elements)))
            return std::nullopt;
        return std::countr_zero(static_cast<std::uint64_t>(num_elements));
    }
};

inline void validate(const RisConfig& ris)
{
    detail::require(ris.num_elements >= 1, "num_elements must be >= 1");
    validate(ris.absorbing);
    const double active = ris.active_count();
    detail::require(active >= 1.0 && active <= static_cast<double>(ris.num_elements),
                    "active element count must satisfy 1 <= N - theta <= N");
}

// alpha, psi and xi fully determine the rate curve
//   f(N) = xi (N - theta) log2(alpha / (N^2 psi) + 1).
struct ReducedParams {
    double alpha = 1.0;
    double psi = 1.0;  // (M L)^2
    double xi = 1.0;   // W L M / 2, Hz
};

inline void validate(const ReducedParams& r)
{
    using detail::require;
    require(std::isfinite(r.alpha) && r.alpha > 0.0, "alpha must be > 0");
    require(std::isfinite(r.psi) && r.psi > 0.0, "psi must be > 0");
    require(std::isfinite(r.xi) && r.xi > 0.0, "xi must be > 0");
}

// SNR of one LS -> element -> user link when the power is split over
// M * n * L links.
inline double snr_single_link(const SystemParams& sys, double gain, std::int64_t n)
{
    validate(sys);
    detail::require(gain >= 0.0, "channel gain must be >= 0");
    detail::require(n >= 1, "element count must be >= 1");
    const double links = static_cast<double>(sys.num_users) * static_cast<double>(n)
                         * static_cast<double>(sys.num_light_sources);
    const double received = sys.oe_conversion * sys.total_transmit_power * gain / links;
    return received * received / (sys.noise_psd / 2.0);
}

// (W/2) log2(1 + e/(2 pi) snr), bit/s.
inline double rate_single_link(const SystemParams& sys, double snr)
{
    validate(sys);
    detail::require(snr >= 0.0, "snr must be >= 0");
    return 0.5 * sys.bandwidth * std::log1p(capacity_constant * snr) / std::numbers::ln2;
}

inline ReducedParams reduce(const SystemParams& sys, double gain)
{
    validate(sys);
    detail::require(gain > 0.0, "channel gain must be > 0 for a non-degenerate alpha");
    const double ml = static_cast<double>(sys.num_users) * static_cast<double>(sys.num_light_sources);
    const double rho_g_p = sys.oe_conversion * gain * sys.total_transmit_power;
    return ReducedParams{
        .alpha = capacity_constant * rho_g_p * rho_g_p / (sys.noise_psd / 2.0),
        .psi = ml * ml,
        .xi = sys.bandwidth * ml / 2.0,
    };
}

struct RateResult {
    double rate = 0.0;        // bit/s
    bool degenerate = false;  // no active elements
};

// Exact rate for a continuous element count n with theta absorbing elements.
// Zero (and flagged) when n - theta <= 0.
inline RateResult rate_total(const ReducedParams& red, double n, double theta)
{
    validate(red);
    detail::require(n > 0.0, "element count must be > 0");
    const double active = n - theta;
    if (active <= 0.0) return {0.0, true};
    return {red.xi * active * std::log1p(red.alpha / (n * n * red.psi)) / std::numbers::ln2, false};
}

inline RateResult rate_total(const ReducedParams& red, const RisConfig& ris)
{
    detail::require(ris.num_elements >= 1, "num_elements must be >= 1");
    validate(ris.absorbing);
    return rate_total(red, static_cast<double>(ris.num_elements), ris.absorbing_count());
}

// Continuous-N rate for an absorbing mode (fraction mode uses theta = q N).
inline double rate_at(const ReducedParams& red, const AbsorbingMode& mode, double n)
{
    return rate_total(red, n, absorbing_count(mode, n)).rate;
}

// Hardware element count: fraction mode rounds theta.
inline double rate_at_elements(const ReducedParams& red, const AbsorbingMode& mode, std::int64_t n)
{
    return rate_total(red, static_cast<double>(n), absorbing_count_at(mode, n)).rate;
}

// Aggregate rate as the explicit sum over every (LS, user, active element)
// link of the per-link rate. Fixed summation order l, m, n.
inline double rate_total_explicit(const SystemParams& sys, double gain, const RisConfig& ris)
{
    validate(sys);
    validate(ris);
    const auto active = static_cast<std::int64_t>(ris.active_count());
    const double per_link = rate_single_link(sys, snr_single_link(sys, gain, ris.num_elements));
    double total = 0.0;
    for (int l = 0; l < sys.num_light_sources; ++l)
        for (int m = 0; m < sys.num_users; ++m)
            for (std::int64_t k = 0; k < active; ++k) total += per_link;
    return total;
}

// alpha / (n^2 psi): the argument of the logarithm's power series.
inline double series_argument(const ReducedParams& red, double n)
{
    return red.alpha / (n * n * red.psi);
}

// Partial sum of the Newton-Mercator series for ln(1 + u) in place of the
// logarithm. Only valid for 0 < u <= 1.
inline double f_series(const ReducedParams& red, double n, double theta, int terms)
{
    validate(red);
    detail::require(n > 0.0, "element count must be > 0");
    detail::require(terms >= 1, "series needs at least one term");
    const double u = series_argument(red, n);
    if (u > 1.0)
        throw std::domain_error("alpha/(n^2 psi) = " + std::to_string(u)
                                + " exceeds 1: logarithm series diverges");
    double sum = 0.0;
    double power = 1.0;
    for (int j = 1; j <= terms; ++j) {
        power *= u;
        sum += (j % 2 == 1 ? power : -power) / j;
    }
    return red.xi * (n - theta) / std::numbers::ln2 * sum;
}

// Alternating-series bound on |f_series(terms) - exact rate|.
inline double f_series_error_bound(const ReducedParams& red, double n, double theta, int terms)
{
    const double u = series_argument(red, n);
    return red.xi * std::abs(n - theta) / std::numbers::ln2 * std::pow(u, terms + 1) / (terms + 1);
}

// Bits per control sequence implied by an aggregate rate:
//   k = 1/2 log2(alpha / (psi e^{ln2 rate / (xi zeta)} - psi)).
// For N a power of two this inverts rate_total exactly: k = log2 N.
inline double bits_per_sequence(const ReducedParams& red, double rate, double active)
{
    validate(red);
    detail::require(rate > 0.0, "rate must be > 0");
    detail::require(active > 0.0, "active element count must be > 0");
    const double single_element_capacity = red.xi * active * std::log1p(red.alpha / red.psi) / std::numbers::ln2;
    if (rate > single_element_capacity * (1.0 + 1e-12))
        throw std::domain_error("rate exceeds single-element capacity (implied N < 1)");
    const double denom = red.psi * std::expm1(std::numbers::ln2 * rate / (red.xi * active));
    if (!(denom > 0.0)) throw std::domain_error("rate too small to invert");
    return 0.5 * std::log2(red.alpha / denom);
}

} // namespace omnidris

#endif // OMNIDRIS_RATE_MODEL_HPP
