#ifndef OMNIDRIS_SWEEP_HPP
#define OMNIDRIS_SWEEP_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace omnidris {

struct SweepRow {
    double n = 0.0;
    double theta = 0.0;
    double zeta = 0.0;  // n - theta, never negative
    double rate = 0.0;  // bit/s
    bool is_power_of_two = false;
    bool is_selected = false;
};

struct SweepCurve {
    std::string label;
    ReducedParams reduced;
    OptimumReport optimum;
    std::vector<SweepRow> rows;
};

inline constexpr double max_hardware_elements = 512.0;

// Evaluation points: the uniform grid plus every power of two in
// [n_min, n_max] intersected with [1, 512], ascending and de-duplicated.
inline std::vector<double> sweep_points(const SweepSpec& w)
{
    std::vector<double> pts;
    const double pow2_cap = w.powers_of_two_only ? w.n_max : std::min(w.n_max, max_hardware_elements);
    for (double p = 1.0; p <= pow2_cap; p *= 2.0)
        if (p >= w.n_min) pts.push_back(p);
    if (!w.powers_of_two_only) {
        if (w.step == 0.0) {
            pts.push_back(w.n_min);
        } else {
            const auto count = static_cast<std::int64_t>(std::floor((w.n_max - w.n_min) / w.step + 1e-9)) + 1;
            for (std::int64_t i = 0; i < count; ++i) pts.push_back(w.n_min + static_cast<double>(i) * w.step);
        }
    }
    std::sort(pts.begin(), pts.end());
    // Grid points within rounding of a power of two collapse onto it.
    std::vector<double> out;
    for (double p : pts) {
        if (!out.empty() && std::abs(p - out.back()) <= 1e-9 * p) {
            if (p == std::round(p)) out.back() = p;
            continue;
        }
        out.push_back(p);
    }
    return out;
}

inline bool is_power_of_two_count(double n)
{
    return n >= 1.0 && n == std::floor(n) && n <= 0x1p62
           && std::has_single_bit(static_cast<std::uint64_t>(n));
}

inline SweepRow evaluate_row(const ReducedParams& red, const AbsorbingMode& mode, double n)
{
    SweepRow row;
    row.n = n;
    const bool integral = n == std::floor(n) && n <= 0x1p62;
    const double theta = integral ? absorbing_count_at(mode, static_cast<std::int64_t>(n)) : absorbing_count(mode, n);
    row.theta = std::min(theta, n);
    row.zeta = n - row.theta;
    row.rate = rate_total(red, n, row.theta).rate;
    row.is_power_of_two = is_power_of_two_count(n);
    return row;
}

inline std::vector<SweepCurve> run_sweep(const Scenario& s)
{
    validate(s);
    const auto pts = sweep_points(s.sweep);
    std::vector<SweepCurve> out;
    for (const auto& c : s.curves) {
        SweepCurve sc;
        sc.label = c.label;
        sc.reduced = reduced_params(s, c);
        sc.optimum = optimize_curve(s, c);
        sc.rows.reserve(pts.size());
        for (double n : pts) {
            SweepRow row = evaluate_row(sc.reduced, c.absorbing, n);
            row.is_selected = row.is_power_of_two && row.n == static_cast<double>(sc.optimum.selection.selected);
            sc.rows.push_back(row);
        }
        out.push_back(std::move(sc));
    }
    return out;
}

// %.17g: enough digits to round-trip any double.
inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* sweep_csv_header = "n,theta,zeta,rate_bps,pow2,selected";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << sweep_csv_header << '\n';
    for (const auto& r : rows) {
        os << format_number(r.n) << ',' << format_number(r.theta) << ',' << format_number(r.zeta) << ','
           << format_number(r.rate) << ',' << (r.is_power_of_two ? 1 : 0) << ',' << (r.is_selected ? 1 : 0) << '\n';
    }
}

} // namespace omnidris

#endif // OMNIDRIS_SWEEP_HPP
