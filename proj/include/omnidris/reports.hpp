#ifndef OMNIDRIS_REPORTS_HPP
#define OMNIDRIS_REPORTS_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace omnidris {

// Reference values used by the reproduction reports.
struct Table2Reference {
    const char* scenario;
    double meas_n, calc_n, meas_f, calc_f;
};

inline constexpr std::array<Table2Reference, 7> table2_reference{{
    {"C0", 2.2000, 2.2728, 0.3252, 0.3211},
    {"C1", 10.000, 10.0502, 0.3588, 0.3589},
    {"C2", 20.0008, 20.0250, 0.3602, 0.3602},
    {"C3", 2.5000, 2.8406, 0.8484, 0.8037},
    {"C4", 6.1000, 6.0845, 0.1186, 0.1186},
    {"C5", 2.2000, 2.8406, 0.9755, 0.9632},
    {"C6", 2.1000, 2.0865, 0.1156, 0.1154},
}};

struct Table2Tolerances {
    double calc_rel = 1e-3;
    double meas_n_abs = 0.05;
    double meas_f_rel = 1e-3;
    double invariance_rel = 1e-9;
};

struct Table2Row {
    Table2Reference reference;
    double meas_n = 0.0, meas_f = 0.0;  // brute-force oracle on the exact rate
    double calc_n = 0.0, calc_f = 0.0;  // cubic root, two-term series rate
    bool calc_n_ok = false, calc_f_ok = false, meas_n_ok = false, meas_f_ok = false;
    std::string note;

    bool ok() const { return calc_n_ok && calc_f_ok && meas_n_ok && meas_f_ok; }
};

struct Table2Report {
    Table2Tolerances tol;
    std::vector<Table2Row> rows;

    bool ok() const
    {
        for (const auto& r : rows)
            if (!r.ok()) return false;
        return true;
    }
};

inline double relative_error(double value, double reference)
{
    return std::abs(value - reference) / std::abs(reference);
}

// Normalized scenarios, oracle over [1, 50]. C5's printed calculated N
// duplicates C3's; since xi cannot move the stationary point, that cell is
// checked against C0's root instead of the printed number.
inline Table2Report reproduce_table2(const Table2Tolerances& tol = {})
{
    Table2Report rep;
    rep.tol = tol;
    OptimizeOptions opt;
    opt.n_max = 50.0;
    opt.grid = 100000;

    double c0_calc_n = 0.0;
    for (const auto& ref : table2_reference) {
        const Scenario s = *find_preset(ref.scenario);
        const OptimumReport o = optimize_curve(s, s.curves.front(), opt);
        Table2Row row;
        row.reference = ref;
        row.meas_n = o.n_star_exact;
        row.meas_f = o.f_at_exact;
        row.calc_n = o.n_star_cubic;
        row.calc_f = o.f_at_cubic;
        if (std::string(ref.scenario) == "C0") c0_calc_n = row.calc_n;

        row.calc_f_ok = relative_error(row.calc_f, ref.calc_f) <= tol.calc_rel;
        row.meas_n_ok = std::abs(row.meas_n - ref.meas_n) <= tol.meas_n_abs;
        row.meas_f_ok = relative_error(row.meas_f, ref.meas_f) <= tol.meas_f_rel;
        if (std::string(ref.scenario) == "C5") {
            row.calc_n_ok = relative_error(row.calc_n, c0_calc_n) <= tol.invariance_rel;
            row.note = "reference cell duplicates C3; property-checked instead (calculated N must equal C0's)";
        } else {
            row.calc_n_ok = relative_error(row.calc_n, ref.calc_n) <= tol.calc_rel;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

struct Table1Reference {
    const char* row;
    double n_lower, rate_lower, n, rate, n_upper, rate_upper;  // Mbps as printed
    double selected;
};

inline constexpr std::array<Table1Reference, 6> table1_reference{{
    {"zeta=N", 128, 399.59, 180, 413.23, 256, 397.76, 128},
    {"zeta=3N/4", 128, 299.69, 180, 309.92, 256, 298.32, 128},
    {"zeta=N/2", 128, 199.80, 180, 206.62, 256, 198.88, 128},
    {"psd=3", 128, 181.34, 150, 183.91, 256, 172.01, 128},
    {"psd=5", 64, 128.75, 120, 146.13, 128, 146.27, 128},
    {"psd=8", 64, 99.94, 90, 103.55, 128, 99.81, 64},
}};

struct Table1Row {
    Table1Reference reference;
    double n_star = 0.0;
    double rate_at_n_star = 0.0;
    PowerOfTwoChoice selection;
    bool selection_ok = false;
    bool bracket_ok = false;
    double ratio_to_full = 0.0;  // selected rate / zeta=N selected rate (zeta rows)
    bool ratio_ok = true;
};

struct Table1Report {
    double calibrated_alpha = 0.0;
    std::vector<Table1Row> rows;

    bool ok() const
    {
        for (const auto& r : rows)
            if (!(r.selection_ok && r.bracket_ok && r.ratio_ok)) return false;
        return true;
    }
};

// Reproduces the selection pattern of the power-of-two table. Absolute
// rates are not comparable (uncalibrated alpha differs by ~18 orders of
// magnitude); the pattern and the active-fraction ratios are.
inline Table1Report reproduce_table1(double calibrated_alpha)
{
    detail::require(calibrated_alpha > 0.0, "calibrated alpha must be > 0");
    Scenario s = *find_preset("table1");
    s.alpha_calibration = calibrated_alpha;

    Table1Report rep;
    rep.calibrated_alpha = calibrated_alpha;
    double full_rate = 0.0;
    for (const auto& ref : table1_reference) {
        const Curve& c = find_curve(s, ref.row);
        const OptimumReport o = optimize_curve(s, c);
        Table1Row row;
        row.reference = ref;
        row.n_star = o.n_star;
        row.rate_at_n_star = o.f_at_n_star;
        row.selection = o.selection;
        row.selection_ok = static_cast<double>(o.selection.selected) == ref.selected;
        row.bracket_ok = static_cast<double>(o.selection.lower) == ref.n_lower
                         && static_cast<double>(o.selection.upper) == ref.n_upper;
        const std::string label = ref.row;
        if (label == "zeta=N") full_rate = o.selection.selected_rate;
        if (label.rfind("zeta=", 0) == 0) {
            const double expected = label == "zeta=N" ? 1.0 : label == "zeta=3N/4" ? 0.75 : 0.5;
            row.ratio_to_full = o.selection.selected_rate / full_rate;
            row.ratio_ok = relative_error(row.ratio_to_full, expected) <= 1e-12;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace omnidris

#endif // OMNIDRIS_REPORTS_HPP
