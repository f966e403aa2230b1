// Command-line front end. Kept in a header so the test suite can drive it
// without spawning processes.
#ifndef OMNIDRIS_TOOLS_CLI_HPP
#define OMNIDRIS_TOOLS_CLI_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <omnidris/omnidris.hpp>

namespace omnidris::cli {

enum ExitCode : int { ok = 0, rejected = 1, usage = 2 };

namespace detail {

inline std::string fmt(double v) { return format_number(v); }

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
    f << text;
}

inline std::string text_optimum(const std::string& label, const OptimumReport& o)
{
    std::ostringstream os;
    os << "curve: " << label << '\n'
       << "  n_star_cubic:      " << fmt(o.n_star_cubic) << (o.cubic_fallback ? "  (fallback to oracle)" : "") << '\n'
       << "  f_at_cubic:        " << fmt(o.f_at_cubic) << '\n'
       << "  f_exact_at_cubic:  " << fmt(o.f_exact_at_cubic) << '\n'
       << "  n_star_exact:      " << fmt(o.n_star_exact) << (o.exact_at_boundary ? "  (range boundary)" : "") << '\n'
       << "  f_at_exact:        " << fmt(o.f_at_exact) << '\n'
       << "  n_star:            " << fmt(o.n_star) << '\n'
       << "  pow2 candidates:   " << o.selection.lower << " -> " << fmt(o.selection.rate_lower) << ", "
       << o.selection.upper << " -> " << fmt(o.selection.rate_upper) << '\n'
       << "  selected:          N=" << o.selection.selected << " k=" << o.selection.selected_bits
       << " rate=" << fmt(o.selection.selected_rate) << (o.selection.below_one ? "  (n_star < 1)" : "") << '\n';
    return os.str();
}

inline std::string text_table2(const Table2Report& t)
{
    std::ostringstream os;
    os << "scenario  meas_N    calc_N    meas_f    calc_f    | ref:   meas_N calc_N meas_f calc_f | pass\n";
    char line[256];
    for (const auto& r : t.rows) {
        std::snprintf(line, sizeof line, "%-8s  %-8.4f  %-8.4f  %-8.4f  %-8.4f  | %7.4f %7.4f %7.4f %7.4f | %s%s%s\n",
                      r.reference.scenario, r.meas_n, r.calc_n, r.meas_f, r.calc_f, r.reference.meas_n,
                      r.reference.calc_n, r.reference.meas_f, r.reference.calc_f, r.ok() ? "PASS" : "FAIL",
                      r.note.empty() ? "" : "  ", r.note.c_str());
        os << line;
    }
    return os.str();
}

inline std::string text_table1(const Table1Report& t)
{
    std::ostringstream os;
    os << "calibrated alpha: " << fmt(t.calibrated_alpha) << '\n'
       << "row         N'   rate'(Mbps)  N*        rate*(Mbps)  N''  rate''(Mbps) selected | ref sel   | pass\n";
    char line[256];
    for (const auto& r : t.rows) {
        const auto& s = r.selection;
        std::snprintf(line, sizeof line, "%-10s  %-4lld %-12.2f %-9.2f %-12.2f %-4lld %-12.2f %-8lld | %-9.0f | %s\n",
                      r.reference.row, static_cast<long long>(s.lower), s.rate_lower / 1e6, r.n_star,
                      r.rate_at_n_star / 1e6, static_cast<long long>(s.upper), s.rate_upper / 1e6,
                      static_cast<long long>(s.selected), r.reference.selected,
                      r.selection_ok && r.bracket_ok && r.ratio_ok ? "PASS" : "FAIL");
        os << line;
    }
    return os.str();
}

inline const Curve& pick_curve(const Scenario& s, const std::string& label)
{
    return label.empty() ? s.curves.front() : find_curve(s, label);
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Rate model and element-count optimizer for omni-DRIS assisted indoor VLC links", "omnidris"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string curve_label;
    std::string format;
    std::string out_path;

    const auto add_common = [&](CLI::App* sub, const std::string& default_format,
                                const std::vector<std::string>& formats) {
        sub->add_option("--out", out_path, "Write output to PATH instead of stdout");
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember(formats))
            ->default_str(default_format);
    };

    auto* presets = app.add_subcommand("presets", "List bundled scenarios");
    add_common(presets, "text", {"text", "json"});

    double n_value = 0.0;
    std::optional<double> theta_override;
    auto* rate = app.add_subcommand("rate", "Evaluate the aggregate rate at one element count");
    rate->add_option("--scenario", scenario_arg, "Preset name or scenario file")->required();
    rate->add_option("--curve", curve_label, "Curve label (default: first curve)");
    rate->add_option("--n", n_value, "Element count N (may be fractional)")->required()->check(CLI::PositiveNumber);
    rate->add_option("--theta", theta_override, "Override: fixed number of absorbing elements");
    add_common(rate, "text", {"text", "csv", "json"});

    auto* optimize = app.add_subcommand("optimize", "Find the rate-maximizing element count");
    optimize->add_option("--scenario", scenario_arg, "Preset name or scenario file")->required();
    optimize->add_option("--curve", curve_label, "Curve label (default: all curves)");
    add_common(optimize, "text", {"text", "json"});

    auto* sweep = app.add_subcommand("sweep", "Tabulate the rate over the scenario's N grid");
    sweep->add_option("--scenario", scenario_arg, "Preset name or scenario file")->required();
    sweep->add_option("--curve", curve_label, "Curve label for CSV output (default: first curve)");
    add_common(sweep, "csv", {"csv", "json"});

    std::string which_table = "all";
    std::optional<double> calibrated_alpha;
    auto* tables = app.add_subcommand("tables", "Reproduce the selection table (1) and normalized-parameter table (2)");
    tables->add_option("--table", which_table, "1, 2 or all")->check(CLI::IsMember({"1", "2", "all"}));
    tables->add_option("--calibrated-alpha", calibrated_alpha,
                       "alpha for table 1 (default: optimum of the zeta=N row at N=180)");
    add_common(tables, "text", {"text", "json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return usage;
    }

    try {
        std::ostringstream os;
        if (*presets) {
            const auto all = bundled_presets();
            if (format == "json") {
                json arr = json::array();
                for (const auto& s : all) arr.push_back(to_json(s));
                os << arr.dump(2) << '\n';
            } else {
                for (const auto& s : all) os << s.name << "\t" << s.description << '\n';
            }
        } else if (*rate) {
            const Scenario s = resolve_scenario(scenario_arg);
            const Curve& c = detail::pick_curve(s, curve_label);
            const ReducedParams red = reduced_params(s, c);
            SweepRow row = evaluate_row(red, theta_override ? AbsorbingMode{FixedAbsorbing{*theta_override}} : c.absorbing,
                                        n_value);
            if (theta_override) {
                if (*theta_override < 0.0) throw std::invalid_argument("--theta must be >= 0");
                row.theta = std::min(*theta_override, n_value);
                row.zeta = n_value - row.theta;
                row.rate = rate_total(red, n_value, row.theta).rate;
            }
            const bool degenerate = row.zeta <= 0.0;
            if (format == "json") {
                json j = to_json(row);
                j.erase("selected");
                j["degenerate"] = degenerate;
                j["scenario"] = s.name;
                j["curve"] = c.label;
                os << j.dump(2) << '\n';
            } else if (format == "csv") {
                os << "n,theta,zeta,rate_bps,pow2,degenerate\n"
                   << detail::fmt(row.n) << ',' << detail::fmt(row.theta) << ',' << detail::fmt(row.zeta) << ','
                   << detail::fmt(row.rate) << ',' << (row.is_power_of_two ? 1 : 0) << ',' << (degenerate ? 1 : 0)
                   << '\n';
            } else {
                os << "scenario " << s.name << ", curve " << c.label << '\n'
                   << "  n=" << detail::fmt(row.n) << " theta=" << detail::fmt(row.theta)
                   << " zeta=" << detail::fmt(row.zeta) << '\n'
                   << "  rate_bps=" << detail::fmt(row.rate) << (degenerate ? "  (degenerate: no active elements)" : "")
                   << '\n';
            }
        } else if (*optimize) {
            const Scenario s = resolve_scenario(scenario_arg);
            std::vector<const Curve*> curves;
            if (curve_label.empty())
                for (const auto& c : s.curves) curves.push_back(&c);
            else
                curves.push_back(&find_curve(s, curve_label));
            if (format == "json") {
                json arr = json::array();
                for (const auto* c : curves) {
                    json j = to_json(optimize_curve(s, *c));
                    j["curve"] = c->label;
                    j["reduced"] = to_json(reduced_params(s, *c));
                    arr.push_back(j);
                }
                os << json{{"scenario", s.name}, {"calibrated", is_calibrated(s)}, {"curves", arr}}.dump(2) << '\n';
            } else {
                os << "scenario " << s.name << (is_calibrated(s) ? " (calibrated alpha)" : "") << '\n';
                for (const auto* c : curves) os << detail::text_optimum(c->label, optimize_curve(s, *c));
            }
        } else if (*sweep) {
            const Scenario s = resolve_scenario(scenario_arg);
            const auto curves = run_sweep(s);
            if (format == "json") {
                json arr = json::array();
                for (const auto& c : curves) arr.push_back(to_json(c));
                os << json{{"scenario", s.name}, {"calibrated", is_calibrated(s)}, {"curves", arr}}.dump(2) << '\n';
            } else {
                const std::string label = curve_label.empty() ? curves.front().label : curve_label;
                const auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) { return c.label == label; });
                if (it == curves.end()) throw ScenarioError("scenario '" + s.name + "' has no curve '" + label + "'");
                write_sweep_csv(os, it->rows);
            }
        } else if (*tables) {
            const double alpha = calibrated_alpha.value_or(alpha_for_peak(180.0));
            const bool t1 = which_table != "2";
            const bool t2 = which_table != "1";
            if (format == "json") {
                json j = json::object();
                if (t1) j["table1"] = to_json(reproduce_table1(alpha));
                if (t2) j["table2"] = to_json(reproduce_table2());
                os << j.dump(2) << '\n';
            } else {
                if (t1) os << "Table 1: power-of-two selection\n" << detail::text_table1(reproduce_table1(alpha));
                if (t1 && t2) os << '\n';
                if (t2) os << "Table 2: normalized parameters, measured vs calculated\n" << detail::text_table2(reproduce_table2());
            }
        }
        detail::emit(os.str(), out_path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return rejected;
    }
    return ok;
}

} // namespace omnidris::cli

#endif // OMNIDRIS_TOOLS_CLI_HPP
