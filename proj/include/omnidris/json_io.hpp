#ifndef OMNIDRIS_JSON_IO_HPP
#define OMNIDRIS_JSON_IO_HPP

#include <variant>

#include <json.hpp>

#include "reports.hpp"
#include "scenario.hpp"
#include "sweep.hpp"

namespace omnidris {

using nlohmann::json;

inline json to_json(const AbsorbingMode& mode)
{
    if (const auto* f = std::get_if<FixedAbsorbing>(&mode)) return {{"absorbing_count", f->count}};
    return {{"absorbing_fraction", std::get<AbsorbingFraction>(mode).fraction}};
}

inline json to_json(const ReducedParams& r) { return {{"alpha", r.alpha}, {"psi", r.psi}, {"xi", r.xi}}; }

inline json to_json(const PowerOfTwoChoice& c)
{
    return {{"pow2_lower", c.lower},       {"pow2_upper", c.upper},
            {"rate_lower", c.rate_lower},  {"rate_upper", c.rate_upper},
            {"selected_n", c.selected},    {"selected_rate", c.selected_rate},
            {"selected_bits", c.selected_bits}, {"below_one", c.below_one}};
}

inline json to_json(const OptimumReport& o)
{
    json j = {{"mode", to_json(o.mode)},
              {"n_star_cubic", o.n_star_cubic},
              {"f_at_cubic", o.f_at_cubic},
              {"f_exact_at_cubic", o.f_exact_at_cubic},
              {"cubic_fallback", o.cubic_fallback},
              {"n_star_exact", o.n_star_exact},
              {"f_at_exact", o.f_at_exact},
              {"exact_at_boundary", o.exact_at_boundary},
              {"n_star", o.n_star},
              {"f_at_n_star", o.f_at_n_star}};
    j.update(to_json(o.selection));
    return j;
}

// Inverse of parse_scenario.
inline json to_json(const Scenario& s)
{
    json j = {{"schema_version", scenario_schema_version}, {"name", s.name}, {"description", s.description}};
    if (s.system) {
        const auto& y = *s.system;
        j["system"] = {{"bandwidth_hz", y.bandwidth},          {"total_transmit_power_w", y.total_transmit_power},
                       {"num_light_sources", y.num_light_sources}, {"num_users", y.num_users},
                       {"oe_conversion", y.oe_conversion},     {"noise_psd", y.noise_psd}};
    }
    if (s.geometry) {
        const auto& g = *s.geometry;
        j["geometry"] = {{"lambertian_order", g.lambertian_order},
                         {"ris_reflectiveness", g.ris_reflectiveness},
                         {"ris_element_area_m2", g.ris_element_area},
                         {"photodetector_area_m2", g.photodetector_area},
                         {"dist_ls_ris_m", g.dist_ls_ris},
                         {"dist_ris_user_m", g.dist_ris_user},
                         {"irradiance_angle_ls_ris_deg", g.irradiance_angle_ls_ris},
                         {"irradiance_angle_ris_user_deg", g.irradiance_angle_ris_user},
                         {"incidence_angle_ris_deg", g.incidence_angle_ris},
                         {"incidence_angle_user_deg", g.incidence_angle_user},
                         {"concentrator_gain", g.concentrator_gain},
                         {"filter_gain", g.filter_gain}};
    }
    if (s.reduced) j["reduced"] = to_json(*s.reduced);
    if (s.alpha_calibration) j["alpha_calibration"] = *s.alpha_calibration;
    json curves = json::array();
    for (const auto& c : s.curves) {
        json cj = to_json(c.absorbing);
        cj["label"] = c.label;
        if (c.noise_psd) cj["noise_psd"] = *c.noise_psd;
        curves.push_back(cj);
    }
    j["curves"] = curves;
    if (s.sweep.powers_of_two_only)
        j["sweep"] = {{"n_min", s.sweep.n_min}, {"n_max", s.sweep.n_max}, {"powers_of_two", true}};
    else
        j["sweep"] = {{"n_min", s.sweep.n_min}, {"n_max", s.sweep.n_max}, {"step", s.sweep.step}};
    return j;
}

inline json to_json(const SweepRow& r)
{
    return {{"n", r.n},          {"theta", r.theta}, {"zeta", r.zeta}, {"rate_bps", r.rate},
            {"pow2", r.is_power_of_two}, {"selected", r.is_selected}};
}

inline json to_json(const SweepCurve& c)
{
    json rows = json::array();
    for (const auto& r : c.rows) rows.push_back(to_json(r));
    return {{"label", c.label}, {"reduced", to_json(c.reduced)}, {"optimum", to_json(c.optimum)}, {"rows", rows}};
}

inline json to_json(const Table2Report& t)
{
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row = {{"scenario", r.reference.scenario},
                    {"reference", {{"meas_n", r.reference.meas_n}, {"calc_n", r.reference.calc_n},
                               {"meas_f", r.reference.meas_f}, {"calc_f", r.reference.calc_f}}},
                    {"meas_n", r.meas_n},
                    {"calc_n", r.calc_n},
                    {"meas_f", r.meas_f},
                    {"calc_f", r.calc_f},
                    {"pass", {{"meas_n", r.meas_n_ok}, {"calc_n", r.calc_n_ok},
                              {"meas_f", r.meas_f_ok}, {"calc_f", r.calc_f_ok}}}};
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(row);
    }
    return {{"table", 2},
            {"tolerances", {{"calc_rel", t.tol.calc_rel}, {"meas_n_abs", t.tol.meas_n_abs},
                            {"meas_f_rel", t.tol.meas_f_rel}}},
            {"rows", rows},
            {"pass", t.ok()}};
}

inline json to_json(const Table1Report& t)
{
    json rows = json::array();
    for (const auto& r : t.rows) {
        const auto& ref = r.reference;
        json row = {{"row", ref.row},
                    {"reference", {{"n_lower", ref.n_lower}, {"rate_lower_mbps", ref.rate_lower},
                               {"n", ref.n}, {"rate_mbps", ref.rate},
                               {"n_upper", ref.n_upper}, {"rate_upper_mbps", ref.rate_upper},
                               {"selected", ref.selected}}},
                    {"n_star", r.n_star},
                    {"rate_at_n_star", r.rate_at_n_star},
                    {"selection", to_json(r.selection)},
                    {"pass", {{"selection", r.selection_ok}, {"bracket", r.bracket_ok}, {"ratio", r.ratio_ok}}}};
        if (r.ratio_to_full > 0.0) row["ratio_to_full"] = r.ratio_to_full;
        rows.push_back(row);
    }
    return {{"table", 1}, {"calibrated_alpha", t.calibrated_alpha}, {"rows", rows}, {"pass", t.ok()}};
}

} // namespace omnidris

#endif // OMNIDRIS_JSON_IO_HPP
