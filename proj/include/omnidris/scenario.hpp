#ifndef OMNIDRIS_SCENARIO_HPP
#define OMNIDRIS_SCENARIO_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "optimizer.hpp"
#include "rate_model.hpp"

namespace omnidris {

inline constexpr int scenario_schema_version = 1;

// One rate curve within a scenario: an absorbing mode plus, for physical
// scenarios, an optional noise PSD overriding the system value.
struct Curve {
    std::string label;
    AbsorbingMode absorbing = FixedAbsorbing{};
    std::optional<double> noise_psd;
};

struct SweepSpec {
    double n_min = 1.0;
    double n_max = 512.0;
    double step = 1.0;            // 0 only when n_min == n_max
    bool powers_of_two_only = false;
};

// alpha comes from exactly one of: geometry (+ system), or a direct reduced
// parameter override. alpha_calibration replaces the computed alpha at the
// system's noise PSD; curves with another PSD scale it by psd_ref / psd.
struct Scenario {
    std::string name;
    std::string description;
    std::optional<SystemParams> system;
    std::optional<LinkGeometry> geometry;
    std::optional<ReducedParams> reduced;
    std::optional<double> alpha_calibration;
    std::vector<Curve> curves;
    SweepSpec sweep;
};

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void validate(const Scenario& s)
{
    const auto fail = [&](const std::string& msg) { throw ScenarioError("scenario '" + s.name + "': " + msg); };
    try {
        if (s.name.empty()) fail("name must not be empty");
        if (s.geometry.has_value() == s.reduced.has_value())
            fail("exactly one of 'geometry' or 'reduced' must supply alpha");
        if (s.geometry) {
            if (!s.system) fail("'geometry' requires 'system'");
            validate(*s.system);
            validate(*s.geometry);
            if (channel_dc_gain(*s.geometry) <= 0.0) fail("geometry yields a zero channel gain");
        } else {
            if (s.system) fail("'system' is not used with a 'reduced' override");
            if (s.alpha_calibration) fail("'alpha_calibration' applies only to geometry scenarios");
            validate(*s.reduced);
        }
        if (s.alpha_calibration && !(std::isfinite(*s.alpha_calibration) && *s.alpha_calibration > 0.0))
            fail("alpha_calibration must be > 0");
        if (s.curves.empty()) fail("at least one curve is required");
        std::set<std::string> labels;
        for (const auto& c : s.curves) {
            if (!labels.insert(c.label).second) fail("duplicate curve label '" + c.label + "'");
            validate(c.absorbing);
            if (c.noise_psd) {
                if (s.reduced) fail("curve noise_psd needs a geometry scenario");
                if (!(std::isfinite(*c.noise_psd) && *c.noise_psd > 0.0)) fail("curve noise_psd must be > 0");
            }
        }
        const auto& w = s.sweep;
        if (!(std::isfinite(w.n_min) && w.n_min >= 1.0)) fail("sweep n_min must be >= 1");
        if (!(std::isfinite(w.n_max) && w.n_max >= w.n_min)) fail("sweep n_max must be >= n_min");
        if (!w.powers_of_two_only) {
            if (!(std::isfinite(w.step) && w.step >= 0.0)) fail("sweep step must be >= 0");
            if (w.step == 0.0 && w.n_max != w.n_min) fail("sweep step 0 requires n_min == n_max");
            if (w.step > 0.0 && (w.n_max - w.n_min) / w.step > 1e7) fail("sweep grid exceeds 1e7 points");
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

inline const Curve& find_curve(const Scenario& s, std::string_view label)
{
    for (const auto& c : s.curves)
        if (c.label == label) return c;
    throw ScenarioError("scenario '" + s.name + "' has no curve '" + std::string(label) + "'");
}

inline bool is_calibrated(const Scenario& s) { return s.alpha_calibration.has_value(); }

// alpha exactly as the link budget gives it, ignoring any calibration.
inline double uncalibrated_alpha(const Scenario& s, const Curve& c)
{
    if (s.reduced) return s.reduced->alpha;
    SystemParams sys = *s.system;
    if (c.noise_psd) sys.noise_psd = *c.noise_psd;
    return reduce(sys, channel_dc_gain(*s.geometry)).alpha;
}

inline ReducedParams reduced_params(const Scenario& s, const Curve& c)
{
    if (s.reduced) return *s.reduced;
    SystemParams sys = *s.system;
    if (c.noise_psd) sys.noise_psd = *c.noise_psd;
    ReducedParams red = reduce(sys, channel_dc_gain(*s.geometry));
    if (s.alpha_calibration) red.alpha = *s.alpha_calibration * (s.system->noise_psd / sys.noise_psd);
    return red;
}

inline OptimumReport optimize_curve(const Scenario& s, const Curve& c, const OptimizeOptions& opt = {})
{
    const ReducedParams red = reduced_params(s, c);
    if (const auto* fixed = std::get_if<FixedAbsorbing>(&c.absorbing)) return optimize_fixed_theta(red, fixed->count, opt);
    return optimize_proportional(red, 1.0 - std::get<AbsorbingFraction>(c.absorbing).fraction, opt);
}

// --- presets ---------------------------------------------------------------

// Calibrated alpha placing the zeta = N optimum at `peak_n` elements.
inline double alpha_for_peak(double peak_n, double psi = 1.0)
{
    return peak_n * peak_n * psi * universal_stationary_ratio();
}

namespace detail {

inline Scenario normalized_preset(std::string name, double alpha, double theta, double xi, double psi)
{
    Scenario s;
    s.name = std::move(name);
    s.description = "normalized reduced parameters (alpha, theta, xi, psi) = (" + std::to_string(alpha) + ", "
                    + std::to_string(theta) + ", " + std::to_string(xi) + ", " + std::to_string(psi) + ")";
    s.reduced = ReducedParams{alpha, psi, xi};
    s.curves = {Curve{"theta=" + std::to_string(static_cast<int>(theta)), FixedAbsorbing{theta}, {}}};
    s.sweep = {1.0, 50.0, 0.01, false};
    return s;
}

inline Scenario indoor_preset(std::string name, std::string description, int light_sources)
{
    Scenario s;
    s.name = std::move(name);
    s.description = std::move(description);
    s.system = SystemParams{.bandwidth = 1e6,
                            .total_transmit_power = 10.0,
                            .num_light_sources = light_sources,
                            .num_users = 1,
                            .oe_conversion = 0.5,
                            .noise_psd = 2.0};
    s.geometry = LinkGeometry{};
    s.alpha_calibration = alpha_for_peak(180.0);
    s.sweep = {1.0, 512.0, 1.0, false};
    return s;
}

inline std::vector<Curve> zeta_mode_curves()
{
    return {Curve{"zeta=N", AbsorbingFraction{0.0}, {}},
            Curve{"zeta=3N/4", AbsorbingFraction{0.25}, {}},
            Curve{"zeta=N/2", AbsorbingFraction{0.5}, {}}};
}

inline std::vector<Curve> noise_curves(std::initializer_list<double> psds)
{
    std::vector<Curve> out;
    for (double p : psds) {
        std::ostringstream label;
        label << "psd=" << p;
        out.push_back(Curve{label.str(), AbsorbingFraction{0.5}, p});
    }
    return out;
}

} // namespace detail

inline std::vector<Scenario> bundled_presets()
{
    std::vector<Scenario> out;
    out.push_back(detail::normalized_preset("C0", 1, 1, 1, 1));
    out.push_back(detail::normalized_preset("C1", 5, 5, 5, 5));
    out.push_back(detail::normalized_preset("C2", 10, 10, 10, 10));
    out.push_back(detail::normalized_preset("C3", 3, 1, 1, 1));
    out.push_back(detail::normalized_preset("C4", 1, 3, 1, 1));
    out.push_back(detail::normalized_preset("C5", 1, 1, 3, 1));
    out.push_back(detail::normalized_preset("C6", 1, 1, 1, 3));

    const std::string calib = "; alpha calibrated so the zeta=N optimum sits at N=180 (uncalibrated link budget gives ~2.6e-13)";

    Scenario top = detail::indoor_preset("fig2-top", "single LS, noise PSD 2, zeta in {N, 3N/4, N/2}" + calib, 1);
    top.curves = detail::zeta_mode_curves();
    out.push_back(top);

    Scenario bottom = detail::indoor_preset(
        "fig2-bottom-text", "single LS, zeta=N/2, noise PSD in {3, 4, 8}" + calib, 1);
    bottom.curves = detail::noise_curves({3.0, 4.0, 8.0});
    out.push_back(bottom);

    Scenario table1 = detail::indoor_preset(
        "table1", "selection table rows: zeta modes at PSD 2, then zeta=N/2 at PSD {3, 5, 8}" + calib, 1);
    table1.curves = detail::zeta_mode_curves();
    for (auto& c : detail::noise_curves({3.0, 5.0, 8.0})) table1.curves.push_back(c);
    out.push_back(table1);

    Scenario fig4 = detail::indoor_preset("fig4-top", "two LSs, noise PSD 2, zeta in {N, 3N/4, N/2}" + calib, 2);
    fig4.curves = detail::zeta_mode_curves();
    out.push_back(fig4);
    return out;
}

inline std::optional<Scenario> find_preset(std::string_view name)
{
    for (auto& s : bundled_presets())
        if (s.name == name) return s;
    return std::nullopt;
}

// --- file format -------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

class JsonReader {
public:
    JsonReader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ScenarioError(path_ + ": expected an object");
    }

    // Rejects keys outside `allowed`.
    void only(std::initializer_list<std::string_view> allowed) const
    {
        for (const auto& [key, _] : j_.items()) {
            bool ok = false;
            for (auto a : allowed) ok = ok || key == a;
            if (!ok) throw ScenarioError(path_ + ": unknown key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key) const
    {
        const json& v = at(key);
        if (!v.is_number()) throw ScenarioError(where(key) + ": expected a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key) const
    {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ScenarioError(where(key) + ": expected an integer");
        return v.get<int>();
    }

    bool boolean_or(const std::string& key, bool fallback) const
    {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_boolean()) throw ScenarioError(where(key) + ": expected true/false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) const
    {
        const json& v = at(key);
        if (!v.is_string()) throw ScenarioError(where(key) + ": expected a string");
        return v.get<std::string>();
    }

    JsonReader object(const std::string& key) const { return JsonReader(at(key), where(key)); }

    const json& at(const std::string& key) const
    {
        if (!j_.contains(key)) throw ScenarioError(path_ + ": missing required key '" + key + "'");
        return j_.at(key);
    }

    std::string where(const std::string& key) const { return path_ + "." + key; }

private:
    const json& j_;
    std::string path_;
};

inline SystemParams read_system(const JsonReader& r)
{
    r.only({"bandwidth_hz", "total_transmit_power_w", "num_light_sources", "num_users", "oe_conversion",
            "noise_psd"});
    return SystemParams{.bandwidth = r.number("bandwidth_hz"),
                        .total_transmit_power = r.number("total_transmit_power_w"),
                        .num_light_sources = r.integer("num_light_sources"),
                        .num_users = r.integer("num_users"),
                        .oe_conversion = r.number("oe_conversion"),
                        .noise_psd = r.number("noise_psd")};
}

inline LinkGeometry read_geometry(const JsonReader& r)
{
    r.only({"lambertian_order", "ris_reflectiveness", "ris_element_area_m2", "photodetector_area_m2",
            "dist_ls_ris_m", "dist_ris_user_m", "irradiance_angle_ls_ris_deg", "irradiance_angle_ris_user_deg",
            "incidence_angle_ris_deg", "incidence_angle_user_deg", "concentrator_gain", "filter_gain"});
    LinkGeometry g;
    g.lambertian_order = r.number("lambertian_order");
    g.ris_reflectiveness = r.number("ris_reflectiveness");
    g.ris_element_area = r.number("ris_element_area_m2");
    g.photodetector_area = r.number("photodetector_area_m2");
    g.dist_ls_ris = r.number("dist_ls_ris_m");
    g.dist_ris_user = r.number("dist_ris_user_m");
    g.irradiance_angle_ls_ris = r.number("irradiance_angle_ls_ris_deg");
    g.irradiance_angle_ris_user = r.number("irradiance_angle_ris_user_deg");
    g.incidence_angle_ris = r.number("incidence_angle_ris_deg");
    g.incidence_angle_user = r.number("incidence_angle_user_deg");
    g.concentrator_gain = r.number_or("concentrator_gain", 1.0);
    g.filter_gain = r.number_or("filter_gain", 1.0);
    return g;
}

inline Curve read_curve(const JsonReader& r)
{
    r.only({"label", "absorbing_count", "absorbing_fraction", "active_fraction", "noise_psd"});
    Curve c;
    c.label = r.string("label");
    const int sources = int(r.has("absorbing_count")) + int(r.has("absorbing_fraction")) + int(r.has("active_fraction"));
    if (sources != 1)
        throw ScenarioError(r.where("label") + " '" + c.label
                            + "': give exactly one of absorbing_count, absorbing_fraction, active_fraction");
    if (r.has("absorbing_count")) c.absorbing = FixedAbsorbing{r.number("absorbing_count")};
    if (r.has("absorbing_fraction")) c.absorbing = AbsorbingFraction{r.number("absorbing_fraction")};
    if (r.has("active_fraction")) c.absorbing = active_fraction_mode(r.number("active_fraction"));
    if (r.has("noise_psd")) c.noise_psd = r.number("noise_psd");
    return c;
}

inline SweepSpec read_sweep(const JsonReader& r)
{
    r.only({"n_min", "n_max", "step", "powers_of_two"});
    SweepSpec w;
    w.n_min = r.number("n_min");
    w.n_max = r.number("n_max");
    w.powers_of_two_only = r.boolean_or("powers_of_two", false);
    if (w.powers_of_two_only) {
        if (r.has("step")) throw ScenarioError(r.where("step") + ": not used with powers_of_two");
    } else {
        w.step = r.number("step");
    }
    return w;
}

} // namespace detail

// Parses and validates a scenario document. Unknown keys are errors.
inline Scenario parse_scenario(std::string_view text, const std::string& origin = "<scenario>")
{
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
    const detail::JsonReader root(j, origin);
    root.only({"schema_version", "name", "description", "system", "geometry", "reduced", "alpha_calibration",
               "curves", "sweep"});
    if (root.integer("schema_version") != scenario_schema_version)
        throw ScenarioError(origin + ": unsupported schema_version (expected "
                            + std::to_string(scenario_schema_version) + ")");

    Scenario s;
    s.name = root.string("name");
    if (root.has("description")) s.description = root.string("description");
    if (root.has("system")) s.system = detail::read_system(root.object("system"));
    if (root.has("geometry")) s.geometry = detail::read_geometry(root.object("geometry"));
    if (root.has("reduced")) {
        const auto r = root.object("reduced");
        r.only({"alpha", "psi", "xi"});
        s.reduced = ReducedParams{r.number("alpha"), r.number("psi"), r.number("xi")};
    }
    if (root.has("alpha_calibration")) s.alpha_calibration = root.number("alpha_calibration");

    const auto& curves = root.at("curves");
    if (!curves.is_array()) throw ScenarioError(root.where("curves") + ": expected an array");
    for (std::size_t i = 0; i < curves.size(); ++i)
        s.curves.push_back(detail::read_curve(detail::JsonReader(curves[i], root.where("curves") + "[" + std::to_string(i) + "]")));
    s.sweep = detail::read_sweep(root.object("sweep"));

    validate(s);
    return s;
}

inline Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

// Preset name or file path.
inline Scenario resolve_scenario(const std::string& name_or_path)
{
    if (auto p = find_preset(name_or_path)) return *p;
    return load_scenario(name_or_path);
}

} // namespace omnidris

#endif // OMNIDRIS_SCENARIO_HPP
