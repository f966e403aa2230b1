#ifndef OMNIDRIS_CHANNEL_HPP
#define OMNIDRIS_CHANNEL_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace omnidris {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Geometry and optics of one LS -> RIS element -> user link.
// Angles are in degrees; they are converted to radians only inside
// channel_dc_gain().
struct LinkGeometry {
    double lambertian_order = 1.0;
    double ris_reflectiveness = 0.5;          // eta_n, in [0, 1]
    double ris_element_area = 0.04;           // m^2
    double photodetector_area = 4e-4;         // m^2
    double dist_ls_ris = 1.52;                // m
    double dist_ris_user = 2.03;              // m
    double irradiance_angle_ls_ris = 45.0;    // deg
    double irradiance_angle_ris_user = 10.0;  // deg
    double incidence_angle_ris = 17.95;       // deg
    double incidence_angle_user = 29.58;      // deg
    double concentrator_gain = 1.0;
    double filter_gain = 1.0;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw std::invalid_argument(what);
}

inline void require_angle(double deg, std::string_view name)
{
    require(std::isfinite(deg) && deg >= 0.0 && deg <= 90.0,
            std::string(name) + " must lie in [0, 90] degrees (got " + std::to_string(deg) + ")");
}

// cos() is not exactly zero at pi/2 in floating point; the gain is defined as
// zero there.
inline double cos_deg(double deg) { return deg == 90.0 ? 0.0 : std::cos(deg_to_rad(deg)); }

} // namespace detail

inline void validate(const LinkGeometry& g)
{
    using detail::require;
    require(std::isfinite(g.lambertian_order) && g.lambertian_order >= 0.0,
            "lambertian_order must be >= 0");
    require(g.ris_reflectiveness >= 0.0 && g.ris_reflectiveness <= 1.0,
            "ris_reflectiveness must lie in [0, 1]");
    require(g.ris_element_area > 0.0, "ris_element_area must be > 0");
    require(g.photodetector_area > 0.0, "photodetector_area must be > 0");
    require(g.dist_ls_ris > 0.0, "dist_ls_ris must be > 0");
    require(g.dist_ris_user > 0.0, "dist_ris_user must be > 0");
    detail::require_angle(g.irradiance_angle_ls_ris, "irradiance_angle_ls_ris");
    detail::require_angle(g.irradiance_angle_ris_user, "irradiance_angle_ris_user");
    detail::require_angle(g.incidence_angle_ris, "incidence_angle_ris");
    detail::require_angle(g.incidence_angle_user, "incidence_angle_user");
    require(g.concentrator_gain >= 0.0, "concentrator_gain must be >= 0");
    require(g.filter_gain >= 0.0, "filter_gain must be >= 0");
}

// NLoS DC gain of a single LS -> RIS element -> user path:
//
//   G = eta A_o A_pd (r+1) / (2 pi d1^2 d2^2)
//       * cos^r(theta_ln) cos(phi_ln) cos(theta_nm) cos(phi_nm) T g
//
// Non-integer Lambertian orders are allowed.
inline double channel_dc_gain(const LinkGeometry& g)
{
    validate(g);
    const double d1 = g.dist_ls_ris;
    const double d2 = g.dist_ris_user;
    const double scale = g.ris_reflectiveness * g.ris_element_area * g.photodetector_area
                         * (g.lambertian_order + 1.0)
                         / (2.0 * std::numbers::pi * d1 * d1 * d2 * d2);

    const double c_src = detail::cos_deg(g.irradiance_angle_ls_ris);
    // Zero at 90 degrees for every order, including r = 0.
    const double lambertian = c_src == 0.0 ? 0.0 : std::exp(g.lambertian_order * std::log(c_src));

    return scale * lambertian
           * detail::cos_deg(g.irradiance_angle_ris_user)
           * detail::cos_deg(g.incidence_angle_ris)
           * detail::cos_deg(g.incidence_angle_user)
           * g.concentrator_gain * g.filter_gain;
}

enum class PanelSide { front, back };  // front = reflection, back = refraction

// User position on the tetrahedron layout around the panel. Metadata only:
// link angles are supplied directly in LinkGeometry.
struct UserPlacement {
    std::string_view label;
    double azimuth_deg;
    double elevation_deg;
    PanelSide side;
};

inline void validate(const UserPlacement& u)
{
    detail::require(u.azimuth_deg > -180.0 && u.azimuth_deg <= 180.0,
                    "azimuth must lie in (-180, 180] degrees");
    detail::require(u.elevation_deg >= -90.0 && u.elevation_deg <= 90.0,
                    "elevation must lie in [-90, 90] degrees");
}

// Reference values. D' duplicates C' verbatim (likely a sign typo in the
// source table; kept as printed).
inline constexpr std::array<UserPlacement, 8> tetrahedron_users{{
    {"A", 31.22, -27.39, PanelSide::front},
    {"B", -31.22, -27.38, PanelSide::front},
    {"C", 31.22, 27.39, PanelSide::front},
    {"D", -31.22, 27.39, PanelSide::front},
    {"A'", 36.47, -30.33, PanelSide::back},
    {"B'", 36.47, 30.33, PanelSide::back},
    {"C'", -36.47, 30.33, PanelSide::back},
    {"D'", -36.47, 30.33, PanelSide::back},
}};

} // namespace omnidris

#endif // OMNIDRIS_CHANNEL_HPP
