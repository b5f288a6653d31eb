#pragma once

#include <numbers>

#include "tissot/linalg.hpp"

namespace tissot {

enum class SurfaceKind { sphere, ellipsoid };

/// Sphere or oblate ellipsoid of revolution. Lengths are in model units
/// (equatorial radius 1 unless a radius is given).
class Surface {
public:
    /// Unit sphere.
    Surface() = default;

    static Surface sphere(double radius = 1.0);
    /// Throws std::invalid_argument unless radius > 0 and 0 <= flattening < 1.
    static Surface ellipsoid(double equatorial_radius, double flattening);

    SurfaceKind kind() const { return kind_; }
    double equatorial_radius() const { return a_; }
    double flattening() const { return f_; }
    double polar_radius() const { return a_ * (1.0 - f_); }
    /// First eccentricity squared, f(2 - f).
    double e2() const { return e2_; }

    /// Prime-vertical radius of curvature N(lat).
    double prime_vertical_radius(double lat) const;
    /// Meridian radius of curvature M(lat).
    double meridian_radius(double lat) const;
    /// Gaussian curvature 1/(M N).
    double gaussian_curvature(double lat) const;

    friend bool operator==(const Surface&, const Surface&) = default;

private:
    Surface(SurfaceKind kind, double a, double f);

    SurfaceKind kind_ = SurfaceKind::sphere;
    double a_ = 1.0;
    double f_ = 0.0;
    double e2_ = 0.0;
};

/// Geodetic latitude and longitude, radians.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    static GeoPoint from_degrees(double lat_deg, double lon_deg);
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Wraps a longitude into (-π, π].
double normalize_lon(double lon);
/// Normalizes the longitude and checks lat ∈ [-π/2, π/2]; throws
/// std::invalid_argument for non-finite or out-of-range latitudes.
GeoPoint normalized(GeoPoint p);

/// ds² = E dlat² + 2F dlat dlon + G dlon².
struct FirstFundamentalForm {
    double E = 0.0;
    double F = 0.0;
    double G = 0.0;
};

/// Radius r of the parallel at lat; exactly 0 at the poles.
double parallel_radius(const Surface& surface, double lat);

/// Signed meridian arc from lat0 to lat.
double meridian_arc(const Surface& surface, double lat0, double lat);

FirstFundamentalForm fundamental_form(const Surface& surface, GeoPoint p);

/// Earth-centred Cartesian position of a surface point (Z along the axis).
Vec3 embed(const Surface& surface, GeoPoint p);

/// Partial derivatives of embed() with respect to lat and lon.
struct EmbedPartials {
    Vec3 d_lat;
    Vec3 d_lon;
};
EmbedPartials embed_partials(const Surface& surface, GeoPoint p);

inline constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

}  // namespace tissot
