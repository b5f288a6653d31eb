#include "tissot/geo.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tissot {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

}  // namespace

Surface::Surface(SurfaceKind kind, double a, double f) : kind_(kind), a_(a), f_(f), e2_(f * (2.0 - f)) {}

Surface Surface::sphere(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("surface radius must be positive and finite");
    return Surface(SurfaceKind::sphere, radius, 0.0);
}

Surface Surface::ellipsoid(double equatorial_radius, double flattening) {
    if (!(equatorial_radius > 0.0) || !std::isfinite(equatorial_radius))
        throw std::invalid_argument("equatorial radius must be positive and finite");
    if (!(flattening >= 0.0 && flattening < 1.0))
        throw std::invalid_argument("flattening must lie in [0, 1)");
    return Surface(SurfaceKind::ellipsoid, equatorial_radius, flattening);
}

double Surface::prime_vertical_radius(double lat) const {
    if (e2_ == 0.0) return a_;
    double s = std::sin(lat);
    return a_ / std::sqrt(1.0 - e2_ * s * s);
}

double Surface::meridian_radius(double lat) const {
    if (e2_ == 0.0) return a_;
    double s = std::sin(lat);
    double w2 = 1.0 - e2_ * s * s;
    return a_ * (1.0 - e2_) / (w2 * std::sqrt(w2));
}

double Surface::gaussian_curvature(double lat) const {
    return 1.0 / (meridian_radius(lat) * prime_vertical_radius(lat));
}

GeoPoint GeoPoint::from_degrees(double lat_deg, double lon_deg) {
    return {deg_to_rad(lat_deg), deg_to_rad(lon_deg)};
}

double normalize_lon(double lon) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (lon > -std::numbers::pi && lon <= std::numbers::pi) return lon;
    double w = std::remainder(lon, two_pi);  // [-π, π]
    return w <= -std::numbers::pi ? w + two_pi : w;
}

GeoPoint normalized(GeoPoint p) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon))
        throw std::invalid_argument("geographic coordinates must be finite");
    if (std::abs(p.lat) > kHalfPi) throw std::invalid_argument("latitude outside [-90°, 90°]");
    return {p.lat, normalize_lon(p.lon)};
}

double parallel_radius(const Surface& surface, double lat) {
    if (std::abs(lat) >= kHalfPi) return 0.0;
    return surface.prime_vertical_radius(lat) * std::cos(lat);
}

double meridian_arc(const Surface& surface, double lat0, double lat) {
    if (surface.e2() == 0.0) return surface.equatorial_radius() * (lat - lat0);
    if (lat0 == lat) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&surface](double t) { return surface.meridian_radius(t); };
    return gauss_kronrod<double, 15>::integrate(integrand, lat0, lat, 15, 1e-13);
}

FirstFundamentalForm fundamental_form(const Surface& surface, GeoPoint p) {
    double m = surface.meridian_radius(p.lat);
    double r = parallel_radius(surface, p.lat);
    return {m * m, 0.0, r * r};
}

Vec3 embed(const Surface& surface, GeoPoint p) {
    if (std::abs(p.lat) >= kHalfPi) {
        double z = std::copysign(surface.polar_radius(), p.lat);
        return {0.0, 0.0, z};
    }
    double n = surface.prime_vertical_radius(p.lat);
    double r = n * std::cos(p.lat);
    return {r * std::cos(p.lon), r * std::sin(p.lon), n * (1.0 - surface.e2()) * std::sin(p.lat)};
}

EmbedPartials embed_partials(const Surface& surface, GeoPoint p) {
    double m = surface.meridian_radius(p.lat);
    double r = parallel_radius(surface, p.lat);
    double sl = std::sin(p.lat), cl = std::cos(p.lat);
    double sm = std::sin(p.lon), cm = std::cos(p.lon);
    // d/dlat of (r cos lon, r sin lon, z) is M·(-sin lat cos lon, -sin lat sin lon, cos lat).
    return {{-m * sl * cm, -m * sl * sm, m * cl}, {-r * sm, r * cm, 0.0}};
}

}  // namespace tissot
