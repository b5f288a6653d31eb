#include "tissot/config.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <string>

#include "tissot/errors.hpp"

namespace tissot {

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("config is missing '") + key + "'");
    return j.at(key);
}

double number(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_number()) throw std::invalid_argument(std::string("config field '") + key + "' must be a number");
    return v.get<double>();
}

std::string text(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_string()) throw std::invalid_argument(std::string("config field '") + key + "' must be a string");
    return v.get<std::string>();
}

GeoPoint geo_point(const Json& j) { return GeoPoint::from_degrees(number(j, "lat_deg"), number(j, "lon_deg")); }

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("malformed number '" + std::string(s) + "'");
    return v;
}

}  // namespace

Surface surface_from_json(const Json& j) {
    std::string kind = j.contains("kind") ? text(j, "kind") : "sphere";
    double radius = j.contains("radius") ? number(j, "radius") : 1.0;
    if (kind == "sphere") return Surface::sphere(radius);
    if (kind != "ellipsoid") throw std::invalid_argument("unknown surface kind '" + kind + "'");
    if (j.contains("flattening") && j.contains("inverse_flattening"))
        throw std::invalid_argument("give either flattening or inverse_flattening, not both");
    double f = 0.0;
    if (j.contains("flattening"))
        f = number(j, "flattening");
    else if (j.contains("inverse_flattening"))
        f = 1.0 / number(j, "inverse_flattening");
    else
        throw std::invalid_argument("ellipsoid needs flattening or inverse_flattening");
    return Surface::ellipsoid(radius, f);
}

Json surface_to_json(const Surface& s) {
    if (s.kind() == SurfaceKind::sphere) return {{"kind", "sphere"}, {"radius", s.equatorial_radius()}};
    return {{"kind", "ellipsoid"}, {"radius", s.equatorial_radius()}, {"flattening", s.flattening()}};
}

Surface surface_from_spec(std::string_view spec) {
    auto colon = spec.find(':');
    std::string_view kind = spec.substr(0, colon);
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (kind == "sphere") return rest.empty() ? Surface::sphere() : Surface::sphere(parse_double(rest));
    if (kind == "ellipsoid") {
        auto c2 = rest.find(':');
        if (c2 == std::string_view::npos) throw std::invalid_argument("ellipsoid spec is ellipsoid:A:F");
        double a = parse_double(rest.substr(0, c2));
        std::string_view f = rest.substr(c2 + 1);
        if (f.starts_with("1/")) return Surface::ellipsoid(a, 1.0 / parse_double(f.substr(2)));
        return Surface::ellipsoid(a, parse_double(f));
    }
    throw std::invalid_argument("unknown surface '" + std::string(spec) + "'");
}

ProjectionDef projection_from_json(const Json& j) {
    ProjectionKind kind = projection_kind_from_string(text(j, "kind"));
    GeoPoint center = j.contains("center") ? geo_point(j.at("center")) : GeoPoint{};
    Surface surface = j.contains("surface") ? surface_from_json(j.at("surface")) : Surface{};
    std::string id = j.contains("id") ? text(j, "id") : std::string(to_string(kind));
    if (kind != ProjectionKind::custom) return ProjectionDef(kind, surface, center, id);
    const Json& ex = require(j, "expressions");
    static const std::array<std::string, 2> vars{"l", "m"};
    return ProjectionDef::custom(Expression::parse(text(ex, "x"), vars), Expression::parse(text(ex, "y"), vars),
                                 surface, center, id);
}

Json projection_to_json(const ProjectionDef& def) {
    Json j{{"id", def.id()},
           {"kind", std::string(to_string(def.kind()))},
           {"center", {{"lat_deg", rad_to_deg(def.center().lat)}, {"lon_deg", rad_to_deg(def.center().lon)}}},
           {"surface", surface_to_json(def.surface())}};
    if (def.kind() == ProjectionKind::custom)
        j["expressions"] = {{"x", def.x_expression().to_string()}, {"y", def.y_expression().to_string()}};
    if (def.truncation_order() > 0) j["truncation_order"] = def.truncation_order();
    return j;
}

RegionSpec region_from_json(const Json& j) {
    const Json& vs = require(j, "vertices");
    if (!vs.is_array()) throw std::invalid_argument("region vertices must be an array");
    std::vector<GeoPoint> pts;
    for (const Json& v : vs) pts.push_back(geo_point(v));
    if (pts.size() < 3) throw std::invalid_argument("region polygon needs at least 3 vertices");
    GeoPoint center = j.contains("center") ? geo_point(j.at("center")) : RegionSpec::vertex_centroid(pts);
    return RegionSpec::from_geo(pts, center);
}

Polygon planar_polygon_from_json(const Json& j) {
    const Json& vs = require(j, "vertices");
    if (!vs.is_array()) throw std::invalid_argument("polygon vertices must be an array");
    std::vector<Vec2> pts;
    for (const Json& v : vs) pts.push_back({number(v, "x"), number(v, "y")});
    return Polygon(std::move(pts));
}

PlanarMap planar_map_from_json(const Json& j) {
    Rect domain;
    if (j.contains("domain")) {
        const Json& d = j.at("domain");
        domain = {number(d, "x0"), number(d, "x1"), number(d, "y0"), number(d, "y1")};
        if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
            throw std::invalid_argument("planar map domain must be a non-empty rectangle");
    }
    if (j.contains("affine")) {
        const Json& m = j.at("affine");
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() ||
            m[1].size() != 2)
            throw std::invalid_argument("affine must be a 2x2 array");
        AffineMap a{{m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(), m[1][1].get<double>()}, {}};
        if (j.contains("offset")) {
            const Json& o = j.at("offset");
            if (!o.is_array() || o.size() != 2) throw std::invalid_argument("offset must be [tx, ty]");
            a.offset = {o[0].get<double>(), o[1].get<double>()};
        }
        return PlanarMap::affine(a, domain);
    }
    if (!j.contains("domain")) throw std::invalid_argument("expression planar map needs a domain");
    const Json& ex = require(j, "expressions");
    static const std::array<std::string, 2> vars{"x", "y"};
    return PlanarMap::from_expressions(Expression::parse(text(ex, "u"), vars), Expression::parse(text(ex, "v"), vars),
                                       domain);
}

}  // namespace tissot
