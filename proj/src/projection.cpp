#include "tissot/projection.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "tissot/errors.hpp"

namespace tissot {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

const std::array<std::string, 2>& lm_vars() {
    static const std::array<std::string, 2> vars{"l", "m"};
    return vars;
}

constexpr std::array<std::pair<ProjectionKind, std::string_view>, 7> kNames{{
    {ProjectionKind::plate_carree, "plate_carree"},
    {ProjectionKind::mercator, "mercator"},
    {ProjectionKind::sinusoidal, "sinusoidal"},
    {ProjectionKind::cassini, "cassini"},
    {ProjectionKind::stereographic, "stereographic"},
    {ProjectionKind::tissot, "tissot"},
    {ProjectionKind::custom, "custom"},
}};

void require_sphere(const Surface& s, ProjectionKind kind) {
    if (s.e2() != 0.0)
        throw std::invalid_argument(std::string(to_string(kind)) + " is only defined on the sphere");
}

struct Stereo {
    double d, dl, dm;  // denominator and its partials
};

Stereo stereo_denominator(double lat0, double l, double m) {
    double s0 = std::sin(lat0), c0 = std::cos(lat0);
    double sl = std::sin(l), cl = std::cos(l), cm = std::cos(m), sm = std::sin(m);
    return {1.0 + s0 * sl + c0 * cl * cm, s0 * cl - c0 * sl * cm, -c0 * cl * sm};
}

}  // namespace

std::string_view to_string(ProjectionKind kind) {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

ProjectionKind projection_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    throw std::invalid_argument("unknown projection '" + std::string(name) + "'");
}

ProjectionDef::ProjectionDef(ProjectionKind kind, Surface surface, GeoPoint center, std::string id)
    : kind_(kind), surface_(surface), center_(normalized(center)), id_(std::move(id)) {
    if (kind == ProjectionKind::custom) throw std::invalid_argument("custom projections need expressions");
    if (kind != ProjectionKind::plate_carree && kind != ProjectionKind::tissot) require_sphere(surface, kind);
    if (kind == ProjectionKind::mercator && std::abs(center_.lat) >= kHalfPi)
        throw std::invalid_argument("mercator central parallel must not be a pole");
    if (id_.empty()) id_ = std::string(to_string(kind));
}

ProjectionDef ProjectionDef::custom(Expression x, Expression y, Surface surface, GeoPoint center, std::string id) {
    if (x.empty() || y.empty()) throw std::invalid_argument("custom projection needs both expressions");
    ProjectionDef def(ProjectionKind::plate_carree, surface, center, id.empty() ? "custom" : std::move(id));
    def.kind_ = ProjectionKind::custom;
    def.x_expr_ = std::move(x);
    def.y_expr_ = std::move(y);
    return def;
}

bool ProjectionDef::is_conformal() const {
    return kind_ == ProjectionKind::mercator || kind_ == ProjectionKind::stereographic;
}

PlanePoint ProjectionDef::project(GeoPoint p) const {
    p = normalized(p);
    const double R = surface_.equatorial_radius();
    const double l = p.lat;
    const double m = normalize_lon(p.lon - center_.lon);
    const double l0 = center_.lat;
    switch (kind_) {
        case ProjectionKind::plate_carree: return {R * m, meridian_arc(surface_, l0, l)};
        case ProjectionKind::mercator: {
            if (std::abs(l) >= kHalfPi) throw DomainError("mercator is undefined at the poles");
            double y = std::atanh(std::sin(l)) - std::atanh(std::sin(l0));
            if (!std::isfinite(y)) throw DomainError("mercator is undefined at the poles");
            return {R * m, R * y};
        }
        case ProjectionKind::sinusoidal: return {R * m * std::cos(l), R * (l - l0)};
        case ProjectionKind::cassini: {
            double b = std::cos(l) * std::sin(m);
            if (std::abs(b) >= 1.0) throw DomainError("cassini is undefined 90° from the central meridian");
            double phi = std::atan2(std::sin(l), std::cos(l) * std::cos(m));
            return {R * std::asin(b), R * (phi - l0)};
        }
        case ProjectionKind::stereographic: {
            Stereo st = stereo_denominator(l0, l, m);
            if (st.d <= 1e-12) throw DomainError("stereographic is undefined at the antipode of its center");
            double k = 2.0 * R / st.d;
            double X = std::cos(l) * std::sin(m);
            double Y = std::cos(l0) * std::sin(l) - std::sin(l0) * std::cos(l) * std::cos(m);
            return {k * X, k * Y};
        }
        case ProjectionKind::tissot: return tissot_projection(surface_, l0, {l, m});
        case ProjectionKind::custom: {
            std::array<double, 2> vars{l, m};
            return {x_expr_.evaluate(vars), y_expr_.evaluate(vars)};
        }
    }
    return {};
}

Jacobian2 ProjectionDef::analytic_jacobian(GeoPoint p) const {
    p = normalized(p);
    const double R = surface_.equatorial_radius();
    const double l = p.lat;
    const double m = normalize_lon(p.lon - center_.lon);
    const double sl = std::sin(l), cl = std::cos(l);
    const double sm = std::sin(m), cm = std::cos(m);
    switch (kind_) {
        case ProjectionKind::plate_carree: return {0.0, R, surface_.meridian_radius(l), 0.0};
        case ProjectionKind::mercator:
            if (std::abs(l) >= kHalfPi) throw DomainError("mercator is undefined at the poles");
            return {0.0, R, R / cl, 0.0};
        case ProjectionKind::sinusoidal: return {-R * m * sl, R * cl, R, 0.0};
        case ProjectionKind::cassini: {
            double b = cl * sm;
            double w = 1.0 - b * b;  // = sin²l + cos²l cos²m
            if (w <= 0.0) throw DomainError("cassini is undefined 90° from the central meridian");
            double rw = std::sqrt(w);
            return {-R * sl * sm / rw, R * cl * cm / rw, R * cm / w, R * sl * cl * sm / w};
        }
        case ProjectionKind::stereographic: {
            const double l0 = center_.lat;
            const double s0 = std::sin(l0), c0 = std::cos(l0);
            Stereo st = stereo_denominator(l0, l, m);
            if (st.d <= 1e-12) throw DomainError("stereographic is undefined at the antipode of its center");
            double X = cl * sm, Xl = -sl * sm, Xm = cl * cm;
            double Y = c0 * sl - s0 * cl * cm, Yl = c0 * cl + s0 * sl * cm, Ym = s0 * cl * sm;
            double f = 2.0 * R / (st.d * st.d);
            return {f * (Xl * st.d - X * st.dl), f * (Xm * st.d - X * st.dm), f * (Yl * st.d - Y * st.dl),
                    f * (Ym * st.d - Y * st.dm)};
        }
        case ProjectionKind::tissot: {
            if (std::abs(m) > kHalfPi) throw DomainError("tissot projection requires |m| <= 90°");
            double M = surface_.meridian_radius(l);
            double r = parallel_radius(surface_, l);
            double dr = -M * sl;  // d r / d lat
            double m2 = m * m;
            double c2 = std::cos(2.0 * l), s2 = std::sin(2.0 * l);
            return {M + 0.5 * m2 * (dr * sl + r * cl), r * m * sl, dr * m * (1.0 + m2 * c2 / 6.0) - r * m * m2 * s2 / 3.0,
                    r * (1.0 + 0.5 * m2 * c2)};
        }
        case ProjectionKind::custom: {
            std::array<double, 2> vars{l, m};
            Dual2 x = x_expr_.evaluate_dual(vars);
            Dual2 y = y_expr_.evaluate_dual(vars);
            return {x.d[0], x.d[1], y.d[0], y.d[1]};
        }
    }
    return {};
}

PlanePoint project(const ProjectionDef& def, GeoPoint p) { return def.project(p); }

PlanePoint tissot_projection(const Surface& surface, double center_lat, GeoPoint p) {
    const double l = p.lat;
    const double m = p.lon;
    if (!std::isfinite(m) || std::abs(m) > kHalfPi) throw DomainError("tissot projection requires |m| <= 90°");
    if (!std::isfinite(l) || std::abs(l) > kHalfPi) throw DomainError("latitude outside [-90°, 90°]");
    double s = meridian_arc(surface, center_lat, l);
    double r = parallel_radius(surface, l);
    return {s + 0.5 * r * m * m * std::sin(l), r * m * (1.0 + m * m * std::cos(2.0 * l) / 6.0)};
}

ProjectionDef parse_custom_projection(std::string_view text, Surface surface, GeoPoint center, std::string id) {
    std::optional<Expression> x, y;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find_first_of(";\n", pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view stmt = text.substr(pos, end - pos);
        std::size_t first = stmt.find_first_not_of(" \t\r");
        if (first != std::string_view::npos) {
            std::size_t eq = stmt.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected '<name> = <expression>'", pos + first);
            std::string_view lhs = stmt.substr(first, eq - first);
            lhs = lhs.substr(0, lhs.find_last_not_of(" \t") + 1);
            std::optional<Expression>* target = nullptr;
            if (lhs == "x")
                target = &x;
            else if (lhs == "y")
                target = &y;
            else
                throw ParseError("left-hand side must be x or y", pos + first);
            if (target->has_value()) throw ParseError("duplicate definition of " + std::string(lhs), pos + first);
            *target = Expression::parse(stmt.substr(eq + 1), lm_vars(), pos + eq + 1);
        }
        pos = end + 1;
    }
    if (!x) throw ParseError("missing definition of x", text.size());
    if (!y) throw ParseError("missing definition of y", text.size());
    return ProjectionDef::custom(std::move(*x), std::move(*y), surface, center, std::move(id));
}

std::string serialize_custom_projection(const ProjectionDef& def) {
    if (def.kind() != ProjectionKind::custom) throw std::invalid_argument("not a custom projection");
    return "x = " + def.x_expression().to_string() + "; y = " + def.y_expression().to_string();
}

}  // namespace tissot
