#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tissot/expr.hpp"
#include "tissot/geo.hpp"
#include "tissot/linalg.hpp"

namespace tissot {

enum class ProjectionKind { plate_carree, mercator, sinusoidal, cassini, stereographic, tissot, custom };

std::string_view to_string(ProjectionKind kind);
/// Throws std::invalid_argument for unknown names.
ProjectionKind projection_kind_from_string(std::string_view name);

/// Map coordinates, same units as the surface radius.
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

/// Partial derivatives of (x, y) with respect to (lat, lon).
struct Jacobian2 {
    double dxdl = 0.0, dxdm = 0.0;
    double dydl = 0.0, dydm = 0.0;

    Mat2 matrix() const { return {dxdl, dxdm, dydl, dydm}; }
    double det() const { return dxdl * dydm - dxdm * dydl; }
};

/// A forward map (lat, lon) -> (x, y).
///
/// Longitudes enter every formula as m = lon - center.lon (the mean
/// meridian). Catalog projections put x east and y north, with y measured
/// from the central parallel. The Tissot projection keeps the orientation of
/// its classical formulae: x runs along the mean meridian (arc s) and y along
/// the parallel. Custom projections see `l` as the absolute latitude and `m`
/// as the longitude from the mean meridian, and are evaluated on the surface
/// in model units.
///
/// Only plate_carree, tissot and custom accept an ellipsoidal surface.
class ProjectionDef {
public:
    /// Throws std::invalid_argument for spherical-only kinds on an ellipsoid
    /// and for kind == custom (use custom()).
    ProjectionDef(ProjectionKind kind, Surface surface = {}, GeoPoint center = {}, std::string id = {});
    static ProjectionDef custom(Expression x, Expression y, Surface surface = {}, GeoPoint center = {},
                                std::string id = {});

    ProjectionKind kind() const { return kind_; }
    const Surface& surface() const { return surface_; }
    GeoPoint center() const { return center_; }
    const std::string& id() const { return id_; }
    const Expression& x_expression() const { return x_expr_; }
    const Expression& y_expression() const { return y_expr_; }

    /// Order of the truncated series for kind == tissot; 0 for closed forms.
    int truncation_order() const { return kind_ == ProjectionKind::tissot ? 2 : 0; }
    /// Angles are preserved everywhere in the domain.
    bool is_conformal() const;

    /// Throws DomainError outside the domain.
    PlanePoint project(GeoPoint p) const;
    /// Closed-form (or, for custom, forward-mode) partials. Throws
    /// DomainError outside the domain.
    Jacobian2 analytic_jacobian(GeoPoint p) const;

private:
    ProjectionKind kind_;
    Surface surface_;
    GeoPoint center_;
    std::string id_;
    Expression x_expr_;
    Expression y_expr_;
};

PlanePoint project(const ProjectionDef& def, GeoPoint p);

/// Second-order Tissot projection about the parallel center_lat:
///   x = s + r m² sin(l) / 2,  y = r m (1 + m² cos(2l) / 6)
/// with s the meridian arc from center_lat and r the parallel radius.
/// p.lon is m, already measured from the mean meridian. Throws DomainError
/// for |m| > π/2.
PlanePoint tissot_projection(const Surface& surface, double center_lat, GeoPoint p);

/// Longitudes beyond this half-width from the mean meridian are outside
/// the narrow lune the truncated series is meant for.
inline constexpr double kTissotLuneHalfWidth = 0.2;
inline bool tissot_beyond_lune(double m) { return std::abs(m) > kTissotLuneHalfWidth; }

/// Parses "x = <expr>; y = <expr>" (statements separated by ';' or newlines,
/// either order) with variables l and m. ParseError offsets index into
/// `text`.
ProjectionDef parse_custom_projection(std::string_view text, Surface surface = {}, GeoPoint center = {},
                                      std::string id = {});
/// Inverse of parse_custom_projection for the expression pair.
std::string serialize_custom_projection(const ProjectionDef& def);

}  // namespace tissot
