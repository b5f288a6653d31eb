#pragma once

#include <string_view>

#include "json.hpp"
#include "tissot/distortion.hpp"
#include "tissot/geo.hpp"
#include "tissot/projection.hpp"
#include "tissot/qc.hpp"

namespace tissot {

using Json = nlohmann::json;

// Loaders throw std::invalid_argument for missing or ill-typed fields and
// ParseError for malformed expressions. Angles are degrees in every config.

/// {kind: "sphere"|"ellipsoid", radius?, flattening? | inverse_flattening?}
Surface surface_from_json(const Json& j);
Json surface_to_json(const Surface& s);

/// Compact command-line form: "sphere", "sphere:R", "ellipsoid:A:F" or
/// "ellipsoid:A:1/INVF".
Surface surface_from_spec(std::string_view spec);

/// {id, kind, center: {lat_deg, lon_deg}, surface: {...}, expressions?: {x, y}}
ProjectionDef projection_from_json(const Json& j);
Json projection_to_json(const ProjectionDef& def);

/// {vertices: [{lat_deg, lon_deg}, ...], center?: {lat_deg, lon_deg}}; the
/// center defaults to the vertex average.
RegionSpec region_from_json(const Json& j);

/// {vertices: [{x, y}, ...]}
Polygon planar_polygon_from_json(const Json& j);

/// {expressions: {u, v}, domain: {x0, x1, y0, y1}} or
/// {affine: [[m11, m12], [m21, m22]], offset: [tx, ty], domain?: {...}}
PlanarMap planar_map_from_json(const Json& j);

}  // namespace tissot
