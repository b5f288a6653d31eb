#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tissot/geo.hpp"
#include "tissot/indicatrix.hpp"
#include "tissot/projection.hpp"

namespace tissot {

/// Graticule in degrees. Indicatrices are drawn at every k-th intersection
/// of the parallels and meridians along both axes.
struct GraticuleSpec {
    double lat_min = -60.0, lat_max = 60.0, lat_step = 30.0;
    double lon_min = -90.0, lon_max = 90.0, lon_step = 30.0;
    int every = 1;
    /// Ellipse display scale (map units per unit scale factor); unset picks
    /// 0.25 of the smaller graticule step projected at the center.
    std::optional<double> display_scale;

    /// Throws std::invalid_argument for non-positive steps, k < 1 or ranges
    /// outside the globe.
    void validate() const;
    std::vector<double> latitudes() const;
    std::vector<double> longitudes() const;
};

struct FieldSample {
    GeoPoint geo;
    PlanePoint plane;
    /// Unset where the projection is defined but its differential degenerates.
    std::optional<Indicatrix> ind;
};

struct SampleSet {
    std::vector<FieldSample> samples;  ///< lat outer, lon inner
    std::size_t skipped = 0;           ///< out-of-domain intersections
};

SampleSet sample_field(const ProjectionDef& def, const GraticuleSpec& grat);

struct SvgOptions {
    double stroke_width = 0.0;  ///< 0 picks a width from the extent
    int graticule_resolution_deg = 1;
};

/// Resolved display scale for a graticule.
double display_scale(const ProjectionDef& def, const GraticuleSpec& grat);

/// SVG document: projected meridians/parallels plus one indicatrix per
/// sample (class "indicatrix"; a circle when conformal) or a cross marker
/// (class "degenerate"). The SVG y axis points down, so map y is negated.
std::string render_svg(const ProjectionDef& def, const SampleSet& samples, const GraticuleSpec& grat,
                       const SvgOptions& options = {});

inline constexpr const char* kCsvHeader = "lat_deg,lon_deg,x,y,a,b,theta_rad,omega_rad,area_scale";
inline constexpr int kCsvPlaces = 12;

std::string export_csv(const std::vector<FieldSample>& samples);

}  // namespace tissot
