#pragma once

#include "tissot/geo.hpp"
#include "tissot/linalg.hpp"
#include "tissot/projection.hpp"

namespace tissot {

/// How jacobian() differentiates a projection.
struct DifferentiationMode {
    enum class Kind { analytic, numeric };
    Kind kind = Kind::analytic;
    double step = 1e-6;  ///< central-difference step in radians (numeric only)

    static DifferentiationMode analytic() { return {Kind::analytic, 0.0}; }
    static DifferentiationMode numeric(double step = 1e-6) { return {Kind::numeric, step}; }
};

/// Relative tolerance on a/b - 1 below which a point counts as conformal.
inline constexpr double kConformalTolerance = 1e-9;

/// Partials of def at p. Numeric mode halves the step (down to 1e-9 rad)
/// while the stencil leaves the domain and then throws DomainError.
Jacobian2 jacobian(const ProjectionDef& def, GeoPoint p,
                   DifferentiationMode mode = DifferentiationMode::analytic());

/// Differential measured against ground length: columns are the images of
/// unit ground steps north (meridian) and east (parallel).
/// Throws DegenerateError at poles or where det J vanishes.
Mat2 normalized_differential(const ProjectionDef& def, GeoPoint p,
                             DifferentiationMode mode = DifferentiationMode::analytic());

struct Indicatrix {
    double a = 0.0;           ///< greatest scale factor
    double b = 0.0;           ///< least scale factor
    double theta = 0.0;       ///< map-plane angle of the major axis from +x, (-π/2, π/2]
    double omega = 0.0;       ///< greatest angular deformation
    double area_scale = 0.0;  ///< a·b
    /// Ground directions stretched by a and b, as (north, east) components.
    Vec2 dir_major_domain;
    Vec2 dir_minor_domain;
    /// a = b within kConformalTolerance: principal directions are not unique,
    /// theta is reported as 0 and the directions as north/east.
    bool conformal = false;
};

/// Indicatrix of a ground-normalized differential, e.g. of a synthetic
/// linear map.
Indicatrix indicatrix_from_differential(const Mat2& s);

Indicatrix distortion_ellipse(const ProjectionDef& def, GeoPoint p,
                              DifferentiationMode mode = DifferentiationMode::analytic());

struct PrincipalTangents {
    Vec2 domain_major, domain_minor;  ///< (north, east) components
    Vec2 image_major, image_minor;    ///< map-plane unit vectors
    bool non_unique = false;
};

PrincipalTangents principal_tangents(const ProjectionDef& def, GeoPoint p,
                                     DifferentiationMode mode = DifferentiationMode::analytic());
PrincipalTangents principal_tangents_from_differential(const Mat2& s);

/// 2·asin((a - b)/(a + b)). Throws std::invalid_argument unless a >= b > 0.
double max_angle_deformation(double a, double b);

/// Side ratios and angles of corresponding infinitesimal parallelograms
/// spanned by dl and dm on the surface (source) and on the map (image).
struct ParallelogramRatios {
    double L = 0.0, M = 0.0;              ///< source side lengths per radian
    double L_img = 0.0, M_img = 0.0;      ///< image side lengths per radian
    double h = 0.0;                       ///< L / L'
    double k = 0.0;                       ///< M / M'
    double theta_src = 0.0;               ///< Θ, angle between source sides
    double theta_img = 0.0;               ///< Θ', angle between image sides
    /// Image over source, the orientation of indicatrix scale factors.
    double h_scale() const { return 1.0 / h; }
    double k_scale() const { return 1.0 / k; }
};

/// The surface is taken as the source; def's own surface is ignored.
ParallelogramRatios parallelogram_ratios(const ProjectionDef& def, const Surface& surface, GeoPoint p,
                                         DifferentiationMode mode = DifferentiationMode::analytic());

struct AxisPair {
    double a = 0.0;
    double b = 0.0;
};

/// Axes of the indicatrix when both net directions scale by the same h
/// (image over source): h·cos(Θ'/2)/cos(Θ/2) and h·sin(Θ'/2)/sin(Θ/2),
/// sorted so a >= b. Throws std::invalid_argument for h <= 0 or angles
/// outside (0, π).
AxisPair special_case_axes(double h, double theta_src, double theta_img);

}  // namespace tissot
