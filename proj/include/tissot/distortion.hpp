#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tissot/field.hpp"
#include "tissot/geo.hpp"
#include "tissot/linalg.hpp"
#include "tissot/projection.hpp"

namespace tissot {

/// Closed polygon in a plane, used as a region mask. Points on an edge count
/// as inside.
class Polygon {
public:
    /// Throws std::invalid_argument for fewer than 3 vertices, non-finite
    /// coordinates or self-intersecting edges.
    explicit Polygon(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    /// Even-odd rule, edges included.
    bool contains(Vec2 p) const;
    /// Smallest t in [0, 1] at which the segment from a to b meets an edge.
    std::optional<double> first_crossing(Vec2 a, Vec2 b) const;
    Vec2 min_corner() const { return lo_; }
    Vec2 max_corner() const { return hi_; }

private:
    std::vector<Vec2> vertices_;
    Vec2 lo_, hi_;
};

/// Region to analyse: a geographic polygon (vertices as (lon, lat) in a
/// Polygon with x = lon, y = lat, radians) and its central point.
struct RegionSpec {
    Polygon boundary;
    GeoPoint center;

    static RegionSpec from_geo(const std::vector<GeoPoint>& vertices, GeoPoint center);
    /// Vertex average, used when a config omits the center.
    static GeoPoint vertex_centroid(const std::vector<GeoPoint>& vertices);
    bool contains(GeoPoint p) const { return boundary.contains({p.lon, p.lat}); }
};

/// Grid over the polygon's bounding box with n nodes on each axis.
GridSpec bounding_grid(const Polygon& polygon, int nx, int ny);

/// λ = sqrt(a·b) - 1 with the companion channels a - 1 and b - 1;
/// degenerate or out-of-domain nodes are left out of every mask.
struct LambdaField {
    ScalarField lambda;
    ScalarField a_minus_1;
    ScalarField b_minus_1;
    std::size_t masked_degenerate = 0;
};

/// grid is geographic (x = lon, y = lat). Nodes outside the region are
/// masked out.
LambdaField lambda_field(const ProjectionDef& def, const RegionSpec& region, const GridSpec& grid);

/// λ0(α, β) = base·(α² + β²) + A(α² - β²) + 2Bαβ with base = 1/(4RR').
struct DarbouxConic {
    double A = 0.0;
    double B = 0.0;
    double base = 0.25;
    double R = 1.0;
    double R_prime = 1.0;

    static DarbouxConic with_radii(double R, double R_prime, double A = 0.0, double B = 0.0);
    double operator()(double alpha, double beta) const;
    double operator()(Vec2 p) const { return (*this)(p.x, p.y); }
    /// Symmetric matrix of the quadratic form.
    Mat2 form() const { return {base + A, B, B, base - A}; }
};

/// Principal radii of curvature (meridian M, prime vertical N) at a point.
struct PrincipalRadii {
    double R = 1.0;
    double R_prime = 1.0;
};
PrincipalRadii principal_radii(const Surface& surface, double lat);

/// Least-squares A, B minimizing Σ |∇(λ - λ0)|² over nodes whose four
/// neighbours are all in the mask, gradients by central differences.
/// `lambda` lives on plane coordinates (α = x axis, β = y axis) centred on
/// the central point. Throws DegenerateError when the 2x2 normal equations
/// are singular (e.g. no usable nodes).
DarbouxConic fit_darboux_conic(const ScalarField& lambda, double R, double R_prime);

enum class ConicClass { ellipse, hyperbola, parallel_lines, point, empty };
std::string_view to_string(ConicClass c);

struct EllipseBoundaryReport {
    ConicClass classification = ConicClass::empty;
    double level = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double orientation = 0.0;    ///< angle of the major axis from the α axis
    double boundary_min = 0.0;
    double boundary_max = 0.0;
    double boundary_spread = 0.0;
    double interior_max = 0.0;
    std::size_t boundary_samples = 0;
    std::size_t interior_samples = 0;
    bool constant_on_boundary = false;  ///< spread < 1e-12
    bool max_on_boundary = false;       ///< interior max <= boundary value
};

/// Samples the level set λ0 = level and its interior. Non-elliptic level
/// sets are classified and reported without samples.
EllipseBoundaryReport ellipse_boundary_check(const DarbouxConic& conic, double level,
                                             std::size_t boundary_samples = 720,
                                             std::size_t radial_samples = 64);

/// Masked grid with a Dirichlet boundary for the Chebyshev solver.
struct SolverDomain {
    GridSpec grid;
    Polygon region;
};

/// How nodes next to the region boundary see the Dirichlet value.
enum class BoundaryTreatment {
    /// Ring nodes take the linear interpolant between their inner neighbour
    /// and u = c at the nearest boundary crossing (Collatz).
    interpolated,
    /// Every node keeps the Laplacian, with arms that cross the boundary
    /// shortened to the crossing (Shortley–Weller). Exact for quadratic u.
    shortened_arms,
};

struct ChebyshevOptions {
    double tolerance = 1e-10;  ///< on the scaled residual ∞-norm
    int max_iterations = 200000;
    /// SOR factor; 0 picks 2 / (1 + sin(π / n)) from the grid size.
    double relaxation = 0.0;
    BoundaryTreatment boundary = BoundaryTreatment::interpolated;
};

struct ChebyshevSolution {
    ScalarField u;
    ScalarField magnification;  ///< exp(u - c)
    double residual = 0.0;
    int iterations = 0;
    std::size_t unknowns = 0;
    std::size_t boundary_ring = 0;  ///< in-region nodes with an out-of-region 4-neighbour
};

/// Solves Δu = K in the region with u = c on its boundary by lexicographic
/// SOR on the 5-point stencil; both boundary treatments are second order on
/// curved boundaries. The residual of each row is measured after scaling
/// the row to the diagonal of the regular stencil. Nodes within 1e-10 steps
/// of the boundary are pinned at c.
/// K must be defined on every in-region node that carries the Laplacian. Throws
/// ConvergenceError at the iteration cap, DomainError for an empty region.
ChebyshevSolution chebyshev_solve(const SolverDomain& domain, const ScalarField& curvature, double boundary_value,
                                  const ChebyshevOptions& options = {});
/// Constant-curvature overload.
ChebyshevSolution chebyshev_solve(const SolverDomain& domain, double curvature, double boundary_value,
                                  const ChebyshevOptions& options = {});

struct DistortionReport {
    std::size_t nodes = 0;
    std::size_t degenerate = 0;
    double sup_abs_lambda = 0.0;
    double mean_abs_lambda = 0.0;
    double sup_omega = 0.0;
    double sup_a = 0.0;
    double inf_b = 0.0;
    double min_area_scale = 0.0;
    double max_area_scale = 0.0;
};

/// Throws DomainError when no grid node falls inside the region.
DistortionReport distortion_report(const ProjectionDef& def, const RegionSpec& region, const GridSpec& grid);

/// Local plane coordinates about the central point of a region: east and
/// north ground distances to first order (N cos l0 Δlon, M Δlat).
Vec2 local_plane(const Surface& surface, GeoPoint center, GeoPoint p);
GeoPoint local_plane_inverse(const Surface& surface, GeoPoint center, Vec2 q);

/// λ of def sampled on an nx-by-ny grid over the region's footprint in local
/// plane coordinates about region.center, ready for fit_darboux_conic.
ScalarField lambda_plane_field(const ProjectionDef& def, const RegionSpec& region, int nx, int ny);

}  // namespace tissot
