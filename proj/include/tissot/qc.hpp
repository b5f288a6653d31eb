#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tissot/expr.hpp"
#include "tissot/field.hpp"
#include "tissot/linalg.hpp"

namespace tissot {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

struct AffineMap {
    Mat2 matrix = Mat2::identity();
    Vec2 offset;
    Vec2 operator()(Vec2 p) const { return matrix * p + offset; }
};

/// Bump displacement Σ c_ij sin(iπ(x-x0)/w) sin(jπ(y-y0)/h) per component;
/// it vanishes on the rectangle's frame.
struct SineBumps {
    Rect frame;
    int modes = 0;  ///< i, j in 1..modes
    std::vector<double> cu, cv;  ///< modes² coefficients each, row-major (j outer)

    Vec2 displacement(Vec2 p) const;
    Mat2 gradient(Vec2 p) const;
};

/// Differentiable map w = f(z) of a plane rectangle, given by expressions
/// u(x, y), v(x, y), an affine map, or an affine map applied after a bump
/// perturbation of the identity.
class PlanarMap {
public:
    static PlanarMap from_expressions(Expression u, Expression v, Rect domain);
    static PlanarMap affine(AffineMap map, Rect domain);
    static PlanarMap perturbed_affine(AffineMap map, SineBumps bumps);

    const Rect& domain() const { return domain_; }
    Vec2 operator()(Vec2 z) const;
    /// d(u, v)/d(x, y).
    Mat2 jacobian(Vec2 z) const;

private:
    enum class Kind { expressions, affine, perturbed_affine };
    Kind kind_ = Kind::affine;
    Rect domain_;
    Expression u_, v_;
    AffineMap affine_;
    SineBumps bumps_;
};

/// Lavrentieff characteristics at a point. `theta` is the source-plane angle
/// of the major axis of the small ellipse that the map sends to a circle; it
/// points along the direction of least stretch. `stretch_theta` is the
/// source-plane direction of greatest stretch (theta ± π/2).
struct Characteristics {
    double p = 1.0;
    double theta = 0.0;          ///< (-π/2, π/2], 0 when non_unique
    double stretch_theta = 0.0;  ///< (-π/2, π/2], 0 when non_unique
    bool non_unique = false;     ///< p = 1 within 1e-9
};

/// Throws DegenerateError for a singular or orientation-reversing Jacobian.
Characteristics characteristics_of(const Mat2& jacobian);
Characteristics characteristics(const PlanarMap& map, Vec2 z);

/// Max p over the grid nodes. Throws DomainError if a node lies outside the
/// map's domain; errors from characteristics propagate.
double sup_dilatation(const PlanarMap& map, const GridSpec& grid);

struct RectanglePair {
    double src_width = 1.0, src_height = 1.0;
    double dst_width = 1.0, dst_height = 1.0;
    void validate() const;
};

struct GrotzschAffine {
    AffineMap map;
    double K = 1.0;
};

/// Corner-respecting linear map (x, y) -> (x w'/w, y h'/h) and its
/// dilatation max(r, 1/r), r = (w'/w)/(h'/h).
GrotzschAffine grotzsch_affine(const RectanglePair& pair);

struct GrotzschOptions {
    int grid_nodes = 33;           ///< per axis, on the source rectangle
    int modes = 3;                 ///< bump modes per axis
    double amplitude_cells = 0.2;  ///< coefficient bound in grid cells
};

struct GrotzschTrial {
    double sup_dilatation = 0.0;
    bool rejected = false;  ///< injectivity check failed
};

struct GrotzschReport {
    double K_affine = 1.0;
    double min_sup_dilatation = 0.0;
    int argmin_trial = -1;  ///< lowest index among ties
    int rejected = 0;
    std::uint64_t seed = 0;
    std::vector<GrotzschTrial> trials;
};

/// Evaluates sup_dilatation for `trials` bump perturbations of the affine
/// solution drawn from a seeded generator. Trials whose Jacobian
/// determinant is not positive on every grid node are rejected.
GrotzschReport grotzsch_experiment(const RectanglePair& pair, int trials, std::uint64_t seed,
                                   const GrotzschOptions& options = {});

/// Bumps with coefficients drawn uniformly from [-amplitude, amplitude].
SineBumps random_bumps(const Rect& frame, int modes, double amplitude, std::uint64_t& state);

/// SplitMix64 step; the generator behind every seeded report.
std::uint64_t splitmix64(std::uint64_t& state);
/// Uniform double in [0, 1) from a SplitMix64 state.
double uniform01(std::uint64_t& state);

}  // namespace tissot
