#include "tissot/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tissot/errors.hpp"
#include "tissot/indicatrix.hpp"

namespace tissot {

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
    int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

double segment_distance(Vec2 a, Vec2 b, Vec2 p) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * ab));
}

}  // namespace

// ---------------------------------------------------------------------------
// Polygon

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
    if (vertices_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    lo_ = hi_ = vertices_.front();
    for (Vec2 v : vertices_) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw std::invalid_argument("polygon vertex not finite");
        lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y)};
        hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y)};
    }
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = vertices_[i], b = vertices_[(i + 1) % n];
        if (a == b) throw std::invalid_argument("polygon has repeated consecutive vertices");
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
            if (segments_intersect(a, b, vertices_[j], vertices_[(j + 1) % n]))
                throw std::invalid_argument("polygon is self-intersecting");
        }
    }
}

bool Polygon::contains(Vec2 p) const {
    if (p.x < lo_.x || p.y < lo_.y || p.x > hi_.x || p.y > hi_.y) {
        double tol = 1e-12 * std::max(1.0, norm(hi_ - lo_));
        if (p.x < lo_.x - tol || p.y < lo_.y - tol || p.x > hi_.x + tol || p.y > hi_.y + tol) return false;
    }
    const double tol = 1e-12 * std::max(1.0, norm(hi_ - lo_));
    const std::size_t n = vertices_.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Vec2 a = vertices_[i], b = vertices_[j];
        if (segment_distance(a, b, p) <= tol) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

std::optional<double> Polygon::first_crossing(Vec2 a, Vec2 b) const {
    const Vec2 r = b - a;
    const std::size_t n = vertices_.size();
    std::optional<double> best;
    constexpr double eps = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 q0 = vertices_[i], q1 = vertices_[(i + 1) % n];
        if (std::max(q0.x, q1.x) < std::min(a.x, b.x) || std::min(q0.x, q1.x) > std::max(a.x, b.x) ||
            std::max(q0.y, q1.y) < std::min(a.y, b.y) || std::min(q0.y, q1.y) > std::max(a.y, b.y))
            continue;
        Vec2 s = q1 - q0;
        double denom = cross(r, s);
        if (denom == 0.0) continue;
        Vec2 d = q0 - a;
        double t = cross(d, s) / denom;
        double u = cross(d, r) / denom;
        if (t >= -eps && t <= 1.0 + eps && u >= -eps && u <= 1.0 + eps) {
            t = std::clamp(t, 0.0, 1.0);
            if (!best || t < *best) best = t;
        }
    }
    return best;
}

RegionSpec RegionSpec::from_geo(const std::vector<GeoPoint>& vertices, GeoPoint center) {
    std::vector<Vec2> pts;
    pts.reserve(vertices.size());
    for (GeoPoint v : vertices) pts.push_back({v.lon, v.lat});
    return {Polygon(std::move(pts)), normalized(center)};
}

GeoPoint RegionSpec::vertex_centroid(const std::vector<GeoPoint>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("region has no vertices");
    double lat = 0.0, lon = 0.0;
    for (GeoPoint v : vertices) {
        lat += v.lat;
        lon += v.lon;
    }
    double n = static_cast<double>(vertices.size());
    return {lat / n, lon / n};
}

GridSpec bounding_grid(const Polygon& polygon, int nx, int ny) {
    GridSpec g{polygon.min_corner().x, polygon.max_corner().x, nx, polygon.min_corner().y, polygon.max_corner().y,
               ny};
    g.validate();
    return g;
}

Vec2 local_plane(const Surface& surface, GeoPoint center, GeoPoint p) {
    double east = parallel_radius(surface, center.lat) * normalize_lon(p.lon - center.lon);
    double north = surface.meridian_radius(center.lat) * (p.lat - center.lat);
    return {east, north};
}

GeoPoint local_plane_inverse(const Surface& surface, GeoPoint center, Vec2 q) {
    double r = parallel_radius(surface, center.lat);
    if (!(r > 0.0)) throw DegenerateError("local plane undefined about a pole");
    return {center.lat + q.y / surface.meridian_radius(center.lat), normalize_lon(center.lon + q.x / r)};
}

// ---------------------------------------------------------------------------
// λ fields

LambdaField lambda_field(const ProjectionDef& def, const RegionSpec& region, const GridSpec& grid) {
    grid.validate();
    LambdaField out{ScalarField(grid), ScalarField(grid), ScalarField(grid), 0};
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            GeoPoint p{grid.y(j), grid.x(i)};
            if (!region.contains(p)) continue;
            try {
                Indicatrix ind = distortion_ellipse(def, p);
                out.lambda.set(i, j, std::sqrt(ind.area_scale) - 1.0);
                out.a_minus_1.set(i, j, ind.a - 1.0);
                out.b_minus_1.set(i, j, ind.b - 1.0);
            } catch (const DomainError&) {
                ++out.masked_degenerate;
            } catch (const DegenerateError&) {
                ++out.masked_degenerate;
            }
        }
    }
    return out;
}

ScalarField lambda_plane_field(const ProjectionDef& def, const RegionSpec& region, int nx, int ny) {
    const Surface& surface = def.surface();
    std::vector<Vec2> pts;
    for (Vec2 v : region.boundary.vertices()) pts.push_back(local_plane(surface, region.center, {v.y, v.x}));
    Polygon footprint(std::move(pts));
    GridSpec grid = bounding_grid(footprint, nx, ny);
    ScalarField field(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            Vec2 q{grid.x(i), grid.y(j)};
            if (!footprint.contains(q)) continue;
            try {
                Indicatrix ind = distortion_ellipse(def, local_plane_inverse(surface, region.center, q));
                field.set(i, j, std::sqrt(ind.area_scale) - 1.0);
            } catch (const DomainError&) {
            } catch (const DegenerateError&) {
            }
        }
    }
    return field;
}

// ---------------------------------------------------------------------------
// Darboux conic

DarbouxConic DarbouxConic::with_radii(double R, double R_prime, double A, double B) {
    if (!(R > 0.0) || !(R_prime > 0.0)) throw std::invalid_argument("curvature radii must be positive");
    return {A, B, 1.0 / (4.0 * R * R_prime), R, R_prime};
}

double DarbouxConic::operator()(double alpha, double beta) const {
    return base * (alpha * alpha + beta * beta) + A * (alpha * alpha - beta * beta) + 2.0 * B * alpha * beta;
}

PrincipalRadii principal_radii(const Surface& surface, double lat) {
    return {surface.meridian_radius(lat), surface.prime_vertical_radius(lat)};
}

DarbouxConic fit_darboux_conic(const ScalarField& lambda, double R, double R_prime) {
    DarbouxConic conic = DarbouxConic::with_radii(R, R_prime);
    const GridSpec& g = lambda.grid();
    const double hx = g.dx(), hy = g.dy();
    auto base = [&](double a, double b) { return conic.base * (a * a + b * b); };
    auto q1 = [](double a, double b) { return a * a - b * b; };
    auto q2 = [](double a, double b) { return 2.0 * a * b; };
    auto grad = [&](auto&& f, int i, int j) -> Vec2 {
        return {(f(i + 1, j) - f(i - 1, j)) / (2.0 * hx), (f(i, j + 1) - f(i, j - 1)) / (2.0 * hy)};
    };
    auto sampled = [&](auto&& model) { return [&, model](int i, int j) { return model(g.x(i), g.y(j)); }; };
    auto lam = [&](int i, int j) { return lambda.value(i, j); };

    double n11 = 0.0, n12 = 0.0, n22 = 0.0, r1 = 0.0, r2 = 0.0;
    std::size_t used = 0;
    for (int j = 1; j + 1 < g.ny; ++j) {
        for (int i = 1; i + 1 < g.nx; ++i) {
            if (!lambda.has(i, j) || !lambda.has(i - 1, j) || !lambda.has(i + 1, j) || !lambda.has(i, j - 1) ||
                !lambda.has(i, j + 1))
                continue;
            Vec2 target = grad(lam, i, j) - grad(sampled(base), i, j);
            Vec2 g1 = grad(sampled(q1), i, j);
            Vec2 g2 = grad(sampled(q2), i, j);
            n11 += dot(g1, g1);
            n12 += dot(g1, g2);
            n22 += dot(g2, g2);
            r1 += dot(g1, target);
            r2 += dot(g2, target);
            ++used;
        }
    }
    double det = n11 * n22 - n12 * n12;
    if (used == 0 || !(std::abs(det) > 1e-14 * n11 * n22) || !(n11 > 0.0))
        throw DegenerateError("darboux fit: normal equations are rank deficient");
    conic.A = (r1 * n22 - r2 * n12) / det;
    conic.B = (n11 * r2 - n12 * r1) / det;
    return conic;
}

std::string_view to_string(ConicClass c) {
    switch (c) {
        case ConicClass::ellipse: return "ellipse";
        case ConicClass::hyperbola: return "hyperbola";
        case ConicClass::parallel_lines: return "parallel_lines";
        case ConicClass::point: return "point";
        case ConicClass::empty: return "empty";
    }
    return "unknown";
}

EllipseBoundaryReport ellipse_boundary_check(const DarbouxConic& conic, double level, std::size_t boundary_samples,
                                             std::size_t radial_samples) {
    if (boundary_samples < 4 || radial_samples < 2)
        throw std::invalid_argument("ellipse_boundary_check needs more samples");
    EllipseBoundaryReport rep;
    rep.level = level;
    const double rho = std::hypot(conic.A, conic.B);
    const double mu_hi = conic.base + rho;  // eigenvector angle φ
    const double mu_lo = conic.base - rho;  // eigenvector angle φ + π/2
    const double phi = 0.5 * std::atan2(2.0 * conic.B, 2.0 * conic.A);
    const double scale = std::abs(conic.base) + rho;
    const double zero_tol = 1e-14 * scale;

    if (std::abs(mu_lo) <= zero_tol || std::abs(mu_hi) <= zero_tol) {
        rep.classification = ConicClass::parallel_lines;
        return rep;
    }
    if (mu_lo * mu_hi < 0.0) {
        rep.classification = ConicClass::hyperbola;
        return rep;
    }
    if (level == 0.0) {
        rep.classification = ConicClass::point;
        return rep;
    }
    if ((level > 0.0) != (mu_lo > 0.0)) {
        rep.classification = ConicClass::empty;
        return rep;
    }
    rep.classification = ConicClass::ellipse;
    // The semi-major axis belongs to the eigenvalue of least magnitude.
    bool lo_is_major = std::abs(mu_lo) <= std::abs(mu_hi);
    double mu_major = lo_is_major ? mu_lo : mu_hi;
    double mu_minor = lo_is_major ? mu_hi : mu_lo;
    rep.orientation = lo_is_major ? phi + std::numbers::pi / 2.0 : phi;
    if (rep.orientation > std::numbers::pi / 2.0) rep.orientation -= std::numbers::pi;
    rep.semi_major = std::sqrt(level / mu_major);
    rep.semi_minor = std::sqrt(level / mu_minor);

    const Mat2 rot = Mat2::rotation(rep.orientation);
    auto boundary_point = [&](double t) {
        return rot * Vec2{rep.semi_major * std::cos(t), rep.semi_minor * std::sin(t)};
    };
    rep.boundary_min = std::numeric_limits<double>::infinity();
    rep.boundary_max = -std::numeric_limits<double>::infinity();
    rep.interior_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < boundary_samples; ++k) {
        double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(boundary_samples);
        Vec2 p = boundary_point(t);
        double v = conic(p);
        rep.boundary_min = std::min(rep.boundary_min, v);
        rep.boundary_max = std::max(rep.boundary_max, v);
        for (std::size_t s = 0; s < radial_samples; ++s) {
            double f = static_cast<double>(s) / static_cast<double>(radial_samples);
            rep.interior_max = std::max(rep.interior_max, conic(f * p));
            ++rep.interior_samples;
        }
    }
    rep.boundary_samples = boundary_samples;
    rep.boundary_spread = rep.boundary_max - rep.boundary_min;
    rep.constant_on_boundary = rep.boundary_spread < 1e-12;
    rep.max_on_boundary = rep.interior_max <= rep.boundary_min;
    return rep;
}

// ---------------------------------------------------------------------------
// Chebyshev solver

namespace {

struct Row {
    std::size_t node = 0;                           // grid index
    std::array<std::ptrdiff_t, 4> nb{-1, -1, -1, -1};  // unknown indices, -1 for boundary arms
    std::array<double, 4> coef{};
    double boundary_sum = 0.0;  // Σ coef·c over boundary arms
    double diag = 0.0;
    double rhs = 0.0;
    double weight = 1.0;  // residual scale: regular diagonal / diag
    bool interpolation = false;  // ring row of the interpolated treatment, relaxed with factor 1
};

}  // namespace

ChebyshevSolution chebyshev_solve(const SolverDomain& domain, const ScalarField& curvature, double boundary_value,
                                  const ChebyshevOptions& options) {
    const GridSpec& g = domain.grid;
    g.validate();
    const double hx = g.dx(), hy = g.dy();
    const double regular_diag = 2.0 / (hx * hx) + 2.0 / (hy * hy);
    const double c = boundary_value;

    std::vector<unsigned char> inside(g.size(), 0);
    std::size_t in_count = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (domain.region.contains({g.x(i), g.y(j)})) {
                inside[g.index(i, j)] = 1;
                ++in_count;
            }
    if (in_count == 0) throw DomainError("chebyshev: region contains no grid nodes");

    auto in = [&](int i, int j) { return i >= 0 && j >= 0 && i < g.nx && j < g.ny && inside[g.index(i, j)]; };

    // Arm length (fraction of the grid step) from node towards a neighbour.
    constexpr std::array<int, 4> di{1, -1, 0, 0};
    constexpr std::array<int, 4> dj{0, 0, 1, -1};
    std::vector<std::ptrdiff_t> unknown_of(g.size(), -1);
    std::vector<std::array<double, 4>> arms;
    std::vector<std::size_t> nodes;
    ChebyshevSolution sol{ScalarField(g), ScalarField(g), 0.0, 0, 0, 0};

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!in(i, j)) continue;
            std::array<double, 4> frac{1.0, 1.0, 1.0, 1.0};
            bool ring = false, dirichlet = false;
            for (int d = 0; d < 4; ++d) {
                if (in(i + di[d], j + dj[d])) continue;
                ring = true;
                Vec2 a{g.x(i), g.y(j)};
                Vec2 b{a.x + di[d] * hx, a.y + dj[d] * hy};
                double t = domain.region.first_crossing(a, b).value_or(1.0);
                if (t < 1e-10) dirichlet = true;
                frac[d] = t;
            }
            if (ring) ++sol.boundary_ring;
            if (options.boundary == BoundaryTreatment::interpolated && ring) {
                // Interpolating between two crossings at c gives c.
                int d = static_cast<int>(std::min_element(frac.begin(), frac.end()) - frac.begin());
                if (frac[d] < 1.0 && !in(i - di[d], j - dj[d])) dirichlet = true;
            }
            if (dirichlet) {
                sol.u.set(i, j, c);
                continue;
            }
            unknown_of[g.index(i, j)] = static_cast<std::ptrdiff_t>(nodes.size());
            nodes.push_back(g.index(i, j));
            arms.push_back(frac);
        }
    }

    std::vector<Row> rows(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        Row& row = rows[k];
        row.node = nodes[k];
        int i = static_cast<int>(nodes[k] % static_cast<std::size_t>(g.nx));
        int j = static_cast<int>(nodes[k] / static_cast<std::size_t>(g.nx));
        const auto& f = arms[k];
        bool on_ring = f[0] < 1.0 || f[1] < 1.0 || f[2] < 1.0 || f[3] < 1.0;
        if (options.boundary == BoundaryTreatment::interpolated && on_ring) {
            // u = (t·u_opposite + c) / (1 + t) along the nearest crossing.
            int d = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
            int o = d ^ 1;
            double t = f[d];
            row.diag = 1.0;
            row.boundary_sum = c / (1.0 + t);
            row.coef[o] = t / (1.0 + t);
            row.nb[o] = unknown_of[g.index(i + di[o], j + dj[o])];
            if (row.nb[o] < 0) row.boundary_sum += row.coef[o] * c;  // neighbour pinned at c
            row.weight = regular_diag;
            row.interpolation = true;
            continue;
        }
        if (!curvature.has(i, j)) throw std::invalid_argument("chebyshev: curvature missing at a region node");
        double he = f[0] * hx, hw = f[1] * hx, hn = f[2] * hy, hs = f[3] * hy;
        std::array<double, 4> coef{2.0 / (he * (he + hw)), 2.0 / (hw * (he + hw)), 2.0 / (hn * (hn + hs)),
                                   2.0 / (hs * (hn + hs))};
        for (int d = 0; d < 4; ++d) {
            row.coef[d] = coef[d];
            row.diag += coef[d];
            std::ptrdiff_t idx = -1;
            if (f[d] == 1.0 && in(i + di[d], j + dj[d])) {
                idx = unknown_of[g.index(i + di[d], j + dj[d])];
                if (idx < 0) row.boundary_sum += coef[d] * c;  // neighbour pinned at c
            } else {
                row.boundary_sum += coef[d] * c;
            }
            row.nb[d] = idx;
        }
        row.rhs = curvature.value(i, j);
        row.weight = regular_diag / row.diag;
    }

    std::vector<double> u(nodes.size(), c);
    auto residual = [&]() {
        double worst = 0.0;
        for (const Row& row : rows) {
            double s = row.boundary_sum;
            for (int d = 0; d < 4; ++d)
                if (row.nb[d] >= 0) s += row.coef[d] * u[static_cast<std::size_t>(row.nb[d])];
            double r = (s - row.diag * u[&row - rows.data()] - row.rhs) * row.weight;
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    };

    double omega = options.relaxation;
    if (omega == 0.0) {
        int span = std::max(g.nx, g.ny) - 1;
        omega = 2.0 / (1.0 + std::sin(std::numbers::pi / span));
    }
    sol.unknowns = nodes.size();
    double res = rows.empty() ? 0.0 : residual();
    int it = 0;
    constexpr int kCheckEvery = 10;
    while (!(res < options.tolerance)) {
        if (it >= options.max_iterations || !std::isfinite(res))
            throw ConvergenceError("chebyshev: no convergence, residual " + std::to_string(res), res, it);
        for (int sweep = 0; sweep < kCheckEvery; ++sweep, ++it) {
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const Row& row = rows[k];
                double s = row.boundary_sum;
                for (int d = 0; d < 4; ++d)
                    if (row.nb[d] >= 0) s += row.coef[d] * u[static_cast<std::size_t>(row.nb[d])];
                double gs = (s - row.rhs) / row.diag;
                u[k] += (row.interpolation ? 1.0 : omega) * (gs - u[k]);
            }
        }
        res = residual();
    }
    sol.residual = res;
    sol.iterations = it;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        int i = static_cast<int>(nodes[k] % static_cast<std::size_t>(g.nx));
        int j = static_cast<int>(nodes[k] / static_cast<std::size_t>(g.nx));
        sol.u.set(i, j, u[k]);
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (sol.u.has(i, j)) sol.magnification.set(i, j, std::exp(sol.u.value(i, j) - c));
    return sol;
}

ChebyshevSolution chebyshev_solve(const SolverDomain& domain, double curvature, double boundary_value,
                                  const ChebyshevOptions& options) {
    ScalarField k(domain.grid);
    for (int j = 0; j < domain.grid.ny; ++j)
        for (int i = 0; i < domain.grid.nx; ++i) k.set(i, j, curvature);
    return chebyshev_solve(domain, k, boundary_value, options);
}

// ---------------------------------------------------------------------------
// Report

DistortionReport distortion_report(const ProjectionDef& def, const RegionSpec& region, const GridSpec& grid) {
    grid.validate();
    DistortionReport rep;
    rep.inf_b = std::numeric_limits<double>::infinity();
    rep.min_area_scale = std::numeric_limits<double>::infinity();
    double sum_abs = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            GeoPoint p{grid.y(j), grid.x(i)};
            if (!region.contains(p)) continue;
            Indicatrix ind;
            try {
                ind = distortion_ellipse(def, p);
            } catch (const DomainError&) {
                ++rep.degenerate;
                continue;
            } catch (const DegenerateError&) {
                ++rep.degenerate;
                continue;
            }
            double lam = std::abs(std::sqrt(ind.area_scale) - 1.0);
            ++rep.nodes;
            sum_abs += lam;
            rep.sup_abs_lambda = std::max(rep.sup_abs_lambda, lam);
            rep.sup_omega = std::max(rep.sup_omega, ind.omega);
            rep.sup_a = std::max(rep.sup_a, ind.a);
            rep.inf_b = std::min(rep.inf_b, ind.b);
            rep.min_area_scale = std::min(rep.min_area_scale, ind.area_scale);
            rep.max_area_scale = std::max(rep.max_area_scale, ind.area_scale);
        }
    }
    if (rep.nodes == 0) throw DomainError("distortion report: no analysable grid node inside the region");
    rep.mean_abs_lambda = sum_abs / static_cast<double>(rep.nodes);
    return rep;
}

}  // namespace tissot
