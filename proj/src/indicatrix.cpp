#include "tissot/indicatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tissot/errors.hpp"

namespace tissot {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double wrap_half_turn(double angle) {
    // Axis direction: identify angle with angle + π, result in (-π/2, π/2].
    double w = std::remainder(angle, std::numbers::pi);
    return w <= -kHalfPi ? w + std::numbers::pi : w;
}

void check_nondegenerate(const Mat2& m, const char* what) {
    double scale = std::abs(m.a00) + std::abs(m.a01) + std::abs(m.a10) + std::abs(m.a11);
    if (!(scale > 0.0) || std::abs(m.det()) <= 1e-14 * scale * scale)
        throw DegenerateError(std::string(what) + ": vanishing Jacobian determinant");
}

Jacobian2 numeric_jacobian(const ProjectionDef& def, GeoPoint p, double step) {
    constexpr double kMinStep = 1e-9;
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    for (double h = step; h >= kMinStep; h *= 0.5) {
        if (std::abs(p.lat) + h > kHalfPi) continue;
        try {
            PlanePoint ln = def.project({p.lat - h, p.lon});
            PlanePoint lp = def.project({p.lat + h, p.lon});
            PlanePoint mn = def.project({p.lat, p.lon - h});
            PlanePoint mp = def.project({p.lat, p.lon + h});
            double inv = 1.0 / (2.0 * h);
            return {(lp.x - ln.x) * inv, (mp.x - mn.x) * inv, (lp.y - ln.y) * inv, (mp.y - mn.y) * inv};
        } catch (const DomainError&) {
        }
    }
    throw DomainError("finite-difference stencil leaves the projection domain");
}

}  // namespace

Jacobian2 jacobian(const ProjectionDef& def, GeoPoint p, DifferentiationMode mode) {
    if (mode.kind == DifferentiationMode::Kind::analytic) return def.analytic_jacobian(p);
    return numeric_jacobian(def, p, mode.step);
}

Mat2 normalized_differential(const ProjectionDef& def, GeoPoint p, DifferentiationMode mode) {
    FirstFundamentalForm ff = fundamental_form(def.surface(), p);
    if (!(ff.G > 0.0)) throw DegenerateError("indicatrix undefined at a pole");
    Mat2 j = jacobian(def, p, mode).matrix();
    check_nondegenerate(j, "indicatrix");
    // F = 0 for surfaces of revolution, so the inverse metric square root is diagonal.
    double se = 1.0 / std::sqrt(ff.E), sg = 1.0 / std::sqrt(ff.G);
    return {j.a00 * se, j.a01 * sg, j.a10 * se, j.a11 * sg};
}

Indicatrix indicatrix_from_differential(const Mat2& s) {
    check_nondegenerate(s, "indicatrix");
    Svd2 d = svd(s);
    Indicatrix ind;
    ind.a = d.sigma_major;
    ind.b = d.sigma_minor;
    ind.area_scale = ind.a * ind.b;
    ind.omega = max_angle_deformation(ind.a, ind.b);
    ind.conformal = ind.a / ind.b - 1.0 < kConformalTolerance;
    if (ind.conformal) {
        ind.theta = 0.0;
        ind.dir_major_domain = {1.0, 0.0};
        ind.dir_minor_domain = {0.0, 1.0};
    } else {
        ind.theta = wrap_half_turn(d.u_angle);
        ind.dir_major_domain = d.v_major();
        ind.dir_minor_domain = d.v_minor();
    }
    return ind;
}

Indicatrix distortion_ellipse(const ProjectionDef& def, GeoPoint p, DifferentiationMode mode) {
    return indicatrix_from_differential(normalized_differential(def, p, mode));
}

PrincipalTangents principal_tangents_from_differential(const Mat2& s) {
    check_nondegenerate(s, "principal tangents");
    Svd2 d = svd(s);
    PrincipalTangents t;
    t.non_unique = d.sigma_major / d.sigma_minor - 1.0 < kConformalTolerance;
    if (t.non_unique) {
        t.domain_major = {1.0, 0.0};
        t.domain_minor = {0.0, 1.0};
    } else {
        t.domain_major = d.v_major();
        t.domain_minor = d.v_minor();
    }
    t.image_major = unit_vector(s * t.domain_major);
    t.image_minor = unit_vector(s * t.domain_minor);
    return t;
}

PrincipalTangents principal_tangents(const ProjectionDef& def, GeoPoint p, DifferentiationMode mode) {
    return principal_tangents_from_differential(normalized_differential(def, p, mode));
}

double max_angle_deformation(double a, double b) {
    if (!(b > 0.0) || !(a >= b)) throw std::invalid_argument("max_angle_deformation requires a >= b > 0");
    return 2.0 * std::asin((a - b) / (a + b));
}

ParallelogramRatios parallelogram_ratios(const ProjectionDef& def, const Surface& surface, GeoPoint p,
                                         DifferentiationMode mode) {
    EmbedPartials src = embed_partials(surface, p);
    Jacobian2 j = jacobian(def, p, mode);
    Vec2 img_l{j.dxdl, j.dydl};
    Vec2 img_m{j.dxdm, j.dydm};

    ParallelogramRatios out;
    out.L = norm(src.d_lat);
    out.M = norm(src.d_lon);
    out.L_img = norm(img_l);
    out.M_img = norm(img_m);
    if (!(out.L > 0.0 && out.M > 0.0)) throw DegenerateError("source parallelogram collapses at a pole");
    if (!(out.L_img > 0.0 && out.M_img > 0.0)) throw DegenerateError("image parallelogram collapses");
    out.h = out.L / out.L_img;
    out.k = out.M / out.M_img;
    double cos_src = dot(src.d_lat, src.d_lon) / (out.L * out.M);
    double cos_img = dot(img_l, img_m) / (out.L_img * out.M_img);
    out.theta_src = std::acos(std::clamp(cos_src, -1.0, 1.0));
    out.theta_img = std::acos(std::clamp(cos_img, -1.0, 1.0));
    if (out.theta_img <= 0.0 || out.theta_img >= std::numbers::pi)
        throw DegenerateError("image parallelogram is flat");
    return out;
}

AxisPair special_case_axes(double h, double theta_src, double theta_img) {
    if (!(h > 0.0)) throw std::invalid_argument("special_case_axes requires h > 0");
    auto inside = [](double t) { return t > 0.0 && t < std::numbers::pi; };
    if (!inside(theta_src) || !inside(theta_img))
        throw std::invalid_argument("net angles must lie strictly between 0 and π");
    double along_sum = h * std::cos(0.5 * theta_img) / std::cos(0.5 * theta_src);
    double along_diff = h * std::sin(0.5 * theta_img) / std::sin(0.5 * theta_src);
    if (along_sum >= along_diff) return {along_sum, along_diff};
    return {along_diff, along_sum};
}

}  // namespace tissot
