#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tissot/errors.hpp"
#include "tissot/indicatrix.hpp"

using namespace tissot;
using std::numbers::pi;

namespace {

struct SweepExtremes {
    double max = 0.0;
    double min = 1e300;
};

// Brute-force extremes of |S u| over unit directions.
SweepExtremes sweep(const Mat2& s, int n = 10000) {
    SweepExtremes e;
    for (int i = 0; i < n; ++i) {
        double t = pi * i / n;
        double len = norm(s * Vec2{std::cos(t), std::sin(t)});
        e.max = std::max(e.max, len);
        e.min = std::min(e.min, len);
    }
    return e;
}

// Largest change of the angle between mirror-image direction pairs under
// diag(a, b).
double sweep_angle_deformation(double a, double b, int n = 10000) {
    Mat2 s = Mat2::diag(a, b);
    double best = 0.0;
    for (int i = 1; i < n; ++i) {
        double t = 0.5 * pi * i / n;
        Vec2 u1{std::cos(t), std::sin(t)}, u2{std::cos(t), -std::sin(t)};
        best = std::max(best, std::abs(angle_between(s * u1, s * u2) - angle_between(u1, u2)));
    }
    return best;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double max_abs_diff(const Jacobian2& a, const Jacobian2& b) {
    return std::max({std::abs(a.dxdl - b.dxdl), std::abs(a.dxdm - b.dxdm), std::abs(a.dydl - b.dydl),
                     std::abs(a.dydm - b.dydm)});
}

std::vector<ProjectionDef> catalog() {
    return {ProjectionDef(ProjectionKind::plate_carree), ProjectionDef(ProjectionKind::mercator),
            ProjectionDef(ProjectionKind::sinusoidal),   ProjectionDef(ProjectionKind::cassini),
            ProjectionDef(ProjectionKind::stereographic), ProjectionDef(ProjectionKind::tissot)};
}

std::vector<GeoPoint> interior_grid() {
    std::vector<GeoPoint> pts;
    for (double lat = -70.0; lat <= 70.0; lat += 10.0)
        for (double lon = -80.0; lon <= 80.0; lon += 20.0) pts.push_back(GeoPoint::from_degrees(lat, lon));
    return pts;
}

}  // namespace

TEST_CASE("jacobian") {
    Jacobian2 pc = jacobian(ProjectionDef(ProjectionKind::plate_carree), {0.4, -1.1});
    CHECK(pc.dxdl == 0.0);
    CHECK(pc.dxdm == 1.0);
    CHECK(pc.dydl == 1.0);
    CHECK(pc.dydm == 0.0);

    Jacobian2 merc = jacobian(ProjectionDef(ProjectionKind::mercator), {pi / 4.0, 0.0});
    CHECK(merc.dydl == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(merc.dxdm == 1.0);

    SUBCASE("numeric agrees with analytic on sinusoidal") {
        ProjectionDef sinu(ProjectionKind::sinusoidal);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                GeoPoint p{-1.2 + 0.6 * i, -2.4 + 1.2 * j};
                worst = std::max(worst, max_abs_diff(jacobian(sinu, p), jacobian(sinu, p, DifferentiationMode::numeric())));
            }
        CHECK(worst < 1e-9);
    }

    SUBCASE("every kind has analytic partials that match differences") {
        auto defs = catalog();
        defs.push_back(parse_custom_projection("x = m*cos(l)^2 + l^3; y = sin(l)*(1 + m*m)"));
        for (const auto& def : defs)
            for (GeoPoint p : {GeoPoint{0.3, 0.2}, GeoPoint{-0.7, -0.4}, GeoPoint{1.1, 0.6}}) {
                double d = max_abs_diff(jacobian(def, p), jacobian(def, p, DifferentiationMode::numeric()));
                INFO(to_string(def.kind()));
                CHECK(d < 1e-8);
            }
    }

    SUBCASE("central differences converge at order two") {
        for (const auto& def : catalog()) {
            GeoPoint p{0.5, 0.3};
            Jacobian2 exact = jacobian(def, p);
            double e1 = max_abs_diff(exact, jacobian(def, p, DifferentiationMode::numeric(2e-2)));
            double e2 = max_abs_diff(exact, jacobian(def, p, DifferentiationMode::numeric(1e-2)));
            if (e1 < 1e-12) continue;  // linear in both variables
            INFO(to_string(def.kind()));
            CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
        }
    }

    SUBCASE("stencil shrinks near the domain edge") {
        ProjectionDef merc(ProjectionKind::mercator);
        GeoPoint near{pi / 2.0 - 5e-7, 0.0};
        CHECK_NOTHROW(jacobian(merc, near, DifferentiationMode::numeric()));
        CHECK_THROWS_AS(jacobian(merc, {pi / 2.0 - 1e-10, 0.0}, DifferentiationMode::numeric()), DomainError);
    }
}

TEST_CASE("distortion_ellipse") {
    Indicatrix merc = distortion_ellipse(ProjectionDef(ProjectionKind::mercator), {pi / 3.0, 0.0});
    CHECK(merc.a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(merc.b == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(merc.omega < 1e-12);
    CHECK(merc.conformal);
    CHECK(merc.theta == 0.0);

    Indicatrix pc = distortion_ellipse(ProjectionDef(ProjectionKind::plate_carree), {pi / 3.0, 0.5});
    CHECK(pc.a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pc.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pc.area_scale == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_FALSE(pc.conformal);
    CHECK(std::abs(pc.theta) < 1e-14);                      // major axis along image x
    CHECK(std::abs(pc.dir_major_domain.y) == doctest::Approx(1.0));  // ground east
    CHECK(std::abs(pc.dir_minor_domain.x) == doctest::Approx(1.0));  // ground north
    CHECK(pc.omega == doctest::Approx(2.0 * std::asin(1.0 / 3.0)).epsilon(1e-14));

    SUBCASE("sinusoidal is equal-area") {
        ProjectionDef sinu(ProjectionKind::sinusoidal);
        for (GeoPoint p : interior_grid()) REQUIRE(std::abs(distortion_ellipse(sinu, p).area_scale - 1.0) < 1e-10);
    }

    SUBCASE("record invariants") {
        for (const auto& def : catalog())
            for (GeoPoint p : interior_grid()) {
                if (def.kind() == ProjectionKind::tissot && std::abs(p.lon) > pi / 2.0) continue;
                Indicatrix ind = distortion_ellipse(def, p);
                REQUIRE(ind.a >= ind.b);
                REQUIRE(ind.b > 0.0);
                REQUIRE(ind.area_scale == ind.a * ind.b);
                REQUIRE(ind.omega == 2.0 * std::asin((ind.a - ind.b) / (ind.a + ind.b)));
                REQUIRE(ind.theta > -pi / 2.0);
                REQUIRE(ind.theta <= pi / 2.0);
                REQUIRE(std::abs(norm(ind.dir_major_domain) - 1.0) < 1e-14);
                REQUIRE(std::abs(dot(ind.dir_major_domain, ind.dir_minor_domain)) < 1e-14);
            }
    }

    SUBCASE("singular values equal the direction-sweep extremes") {
        for (const auto& def : catalog())
            for (GeoPoint p : {GeoPoint{0.2, 0.1}, GeoPoint{-0.9, 0.7}, GeoPoint{1.2, -1.0}}) {
                Mat2 s = normalized_differential(def, p);
                Indicatrix ind = indicatrix_from_differential(s);
                SweepExtremes e = sweep(s);
                CHECK(std::abs(ind.a - e.max) <= 1e-6 * ind.a);
                CHECK(std::abs(ind.b - e.min) <= 1e-6 * ind.b);
            }
    }

    SUBCASE("major axis orientation and reconstruction") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int k = 0; k < 500; ++k) {
            Mat2 s{u(rng), u(rng), u(rng), u(rng)};
            if (std::abs(s.det()) < 1e-3) continue;
            Svd2 d = svd(s);
            Mat2 us = Mat2::from_columns(d.sigma_major * d.u_major(), d.sigma_minor * d.u_minor());
            Mat2 vt = Mat2::from_columns(d.v_major(), d.v_minor()).transposed();
            Mat2 r = us * vt;
            REQUIRE(std::abs(r.a00 - s.a00) < 1e-12);
            REQUIRE(std::abs(r.a01 - s.a01) < 1e-12);
            REQUIRE(std::abs(r.a10 - s.a10) < 1e-12);
            REQUIRE(std::abs(r.a11 - s.a11) < 1e-12);
            Indicatrix ind = indicatrix_from_differential(s);
            Vec2 img = s * ind.dir_major_domain;
            double axis = std::atan(img.y / img.x);
            REQUIRE(std::abs(std::remainder(axis - ind.theta, pi)) < 1e-9);
        }
    }

    SUBCASE("degenerate points") {
        CHECK_THROWS_AS(distortion_ellipse(ProjectionDef(ProjectionKind::plate_carree), {pi / 2.0, 0.0}),
                        DegenerateError);
        CHECK_THROWS_AS(indicatrix_from_differential(Mat2{1.0, 2.0, 2.0, 4.0}), DegenerateError);
        CHECK_THROWS_AS(distortion_ellipse(parse_custom_projection("x = m; y = l^3"), {0.0, 0.3}),
                        DegenerateError);
    }
}

TEST_CASE("principal tangents") {
    PrincipalTangents pc = principal_tangents(ProjectionDef(ProjectionKind::plate_carree), {pi / 4.0, 0.0});
    CHECK_FALSE(pc.non_unique);
    CHECK(std::abs(pc.domain_major.x) < 1e-15);
    CHECK(std::abs(pc.domain_minor.y) < 1e-15);
    CHECK(std::abs(dot(pc.image_major, pc.image_minor)) < 1e-15);

    for (GeoPoint p : interior_grid()) {
        REQUIRE(principal_tangents(ProjectionDef(ProjectionKind::mercator), p).non_unique);
        REQUIRE(principal_tangents(ProjectionDef(ProjectionKind::stereographic), p).non_unique);
    }

    SUBCASE("random custom projection keeps principal images orthogonal") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> c(0.2, 0.8), lat(-1.2, 1.2), lon(-1.0, 1.0);
        std::string text = "x = " + num(1 + c(rng)) + "*m*cos(l) + " + num(c(rng)) + "*l*m; y = sin(l) + " +
                           num(c(rng)) + "*m^2*l + " + num(c(rng)) + "*l^3";
        ProjectionDef def = parse_custom_projection(text);
        int checked = 0;
        for (int k = 0; k < 100; ++k) {
            GeoPoint p{lat(rng), lon(rng)};
            PrincipalTangents t;
            try {
                t = principal_tangents(def, p);
            } catch (const DegenerateError&) {
                continue;
            }
            ++checked;
            REQUIRE(std::abs(angle_between(t.image_major, t.image_minor) - pi / 2.0) < 1e-8);
            REQUIRE(std::abs(dot(t.domain_major, t.domain_minor)) < 1e-14);
        }
        CHECK(checked > 90);
    }
}

TEST_CASE("conformal characterization over the catalog") {
    for (const auto& def : catalog()) {
        double worst = 0.0;
        for (GeoPoint p : interior_grid()) {
            if (def.kind() == ProjectionKind::tissot && std::abs(p.lon) > pi / 2.0) continue;
            worst = std::max(worst, distortion_ellipse(def, p).omega);
        }
        INFO(to_string(def.kind()));
        CHECK((worst < 1e-9) == def.is_conformal());
    }
}

TEST_CASE("max_angle_deformation") {
    CHECK(max_angle_deformation(1.0, 1.0) == 0.0);
    CHECK(max_angle_deformation(3.0, 3.0) == 0.0);
    CHECK(max_angle_deformation(2.0, 1.0) == doctest::Approx(0.679673819).epsilon(1e-9));
    CHECK(std::abs(max_angle_deformation(2.0, 1.0) - sweep_angle_deformation(2.0, 1.0)) < 1e-4);
    CHECK(std::abs(max_angle_deformation(5.0, 0.5) - sweep_angle_deformation(5.0, 0.5)) < 1e-4);
    CHECK(max_angle_deformation(6.0, 3.0) == max_angle_deformation(2.0, 1.0));
    CHECK_THROWS_AS(max_angle_deformation(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(max_angle_deformation(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(max_angle_deformation(-1.0, -2.0), std::invalid_argument);
}

TEST_CASE("parallelogram_ratios") {
    Surface unit;
    ProjectionDef pc(ProjectionKind::plate_carree);
    ParallelogramRatios eq = parallelogram_ratios(pc, unit, {0.0, 0.2});
    CHECK(eq.h == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eq.k == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eq.theta_src == doctest::Approx(pi / 2.0).epsilon(1e-15));
    CHECK(eq.theta_img == doctest::Approx(pi / 2.0).epsilon(1e-15));

    ParallelogramRatios mid = parallelogram_ratios(pc, unit, {pi / 3.0, 0.0});
    CHECK(mid.k == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mid.h == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mid.M == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mid.M_img == 1.0);
    CHECK(mid.k_scale() == doctest::Approx(2.0).epsilon(1e-15));

    SUBCASE("conformal projections scale both sides alike") {
        for (auto kind : {ProjectionKind::mercator, ProjectionKind::stereographic})
            for (GeoPoint p : interior_grid()) {
                ParallelogramRatios r = parallelogram_ratios(ProjectionDef(kind), unit, p);
                REQUIRE(r.h == doctest::Approx(r.k).epsilon(1e-12));
                REQUIRE(r.theta_img == doctest::Approx(pi / 2.0).epsilon(1e-12));
            }
    }

    SUBCASE("ratios agree with the indicatrix along the net") {
        ProjectionDef sinu(ProjectionKind::sinusoidal);
        GeoPoint p{0.6, 0.9};
        ParallelogramRatios r = parallelogram_ratios(sinu, unit, p);
        Mat2 s = normalized_differential(sinu, p);
        CHECK(r.h_scale() == doctest::Approx(norm(s.col0())).epsilon(1e-14));
        CHECK(r.k_scale() == doctest::Approx(norm(s.col1())).epsilon(1e-14));
        CHECK(std::cos(r.theta_img) == doctest::Approx(dot(unit_vector(s.col0()), unit_vector(s.col1()))));
    }

    CHECK_THROWS_AS(parallelogram_ratios(pc, unit, {pi / 2.0, 0.0}), DegenerateError);
}

TEST_CASE("special_case_axes") {
    AxisPair a = special_case_axes(1.0, pi / 2.0, pi / 2.0);
    CHECK(a.a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.b == doctest::Approx(1.0).epsilon(1e-15));
    AxisPair b = special_case_axes(2.0, pi / 2.0, pi / 2.0);
    CHECK(b.a == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(b.b == doctest::Approx(2.0).epsilon(1e-15));
    AxisPair c = special_case_axes(1.0, pi / 2.0, pi / 3.0);
    CHECK(c.a == doctest::Approx(std::cos(pi / 6.0) / std::cos(pi / 4.0)).epsilon(1e-15));
    CHECK(c.a == doctest::Approx(1.22474487).epsilon(1e-8));
    CHECK(c.b == doctest::Approx(0.70710678).epsilon(1e-8));

    SUBCASE("agrees with the indicatrix of a linear net projection") {
        for (double h : {0.5, 1.0, 2.5})
            for (double t : {0.4, pi / 3.0, 1.3, 2.2, 2.9}) {
                std::string text = "x = " + num(h) + "*(l*" + num(std::cos(t)) + " + m); y = " + num(h) + "*l*" +
                                   num(std::sin(t));
                Indicatrix ind = distortion_ellipse(parse_custom_projection(text), {0.0, 0.0});
                AxisPair ax = special_case_axes(h, pi / 2.0, t);
                CHECK(std::abs(ax.a - ind.a) < 1e-10);
                CHECK(std::abs(ax.b - ind.b) < 1e-10);
            }
    }

    SUBCASE("oblique source nets") {
        for (double src : {0.5, 1.0, 2.0})
            for (double img : {0.7, 1.5, 2.6}) {
                double h = 1.7;
                Mat2 from = Mat2::from_columns({1.0, 0.0}, {std::cos(src), std::sin(src)});
                Mat2 to = Mat2::from_columns({h, 0.0}, {h * std::cos(img), h * std::sin(img)});
                Mat2 inv{from.a11 / from.det(), -from.a01 / from.det(), -from.a10 / from.det(), from.a00 / from.det()};
                Indicatrix ind = indicatrix_from_differential(to * inv);
                AxisPair ax = special_case_axes(h, src, img);
                CHECK(std::abs(ax.a - ind.a) < 1e-10);
                CHECK(std::abs(ax.b - ind.b) < 1e-10);
            }
    }

    CHECK_THROWS_AS(special_case_axes(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(special_case_axes(1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(special_case_axes(1.0, 1.0, pi), std::invalid_argument);
}
