#pragma once

#include <cmath>

namespace tissot {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_vector(Vec2 a) {
    double n = norm(a);
    return {a.x / n, a.y / n};
}
/// Unsigned angle between two nonzero vectors, in [0, π].
inline double angle_between(Vec2 a, Vec2 b) { return std::atan2(std::abs(cross(a, b)), dot(a, b)); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Row-major 2x2 matrix [[a00, a01], [a10, a11]].
struct Mat2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diag(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }
    static Mat2 rotation(double angle) {
        double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }
    /// Matrix whose columns are c0 and c1.
    static constexpr Mat2 from_columns(Vec2 c0, Vec2 c1) { return {c0.x, c1.x, c0.y, c1.y}; }

    constexpr Vec2 col0() const { return {a00, a10}; }
    constexpr Vec2 col1() const { return {a01, a11}; }
    constexpr double det() const { return a00 * a11 - a01 * a10; }
    constexpr Mat2 transposed() const { return {a00, a10, a01, a11}; }

    friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.a00 * v.x + m.a01 * v.y, m.a10 * v.x + m.a11 * v.y};
    }
    friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a00 * n.a00 + m.a01 * n.a10, m.a00 * n.a01 + m.a01 * n.a11,
                m.a10 * n.a00 + m.a11 * n.a10, m.a10 * n.a01 + m.a11 * n.a11};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& m) {
        return {s * m.a00, s * m.a01, s * m.a10, s * m.a11};
    }
    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// M = U diag(sigma_major, sigma_minor) V^T with U = rot(u_angle) (possibly
/// with its second column negated) and V = rot(v_angle).
struct Svd2 {
    double sigma_major = 0.0;  ///< largest singular value
    double sigma_minor = 0.0;  ///< smallest singular value, >= 0
    double u_angle = 0.0;      ///< image-side angle of the major left singular vector
    double v_angle = 0.0;      ///< domain-side angle of the major right singular vector
    bool reflecting = false;   ///< det M < 0: the minor left vector is -(U col 1)

    Vec2 u_major() const { return {std::cos(u_angle), std::sin(u_angle)}; }
    Vec2 u_minor() const {
        double s = reflecting ? -1.0 : 1.0;
        return {-s * std::sin(u_angle), s * std::cos(u_angle)};
    }
    Vec2 v_major() const { return {std::cos(v_angle), std::sin(v_angle)}; }
    Vec2 v_minor() const { return {-std::sin(v_angle), std::cos(v_angle)}; }
};

/// Closed-form 2x2 SVD. Splits M into a similarity Q·rot(a2) plus a scaled
/// reflection R·refl(a1); then sigma = Q ± R and the singular frames are
/// rotations by (a1 ± a2)/2. Accurate near the conformal case, where R → 0.
inline Svd2 svd(const Mat2& m) {
    double e = 0.5 * (m.a00 + m.a11);
    double f = 0.5 * (m.a00 - m.a11);
    double g = 0.5 * (m.a10 + m.a01);
    double h = 0.5 * (m.a10 - m.a01);
    double q = std::hypot(e, h);
    double r = std::hypot(f, g);
    double a1 = std::atan2(g, f);
    double a2 = std::atan2(h, e);
    Svd2 out;
    out.sigma_major = q + r;
    out.sigma_minor = std::abs(q - r);
    out.reflecting = q < r;
    out.u_angle = 0.5 * (a1 + a2);
    out.v_angle = 0.5 * (a1 - a2);
    return out;
}

}  // namespace tissot
