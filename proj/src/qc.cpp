#include "tissot/qc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tissot/errors.hpp"

namespace tissot {

namespace {

double wrap_half_turn(double angle) {
    double w = std::remainder(angle, std::numbers::pi);
    return w <= -std::numbers::pi / 2.0 ? w + std::numbers::pi : w;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

Vec2 SineBumps::displacement(Vec2 p) const {
    const double w = frame.width(), h = frame.height();
    Vec2 d;
    for (int j = 1; j <= modes; ++j) {
        double sy = std::sin(j * std::numbers::pi * (p.y - frame.y0) / h);
        for (int i = 1; i <= modes; ++i) {
            double sx = std::sin(i * std::numbers::pi * (p.x - frame.x0) / w);
            std::size_t k = static_cast<std::size_t>((j - 1) * modes + (i - 1));
            d.x += cu[k] * sx * sy;
            d.y += cv[k] * sx * sy;
        }
    }
    return d;
}

Mat2 SineBumps::gradient(Vec2 p) const {
    const double w = frame.width(), h = frame.height();
    Mat2 g{0.0, 0.0, 0.0, 0.0};
    for (int j = 1; j <= modes; ++j) {
        double ky = j * std::numbers::pi / h;
        double sy = std::sin(ky * (p.y - frame.y0)), cy = std::cos(ky * (p.y - frame.y0));
        for (int i = 1; i <= modes; ++i) {
            double kx = i * std::numbers::pi / w;
            double sx = std::sin(kx * (p.x - frame.x0)), cx = std::cos(kx * (p.x - frame.x0));
            std::size_t k = static_cast<std::size_t>((j - 1) * modes + (i - 1));
            g.a00 += cu[k] * kx * cx * sy;
            g.a01 += cu[k] * ky * sx * cy;
            g.a10 += cv[k] * kx * cx * sy;
            g.a11 += cv[k] * ky * sx * cy;
        }
    }
    return g;
}

PlanarMap PlanarMap::from_expressions(Expression u, Expression v, Rect domain) {
    if (u.empty() || v.empty()) throw std::invalid_argument("planar map needs both expressions");
    PlanarMap m;
    m.kind_ = Kind::expressions;
    m.domain_ = domain;
    m.u_ = std::move(u);
    m.v_ = std::move(v);
    return m;
}

PlanarMap PlanarMap::affine(AffineMap map, Rect domain) {
    PlanarMap m;
    m.kind_ = Kind::affine;
    m.domain_ = domain;
    m.affine_ = map;
    return m;
}

PlanarMap PlanarMap::perturbed_affine(AffineMap map, SineBumps bumps) {
    PlanarMap m;
    m.kind_ = Kind::perturbed_affine;
    m.domain_ = bumps.frame;
    m.affine_ = map;
    m.bumps_ = std::move(bumps);
    return m;
}

Vec2 PlanarMap::operator()(Vec2 z) const {
    switch (kind_) {
        case Kind::expressions: {
            std::array<double, 2> vars{z.x, z.y};
            return {u_.evaluate(vars), v_.evaluate(vars)};
        }
        case Kind::affine: return affine_(z);
        case Kind::perturbed_affine: return affine_(z + bumps_.displacement(z));
    }
    return {};
}

Mat2 PlanarMap::jacobian(Vec2 z) const {
    switch (kind_) {
        case Kind::expressions: {
            std::array<double, 2> vars{z.x, z.y};
            Dual2 u = u_.evaluate_dual(vars);
            Dual2 v = v_.evaluate_dual(vars);
            return {u.d[0], u.d[1], v.d[0], v.d[1]};
        }
        case Kind::affine: return affine_.matrix;
        case Kind::perturbed_affine: {
            Mat2 g = bumps_.gradient(z);
            return affine_.matrix * Mat2{1.0 + g.a00, g.a01, g.a10, 1.0 + g.a11};
        }
    }
    return {};
}

Characteristics characteristics_of(const Mat2& j) {
    double scale = std::abs(j.a00) + std::abs(j.a01) + std::abs(j.a10) + std::abs(j.a11);
    double det = j.det();
    if (!(scale > 0.0) || std::abs(det) <= 1e-14 * scale * scale)
        throw DegenerateError("characteristics: singular Jacobian");
    if (det < 0.0) throw DegenerateError("characteristics: orientation-reversing map");
    Svd2 d = svd(j);
    Characteristics c;
    c.p = d.sigma_major / d.sigma_minor;
    c.non_unique = c.p - 1.0 < 1e-9;
    if (!c.non_unique) {
        c.stretch_theta = wrap_half_turn(d.v_angle);
        c.theta = wrap_half_turn(d.v_angle + std::numbers::pi / 2.0);
    }
    return c;
}

Characteristics characteristics(const PlanarMap& map, Vec2 z) { return characteristics_of(map.jacobian(z)); }

double sup_dilatation(const PlanarMap& map, const GridSpec& grid) {
    grid.validate();
    double best = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            Vec2 z{grid.x(i), grid.y(j)};
            if (!map.domain().contains(z)) throw DomainError("sup_dilatation: grid node outside the map domain");
            best = std::max(best, characteristics(map, z).p);
        }
    }
    return best;
}

void RectanglePair::validate() const {
    for (double v : {src_width, src_height, dst_width, dst_height})
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("rectangle sides must be positive");
}

GrotzschAffine grotzsch_affine(const RectanglePair& pair) {
    pair.validate();
    double sx = pair.dst_width / pair.src_width;
    double sy = pair.dst_height / pair.src_height;
    double r = sx / sy;
    return {{Mat2::diag(sx, sy), {0.0, 0.0}}, std::max(r, 1.0 / r)};
}

SineBumps random_bumps(const Rect& frame, int modes, double amplitude, std::uint64_t& state) {
    SineBumps b{frame, modes, {}, {}};
    std::size_t n = static_cast<std::size_t>(modes) * static_cast<std::size_t>(modes);
    b.cu.resize(n);
    b.cv.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        b.cu[k] = amplitude * (2.0 * uniform01(state) - 1.0);
        b.cv[k] = amplitude * (2.0 * uniform01(state) - 1.0);
    }
    return b;
}

GrotzschReport grotzsch_experiment(const RectanglePair& pair, int trials, std::uint64_t seed,
                                   const GrotzschOptions& options) {
    if (trials < 1) throw std::invalid_argument("grotzsch_experiment needs at least one trial");
    if (options.grid_nodes < 2 || options.modes < 0 || !(options.amplitude_cells >= 0.0))
        throw std::invalid_argument("invalid grotzsch options");
    GrotzschAffine aff = grotzsch_affine(pair);
    Rect frame{0.0, pair.src_width, 0.0, pair.src_height};
    GridSpec grid{frame.x0, frame.x1, options.grid_nodes, frame.y0, frame.y1, options.grid_nodes};
    double cell = std::min(grid.dx(), grid.dy());
    double amplitude = options.amplitude_cells * cell;

    GrotzschReport rep;
    rep.K_affine = aff.K;
    rep.seed = seed;
    std::uint64_t state = seed;
    for (int t = 0; t < trials; ++t) {
        PlanarMap map = PlanarMap::perturbed_affine(aff.map, random_bumps(frame, options.modes, amplitude, state));
        GrotzschTrial trial;
        try {
            trial.sup_dilatation = sup_dilatation(map, grid);
        } catch (const DegenerateError&) {
            trial.rejected = true;
            ++rep.rejected;
        }
        if (!trial.rejected && (rep.argmin_trial < 0 || trial.sup_dilatation < rep.min_sup_dilatation)) {
            rep.min_sup_dilatation = trial.sup_dilatation;
            rep.argmin_trial = t;
        }
        rep.trials.push_back(trial);
    }
    return rep;
}

}  // namespace tissot
