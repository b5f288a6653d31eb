#include "tissot/cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "tissot/config.hpp"
#include "tissot/distortion.hpp"
#include "tissot/errors.hpp"
#include "tissot/format.hpp"
#include "tissot/indicatrix.hpp"
#include "tissot/qc.hpp"
#include "tissot/render.hpp"

namespace tissot {

namespace {

constexpr int kPlaces = 12;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<double> split_numbers(const std::string& s, char sep, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t end = s.find(sep, pos);
        if (end == std::string::npos) end = s.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + end, v);
        if (ec != std::errc() || ptr != s.data() + end || end == pos)
            throw UsageError(std::string("malformed ") + what + " '" + s + "'");
        out.push_back(v);
        pos = end + 1;
    }
    if (expected != 0 && out.size() != expected) throw UsageError(std::string("malformed ") + what + " '" + s + "'");
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw UsageError("invalid JSON in '" + path + "': " + e.what());
    }
}

bool is_json_path(const std::string& s) { return s.size() > 5 && s.ends_with(".json"); }

struct Common {
    std::string projection;  ///< empty: custom with --expr, else plate_carree
    std::string surface = "sphere";
    std::string center;
    std::string expr;
    std::string out;
    std::string grid;
    std::string region;
};

Surface load_surface(const std::string& spec) {
    if (is_json_path(spec)) return surface_from_json(read_json_file(spec));
    return surface_from_spec(spec);
}

GeoPoint parse_center(const std::string& s) {
    if (s.empty()) return {};
    auto v = split_numbers(s, ',', 2, "center (LAT,LON degrees)");
    return GeoPoint::from_degrees(v[0], v[1]);
}

ProjectionDef load_projection(const Common& c, std::optional<GeoPoint> default_center = std::nullopt) {
    if (is_json_path(c.projection)) return projection_from_json(read_json_file(c.projection));
    Surface surface = load_surface(c.surface);
    GeoPoint center = c.center.empty() && default_center ? *default_center : parse_center(c.center);
    std::string name = c.projection.empty() ? (c.expr.empty() ? "plate_carree" : "custom") : c.projection;
    ProjectionKind kind;
    try {
        kind = projection_kind_from_string(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (kind == ProjectionKind::custom) {
        if (c.expr.empty()) throw UsageError("custom projection needs --expr \"x = ...; y = ...\"");
        return parse_custom_projection(c.expr, surface, center);
    }
    return ProjectionDef(kind, surface, center);
}

/// "LAT0:LAT1:DLAT,LON0:LON1:DLON" in degrees.
GraticuleSpec parse_graticule(const std::string& s, int every, std::optional<double> scale) {
    GraticuleSpec g;
    if (!s.empty()) {
        auto comma = s.find(',');
        if (comma == std::string::npos) throw UsageError("graticule is LAT0:LAT1:DLAT,LON0:LON1:DLON");
        auto lat = split_numbers(s.substr(0, comma), ':', 3, "latitude range");
        auto lon = split_numbers(s.substr(comma + 1), ':', 3, "longitude range");
        g.lat_min = lat[0], g.lat_max = lat[1], g.lat_step = lat[2];
        g.lon_min = lon[0], g.lon_max = lon[1], g.lon_step = lon[2];
    }
    g.every = every;
    g.display_scale = scale;
    g.validate();
    return g;
}

/// "N" or "NXxNY" node counts.
std::pair<int, int> parse_counts(const std::string& s, int fallback) {
    if (s.empty()) return {fallback, fallback};
    auto x = s.find('x');
    auto parse = [&](const std::string& t) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || v < 2)
            throw UsageError("grid is N or NXxNY with counts >= 2");
        return v;
    };
    if (x == std::string::npos) {
        int n = parse(s);
        return {n, n};
    }
    return {parse(s.substr(0, x)), parse(s.substr(x + 1))};
}

/// "WxH".
std::pair<double, double> parse_rect(const std::string& s) {
    auto v = split_numbers(s, 'x', 2, "rectangle (WxH)");
    return {v[0], v[1]};
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : fallback_(fallback), path_(path) {}
    ~Output() = default;
    std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }
    void commit() {
        if (path_.empty()) return;
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw UsageError("cannot write '" + path_ + "'");
        f << buffer_.str();
    }

private:
    std::ostream& fallback_;
    std::string path_;
    std::ostringstream buffer_;
};

void print_kv(std::ostream& os, const char* key, double v) { os << key << " = " << format_fixed(v, kPlaces) << '\n'; }

Json report_json(const DistortionReport& r) {
    return {{"nodes", r.nodes},           {"degenerate", r.degenerate},         {"sup_abs_lambda", r.sup_abs_lambda},
            {"mean_abs_lambda", r.mean_abs_lambda}, {"sup_omega", r.sup_omega}, {"sup_a", r.sup_a},
            {"inf_b", r.inf_b},           {"min_area_scale", r.min_area_scale}, {"max_area_scale", r.max_area_scale}};
}

Json boundary_json(const EllipseBoundaryReport& b) {
    return {{"classification", std::string(to_string(b.classification))},
            {"level", b.level},
            {"semi_major", b.semi_major},
            {"semi_minor", b.semi_minor},
            {"orientation_rad", b.orientation},
            {"boundary_min", b.boundary_min},
            {"boundary_max", b.boundary_max},
            {"boundary_spread", b.boundary_spread},
            {"interior_max", b.interior_max},
            {"constant_on_boundary", b.constant_on_boundary},
            {"max_on_boundary", b.max_on_boundary}};
}

/// Solver input polygon in plane coordinates; geographic regions are taken
/// to the local plane about their center.
struct PlaneRegion {
    Polygon polygon;
    GeoPoint center;
    bool geographic = false;
};

PlaneRegion load_plane_region(const std::string& path, const Surface& surface, GeoPoint fallback_center) {
    Json j = read_json_file(path);
    const Json& vs = j.at("vertices");
    if (vs.is_array() && !vs.empty() && vs[0].contains("x")) return {planar_polygon_from_json(j), fallback_center, false};
    RegionSpec r = region_from_json(j);
    std::vector<Vec2> pts;
    for (Vec2 v : r.boundary.vertices()) pts.push_back(local_plane(surface, r.center, {v.y, v.x}));
    return {Polygon(std::move(pts)), r.center, true};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Map-projection distortion analysis: Tissot indicatrices, distortion minimization and "
                 "quasiconformal dilatation",
                 "tissot"};
    app.require_subcommand(1);
    Common c;
    std::uint64_t seed = 42;

    auto add_projection = [&](CLI::App* sub) {
        sub->add_option("--projection", c.projection, "catalog name or projection JSON file");
        sub->add_option("--surface", c.surface, "sphere[:R] | ellipsoid:A:F | ellipsoid:A:1/INVF | surface JSON");
        sub->add_option("--center", c.center, "central point LAT,LON in degrees");
        sub->add_option("--expr", c.expr, "custom projection \"x = ...; y = ...\" in l, m");
    };

    double lat = 0.0, lon = 0.0, step = 0.0;
    auto* analyze = app.add_subcommand("analyze", "indicatrix at one point");
    add_projection(analyze);
    analyze->add_option("--lat", lat, "latitude, degrees")->required();
    analyze->add_option("--lon", lon, "longitude, degrees")->required();
    analyze->add_option("--step", step, "use central differences with this step (radians)");
    analyze->add_option("--out", c.out);

    int every = 1;
    std::optional<double> scale;
    auto* field = app.add_subcommand("field", "indicatrix field as CSV");
    auto* render = app.add_subcommand("render", "indicatrix field as SVG");
    for (auto* sub : {field, render}) {
        add_projection(sub);
        sub->add_option("--grid", c.grid, "graticule LAT0:LAT1:DLAT,LON0:LON1:DLON (degrees)");
        sub->add_option("--every", every, "draw every k-th intersection")->check(CLI::PositiveNumber);
        sub->add_option("--out", c.out);
    }
    render->add_option("--scale", scale, "ellipse display scale");

    auto* report = app.add_subcommand("report", "distortion summary over a region (JSON)");
    add_projection(report);
    report->add_option("--region", c.region, "region JSON")->required();
    report->add_option("--grid", c.grid, "node counts N or NXxNY over the region bounds");
    report->add_option("--out", c.out);

    std::optional<double> curvature;
    double boundary = 0.0;
    std::string field_out;
    auto* cheb = app.add_subcommand("chebyshev", "solve Δu = K with constant boundary value");
    cheb->add_option("--region", c.region, "planar {x,y} or geographic region JSON")->required();
    cheb->add_option("--surface", c.surface);
    cheb->add_option("--center", c.center, "central point for planar regions, LAT,LON degrees");
    cheb->add_option("--grid", c.grid, "node counts N or NXxNY");
    cheb->add_option("--curvature", curvature, "constant K (default: Gaussian curvature at the center)");
    cheb->add_option("--boundary", boundary, "boundary value c");
    std::string scheme = "interpolated";
    cheb->add_option("--scheme", scheme, "boundary treatment: interpolated or shortened")
        ->check(CLI::IsMember({"interpolated", "shortened"}));
    cheb->add_option("--field", field_out, "write x,y,u,magnification CSV here");
    cheb->add_option("--out", c.out);

    std::optional<double> level;
    auto* darboux = app.add_subcommand("darboux", "fit the λ-conic over a region (JSON)");
    add_projection(darboux);
    darboux->add_option("--region", c.region, "region JSON")->required();
    darboux->add_option("--grid", c.grid, "node counts N or NXxNY");
    darboux->add_option("--level", level, "λ level for the boundary check (default: covers the region)");
    darboux->add_option("--out", c.out);

    std::string map_path, affine, at;
    auto* qc = app.add_subcommand("qc", "characteristics and sup dilatation of a planar map");
    qc->add_option("--map", map_path, "planar map JSON");
    qc->add_option("--affine", affine, "m11,m12,m21,m22 on the unit square");
    qc->add_option("--at", at, "point x,y for the characteristics");
    qc->add_option("--grid", c.grid, "node counts N or NXxNY over the domain");
    qc->add_option("--out", c.out);

    std::string src, dst;
    int trials = 100;
    auto* grotzsch = app.add_subcommand("grotzsch", "extremal map between rectangles");
    grotzsch->add_option("--src", src, "source WxH")->required();
    grotzsch->add_option("--dst", dst, "target WxH")->required();
    grotzsch->add_option("--trials", trials, "perturbed trials")->check(CLI::PositiveNumber);
    grotzsch->add_option("--seed", seed, "generator seed");
    grotzsch->add_option("--grid", c.grid, "evaluation nodes per axis");
    grotzsch->add_option("--out", c.out);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Output o(c.out, out);
        std::ostream& os = o.stream();
        if (analyze->parsed()) {
            ProjectionDef def = load_projection(c);
            GeoPoint p = GeoPoint::from_degrees(lat, lon);
            auto mode = step > 0.0 ? DifferentiationMode::numeric(step) : DifferentiationMode::analytic();
            PlanePoint xy = def.project(p);
            Indicatrix ind = distortion_ellipse(def, p, mode);
            ParallelogramRatios pr = parallelogram_ratios(def, def.surface(), p, mode);
            os << "projection = " << def.id() << '\n';
            print_kv(os, "lat_deg", lat);
            print_kv(os, "lon_deg", lon);
            print_kv(os, "x", xy.x);
            print_kv(os, "y", xy.y);
            print_kv(os, "a", ind.a);
            print_kv(os, "b", ind.b);
            print_kv(os, "theta_rad", ind.theta);
            print_kv(os, "omega_rad", ind.omega);
            print_kv(os, "area_scale", ind.area_scale);
            os << "conformal = " << (ind.conformal ? "true" : "false") << '\n';
            print_kv(os, "h", pr.h);
            print_kv(os, "k", pr.k);
            print_kv(os, "theta_src_rad", pr.theta_src);
            print_kv(os, "theta_img_rad", pr.theta_img);
            if (def.kind() == ProjectionKind::tissot && tissot_beyond_lune(normalize_lon(p.lon - def.center().lon)))
                err << "warning: point lies outside the narrow lune the Tissot series is meant for\n";
        } else if (field->parsed() || render->parsed()) {
            ProjectionDef def = load_projection(c);
            GraticuleSpec grat = parse_graticule(c.grid, every, scale);
            SampleSet set = sample_field(def, grat);
            if (set.samples.empty()) throw DomainError("no graticule intersection lies in the projection domain");
            if (set.skipped > 0) err << "skipped " << set.skipped << " out-of-domain intersections\n";
            os << (field->parsed() ? export_csv(set.samples) : render_svg(def, set, grat));
        } else if (report->parsed()) {
            ProjectionDef def = load_projection(c);
            RegionSpec region = region_from_json(read_json_file(c.region));
            auto [nx, ny] = parse_counts(c.grid, 41);
            DistortionReport r = distortion_report(def, region, bounding_grid(region.boundary, nx, ny));
            Json j = report_json(r);
            j["projection"] = def.id();
            os << j.dump(2) << '\n';
        } else if (cheb->parsed()) {
            Surface surface = load_surface(c.surface);
            PlaneRegion region = load_plane_region(c.region, surface, parse_center(c.center));
            auto [nx, ny] = parse_counts(c.grid, 65);
            double k = curvature.value_or(surface.gaussian_curvature(region.center.lat));
            SolverDomain dom{bounding_grid(region.polygon, nx, ny), region.polygon};
            ChebyshevOptions opts;
            if (scheme == "shortened") opts.boundary = BoundaryTreatment::shortened_arms;
            ChebyshevSolution sol = chebyshev_solve(dom, k, boundary, opts);
            double umin = boundary, umax = boundary, magmin = 1.0, magmax = 1.0;
            bool first = true;
            std::string csv = "x,y,u,magnification\n";
            for (int j = 0; j < dom.grid.ny; ++j)
                for (int i = 0; i < dom.grid.nx; ++i) {
                    if (!sol.u.has(i, j)) continue;
                    double u = sol.u.value(i, j), m = sol.magnification.value(i, j);
                    umin = first ? u : std::min(umin, u);
                    umax = first ? u : std::max(umax, u);
                    magmin = first ? m : std::min(magmin, m);
                    magmax = first ? m : std::max(magmax, m);
                    first = false;
                    csv += format_fixed(dom.grid.x(i), kPlaces) + "," + format_fixed(dom.grid.y(j), kPlaces) + "," +
                           format_fixed(u, kPlaces) + "," + format_fixed(m, kPlaces) + "\n";
                }
            if (!field_out.empty()) {
                std::ofstream f(field_out, std::ios::binary);
                if (!f) throw UsageError("cannot write '" + field_out + "'");
                f << csv;
            }
            Json j{{"curvature", k},          {"boundary_value", boundary}, {"scheme", scheme},
                   {"unknowns", sol.unknowns},
                   {"boundary_ring", sol.boundary_ring}, {"iterations", sol.iterations}, {"residual", sol.residual},
                   {"u_min", umin},           {"u_max", umax},              {"magnification_min", magmin},
                   {"magnification_max", magmax}};
            os << j.dump(2) << '\n';
        } else if (darboux->parsed()) {
            if (c.projection.empty() && c.expr.empty()) c.projection = "tissot";
            RegionSpec region = region_from_json(read_json_file(c.region));
            ProjectionDef def = load_projection(c, region.center);
            auto [nx, ny] = parse_counts(c.grid, 41);
            ScalarField lam = lambda_plane_field(def, region, nx, ny);
            PrincipalRadii radii = principal_radii(def.surface(), region.center.lat);
            DarbouxConic conic = fit_darboux_conic(lam, radii.R, radii.R_prime);
            double lvl = 0.0;
            if (level) {
                lvl = *level;
            } else {
                for (Vec2 v : region.boundary.vertices())
                    lvl = std::max(lvl, conic(local_plane(def.surface(), region.center, {v.y, v.x})));
            }
            Json j{{"projection", def.id()},
                   {"A", conic.A},
                   {"B", conic.B},
                   {"base", conic.base},
                   {"R", conic.R},
                   {"R_prime", conic.R_prime},
                   {"nodes", lam.count()},
                   {"boundary_check", boundary_json(ellipse_boundary_check(conic, lvl))}};
            os << j.dump(2) << '\n';
        } else if (qc->parsed()) {
            if (map_path.empty() == affine.empty()) throw UsageError("qc needs exactly one of --map or --affine");
            std::optional<PlanarMap> map;
            if (!map_path.empty()) {
                map = planar_map_from_json(read_json_file(map_path));
            } else {
                auto m = split_numbers(affine, ',', 4, "affine matrix");
                map = PlanarMap::affine({{m[0], m[1], m[2], m[3]}, {}}, Rect{});
            }
            Json j;
            if (!at.empty()) {
                auto z = split_numbers(at, ',', 2, "point (x,y)");
                Characteristics ch = characteristics(*map, {z[0], z[1]});
                j["p"] = ch.p;
                j["theta_rad"] = ch.theta;
                j["stretch_theta_rad"] = ch.stretch_theta;
                j["non_unique"] = ch.non_unique;
            }
            auto [nx, ny] = parse_counts(c.grid, 33);
            const Rect& d = map->domain();
            j["sup_dilatation"] = sup_dilatation(*map, GridSpec{d.x0, d.x1, nx, d.y0, d.y1, ny});
            os << j.dump(2) << '\n';
        } else if (grotzsch->parsed()) {
            auto [sw, sh] = parse_rect(src);
            auto [dw, dh] = parse_rect(dst);
            RectanglePair pair{sw, sh, dw, dh};
            GrotzschOptions opts;
            if (!c.grid.empty()) opts.grid_nodes = parse_counts(c.grid, 33).first;
            GrotzschAffine aff;
            try {
                aff = grotzsch_affine(pair);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            GrotzschReport rep = grotzsch_experiment(pair, trials, seed, opts);
            print_kv(os, "K", aff.K);
            print_kv(os, "min_sup_dilatation", rep.min_sup_dilatation);
            os << "argmin_trial = " << rep.argmin_trial << '\n';
            os << "trials = " << rep.trials.size() << '\n';
            os << "rejected = " << rep.rejected << '\n';
            os << "seed = " << rep.seed << '\n';
        }
        o.commit();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "error: malformed config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace tissot
