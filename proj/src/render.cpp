#include "tissot/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tissot/errors.hpp"
#include "tissot/format.hpp"

namespace tissot {

namespace {

constexpr int kSvgPlaces = 6;

std::vector<double> steps(double lo, double hi, double step) {
    std::vector<double> out;
    auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(k == n && std::abs(lo + k * step - hi) < 1e-9 * step ? hi : lo + k * step);
    return out;
}

std::string fmt(double v) { return format_fixed(v, kSvgPlaces); }

}  // namespace

void GraticuleSpec::validate() const {
    if (!(lat_step > 0.0) || !(lon_step > 0.0)) throw std::invalid_argument("graticule steps must be positive");
    if (every < 1) throw std::invalid_argument("indicatrix spacing must be >= 1");
    if (!(lat_min >= -90.0 && lat_max <= 90.0 && lat_min <= lat_max))
        throw std::invalid_argument("latitude range must lie within [-90, 90]");
    if (!(lon_min >= -180.0 && lon_max <= 180.0 && lon_min <= lon_max))
        throw std::invalid_argument("longitude range must lie within [-180, 180]");
    if (display_scale && !(*display_scale > 0.0)) throw std::invalid_argument("display scale must be positive");
}

std::vector<double> GraticuleSpec::latitudes() const { return steps(lat_min, lat_max, lat_step); }
std::vector<double> GraticuleSpec::longitudes() const { return steps(lon_min, lon_max, lon_step); }

SampleSet sample_field(const ProjectionDef& def, const GraticuleSpec& grat) {
    grat.validate();
    SampleSet out;
    const auto lats = grat.latitudes();
    const auto lons = grat.longitudes();
    const auto k = static_cast<std::size_t>(grat.every);
    for (std::size_t i = 0; i < lats.size(); i += k) {
        for (std::size_t j = 0; j < lons.size(); j += k) {
            GeoPoint g = GeoPoint::from_degrees(lats[i], lons[j]);
            FieldSample s{g, {}, std::nullopt};
            try {
                s.plane = def.project(g);
                s.ind = distortion_ellipse(def, g);
            } catch (const DomainError&) {
                ++out.skipped;
                continue;
            } catch (const DegenerateError&) {
                s.ind.reset();
            }
            out.samples.push_back(s);
        }
    }
    return out;
}

double display_scale(const ProjectionDef& def, const GraticuleSpec& grat) {
    if (grat.display_scale) return *grat.display_scale;
    const double step = std::min(grat.lat_step, grat.lon_step);
    const double lat_c = 0.5 * (grat.lat_min + grat.lat_max);
    const double lon_c = 0.5 * (grat.lon_min + grat.lon_max);
    try {
        PlanePoint c = def.project(GeoPoint::from_degrees(lat_c, lon_c));
        double lat_n = lat_c + step <= 90.0 ? lat_c + step : lat_c - step;
        PlanePoint n = def.project(GeoPoint::from_degrees(lat_n, lon_c));
        PlanePoint e = def.project(GeoPoint::from_degrees(lat_c, lon_c + step));
        double d = std::min(std::hypot(n.x - c.x, n.y - c.y), std::hypot(e.x - c.x, e.y - c.y));
        if (d > 0.0 && std::isfinite(d)) return 0.25 * d;
    } catch (const Error&) {
    } catch (const std::invalid_argument&) {
    }
    return 0.25 * deg_to_rad(step) * def.surface().equatorial_radius();
}

std::string render_svg(const ProjectionDef& def, const SampleSet& set, const GraticuleSpec& grat,
                       const SvgOptions& options) {
    grat.validate();
    const double scale = display_scale(def, grat);

    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    for (const FieldSample& s : set.samples) {
        double r = scale * (s.ind ? s.ind->a : 1.0);
        lo_x = std::min(lo_x, s.plane.x - r);
        hi_x = std::max(hi_x, s.plane.x + r);
        lo_y = std::min(lo_y, s.plane.y - r);
        hi_y = std::max(hi_y, s.plane.y + r);
    }
    if (set.samples.empty()) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
    double span = std::max(hi_x - lo_x, hi_y - lo_y);
    if (!(span > 0.0)) span = 1.0;
    double margin = 0.05 * span;
    lo_x -= margin, hi_x += margin, lo_y -= margin, hi_y += margin;
    double stroke = options.stroke_width > 0.0 ? options.stroke_width : 0.002 * span;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(lo_x) + " " + fmt(-hi_y) + " " +
           fmt(hi_x - lo_x) + " " + fmt(hi_y - lo_y) + "\">\n";
    svg += "<g class=\"graticule\" fill=\"none\" stroke=\"#7f7f7f\" stroke-width=\"" + fmt(stroke) + "\">\n";

    auto polyline = [&](auto&& point_at, double from, double to) {
        double res = std::max(1, options.graticule_resolution_deg);
        auto n = static_cast<int>(std::ceil((to - from) / res));
        n = std::max(n, 1);
        std::string pts;
        int count = 0;
        auto flush = [&]() {
            if (count >= 2) svg += "<polyline points=\"" + pts + "\"/>\n";
            pts.clear();
            count = 0;
        };
        for (int k = 0; k <= n; ++k) {
            double t = k == n ? to : from + (to - from) * k / n;
            try {
                PlanePoint p = def.project(point_at(t));
                if (!pts.empty()) pts += ' ';
                pts += fmt(p.x) + "," + fmt(-p.y);
                ++count;
            } catch (const DomainError&) {
                flush();
            }
        }
        flush();
    };
    for (double lat : grat.latitudes())
        polyline([lat](double lon) { return GeoPoint::from_degrees(lat, lon); }, grat.lon_min, grat.lon_max);
    for (double lon : grat.longitudes())
        polyline([lon](double lat) { return GeoPoint::from_degrees(lat, lon); }, grat.lat_min, grat.lat_max);
    svg += "</g>\n";

    svg += "<g class=\"indicatrices\" fill=\"#d62728\" fill-opacity=\"0.35\" stroke=\"#8c1515\" stroke-width=\"" +
           fmt(stroke) + "\">\n";
    for (const FieldSample& s : set.samples) {
        const std::string cx = fmt(s.plane.x), cy = fmt(-s.plane.y);
        if (!s.ind) {
            double r = 0.5 * scale;
            svg += "<path class=\"degenerate\" d=\"M" + fmt(s.plane.x - r) + "," + fmt(-s.plane.y - r) + " L" +
                   fmt(s.plane.x + r) + "," + fmt(-s.plane.y + r) + " M" + fmt(s.plane.x - r) + "," +
                   fmt(-s.plane.y + r) + " L" + fmt(s.plane.x + r) + "," + fmt(-s.plane.y - r) + "\"/>\n";
        } else if (s.ind->conformal) {
            svg += "<circle class=\"indicatrix\" cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"" + fmt(scale * s.ind->a) +
                   "\"/>\n";
        } else {
            svg += "<ellipse class=\"indicatrix\" cx=\"" + cx + "\" cy=\"" + cy + "\" rx=\"" + fmt(scale * s.ind->a) +
                   "\" ry=\"" + fmt(scale * s.ind->b) + "\" transform=\"rotate(" + fmt(-rad_to_deg(s.ind->theta)) +
                   " " + cx + " " + cy + ")\"/>\n";
        }
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

std::string export_csv(const std::vector<FieldSample>& samples) {
    std::string out = kCsvHeader;
    out += '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const FieldSample& s : samples) {
        const double vals[] = {rad_to_deg(s.geo.lat), rad_to_deg(s.geo.lon), s.plane.x, s.plane.y,
                               s.ind ? s.ind->a : nan, s.ind ? s.ind->b : nan, s.ind ? s.ind->theta : nan,
                               s.ind ? s.ind->omega : nan, s.ind ? s.ind->area_scale : nan};
        bool first = true;
        for (double v : vals) {
            if (!first) out += ',';
            out += format_fixed(v, kCsvPlaces);
            first = false;
        }
        out += '\n';
    }
    return out;
}

}  // namespace tissot
