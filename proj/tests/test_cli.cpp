#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "tissot/cli.hpp"
#include "tissot/config.hpp"

using namespace tissot;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "tissot");
    std::ostringstream out, err;
    Run r;
    r.status = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

double value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + " = ", 0) == 0) return std::stod(line.substr(key.size() + 3));
    FAIL("missing key " << key);
    return NAN;
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("tissot-cli-" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("analyze") {
    Run r = run({"analyze", "--projection", "mercator", "--lat", "60", "--lon", "0"});
    REQUIRE(r.status == kExitOk);
    CHECK(value_of(r.out, "a") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(value_of(r.out, "b") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(value_of(r.out, "omega_rad") == 0.0);
    CHECK(r.out.find("conformal = true") != std::string::npos);

    Run pc = run({"analyze", "--projection", "plate_carree", "--lat", "60", "--lon", "10"});
    CHECK(value_of(pc.out, "a") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(value_of(pc.out, "omega_rad") == doctest::Approx(2.0 * std::asin(1.0 / 3.0)).epsilon(1e-11));
    CHECK(value_of(pc.out, "k") == doctest::Approx(0.5).epsilon(1e-12));

    Run num = run({"analyze", "--projection", "sinusoidal", "--lat", "40", "--lon", "30", "--step", "1e-6"});
    CHECK(value_of(num.out, "area_scale") == doctest::Approx(1.0).epsilon(1e-9));

    Run custom = run({"analyze", "--expr", "x = m*cos(l); y = l", "--lat", "40", "--lon", "30"});
    REQUIRE(custom.status == kExitOk);
    CHECK(value_of(custom.out, "area_scale") == doctest::Approx(1.0).epsilon(1e-12));

    Run ell = run({"analyze", "--projection", "tissot", "--surface", "ellipsoid:1:1/298.257223563", "--center",
                   "45,0", "--lat", "45", "--lon", "0"});
    REQUIRE(ell.status == kExitOk);
    CHECK(value_of(ell.out, "x") == 0.0);
    CHECK(value_of(ell.out, "a") == doctest::Approx(1.0).epsilon(1e-12));

    Run wide = run({"analyze", "--projection", "tissot", "--lat", "10", "--lon", "30"});
    CHECK(wide.status == kExitOk);
    CHECK(wide.err.find("warning") != std::string::npos);
}

TEST_CASE("exit statuses") {
    CHECK(run({"analyze", "--projection", "nosuch", "--lat", "0", "--lon", "0"}).status == kExitUsage);
    CHECK(run({"analyze", "--projection", "mercator", "--lat", "0", "--lon", "0", "--bogus"}).status == kExitUsage);
    CHECK(run({"frobnicate"}).status == kExitUsage);
    CHECK(run({}).status == kExitUsage);
    CHECK(run({"analyze", "--projection", "mercator", "--lon", "0"}).status == kExitUsage);
    CHECK(run({"analyze", "--expr", "x = q*", "--lat", "0", "--lon", "0"}).status == kExitUsage);
    CHECK(run({"analyze", "--projection", "mercator", "--lat", "90", "--lon", "0"}).status == kExitDomain);
    CHECK(run({"analyze", "--projection", "mercator", "--surface", "ellipsoid:1:0.01", "--lat", "0", "--lon", "0"})
              .status == kExitUsage);
    CHECK(run({"analyze", "--projection", "cassini", "--lat", "0", "--lon", "90"}).status == kExitDomain);
    CHECK(run({"grotzsch", "--src", "1x1", "--dst", "0x1"}).status == kExitUsage);
    Run help = run({"--help"});
    CHECK(help.status == kExitOk);
    CHECK(help.out.find("grotzsch") != std::string::npos);
}

TEST_CASE("field and render") {
    TempDir tmp;
    Run csv = run({"field", "--projection", "plate_carree"});
    REQUIRE(csv.status == kExitOk);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 36);
    CHECK(csv.out.rfind("lat_deg,lon_deg,x,y,a,b,theta_rad,omega_rad,area_scale\n", 0) == 0);

    Run merc = run({"field", "--projection", "mercator", "--grid", "-90:90:30,-90:90:30"});
    CHECK(merc.status == kExitOk);
    CHECK(merc.err.find("skipped 14") != std::string::npos);

    Run sparse = run({"field", "--projection", "plate_carree", "--every", "2"});
    CHECK(std::count(sparse.out.begin(), sparse.out.end(), '\n') == 13);

    std::string svg_path = tmp.file("f.svg");
    Run svg = run({"render", "--projection", "cassini", "--out", svg_path});
    REQUIRE(svg.status == kExitOk);
    std::string first = slurp(svg_path);
    CHECK(first.find("<svg") != std::string::npos);
    run({"render", "--projection", "cassini", "--out", svg_path});
    CHECK(slurp(svg_path) == first);

    CHECK(run({"field", "--projection", "mercator", "--grid", "90:90:1,0:10:5"}).status == kExitDomain);
    CHECK(run({"field", "--projection", "mercator", "--grid", "garbage"}).status == kExitUsage);

    std::string proj = tmp.write("p.json", R"({"id": "mine", "kind": "custom", "center": {"lat_deg": 0, "lon_deg": 10},
        "expressions": {"x": "m", "y": "l"}})");
    Run fromfile = run({"field", "--projection", proj, "--grid", "0:0:1,10:20:10"});
    REQUIRE(fromfile.status == kExitOk);
    CHECK(fromfile.out.find("\n0.000000000000,10.000000000000,0.000000000000,0.000000000000,1.000000000000") !=
          std::string::npos);
}

TEST_CASE("report, chebyshev, darboux") {
    TempDir tmp;
    std::string band = tmp.write("band.json", R"({"vertices": [{"lat_deg": -60, "lon_deg": -30}, {"lat_deg": -60, "lon_deg": 30},
        {"lat_deg": 60, "lon_deg": 30}, {"lat_deg": 60, "lon_deg": -30}], "center": {"lat_deg": 0, "lon_deg": 0}})");
    Run rep = run({"report", "--projection", "plate_carree", "--region", band, "--grid", "21x31"});
    REQUIRE(rep.status == kExitOk);
    Json j = Json::parse(rep.out);
    CHECK(j.at("sup_a").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(j.at("nodes").get<int>() == 21 * 31);

    std::string square = tmp.write("sq.json", R"({"vertices": [{"x": -1, "y": -1}, {"x": 1, "y": -1}, {"x": 1, "y": 1}, {"x": -1, "y": 1}]})");
    Run zero = run({"chebyshev", "--region", square, "--curvature", "0", "--boundary", "5", "--grid", "17"});
    REQUIRE(zero.status == kExitOk);
    Json z = Json::parse(zero.out);
    CHECK(z.at("u_min").get<double>() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(z.at("u_max").get<double>() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(z.at("residual").get<double>() < 1e-10);
    CHECK(z.at("scheme") == "interpolated");

    std::string field_csv = tmp.file("u.csv");
    Run sph = run({"chebyshev", "--region", band, "--grid", "33", "--field", field_csv, "--scheme", "shortened"});
    REQUIRE(sph.status == kExitOk);
    Json s = Json::parse(sph.out);
    CHECK(s.at("curvature").get<double>() == 1.0);
    CHECK(s.at("u_max").get<double>() <= 1e-12);
    CHECK(s.at("u_min").get<double>() < 0.0);
    CHECK(slurp(field_csv).rfind("x,y,u,magnification\n", 0) == 0);

    CHECK(run({"chebyshev", "--region", square, "--scheme", "other"}).status == kExitUsage);
    CHECK(run({"chebyshev", "--region", tmp.file("missing.json")}).status == kExitUsage);
    std::string broken = tmp.write("broken.json", "{\"vertices\": [");
    CHECK(run({"chebyshev", "--region", broken}).status == kExitUsage);

    std::string small = tmp.write("small.json", R"({"vertices": [{"lat_deg": -5, "lon_deg": -5}, {"lat_deg": -5, "lon_deg": 5},
        {"lat_deg": 5, "lon_deg": 5}, {"lat_deg": 5, "lon_deg": -5}]})");
    Run dar = run({"darboux", "--region", small});
    REQUIRE(dar.status == kExitOk);
    Json d = Json::parse(dar.out);
    CHECK(d.at("projection") == "tissot");
    CHECK(std::isfinite(d.at("A").get<double>()));
    CHECK(d.at("base").get<double>() == doctest::Approx(0.25));
    CHECK(d.at("boundary_check").contains("classification"));
}

TEST_CASE("qc and grotzsch") {
    TempDir tmp;
    Run aff = run({"qc", "--affine", "2,0,0,1", "--at", "0.5,0.5"});
    REQUIRE(aff.status == kExitOk);
    Json a = Json::parse(aff.out);
    CHECK(a.at("p").get<double>() == doctest::Approx(2.0));
    CHECK(a.at("sup_dilatation").get<double>() == doctest::Approx(2.0));

    std::string map = tmp.write("m.json", R"({"expressions": {"u": "x + 0.1*x^2", "v": "y"},
        "domain": {"x0": 0, "x1": 1, "y0": 0, "y1": 1}})");
    Run quad = run({"qc", "--map", map, "--grid", "11"});
    REQUIRE(quad.status == kExitOk);
    CHECK(Json::parse(quad.out).at("sup_dilatation").get<double>() == doctest::Approx(1.2));

    CHECK(run({"qc"}).status == kExitUsage);
    CHECK(run({"qc", "--affine", "1,0,0,-1"}).status == kExitDomain);

    Run g = run({"grotzsch", "--src", "1x1", "--dst", "2x1"});
    REQUIRE(g.status == kExitOk);
    CHECK(g.out.find("K = 2") != std::string::npos);
    Run g2 = run({"grotzsch", "--src", "1x1", "--dst", "2x1"});
    CHECK(g2.out == g.out);
    Run g3 = run({"grotzsch", "--src", "1x1", "--dst", "2x1", "--seed", "7"});
    CHECK(g3.out != g.out);
}
