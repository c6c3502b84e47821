#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nsac/io.hpp"

using namespace nsac;
using nlohmann::json;

namespace {
struct TmpDir {
    std::filesystem::path dir;
    TmpDir() {
        dir = std::filesystem::temp_directory_path() / "nsac_io_test";
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
    }
    ~TmpDir() { std::filesystem::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};
}  // namespace

TEST_CASE("minimal sim config materializes defaults and validates") {
    json j = json::parse(R"({"eps": 0.03125, "initial": {"kind": "circle"}})");
    SimConfig cfg = parse_sim_config(j);
    CHECK(cfg.nx == 64);
    CHECK(cfg.alpha == 0.5);
    CHECK(cfg.boundary == SimConfig::Boundary::periodic);
    CHECK(cfg.radius == 0.25);
}

TEST_CASE("under-resolved config is a physical-validity error naming the constraint") {
    json j = json::parse(R"({"eps": 0.0625, "grid": {"nx": 8, "ny": 8}})");
    try {
        parse_sim_config(j);
        FAIL("expected PhysicsValidationError");
    } catch (const PhysicsValidationError& e) {
        CHECK(std::string(e.what()).find("h > eps") != std::string::npos);
    }
}

TEST_CASE("schema violations carry the field path") {
    json j = json::parse(R"({"eps": "not a number"})");
    try {
        parse_sim_config(j);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("eps") != std::string::npos);
    }
    json j2 = json::parse(R"({"boundary": "open"})");
    CHECK_THROWS_AS(parse_sim_config(j2), ValidationError);
}

TEST_CASE("config round-trip is the identity on the serialized form") {
    json j = json::parse(R"({"eps": 0.03125, "alpha": 1.0,
                             "initial": {"kind": "stripe", "stripe_x0": 0.2},
                             "viscosity": {"nu_plus": 2.0}})");
    SimConfig cfg = parse_sim_config(j);
    json full = sim_config_to_json(cfg);
    SimConfig cfg2 = parse_sim_config(full);
    CHECK(sim_config_to_json(cfg2) == full);

    StudyConfig sc = parse_study_config(json::parse(R"({"alpha": 0.5, "T": 0.04})"));
    json sfull = study_config_to_json(sc);
    CHECK(study_config_to_json(parse_study_config(sfull)) == sfull);
}

TEST_CASE("tolerance overrides") {
    SimConfig cfg;
    apply_tol_overrides(cfg, json::parse(R"({"projection_tol": 1e-9})"));
    CHECK(cfg.projection_tol == 1e-9);
    CHECK_THROWS_AS(apply_tol_overrides(cfg, json::parse(R"({"nope": 1})")), ValidationError);
}

TEST_CASE("profile CSV and snapshot round trip") {
    TmpDir tmp;
    DoubleWell well = DoubleWell::quartic();
    Profile p = compute_profile(well, 10.0, 512);
    write_profile_csv(tmp.path("profile.csv"), p);
    std::ifstream in(tmp.path("profile.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "rho,theta0,theta0p,theta0pp");

    std::vector<double> field(32 * 16, 0.0);
    for (size_t k = 0; k < field.size(); ++k) field[k] = 0.01 * k;
    write_snapshot(tmp.path("snap"), field, 32, 16, 0.03125, 0.5, 0.1, 1.0);
    int nx, ny;
    double h, t, eps, alpha;
    auto back = read_snapshot(tmp.path("snap"), nx, ny, h, t, eps, alpha);
    CHECK(nx == 32);
    CHECK(ny == 16);
    CHECK(back == field);
    CHECK(eps == 0.1);
}

TEST_CASE("deterministic CSV bytes for identical inputs") {
    TmpDir tmp;
    DoubleWell well = DoubleWell::quartic();
    Profile p = compute_profile(well, 10.0, 512);
    write_profile_csv(tmp.path("a.csv"), p);
    write_profile_csv(tmp.path("b.csv"), p);
    std::ifstream a(tmp.path("a.csv")), b(tmp.path("b.csv"));
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
}

TEST_CASE("curve CSV round trip") {
    TmpDir tmp;
    Curve c = make_circle({0.5, 0.5}, 0.25, 128);
    write_curve_csv(tmp.path("curve.csv"), c);
    Curve c2 = read_curve_csv(tmp.path("curve.csv"));
    CHECK(c2.n == c.n);
    for (int i = 0; i < c.n; ++i) CHECK((c2.x[i] - c.x[i]).norm() <= 1e-15);
}

TEST_CASE("manifest lists outputs") {
    TmpDir tmp;
    RunManifest m;
    m.config_hash = fnv1a("config");
    m.version = tool_version();
    m.wall_time_s = 1.5;
    m.tolerances = json{{"projection_tol", 1e-7}};
    m.outputs = {"a.csv", "b.bin"};
    write_manifest(tmp.path("manifest.json"), m);
    json j = load_json_file(tmp.path("manifest.json"));
    CHECK(j["outputs"].size() == 2);
    CHECK(j["version"] == tool_version());
}
