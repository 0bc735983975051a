#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "choquard/config.hpp"
#include "choquard/io.hpp"
#include "choquard/rng.hpp"
#include "oracles.hpp"

using namespace choquard;
using nlohmann::json;

namespace {

json minimal_pekar() {
    return json::parse(R"({
        "grid": {"N": 3, "L": 24.0, "n": 64},
        "alpha": 2.0,
        "potential": {"variant": "constant", "Vinf": 1.0},
        "nonlinearity": {"variant": "power", "p": 2.0}
    })");
}

}  // namespace

TEST_CASE("minimal pekar config resolves with solver defaults") {
    ResolvedConfig cfg = parse_config_json(minimal_pekar());
    CHECK(cfg.solve.grid.n == 64);
    CHECK(cfg.solve.grid.length == 24.0);
    CHECK(cfg.solve.alpha == 2.0);
    CHECK(cfg.solve.potential.is_constant());
    CHECK(cfg.solve.nonlin.p == 2.0);
    CHECK(cfg.solve.lambda == 1.0);
    CHECK(cfg.solve.eps == 0.0);
    CHECK(cfg.solve.max_iterations == 400);
    CHECK(cfg.solve.tol_pohozaev == 1e-5);
    CHECK(cfg.solve.seed == 12345);
    CHECK(cfg.diagnostics.sobolev_s ==
          doctest::Approx(sharp_sobolev_constant(3)).epsilon(1e-15));
    CHECK(cfg.diagnostics.hls_c1 == 1.0);
}

TEST_CASE("alpha outside (0, N) is rejected with the Riesz constraint named") {
    json j = minimal_pekar();
    j["alpha"] = 3.5;
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("0 < alpha < N"),
                         ConfigError);
}

TEST_CASE("unknown keys are rejected with a suggestion") {
    json j = minimal_pekar();
    j["potental"] = j["potential"];
    j.erase("potential");
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("did you mean \"potential\""),
                         ConfigError);

    j = minimal_pekar();
    j["solver"] = {{"tol_energie", 1e-8}};
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("tol_energy"), ConfigError);
}

TEST_CASE("physical validity errors") {
    json j = minimal_pekar();
    j["lambda"] = 0.3;
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("[1/2, 1]"), ConfigError);

    j = minimal_pekar();
    j["eps"] = -0.5;
    CHECK_THROWS_AS(parse_config_json(j), ConfigError);

    j = minimal_pekar();
    j["grid"]["n"] = 63;
    CHECK_THROWS_AS(parse_config_json(j), ConfigError);

    j = minimal_pekar();
    j["nonlinearity"]["p"] = 9.0;
    CHECK_THROWS_AS(parse_config_json(j), ConfigError);
}

TEST_CASE("resolved echo re-parses to an identical resolved config") {
    json j = minimal_pekar();
    j["solver"] = {{"width", 2.0}, {"seed", 99}};
    j["sweep"] = {{"eps_list", {1.0, 0.5}}};
    ResolvedConfig first = parse_config_json(j);
    ResolvedConfig second = parse_config_json(first.echo);
    CHECK(first.echo == second.echo);
    CHECK(second.solve.seed == 99);
    CHECK(second.eps_list == std::vector<double>{1.0, 0.5});
}

TEST_CASE("field dump round trip is bit-exact with the documented sidecar") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "choquard_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "u.field").string();

    GridSpec g = make_grid(3, 12.0, 16);
    Rng rng(55);
    Field u = oracles::random_smooth_field(g, rng);
    dump_field(u, path);

    json side = json::parse(read_text_file(path + ".json"));
    CHECK(side["dim"] == 3);
    CHECK(side["L"] == 12.0);
    CHECK(side["n"] == 16);
    CHECK(side["offset"] == "half-cell");
    CHECK(side["order"] == "row-major");

    Field back = load_field(path);
    CHECK(back.grid == u.grid);
    CHECK(back.values == u.values);

    fs::remove_all(dir);
}

TEST_CASE("fnv1a64 is stable") {
    const char bytes[] = "choquard";
    CHECK(fnv1a64(bytes, 8) == fnv1a64(bytes, 8));
    CHECK(fnv1a64(bytes, 8) != fnv1a64(bytes, 7));
}

TEST_CASE("manifest carries echo, fingerprint, timings, and output hashes") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "choquard_manifest_test";
    fs::create_directories(dir);

    ResolvedConfig cfg = parse_config_json(minimal_pekar());
    RunManifest manifest(cfg, tool_version());
    manifest.set_plan_fingerprint(0xdeadbeefULL);
    manifest.add_timing("solve", 1.5);
    write_text_file((dir / "dummy.csv").string(), "a,b\n1,2\n");
    manifest.add_output((dir / "dummy.csv").string());
    manifest.set_wall_time(2.0);
    manifest.write(dir.string());

    json m = json::parse(read_text_file((dir / "manifest.json").string()));
    CHECK(m["config"] == cfg.echo);
    CHECK(m["tool_version"] == tool_version());
    CHECK(m["plan_fingerprint"] == "deadbeef");
    CHECK(m["timings"]["solve"] == 1.5);
    CHECK(m["wall_time_s"] == 2.0);
    CHECK(m["outputs"].size() == 1);
    CHECK(m["outputs"][0]["path"] == "dummy.csv");

    fs::remove_all(dir);
}

TEST_CASE("user_table config round trip and coverage check") {
    json j = minimal_pekar();
    j["potential"] = {{"variant", "user_table"},
                      {"Vinf", 1.0},
                      {"table_r", {0.0, 1.0, 2.0, 50.0}},
                      {"table_v", {0.5, 0.8, 1.0, 1.0}}};
    ResolvedConfig cfg = parse_config_json(j);
    CHECK(cfg.solve.potential.variant == PotentialVariant::kUserTable);
    ResolvedConfig again = parse_config_json(cfg.echo);
    CHECK(again.echo == cfg.echo);

    // a table that stops short of the box corner is rejected up front
    j["potential"]["table_r"] = {0.0, 1.0, 2.0, 5.0};
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("corner radius"), ConfigError);
}
