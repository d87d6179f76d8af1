#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <functional>

#include "sepvol/driver.hpp"
#include "sepvol/io.hpp"
#include "sepvol/run_config.hpp"

using namespace sepvol;
namespace fs = std::filesystem;

namespace {

// fresh scratch directory per test run
struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / "sepvol-config-io") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config(const std::string& out) {
    RunConfig c;
    c.points = 600;
    c.grid_size = 21;
    c.out_path = out;
    return c;
}

} // namespace

TEST_CASE("digests separate semantic from plumbing fields", "[config-io]") {
    const RunConfig base;
    CHECK(config_digest(base) == config_digest(RunConfig{}));
    CHECK(stream_digest(base) == stream_digest(RunConfig{}));

    // fields that define the point stream: both digests move
    const std::vector<std::function<void(RunConfig&)>> stream_edits{
        [](RunConfig& c) { c.which = Ensemble::cplx; },
        [](RunConfig& c) { c.grid_size = 101; },
        [](RunConfig& c) { c.grid_extra = {0.3}; },
        [](RunConfig& c) { c.seed = 2; },
        [](RunConfig& c) { c.sequence = SeqKind::scrambled_faure; },
        [](RunConfig& c) { c.skip = 0; },
        [](RunConfig& c) { c.path = PathMode::slow; },
    };
    for (const auto& edit : stream_edits) {
        RunConfig c = base;
        edit(c);
        CHECK(config_digest(c) != config_digest(base));
        CHECK(stream_digest(c) != stream_digest(base));
    }

    // fields that only affect the integration stage or the point target:
    // the config digest moves, the stream digest must not (resumability)
    const std::vector<std::function<void(RunConfig&)>> stage_edits{
        [](RunConfig& c) { c.points = 100001; },
        [](RunConfig& c) { c.switch_point = 0.9; },
        [](RunConfig& c) { c.series_degree = 60; },
        [](RunConfig& c) { c.interp_degree = 5; },
    };
    for (const auto& edit : stage_edits) {
        RunConfig c = base;
        edit(c);
        CHECK(config_digest(c) != config_digest(base));
        CHECK(stream_digest(c) == stream_digest(base));
    }

    // plumbing: neither digest may move
    RunConfig c = base;
    c.workers = 8;
    c.out_path = "elsewhere";
    c.checkpoint_every = 17;
    c.resume = true;
    CHECK(config_digest(c) == config_digest(base));
    CHECK(stream_digest(c) == stream_digest(base));
}

TEST_CASE("digest hex round trip", "[config-io]") {
    for (const std::uint64_t v : {0ULL, 1ULL, 0xdeadbeefcafef00dULL, ~0ULL}) {
        const std::string h = digest_hex(v);
        CHECK(h.size() == 16);
        CHECK(digest_from_hex(h) == v);
    }
    CHECK_THROWS_AS(digest_from_hex("abc"), input_error);
    CHECK_THROWS_AS(digest_from_hex("00000000000000000"), input_error);
    CHECK_THROWS_AS(digest_from_hex("000000000000000g"), input_error);
    CHECK_THROWS_AS(digest_from_hex("000000000000000A"), input_error); // lowercase only
}

TEST_CASE("config entries parse and validate", "[config-io]") {
    RunConfig c;
    apply_config_entry(c, "case", "complex");
    apply_config_entry(c, "points", "42");
    apply_config_entry(c, "grid", "11");
    apply_config_entry(c, "grid-extra", "0.1,0.9");
    apply_config_entry(c, "seed", "9");
    apply_config_entry(c, "sequence", "scrambled-faure");
    apply_config_entry(c, "skip", "100");
    apply_config_entry(c, "switch-point", "0.9");
    apply_config_entry(c, "series-degree", "50");
    apply_config_entry(c, "interp-degree", "5");
    apply_config_entry(c, "path", "slow");
    apply_config_entry(c, "workers", "3");
    apply_config_entry(c, "out", "some/base");
    apply_config_entry(c, "checkpoint-every", "7");
    CHECK(c.which == Ensemble::cplx);
    CHECK(c.points == 42);
    CHECK(c.grid_size == 11);
    CHECK(c.grid_extra == std::vector<double>{0.1, 0.9});
    CHECK(c.seed == 9);
    CHECK(c.sequence == SeqKind::scrambled_faure);
    CHECK(c.skip == 100);
    CHECK(c.switch_point == 0.9);
    CHECK(c.series_degree == 50);
    CHECK(c.interp_degree == 5);
    CHECK(c.path == PathMode::slow);
    CHECK(c.workers == 3);
    CHECK(c.out_path == "some/base");
    CHECK(c.checkpoint_every == 7);

    apply_config_entry(c, "skip", "default");
    CHECK(c.skip == -1);

    CHECK_THROWS_AS(apply_config_entry(c, "colour", "blue"), input_error);
    CHECK_THROWS_AS(apply_config_entry(c, "points", "abc"), input_error);
    CHECK_THROWS_AS(apply_config_entry(c, "points", "12x"), input_error);
    CHECK_THROWS_AS(apply_config_entry(c, "grid-extra", "0.1,oops"), input_error);
    CHECK_THROWS_AS(apply_config_entry(c, "case", "quaternionic"), std::invalid_argument);
}

TEST_CASE("config files load with comments and overrides", "[config-io]") {
    Scratch s;
    const std::string path = s / "run.cfg";
    write_text(path,
               "# sweep setup\n"
               "case = complex\n"
               "\n"
               "  points=1000   # inline comment\n"
               "seed\t=\t5\n"
               "points = 2000\n" // later entry wins
               "grid-extra = 0.25, 0.75\n");
    const RunConfig c = load_config_file(path);
    CHECK(c.which == Ensemble::cplx);
    CHECK(c.points == 2000);
    CHECK(c.seed == 5);
    CHECK(c.grid_extra == std::vector<double>{0.25, 0.75});

    write_text(s / "bad_line.cfg", "case = real\n\njust words\n");
    CHECK_THROWS_WITH(load_config_file(s / "bad_line.cfg"),
                      Catch::Matchers::ContainsSubstring("line 3"));

    write_text(s / "bad_enum.cfg", "sequence = sobol\n");
    CHECK_THROWS_WITH(load_config_file(s / "bad_enum.cfg"),
                      Catch::Matchers::ContainsSubstring("line 1"));

    CHECK_THROWS_AS(load_config_file(s / "missing.cfg"), input_error);
}

TEST_CASE("table artifacts survive a disk round trip", "[config-io]") {
    Scratch s;
    const RunConfig cfg = small_config(s / "t600");
    const FTable t = run_estimate(cfg);
    const TablePaths paths = table_paths(cfg.out_path);
    write_ftable_csv(paths.csv, t);
    write_sidecar(paths.sidecar, cfg, t);

    const auto [rt, rcfg] = read_ftable(paths);
    REQUIRE(rt.grid.size() == t.grid.size());
    CHECK(rt.grid == t.grid);
    CHECK(rt.separable_count == t.separable_count);
    CHECK(rt.density_count == t.density_count);
    CHECK(rt.total_points == t.total_points);
    CHECK(rt.config_digest == t.config_digest);
    CHECK(rt.which == t.which);
    CHECK(rcfg.points == cfg.points);
    CHECK(rcfg.seed == cfg.seed);
    CHECK(config_digest(rcfg) == t.config_digest);
    for (std::size_t j = 0; j < t.grid.size(); ++j)
        CHECK(rt.f_at(j) == t.f_at(j)); // recomputed, not read back
}

TEST_CASE("table reader rejects malformed inputs", "[config-io]") {
    Scratch s;
    const RunConfig cfg = small_config(s / "good");
    const FTable t = run_estimate(cfg);
    const TablePaths good = table_paths(cfg.out_path);
    write_ftable_csv(good.csv, t);
    write_sidecar(good.sidecar, cfg, t);

    CHECK_THROWS_AS(read_ftable(table_paths(s / "absent")), input_error);

    const auto with_csv = [&](const std::string& name, const std::string& text) {
        const std::string p = s / name;
        write_text(p, text);
        return TablePaths{p, good.sidecar, good.checkpoint};
    };
    CHECK_THROWS_WITH(read_ftable(with_csv("h.csv", "mu,count\n0.5,1,2\n")),
                      Catch::Matchers::ContainsSubstring("bad header"));
    CHECK_THROWS_WITH(
        read_ftable(with_csv("c.csv", "mu,separable_count,f_estimate\n0.5,3\n")),
        Catch::Matchers::ContainsSubstring("expected 3 columns"));
    CHECK_THROWS_WITH(read_ftable(with_csv("e.csv", "mu,separable_count,f_estimate\n")),
                      Catch::Matchers::ContainsSubstring("no rows"));
    CHECK_THROWS_WITH(
        read_ftable(with_csv(
            "u.csv", "mu,separable_count,f_estimate\n0.5,1,0.1\n0.25,1,0.1\n")),
        Catch::Matchers::ContainsSubstring("not sorted"));
    CHECK_THROWS_WITH(
        read_ftable(with_csv(
            "n.csv", "mu,separable_count,f_estimate\n0.5,minus_one,0.1\n")),
        Catch::Matchers::ContainsSubstring("count"));

    write_text(s / "mangled.json", "{ not json");
    CHECK_THROWS_WITH(read_ftable(TablePaths{good.csv, s / "mangled.json", ""}),
                      Catch::Matchers::ContainsSubstring("malformed JSON"));
    write_text(s / "sparse.json", "{}");
    CHECK_THROWS_WITH(read_ftable(TablePaths{good.csv, s / "sparse.json", ""}),
                      Catch::Matchers::ContainsSubstring("missing fields"));
}

TEST_CASE("checkpoints round trip and reject foreign versions", "[config-io]") {
    Scratch s;
    RunConfig cfg;
    cfg.points = 200;
    cfg.grid_size = 11;
    const auto spec = cfg.sequence_spec();
    const auto grid = std::make_shared<const std::vector<double>>(cfg.grid());
    auto acc = accumulate(spec, {spec.skip, spec.skip + cfg.points}, cfg.which, grid,
                          config_digest(cfg));
    const std::string path = s / "run.ckpt.json";
    write_checkpoint(path, cfg, acc, spec.skip + cfg.points);

    const Checkpoint ck = read_checkpoint(path);
    CHECK(ck.cursor == spec.skip + cfg.points);
    CHECK(ck.counts == acc.counts());
    CHECK(ck.density_count == acc.density_count());
    CHECK(ck.total_points == acc.total_points());
    CHECK(ck.range_begin == spec.skip);
    CHECK(ck.range_end == spec.skip + cfg.points);
    CHECK(ck.stream_digest_value == stream_digest(cfg));
    CHECK(ck.cfg.points == cfg.points);
    CHECK(config_digest(ck.cfg) == config_digest(cfg));

    auto j = nlohmann::json::parse(read_text(path));
    j["version"] = checkpoint_version + 1;
    write_text(path, j.dump(2));
    CHECK_THROWS_WITH(read_checkpoint(path),
                      Catch::Matchers::ContainsSubstring("unsupported version"));
}

TEST_CASE("resumed runs are bitwise identical to one-shot runs", "[config-io]") {
    Scratch s;
    RunConfig oneshot = small_config(s / "oneshot");
    oneshot.points = 500;
    oneshot.grid_size = 11;
    const FTable whole = run_estimate(oneshot);
    write_ftable_csv(table_paths(oneshot.out_path).csv, whole);

    RunConfig split = oneshot;
    split.out_path = s / "split";
    split.points = 300;
    run_estimate(split);

    split.points = 500;
    split.resume = true;
    const FTable resumed = run_estimate(split);
    write_ftable_csv(table_paths(split.out_path).csv, resumed);

    CHECK(resumed.separable_count == whole.separable_count);
    CHECK(resumed.density_count == whole.density_count);
    CHECK(resumed.total_points == whole.total_points);
    CHECK(read_text(table_paths(split.out_path).csv) ==
          read_text(table_paths(oneshot.out_path).csv));

    RunConfig empty = oneshot;
    empty.points = 0;
    CHECK_THROWS_AS(run_estimate(empty), input_error);
}

TEST_CASE("resume refuses foreign or inconsistent checkpoints", "[config-io]") {
    Scratch s;
    RunConfig cfg = small_config(s / "base");
    cfg.points = 300;
    cfg.grid_size = 11;
    run_estimate(cfg);

    RunConfig other_seed = cfg;
    other_seed.seed = 2;
    other_seed.resume = true;
    CHECK_THROWS_WITH(run_estimate(other_seed),
                      Catch::Matchers::ContainsSubstring("different stream"));

    RunConfig shrunk = cfg;
    shrunk.points = 100;
    shrunk.resume = true;
    CHECK_THROWS_WITH(run_estimate(shrunk),
                      Catch::Matchers::ContainsSubstring("already covers"));

    // cursor / total_points mismatch
    const std::string ckpath = table_paths(cfg.out_path).checkpoint;
    auto j = nlohmann::json::parse(read_text(ckpath));
    j["cursor"] = j["cursor"].get<std::uint64_t>() + 1;
    write_text(ckpath, j.dump(2));
    RunConfig more = cfg;
    more.points = 400;
    more.resume = true;
    CHECK_THROWS_WITH(run_estimate(more),
                      Catch::Matchers::ContainsSubstring("inconsistent"));
}

TEST_CASE("volume report carries exactly the published fields", "[config-io]") {
    Scratch s;
    VolumeReport r;
    r.which = Ensemble::cplx;
    r.v_total_exact = 1.0;
    r.v_sep = 0.25;
    r.probability = 0.25;
    r.split_low = 0.2;
    r.split_high = 0.05;
    r.points = 12345;
    r.grid_size = 201;
    r.interpolation_degree = 3;
    const std::string path = s / "report.json";
    write_volume_report(path, r);

    const auto j = nlohmann::json::parse(read_text(path));
    REQUIRE(j.is_object());
    CHECK(j.size() == 9);
    CHECK(j.at("case") == "complex");
    CHECK(j.at("v_total_exact") == 1.0);
    CHECK(j.at("v_sep") == 0.25);
    CHECK(j.at("probability") == 0.25);
    CHECK(j.at("split_low") == 0.2);
    CHECK(j.at("split_high") == 0.05);
    CHECK(j.at("points") == 12345);
    CHECK(j.at("grid") == 201);
    CHECK(j.at("interpolation_degree") == 3);
}

TEST_CASE("artifact paths derive from one base", "[config-io]") {
    const TablePaths p = table_paths("runs/alpha");
    CHECK(p.csv == "runs/alpha.csv");
    CHECK(p.sidecar == "runs/alpha.json");
    CHECK(p.checkpoint == "runs/alpha.ckpt.json");
}
