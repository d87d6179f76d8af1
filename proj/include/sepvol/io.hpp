#ifndef SEPVOL_IO_HPP
#define SEPVOL_IO_HPP

// File formats. One table run produces three artifacts sharing a base
// path: <base>.csv (grid rows), <base>.json (sidecar with the config,
// global counts, normalization and digest) and <base>.ckpt.json (resume
// state). Everything is written with shortest round-trip number
// formatting and no timestamps, so identical runs produce identical
// bytes.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "sepvol/errors.hpp"
#include "sepvol/estimator.hpp"
#include "sepvol/run_config.hpp"

namespace sepvol {

struct TablePaths {
    std::string csv;
    std::string sidecar;
    std::string checkpoint;
};

inline TablePaths table_paths(const std::string& base) {
    return {base + ".csv", base + ".json", base + ".ckpt.json"};
}

inline void write_ftable_csv(const std::string& path, const FTable& t) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out << "mu,separable_count,f_estimate\n";
    for (std::size_t j = 0; j < t.grid.size(); ++j)
        out << detail::format_double(t.grid[j]) << ',' << t.separable_count[j] << ','
            << detail::format_double(t.f_at(j)) << '\n';
    if (!out) throw input_error("write to '" + path + "' failed");
}

namespace detail {

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["case"] = ensemble_name(c.which);
    j["points"] = c.points;
    j["grid"] = c.grid_size;
    j["grid_extra"] = c.grid_extra;
    j["seed"] = c.seed;
    j["sequence"] = seq_kind_name(c.sequence);
    j["skip"] = c.skip;
    j["switch_point"] = c.switch_point;
    j["series_degree"] = c.series_degree;
    j["interp_degree"] = c.interp_degree;
    j["path"] = path_mode_name(c.path);
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.which = ensemble_from_name(j.at("case").get<std::string>());
    c.points = j.at("points").get<std::uint64_t>();
    c.grid_size = j.at("grid").get<std::size_t>();
    c.grid_extra = j.at("grid_extra").get<std::vector<double>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.sequence = seq_kind_from_name(j.at("sequence").get<std::string>());
    c.skip = j.at("skip").get<std::int64_t>();
    c.switch_point = j.at("switch_point").get<double>();
    c.series_degree = j.at("series_degree").get<unsigned>();
    c.interp_degree = j.at("interp_degree").get<unsigned>();
    c.path = path_mode_from_name(j.at("path").get<std::string>());
    return c;
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw input_error("malformed JSON in '" + path + "': " + e.what());
    }
}

inline void dump_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw input_error("write to '" + path + "' failed");
}

} // namespace detail

inline void write_sidecar(const std::string& path, const RunConfig& cfg, const FTable& t) {
    nlohmann::json j;
    j["config"] = detail::config_to_json(cfg);
    j["density_count"] = t.density_count;
    j["total_points"] = t.total_points;
    j["normalization"] = {{"weight", t.norm.weight}, {"cube_volume", t.norm.cube_volume}};
    j["config_digest"] = digest_hex(t.config_digest);
    detail::dump_json(path, j);
}

// reassemble an FTable (and the config that produced it) from disk
inline std::pair<FTable, RunConfig> read_ftable(const TablePaths& paths) {
    const nlohmann::json side = detail::load_json(paths.sidecar);
    RunConfig cfg;
    FTable t;
    try {
        cfg = detail::config_from_json(side.at("config"));
        t.density_count = side.at("density_count").get<std::int64_t>();
        t.total_points = side.at("total_points").get<std::int64_t>();
        t.norm.weight = side.at("normalization").at("weight").get<double>();
        t.norm.cube_volume = side.at("normalization").at("cube_volume").get<double>();
        t.config_digest = digest_from_hex(side.at("config_digest").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw input_error("sidecar '" + paths.sidecar + "' missing fields: " + e.what());
    }
    t.which = cfg.which;

    std::ifstream in(paths.csv);
    if (!in) throw input_error("cannot open '" + paths.csv + "'");
    std::string line;
    if (!std::getline(in, line) || line != "mu,separable_count,f_estimate")
        throw input_error("'" + paths.csv + "' is not an f-table (bad header)");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw input_error(paths.csv + ": line " + std::to_string(lineno) +
                              ": expected 3 columns");
        t.grid.push_back(detail::parse_double(line.substr(0, c1), "mu"));
        t.separable_count.push_back(
            std::int64_t(detail::parse_u64(line.substr(c1 + 1, c2 - c1 - 1), "count")));
    }
    if (t.grid.empty()) throw input_error("'" + paths.csv + "' has no rows");
    if (!std::is_sorted(t.grid.begin(), t.grid.end()))
        throw input_error("'" + paths.csv + "' grid is not sorted");
    return {std::move(t), std::move(cfg)};
}

struct Checkpoint {
    RunConfig cfg;
    std::uint64_t cursor = 0; // next absolute stream index
    std::vector<std::int64_t> counts;
    std::int64_t density_count = 0;
    std::int64_t total_points = 0;
    std::uint64_t range_begin = 0;
    std::uint64_t range_end = 0;
    std::uint64_t stream_digest_value = 0;
};

inline constexpr int checkpoint_version = 1;

inline void write_checkpoint(const std::string& path, const RunConfig& cfg,
                             const Accumulator& acc, std::uint64_t cursor) {
    nlohmann::json j;
    j["version"] = checkpoint_version;
    j["config"] = detail::config_to_json(cfg);
    j["stream_digest"] = digest_hex(stream_digest(cfg));
    j["cursor"] = cursor;
    j["counts"] = acc.counts();
    j["density_count"] = acc.density_count();
    j["total_points"] = acc.total_points();
    j["range"] = {{"begin", acc.range_begin()}, {"end", acc.range_end()}};
    detail::dump_json(path, j);
}

inline Checkpoint read_checkpoint(const std::string& path) {
    const nlohmann::json j = detail::load_json(path);
    Checkpoint c;
    try {
        if (j.at("version").get<int>() != checkpoint_version)
            throw input_error("checkpoint '" + path + "' has an unsupported version");
        c.cfg = detail::config_from_json(j.at("config"));
        c.cursor = j.at("cursor").get<std::uint64_t>();
        c.counts = j.at("counts").get<std::vector<std::int64_t>>();
        c.density_count = j.at("density_count").get<std::int64_t>();
        c.total_points = j.at("total_points").get<std::int64_t>();
        c.range_begin = j.at("range").at("begin").get<std::uint64_t>();
        c.range_end = j.at("range").at("end").get<std::uint64_t>();
        c.stream_digest_value = digest_from_hex(j.at("stream_digest").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw input_error("checkpoint '" + path + "' missing fields: " + e.what());
    }
    return c;
}

inline void write_volume_report(const std::string& path, const VolumeReport& r) {
    nlohmann::json j;
    j["case"] = ensemble_name(r.which);
    j["v_total_exact"] = r.v_total_exact;
    j["v_sep"] = r.v_sep;
    j["probability"] = r.probability;
    j["split_low"] = r.split_low;
    j["split_high"] = r.split_high;
    j["points"] = r.points;
    j["grid"] = r.grid_size;
    j["interpolation_degree"] = r.interpolation_degree;
    detail::dump_json(path, j);
}

} // namespace sepvol

#endif
