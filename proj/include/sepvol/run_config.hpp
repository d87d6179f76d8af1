#ifndef SEPVOL_RUN_CONFIG_HPP
#define SEPVOL_RUN_CONFIG_HPP

// Run configuration, its human-readable file form, and the digests that
// stamp every output. Two digests serve different jobs:
//   config_digest  covers every semantics-bearing field; embedded in
//                  tables and reports so mismatched artifacts are refused
//   stream_digest  covers only the fields that determine the point
//                  stream and counting semantics (not the point target or
//                  the integration stage), so a checkpointed run can be
//                  resumed and extended to a larger point count
// Worker count, paths and checkpoint cadence never enter a digest: they
// must not affect results.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sepvol/bloore.hpp"
#include "sepvol/errors.hpp"
#include "sepvol/estimator.hpp"
#include "sepvol/faure.hpp"

namespace sepvol {

struct RunConfig {
    Ensemble which = Ensemble::real;
    std::uint64_t points = 100000;
    std::size_t grid_size = 2001;
    std::vector<double> grid_extra;
    std::uint64_t seed = 1;
    SeqKind sequence = SeqKind::faure;
    std::int64_t skip = -1; // -1: sequence default (base^4)
    double switch_point = 0.95;
    unsigned series_degree = 100;
    unsigned interp_degree = 3;
    PathMode path = PathMode::fast;
    // non-semantic plumbing
    unsigned workers = 1;
    std::string out_path = "ftable";
    std::uint64_t checkpoint_every = 0; // 0: checkpoint only at the end
    bool resume = false;

    unsigned dimension() const { return which == Ensemble::real ? 6u : 12u; }

    SequenceSpec sequence_spec() const {
        return make_sequence_spec(sequence, dimension(), seed, skip);
    }

    std::vector<double> grid() const { return make_grid(grid_size, grid_extra); }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline void stream_fields(const RunConfig& c, std::ostringstream& os) {
    os << "case=" << ensemble_name(c.which) << ";grid=" << c.grid_size << ";extra=";
    for (const double e : c.grid_extra) os << format_double(e) << ",";
    os << ";seed=" << c.seed << ";sequence=" << seq_kind_name(c.sequence)
       << ";skip=" << c.skip << ";path=" << path_mode_name(c.path) << ";";
}

} // namespace detail

inline std::uint64_t stream_digest(const RunConfig& c) {
    std::ostringstream os;
    detail::stream_fields(c, os);
    return detail::fnv1a(os.str());
}

inline std::uint64_t config_digest(const RunConfig& c) {
    std::ostringstream os;
    detail::stream_fields(c, os);
    os << "points=" << c.points << ";switch=" << detail::format_double(c.switch_point)
       << ";series=" << c.series_degree << ";interp=" << c.interp_degree << ";";
    return detail::fnv1a(os.str());
}

inline std::string digest_hex(std::uint64_t d) {
    char buf[17];
    for (int i = 15; i >= 0; --i) {
        buf[i] = "0123456789abcdef"[d & 0xf];
        d >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

inline std::uint64_t digest_from_hex(const std::string& s) {
    if (s.size() != 16) throw input_error("digest_from_hex: expected 16 hex digits");
    std::uint64_t d = 0;
    for (const char ch : s) {
        d <<= 4;
        if (ch >= '0' && ch <= '9') d |= std::uint64_t(ch - '0');
        else if (ch >= 'a' && ch <= 'f') d |= std::uint64_t(ch - 'a' + 10);
        else throw input_error("digest_from_hex: bad character");
    }
    return d;
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw input_error("config: bad numeric value for '" + key + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw input_error("config: bad integer value for '" + key + "'");
    return v;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const auto b = item.find_last_not_of(" \t");
        out.push_back(parse_double(item.substr(a, b - a + 1), key));
    }
    return out;
}

} // namespace detail

// apply one key=value setting (shared by config files and flag overlays)
inline void apply_config_entry(RunConfig& c, const std::string& key, const std::string& val) {
    using namespace detail;
    if (key == "case") c.which = ensemble_from_name(val);
    else if (key == "points") c.points = parse_u64(val, key);
    else if (key == "grid") c.grid_size = static_cast<std::size_t>(parse_u64(val, key));
    else if (key == "grid-extra") c.grid_extra = parse_double_list(val, key);
    else if (key == "seed") c.seed = parse_u64(val, key);
    else if (key == "sequence") c.sequence = seq_kind_from_name(val);
    else if (key == "skip") c.skip = val == "default" ? -1 : std::int64_t(parse_u64(val, key));
    else if (key == "switch-point") c.switch_point = parse_double(val, key);
    else if (key == "series-degree") c.series_degree = unsigned(parse_u64(val, key));
    else if (key == "interp-degree") c.interp_degree = unsigned(parse_u64(val, key));
    else if (key == "path") c.path = path_mode_from_name(val);
    else if (key == "workers") c.workers = unsigned(parse_u64(val, key));
    else if (key == "out") c.out_path = val;
    else if (key == "checkpoint-every") c.checkpoint_every = parse_u64(val, key);
    else throw input_error("config: unknown key '" + key + "'");
}

// key = value lines; '#' starts a comment; later entries win
inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config file '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string stripped = strip(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw input_error("config: line " + std::to_string(lineno) + " is not key=value");
        try {
            apply_config_entry(base, strip(stripped.substr(0, eq)),
                               strip(stripped.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw input_error("config: line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

} // namespace sepvol

#endif
