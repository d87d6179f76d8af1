#ifndef SEPVOL_DRIVER_HPP
#define SEPVOL_DRIVER_HPP

// Sweep driver: walks the configured point range in checkpoint-sized
// chunks, fanning each chunk out over the worker pool. Because counts
// are integers over disjoint index ranges, the result is bitwise
// independent of worker count, chunking and merge order. A checkpoint is
// written after every chunk (so also at the end of the run); resuming
// verifies the stream digest and picks up at the stored cursor, and may
// extend the run to a larger point target.

#include <algorithm>
#include <future>
#include <memory>
#include <ostream>
#include <vector>

#include "sepvol/estimator.hpp"
#include "sepvol/io.hpp"
#include "sepvol/run_config.hpp"

namespace sepvol {

inline FTable run_estimate(const RunConfig& cfg, std::ostream* log = nullptr) {
    if (cfg.points == 0) throw input_error("run_estimate: nothing to do (points = 0)");
    const SequenceSpec spec = cfg.sequence_spec();
    const auto grid = std::make_shared<const std::vector<double>>(cfg.grid());
    const std::uint64_t cdig = config_digest(cfg);
    const std::uint64_t sdig = stream_digest(cfg);
    const TablePaths paths = table_paths(cfg.out_path);

    Accumulator master(cfg.which, grid, cdig);
    std::uint64_t done = 0;

    if (cfg.resume) {
        const Checkpoint ck = read_checkpoint(paths.checkpoint);
        if (ck.stream_digest_value != sdig)
            throw input_error("resume refused: checkpoint was written by a different "
                              "stream configuration");
        if (ck.cursor < spec.skip || ck.cursor - spec.skip != std::uint64_t(ck.total_points))
            throw input_error("resume refused: checkpoint cursor is inconsistent");
        master = Accumulator::restore(cfg.which, grid, cdig, ck.counts, ck.density_count,
                                      ck.total_points, ck.range_begin, ck.range_end);
        done = ck.cursor - spec.skip;
        if (done > cfg.points)
            throw input_error("resume refused: checkpoint already covers " +
                              std::to_string(done) + " points, more than requested");
        if (log) *log << "resuming at " << done << " / " << cfg.points << " points\n";
    }

    const std::uint64_t chunk_size = cfg.checkpoint_every ? cfg.checkpoint_every : cfg.points;
    const unsigned workers = std::max(1u, cfg.workers);
    while (done < cfg.points) {
        const std::uint64_t n = std::min(chunk_size, cfg.points - done);
        SequenceSpec chunk = spec;
        chunk.skip = spec.skip + done;
        const auto ranges = partition(chunk, workers, n);
        if (workers == 1) {
            for (const auto& r : ranges)
                master.merge(accumulate(spec, r, cfg.which, grid, cdig, cfg.path));
        } else {
            std::vector<std::future<Accumulator>> parts;
            parts.reserve(ranges.size());
            for (const auto& r : ranges)
                parts.push_back(std::async(std::launch::async, [&spec, &cfg, &grid, cdig, r] {
                    return accumulate(spec, r, cfg.which, grid, cdig, cfg.path);
                }));
            for (auto& p : parts) master.merge(p.get());
        }
        done += n;
        write_checkpoint(paths.checkpoint, cfg, master, spec.skip + done);
        if (log) *log << "progress: " << done << " / " << cfg.points << " points\n";
    }
    return f_table({master});
}

} // namespace sepvol

#endif
