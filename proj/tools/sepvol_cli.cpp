// sepvol command-line front end.
//
// Subcommands:
//   estimate-f   run the QMC sweep, write <out>.csv/.json/.ckpt.json
//   integrate    turn an f-table into a separable-volume report
//   jacobian     dump (mu, weight) tables, stable or naive-diagnostic
//   validate     run the built-in oracle checks
//
// Exit codes: 0 ok, 2 usage/domain, 3 input, 4 numerical, 5 validation.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sepvol/driver.hpp"
#include "sepvol/estimator.hpp"
#include "sepvol/io.hpp"
#include "sepvol/jacobian.hpp"
#include "sepvol/run_config.hpp"
#include "sepvol/validate.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_input = 3;
constexpr int exit_numerical = 4;
constexpr int exit_validation = 5;

struct EstimateArgs {
    std::optional<std::string> config_file, case_name, sequence, path, out;
    std::optional<std::uint64_t> points, seed, checkpoint_every;
    std::optional<std::int64_t> skip;
    std::optional<std::uint64_t> grid;
    std::vector<double> grid_extra;
    bool grid_extra_set = false;
    std::optional<double> switch_point;
    std::optional<unsigned> series_degree, interp_degree, workers;
    bool resume = false;
};

sepvol::RunConfig build_config(const EstimateArgs& a) {
    sepvol::RunConfig cfg;
    if (a.config_file) cfg = sepvol::load_config_file(*a.config_file, cfg);
    if (a.case_name) cfg.which = sepvol::ensemble_from_name(*a.case_name);
    if (a.points) cfg.points = *a.points;
    if (a.grid) cfg.grid_size = static_cast<std::size_t>(*a.grid);
    if (a.grid_extra_set) cfg.grid_extra = a.grid_extra;
    if (a.seed) cfg.seed = *a.seed;
    if (a.sequence) cfg.sequence = sepvol::seq_kind_from_name(*a.sequence);
    if (a.skip) cfg.skip = *a.skip;
    if (a.switch_point) cfg.switch_point = *a.switch_point;
    if (a.series_degree) cfg.series_degree = *a.series_degree;
    if (a.interp_degree) cfg.interp_degree = *a.interp_degree;
    if (a.path) cfg.path = sepvol::path_mode_from_name(*a.path);
    if (a.workers) cfg.workers = *a.workers;
    if (a.out) cfg.out_path = *a.out;
    if (a.checkpoint_every) cfg.checkpoint_every = *a.checkpoint_every;
    cfg.resume = a.resume;
    return cfg;
}

int cmd_estimate_f(const EstimateArgs& args) {
    const sepvol::RunConfig cfg = build_config(args);
    const sepvol::FTable table = sepvol::run_estimate(cfg, &std::cerr);
    const sepvol::TablePaths paths = sepvol::table_paths(cfg.out_path);
    sepvol::write_ftable_csv(paths.csv, table);
    sepvol::write_sidecar(paths.sidecar, cfg, table);

    const auto cal = sepvol::calibrate_total(table);
    std::cout << "table:       " << paths.csv << "\n"
              << "sidecar:     " << paths.sidecar << "\n"
              << "checkpoint:  " << paths.checkpoint << "\n"
              << "points:      " << table.total_points << "\n"
              << "density:     " << table.density_count << "\n";
    if (cal.ok)
        std::cout << "calibration: " << cal.estimate << " vs exact " << cal.target
                  << " (rel err " << cal.relative_error << ")\n";
    return exit_ok;
}

struct IntegrateArgs {
    std::string table;
    std::optional<std::string> out, case_name;
    std::optional<double> switch_point;
    std::optional<unsigned> series_degree, interp_degree;
};

int cmd_integrate(const IntegrateArgs& args) {
    std::string base = args.table;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
        base.resize(base.size() - 4);
    const sepvol::TablePaths paths = sepvol::table_paths(base);
    auto [table, cfg] = sepvol::read_ftable(paths);

    // refuse tampered or mismatched inputs before any arithmetic
    if (sepvol::config_digest(cfg) != table.config_digest)
        throw sepvol::input_error("table digest does not match its config; refusing");
    if (args.case_name && sepvol::ensemble_from_name(*args.case_name) != cfg.which)
        throw sepvol::input_error("--case disagrees with the table's case; refusing");
    if (table.grid != cfg.grid())
        throw sepvol::input_error("table grid does not match its config; refusing");
    if (table.separable_count.size() != table.grid.size())
        throw sepvol::input_error("table row count mismatch");
    for (const auto c : table.separable_count)
        if (c < 0 || c > table.density_count)
            throw sepvol::input_error("table counts violate invariants");

    if (args.switch_point) cfg.switch_point = *args.switch_point;
    if (args.series_degree) cfg.series_degree = *args.series_degree;
    if (args.interp_degree) cfg.interp_degree = *args.interp_degree;

    const auto ev =
        sepvol::JacobianEvaluator::make(cfg.which, cfg.switch_point, cfg.series_degree);
    const sepvol::VolumeReport rep = sepvol::integrate_volume(table, ev, cfg.interp_degree);
    const std::string out = args.out ? *args.out : base + ".report.json";
    sepvol::write_volume_report(out, rep);

    const bool real = rep.which == sepvol::Ensemble::real;
    std::cout << std::setprecision(10);
    std::cout << "case:                 " << sepvol::ensemble_name(rep.which) << "\n"
              << "points:               " << rep.points << "\n"
              << "v_total (exact):      " << rep.v_total_exact << "\n"
              << "v_sep:                " << rep.v_sep << "\n"
              << "  [0, " << ev.switch_point() << "] part:    " << rep.split_low << "\n"
              << "  [" << ev.switch_point() << ", 1] part:    " << rep.split_high << "\n"
              << "probability:          " << rep.probability << "\n"
              << "reference v_sep:      " << (real ? 0.0007298112 : 2.625622678e-7) << "\n"
              << "reference prob:       " << (real ? 0.45313001 : 0.23250991) << "\n";
    if (!real) {
        const double conj = 84084.0 * std::sqrt(3.0) / (625.0 * std::pow(std::numbers::pi, 6));
        std::cout << "conjectured exact:    " << conj << "  (2^2 3 7^2 11 13 sqrt(3) / (5^4 pi^6))\n";
    }
    std::cout << "report:               " << out << "\n";
    return exit_ok;
}

struct JacobianArgs {
    std::string case_name = "real";
    std::string mode = "stable";
    unsigned grid = 1001;
    std::vector<double> mu;
    std::string out = "-";
    std::optional<double> switch_point;
    std::optional<unsigned> series_degree;
};

int cmd_jacobian(const JacobianArgs& args) {
    const sepvol::Ensemble which = sepvol::ensemble_from_name(args.case_name);
    if (args.mode != "stable" && args.mode != "naive")
        throw std::invalid_argument("--mode must be stable or naive");
    if (args.grid < 1) throw std::invalid_argument("--grid must be >= 1");

    std::vector<double> mus = args.mu;
    if (mus.empty())
        for (unsigned j = 1; j <= args.grid; ++j) mus.push_back(double(j) / args.grid);
    for (const double m : mus)
        if (!(m > 0.0) || m > 1.0)
            throw std::domain_error("abscissa " + sepvol::detail::format_double(m) +
                                    " outside (0, 1]");

    std::optional<sepvol::JacobianEvaluator> ev;
    if (args.mode == "stable")
        ev = sepvol::JacobianEvaluator::make(which, args.switch_point.value_or(0.95),
                                             args.series_degree.value_or(100));

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (args.out != "-") {
        file.open(args.out);
        if (!file) throw sepvol::input_error("cannot open '" + args.out + "' for writing");
        os = &file;
    }
    *os << "mu,jac\n";
    for (const double m : mus) {
        const double v = ev ? (*ev)(m) : sepvol::jacobian_naive(which, m);
        *os << sepvol::detail::format_double(m) << ',' << sepvol::detail::format_double(v)
            << '\n';
    }
    if (!*os) throw sepvol::input_error("write failed");
    return exit_ok;
}

struct ValidateArgs {
    sepvol::ValidateOptions opt;
    std::optional<std::string> out;
};

int cmd_validate(const ValidateArgs& args) {
    const auto results = sepvol::run_validation(args.opt);
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(32) << r.name
                  << std::setprecision(12) << " measured=" << r.measured
                  << " expected=" << r.expected << " tol=" << r.tolerance << "\n";
    }
    if (args.out) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : results)
            j.push_back({{"name", r.name},
                         {"measured", r.measured},
                         {"expected", r.expected},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
        sepvol::detail::dump_json(*args.out, j);
    }
    std::cout << (all_pass ? "all checks passed\n" : "CHECKS FAILED\n");
    return all_pass ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"separable-volume estimation for two-qubit states"};
    app.require_subcommand(1);

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate-f", "run the QMC sweep and write an f-table");
    est->add_option("--config", ea.config_file, "key=value config file (flags win)");
    est->add_option("--case", ea.case_name, "real or complex");
    est->add_option("--points", ea.points, "number of QMC points");
    est->add_option("--grid", ea.grid, "uniform grid size on [0,1]");
    est->add_option("--grid-extra", ea.grid_extra, "extra grid abscissas")->delimiter(',');
    est->add_option("--seed", ea.seed, "scrambling / PRNG seed");
    est->add_option("--sequence", ea.sequence, "faure, scrambled-faure or uniform-prng");
    est->add_option("--skip", ea.skip, "initial indices to skip (-1: base^4)");
    est->add_option("--workers", ea.workers, "worker threads");
    est->add_option("--switch-point", ea.switch_point, "series switch point");
    est->add_option("--series-degree", ea.series_degree, "series truncation degree");
    est->add_option("--interp-degree", ea.interp_degree, "interpolation degree");
    est->add_option("--path", ea.path, "fast or slow counting path");
    est->add_option("--out", ea.out, "output base path");
    est->add_option("--checkpoint-every", ea.checkpoint_every, "points between checkpoints");
    est->add_flag("--resume", ea.resume, "resume from <out>.ckpt.json");

    IntegrateArgs ia;
    auto* intg = app.add_subcommand("integrate", "integrate an f-table into a volume report");
    intg->add_option("--table", ia.table, "f-table base path (or .csv path)")->required();
    intg->add_option("--out", ia.out, "report path (default <table>.report.json)");
    intg->add_option("--case", ia.case_name, "expected case; mismatch refuses the table");
    intg->add_option("--switch-point", ia.switch_point, "override switch point");
    intg->add_option("--series-degree", ia.series_degree, "override series degree");
    intg->add_option("--interp-degree", ia.interp_degree, "override interpolation degree");

    JacobianArgs ja;
    auto* jac = app.add_subcommand("jacobian", "dump the radial weight as CSV");
    jac->add_option("--case", ja.case_name, "real or complex");
    jac->add_option("--grid", ja.grid, "evaluate at j/grid for j=1..grid");
    jac->add_option("--mu", ja.mu, "explicit abscissas instead of a grid")->delimiter(',');
    jac->add_option("--mode", ja.mode, "stable or naive (cancellation diagnostic)");
    jac->add_option("--out", ja.out, "output path, - for stdout");
    jac->add_option("--switch-point", ja.switch_point, "series switch point");
    jac->add_option("--series-degree", ja.series_degree, "series truncation degree");

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "run the built-in oracle checks");
    val->add_option("--points-real", va.opt.points_real, "real calibration points");
    val->add_option("--points-complex", va.opt.points_complex, "complex calibration points");
    val->add_option("--cases", va.opt.property_cases, "randomized cases per property");
    val->add_option("--seed", va.opt.seed, "RNG seed for the property suites");
    val->add_option("--corrupt-normalization", va.opt.normalization_scale,
                    "fault injection: scale the calibration estimate");
    val->add_option("--out", va.out, "also write results as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (est->parsed()) {
            ea.grid_extra_set = est->count("--grid-extra") > 0;
            return cmd_estimate_f(ea);
        }
        if (intg->parsed()) return cmd_integrate(ia);
        if (jac->parsed()) return cmd_jacobian(ja);
        if (val->parsed()) return cmd_validate(va);
    } catch (const sepvol::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input;
    } catch (const sepvol::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const sepvol::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_usage;
}
