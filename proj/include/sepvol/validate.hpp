#ifndef SEPVOL_VALIDATE_HPP
#define SEPVOL_VALIDATE_HPP

// Built-in oracle checks, runnable at desk scale in a few seconds. Each
// check reports a measured value, its target and the tolerance used, so
// failures are diagnosable from the output alone. The calibration checks
// accept a deliberate scaling of the normalization constant as a fault
// injection hook for testing the harness itself.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sepvol/bloore.hpp"
#include "sepvol/estimator.hpp"
#include "sepvol/jacobian.hpp"
#include "sepvol/mu_quartic.hpp"
#include "sepvol/run_config.hpp"

namespace sepvol {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0; // |measured - expected| must not exceed this
    bool pass = false;
};

struct ValidateOptions {
    std::uint64_t points_real = 200000;
    std::uint64_t points_complex = 400000;
    std::uint64_t property_cases = 2000;
    std::uint64_t seed = 1;
    double normalization_scale = 1.0; // != 1 corrupts calibration on purpose
};

namespace detail {

inline CheckResult check_abs(std::string name, double measured, double expected,
                             double tolerance) {
    CheckResult r{std::move(name), measured, expected, tolerance, false};
    r.pass = std::abs(measured - expected) <= tolerance;
    return r;
}

template <class Rng>
BlooreReal random_z_real(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return BlooreReal{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

template <class Rng>
BlooreCplx random_z_cplx(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto c = [&] { return std::complex<double>(u(rng), u(rng)); };
    return BlooreCplx{c(), c(), c(), c(), c(), c()};
}

template <class S>
double oracle_min_eigenvalue(const BlooreVector<S>& z) {
    Eigen::Matrix4cd m;
    if constexpr (std::is_same_v<S, double>)
        m = to_matrix(z).template cast<std::complex<double>>();
    else
        m = to_matrix(z);
    return eigen_oracle(m)[0];
}

// density membership vs the eigenvalue oracle, skipping near-boundary
// cases where both sides legitimately waver
template <class S, class Rng>
CheckResult eigen_agreement(const std::string& name, Rng& rng, std::uint64_t cases) {
    std::uint64_t mismatches = 0;
    for (std::uint64_t i = 0; i < cases; ++i) {
        BlooreVector<S> z;
        if constexpr (std::is_same_v<S, double>) z = random_z_real(rng);
        else z = random_z_cplx(rng);
        const double lmin = oracle_min_eigenvalue(z);
        if (std::abs(lmin) < 1e-9) continue;
        if (is_density(z) != (lmin > 0.0)) ++mismatches;
    }
    return check_abs(name, double(mismatches), 0.0, 0.0);
}

template <class Rng>
CheckResult cad_agreement(Rng& rng, std::uint64_t cases) {
    std::uint64_t mismatches = 0;
    for (std::uint64_t i = 0; i < cases; ++i) {
        const BlooreReal z = random_z_real(rng);
        const CadBox box = cad_box(z.z12, z.z13, z.z14, z.z23, z.z24);
        const double margin =
            std::min({std::abs(z.z23 - box.i23[0]), std::abs(z.z23 - box.i23[1]),
                      std::abs(z.z24 - box.i24[0]), std::abs(z.z24 - box.i24[1]),
                      std::abs(z.z34 - box.i34[0]), std::abs(z.z34 - box.i34[1])});
        if (margin < 1e-9) continue;
        const bool inside = z.z23 >= box.i23[0] && z.z23 <= box.i23[1] &&
                            z.z24 >= box.i24[0] && z.z24 <= box.i24[1] &&
                            z.z34 >= box.i34[0] && z.z34 <= box.i34[1];
        if (inside != is_density(z)) ++mismatches;
    }
    return check_abs("cad-equivalence-real", double(mismatches), 0.0, 0.0);
}

template <class S, class Rng>
std::uint64_t path_mismatches(Rng& rng, std::uint64_t cases,
                              const std::shared_ptr<const std::vector<double>>& grid) {
    Accumulator fast(std::is_same_v<S, double> ? Ensemble::real : Ensemble::cplx, grid, 0);
    Accumulator slow(fast.ensemble(), grid, 0);
    for (std::uint64_t i = 0; i < cases; ++i) {
        BlooreVector<S> z;
        if constexpr (std::is_same_v<S, double>) z = random_z_real(rng);
        else z = random_z_cplx(rng);
        fast.add_sample(z, PathMode::fast);
        slow.add_sample(z, PathMode::slow);
    }
    const auto a = fast.counts(), b = slow.counts();
    std::uint64_t bad = 0;
    for (std::size_t j = 0; j < a.size(); ++j) bad += std::uint64_t(std::abs(a[j] - b[j]));
    return bad;
}

inline CheckResult calibration_check(Ensemble which, std::uint64_t points,
                                     std::uint64_t seed, double scale, double rel_tol) {
    RunConfig cfg;
    cfg.which = which;
    cfg.points = points;
    cfg.grid_size = 2;
    cfg.seed = seed;
    const auto grid = std::make_shared<const std::vector<double>>(cfg.grid());
    const SequenceSpec spec = cfg.sequence_spec();
    const auto acc = accumulate(spec, {spec.skip, spec.skip + points}, which, grid,
                                config_digest(cfg));
    const CalibrationResult cal = calibrate_total(f_table({acc}));
    const std::string name = std::string("calibration-") + ensemble_name(which);
    if (!cal.ok) return check_abs(name, -1.0, 0.0, 0.0);
    return check_abs(name, cal.estimate * scale, cal.target, rel_tol * cal.target);
}

inline CheckResult fold_symmetry_check(std::uint64_t points, std::uint64_t seed) {
    // f(mu) = f(1/mu): compare estimates at five mu > 1 with their inverses
    static const std::vector<double> nus{9.0 / 8.0, 5.0 / 4.0, 3.0 / 2.0, 7.0 / 4.0, 2.0};
    std::vector<double> gridv;
    for (const double nu : nus) {
        gridv.push_back(nu);
        gridv.push_back(1.0 / nu);
    }
    std::sort(gridv.begin(), gridv.end());
    const auto grid = std::make_shared<const std::vector<double>>(gridv);

    RunConfig cfg;
    cfg.points = points;
    cfg.seed = seed;
    const SequenceSpec spec = cfg.sequence_spec();
    // the interval isolation only covers [0, 1], so use the per-abscissa path
    const auto acc = accumulate(spec, {spec.skip, spec.skip + points}, Ensemble::real, grid,
                                config_digest(cfg), PathMode::slow);
    const auto counts = acc.counts();
    const double ff = normalization_for(Ensemble::real).f_factor();
    const double n = double(acc.total_points());
    double worst = 0.0;
    for (const double nu : nus) {
        const auto idx = [&](double v) {
            return std::size_t(std::lower_bound(gridv.begin(), gridv.end(), v) -
                               gridv.begin());
        };
        const double pa = double(counts[idx(nu)]) / n;
        const double pb = double(counts[idx(1.0 / nu)]) / n;
        const double sigma = ff * std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / n);
        if (sigma == 0.0) continue;
        worst = std::max(worst, std::abs(ff * (pa - pb)) / sigma);
    }
    return check_abs("f-fold-symmetry-real", worst, 0.0, 3.0);
}

} // namespace detail

inline std::vector<CheckResult> run_validation(const ValidateOptions& opt) {
    using detail::check_abs;
    std::vector<CheckResult> out;

    // exact-arithmetic and stable-evaluation checks
    const auto ev_r = JacobianEvaluator::make(Ensemble::real);
    const auto ev_c = JacobianEvaluator::make(Ensemble::cplx);
    const double ir = integral_check(ev_r), ic = integral_check(ev_c);
    out.push_back(check_abs("weight-integral-real", ir, exact_weight_integral(Ensemble::real),
                            1e-10 * exact_weight_integral(Ensemble::real)));
    out.push_back(check_abs("weight-integral-complex", ic,
                            exact_weight_integral(Ensemble::cplx),
                            1e-10 * exact_weight_integral(Ensemble::cplx)));

    const auto remainder_max = [](const MuSeries& s) {
        double worst = 0.0;
        for (const auto& q : s.remainders) worst = std::max(worst, std::abs(q.get_d()));
        return worst;
    };
    out.push_back(check_abs("series-remainder-real", remainder_max(ev_r.series()), 0.0, 0.0));
    out.push_back(
        check_abs("series-remainder-complex", remainder_max(ev_c.series()), 0.0, 0.0));

    for (const auto* ev : {&ev_r, &ev_c}) {
        const double sp = ev->switch_point();
        const double a = ev->closed_form(sp), b = ev->series()(sp);
        out.push_back(check_abs(std::string("switch-continuity-") +
                                    ensemble_name(ev->ensemble()),
                                std::abs(a - b) / std::abs(b), 0.0, 1e-12));
    }

    // pure arithmetic identities tying the volumes to the weight integrals
    const double pi = std::numbers::pi;
    out.push_back(check_abs(
        "normalization-identity-real",
        exact_total_volume(Ensemble::real) / (2.0 * exact_weight_integral(Ensemble::real)),
        512.0 * pi * pi / 27.0, 1e-12 * 512.0 * pi * pi / 27.0));
    out.push_back(check_abs(
        "normalization-identity-complex",
        exact_total_volume(Ensemble::cplx) / (2.0 * exact_weight_integral(Ensemble::cplx)),
        32.0 * std::pow(pi, 6) / 27.0, 1e-12 * 32.0 * std::pow(pi, 6) / 27.0));

    // randomized oracle agreement
    std::mt19937_64 rng(opt.seed);
    out.push_back(detail::eigen_agreement<double>("eigen-oracle-real", rng,
                                                  opt.property_cases));
    out.push_back(detail::eigen_agreement<std::complex<double>>("eigen-oracle-complex", rng,
                                                                opt.property_cases));
    out.push_back(detail::cad_agreement(rng, opt.property_cases));

    const auto small_grid = std::make_shared<const std::vector<double>>(make_grid(101));
    const auto fast_slow_r =
        detail::path_mismatches<double>(rng, opt.property_cases, small_grid);
    out.push_back(check_abs("path-equivalence-real", double(fast_slow_r), 0.0, 0.0));
    const auto fast_slow_c = detail::path_mismatches<std::complex<double>>(
        rng, std::max<std::uint64_t>(opt.property_cases / 10, 100), small_grid);
    out.push_back(check_abs("path-equivalence-complex", double(fast_slow_c), 0.0, 0.0));

    // sampling checks (QMC, deterministic given the seed)
    out.push_back(detail::calibration_check(Ensemble::real, opt.points_real, opt.seed,
                                            opt.normalization_scale, 0.015));
    out.push_back(detail::calibration_check(Ensemble::cplx, opt.points_complex, opt.seed,
                                            opt.normalization_scale, 0.10));
    out.push_back(detail::fold_symmetry_check(std::max<std::uint64_t>(opt.points_real / 4, 10000),
                                              opt.seed));
    return out;
}

} // namespace sepvol

#endif
