#ifndef SEPVOL_ESTIMATOR_HPP
#define SEPVOL_ESTIMATOR_HPP

// Estimation of the separable-volume profile f(mu): QMC samples of the
// off-diagonal cube are classified per grid abscissa, counts are reduced
// into an FTable, and the separable volume is assembled by integrating
// the interpolated profile against the radial weight.
//
// The sampling estimate of f is
//     f(mu) ~= w * 2^m * separable_count(mu) / total_points
// where 2^m is the volume of the sampling cube and w the constant
// relating Lebesgue measure on the cube to the Hilbert-Schmidt volume
// element of the off-diagonal sector. Both constants are pinned by the
// calibration identity  V_total = 2 * (integral of weight) * w * 2^m *
// density_fraction  against the exact total volumes below.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sepvol/bloore.hpp"
#include "sepvol/errors.hpp"
#include "sepvol/faure.hpp"
#include "sepvol/jacobian.hpp"
#include "sepvol/mu_quartic.hpp"
#include "sepvol/quadrature.hpp"

namespace sepvol {

// exact Hilbert-Schmidt volume of the full state set
inline double exact_total_volume(Ensemble which) {
    const double pi = std::numbers::pi;
    return which == Ensemble::real ? pi * pi * pi * pi / 60480.0
                                   : std::pow(pi, 6) / 851350500.0;
}

// exact value of the integral of the radial weight over [0, 1]
inline double exact_weight_integral(Ensemble which) {
    const double pi = std::numbers::pi;
    return which == Ensemble::real ? pi * pi / 2293760.0 : 1.0 / 2018016000.0;
}

struct Normalization {
    double weight;      // HS measure of the off-diagonal sector per unit cube
    double cube_volume; // 2^m
    double f_factor() const { return weight * cube_volume; }
};

inline Normalization normalization_for(Ensemble which) {
    // (sqrt(2))^6 resp. 2^6 for the independent off-diagonal entries, times
    // 2 from the diagonal-sector metric; validated by calibrate_total
    return which == Ensemble::real ? Normalization{16.0, 64.0}
                                   : Normalization{128.0, 4096.0};
}

// closed uniform grid on [0, 1] plus optional extra abscissas
inline std::vector<double> make_grid(std::size_t n, const std::vector<double>& extras = {}) {
    if (n < 2) throw std::invalid_argument("make_grid: need at least 2 points");
    std::vector<double> g;
    g.reserve(n + extras.size());
    for (std::size_t j = 0; j < n; ++j) g.push_back(double(j) / double(n - 1));
    for (double e : extras) {
        if (!(e >= 0.0) || e > 1.0)
            throw std::invalid_argument("make_grid: extra abscissa outside [0, 1]");
        g.push_back(e);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

// affine map of the unit cube onto the Bloore box [-1, 1]^6
inline BlooreReal sample_to_z_real(std::span<const double> u) {
    if (u.size() != 6) throw std::invalid_argument("sample_to_z_real: need 6 coordinates");
    const auto m = [](double x) { return 2.0 * x - 1.0; };
    return BlooreReal{m(u[0]), m(u[1]), m(u[2]), m(u[3]), m(u[4]), m(u[5])};
}

// consecutive coordinate pairs become (Re, Im); entries whose modulus
// leaves the unit disc simply fail the later density check
inline BlooreCplx sample_to_z_cplx(std::span<const double> u) {
    if (u.size() != 12) throw std::invalid_argument("sample_to_z_cplx: need 12 coordinates");
    const auto m = [](double re, double im) {
        return std::complex<double>(2.0 * re - 1.0, 2.0 * im - 1.0);
    };
    return BlooreCplx{m(u[0], u[1]), m(u[2], u[3]), m(u[4], u[5]),
                      m(u[6], u[7]), m(u[8], u[9]), m(u[10], u[11])};
}

// fast: quartic root isolation once per sample; slow: the per-abscissa
// membership test, kept as an oracle for the fast path
enum class PathMode { fast, slow };

inline const char* path_mode_name(PathMode m) {
    return m == PathMode::fast ? "fast" : "slow";
}

inline PathMode path_mode_from_name(const std::string& s) {
    if (s == "fast") return PathMode::fast;
    if (s == "slow") return PathMode::slow;
    throw std::invalid_argument("unknown path mode '" + s + "'");
}

// Per-range counts. Interval marking goes through a difference array, so
// a sample costs O(log grid) after root isolation; counts are integers
// and merging is exact, associative and commutative.
class Accumulator {
public:
    Accumulator(Ensemble which, std::shared_ptr<const std::vector<double>> grid,
                std::uint64_t config_digest)
        : which_(which), grid_(std::move(grid)), digest_(config_digest) {
        if (!grid_ || grid_->size() < 2 ||
            !std::is_sorted(grid_->begin(), grid_->end()))
            throw std::invalid_argument("Accumulator: grid must be sorted, size >= 2");
        diff_.assign(grid_->size() + 1, 0);
    }

    Ensemble ensemble() const { return which_; }
    const std::vector<double>& grid() const { return *grid_; }
    const std::shared_ptr<const std::vector<double>>& grid_ptr() const { return grid_; }
    std::uint64_t digest() const { return digest_; }
    std::int64_t density_count() const { return density_; }
    std::int64_t total_points() const { return total_; }
    std::uint64_t range_begin() const { return begin_; }
    std::uint64_t range_end() const { return end_; }

    template <class S>
    void add_sample(const BlooreVector<S>& z, PathMode mode = PathMode::fast) {
        ++total_;
        if (!is_density(z)) return;
        ++density_;
        const auto& g = *grid_;
        if (mode == PathMode::fast) {
            for (const auto& seg : separable_mu_set(z)) {
                const auto lo = std::lower_bound(g.begin(), g.end(), seg[0]);
                const auto hi = std::upper_bound(g.begin(), g.end(), seg[1]);
                if (lo == hi) continue;
                ++diff_[std::size_t(lo - g.begin())];
                --diff_[std::size_t(hi - g.begin())];
            }
        } else {
            for (std::size_t j = 0; j < g.size(); ++j)
                if (is_separable(z, g[j])) {
                    ++diff_[j];
                    --diff_[j + 1];
                }
        }
    }

    void set_range(std::uint64_t b, std::uint64_t e) { begin_ = b, end_ = e; }

    void merge(const Accumulator& o) {
        if (o.digest_ != digest_ || o.which_ != which_ || *o.grid_ != *grid_)
            throw input_error("Accumulator::merge: mismatched configurations");
        for (std::size_t i = 0; i < diff_.size(); ++i) diff_[i] += o.diff_[i];
        density_ += o.density_;
        total_ += o.total_;
        begin_ = std::min(begin_, o.begin_);
        end_ = std::max(end_, o.end_);
    }

    std::vector<std::int64_t> counts() const {
        std::vector<std::int64_t> c(grid_->size());
        std::int64_t run = 0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            run += diff_[j];
            c[j] = run;
        }
        return c;
    }

    // rebuild from serialized counts (checkpoint loading)
    static Accumulator restore(Ensemble which, std::shared_ptr<const std::vector<double>> grid,
                               std::uint64_t digest, const std::vector<std::int64_t>& counts,
                               std::int64_t density, std::int64_t total, std::uint64_t begin,
                               std::uint64_t end) {
        Accumulator a(which, std::move(grid), digest);
        if (counts.size() != a.grid_->size())
            throw input_error("Accumulator::restore: count vector does not match grid");
        std::int64_t prev = 0;
        for (std::size_t j = 0; j < counts.size(); ++j) {
            a.diff_[j] = counts[j] - prev;
            prev = counts[j];
        }
        a.diff_[counts.size()] = -prev;
        a.density_ = density;
        a.total_ = total;
        a.begin_ = begin;
        a.end_ = end;
        return a;
    }

private:
    Ensemble which_;
    std::shared_ptr<const std::vector<double>> grid_;
    std::uint64_t digest_;
    std::vector<std::int64_t> diff_;
    std::int64_t density_ = 0;
    std::int64_t total_ = 0;
    std::uint64_t begin_ = UINT64_MAX;
    std::uint64_t end_ = 0;
};

// classify every stream index in [range.begin, range.end)
inline Accumulator accumulate(const SequenceSpec& spec, IndexRange range, Ensemble which,
                              std::shared_ptr<const std::vector<double>> grid,
                              std::uint64_t config_digest, PathMode mode = PathMode::fast) {
    const unsigned want = which == Ensemble::real ? 6u : 12u;
    if (spec.dimension != want)
        throw std::invalid_argument("accumulate: sequence dimension does not match ensemble");
    Accumulator acc(which, std::move(grid), config_digest);
    PointStream stream(spec);
    std::vector<double> u(spec.dimension);
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
        stream.point_at(i, u);
        if (which == Ensemble::real)
            acc.add_sample(sample_to_z_real(u), mode);
        else
            acc.add_sample(sample_to_z_cplx(u), mode);
    }
    acc.set_range(range.begin, range.end);
    return acc;
}

struct FTable {
    Ensemble which = Ensemble::real;
    std::vector<double> grid;
    std::vector<std::int64_t> separable_count;
    std::int64_t density_count = 0;
    std::int64_t total_points = 0;
    Normalization norm{};
    std::uint64_t config_digest = 0;

    double f_at(std::size_t j) const {
        if (total_points <= 0) throw input_error("FTable: no points accumulated");
        return norm.f_factor() * double(separable_count.at(j)) / double(total_points);
    }

    // piecewise Lagrange interpolation on the knot values; the stencil is
    // the degree+1 knots centred on the bracketing cell
    double interpolate(double mu, unsigned degree = 3) const {
        const std::size_t n = grid.size();
        if (degree < 1 || degree + 1 > n)
            throw std::invalid_argument("FTable::interpolate: bad degree for grid size");
        if (!(mu >= grid.front()) || mu > grid.back())
            throw std::domain_error("FTable::interpolate: abscissa outside grid");
        std::size_t cell =
            std::size_t(std::upper_bound(grid.begin(), grid.end(), mu) - grid.begin());
        cell = cell > 0 ? cell - 1 : 0;
        if (cell > n - 2) cell = n - 2;
        const std::size_t span = degree + 1;
        std::size_t s = cell > (degree - 1) / 2 ? cell - (degree - 1) / 2 : 0;
        if (s + span > n) s = n - span;
        double acc = 0.0;
        for (std::size_t a = s; a < s + span; ++a) {
            double basis = 1.0;
            for (std::size_t b = s; b < s + span; ++b)
                if (b != a) basis *= (mu - grid[b]) / (grid[a] - grid[b]);
            acc += basis * f_at(a);
        }
        return acc;
    }
};

// merge partial accumulators into the final table
inline FTable f_table(const std::vector<Accumulator>& parts) {
    if (parts.empty()) throw input_error("f_table: no accumulators");
    Accumulator merged = parts.front();
    for (std::size_t k = 1; k < parts.size(); ++k) merged.merge(parts[k]);
    FTable t;
    t.which = merged.ensemble();
    t.grid = merged.grid();
    t.separable_count = merged.counts();
    t.density_count = merged.density_count();
    t.total_points = merged.total_points();
    t.norm = normalization_for(t.which);
    t.config_digest = merged.digest();
    for (const auto c : t.separable_count)
        if (c < 0 || c > t.density_count)
            throw validation_error("f_table: count invariant violated");
    if (t.density_count > t.total_points)
        throw validation_error("f_table: density count exceeds total");
    return t;
}

struct CalibrationResult {
    double estimate = 0.0;
    double target = 0.0;
    double relative_error = 0.0;
    bool ok = false; // false: degenerate table, estimate meaningless
    std::string note;
};

// V_total from the density fraction and the exact weight integral alone;
// a direct check of the normalization constants against the known volume
inline CalibrationResult calibrate_total(const FTable& t) {
    CalibrationResult r;
    r.target = exact_total_volume(t.which);
    if (t.total_points <= 0) {
        r.note = "no points accumulated";
        return r;
    }
    const double fraction = double(t.density_count) / double(t.total_points);
    r.estimate = 2.0 * exact_weight_integral(t.which) * t.norm.f_factor() * fraction;
    r.relative_error = (r.estimate - r.target) / r.target;
    r.ok = true;
    return r;
}

struct VolumeReport {
    Ensemble which = Ensemble::real;
    double v_total_exact = 0.0;
    double v_sep = 0.0;
    double probability = 0.0;
    double split_low = 0.0;  // 2 * integral over [0, switch_point]
    double split_high = 0.0; // 2 * integral over [switch_point, 1]
    std::int64_t points = 0;
    std::size_t grid_size = 0;
    unsigned interpolation_degree = 3;
};

// V_sep = 2 * integral of weight * f over [0, 1], split at the
// evaluator's switch point; cell-wise Gauss rule on the interpolant
inline VolumeReport integrate_volume(const FTable& t, const JacobianEvaluator& ev,
                                     unsigned interp_degree = 3) {
    if (t.total_points <= 0) throw input_error("integrate_volume: no points accumulated");
    if (t.which != ev.ensemble())
        throw std::invalid_argument("integrate_volume: table/evaluator ensemble mismatch");
    if (t.grid.size() < interp_degree + 1)
        throw std::invalid_argument("integrate_volume: grid too small for degree");
    static const std::vector<GLNode> rule = gauss_legendre_rule(8);
    const double sp = ev.switch_point();
    const auto integrand = [&](double m) { return ev(m) * t.interpolate(m, interp_degree); };
    double low = 0.0, high = 0.0;
    for (std::size_t j = 0; j + 1 < t.grid.size(); ++j) {
        const double a = t.grid[j], b = t.grid[j + 1];
        if (!(a < b)) continue;
        if (b <= sp)
            low += fixed_gauss(integrand, a, b, rule);
        else if (a >= sp)
            high += fixed_gauss(integrand, a, b, rule);
        else {
            low += fixed_gauss(integrand, a, sp, rule);
            high += fixed_gauss(integrand, sp, b, rule);
        }
    }
    VolumeReport r;
    r.which = t.which;
    r.v_total_exact = exact_total_volume(t.which);
    r.split_low = 2.0 * low;
    r.split_high = 2.0 * high;
    r.v_sep = r.split_low + r.split_high;
    r.probability = r.v_sep / r.v_total_exact;
    r.points = t.total_points;
    r.grid_size = t.grid.size();
    r.interpolation_degree = interp_degree;
    return r;
}

} // namespace sepvol

#endif
