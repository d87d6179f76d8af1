#ifndef SEPVOL_JACOBIAN_HPP
#define SEPVOL_JACOBIAN_HPP

// Radial volume-element weight jac(mu) for the two ensembles. The closed
// form is a quotient of a log-bearing polynomial by (mu^2 - 1)^9 (real)
// or ^15 (complex); both top and bottom vanish at mu = 1, and in double
// precision the cancellation destroys the value well before that point.
// Three evaluation routes are provided:
//   naive        plain double closed form (diagnostic; unstable near 1)
//   closed_form  the same expression in MPFR at a caller-chosen precision
//   operator()   closed_form below the switch point, the exact-rational
//                Taylor series about mu = 1 above it
// Route disagreement near the switch point is a test criterion, not an
// implementation concern: both sides agree to ~1e-12 relative there.

#include <mpfr.h>

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "sepvol/bloore.hpp"
#include "sepvol/errors.hpp"
#include "sepvol/quadrature.hpp"
#include "sepvol/rational_series.hpp"

namespace sepvol {
namespace detail {

class MpfrValue {
public:
    explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    MpfrValue(const MpfrValue&) = delete;
    MpfrValue& operator=(const MpfrValue&) = delete;
    ~MpfrValue() { mpfr_clear(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// Horner evaluation of sum_k c[k] y^k into out
inline void mpfr_poly(mpfr_ptr out, mpfr_srcptr y, const long* c, std::size_t n) {
    mpfr_set_si(out, c[n - 1], MPFR_RNDN);
    for (std::size_t k = n - 1; k-- > 0;) {
        mpfr_mul(out, out, y, MPFR_RNDN);
        mpfr_add_si(out, out, c[k], MPFR_RNDN);
    }
}

struct WeightForm {
    std::array<long, 8> log_part;  // L(mu^2): multiplies log(mu)
    std::array<long, 8> pure_part; // K(mu^2): no log
    std::size_t terms;
    long log_scale;
    long pure_scale;
    unsigned mu_power;   // leading mu^p factor
    unsigned pole_order; // power of (mu^2 - 1)
    long den_scale;
};

inline const WeightForm& weight_form(Ensemble which) {
    static const WeightForm real{{1, 16, 36, 16, 1, 0, 0, 0},
                                 {-5, -32, 0, 32, 5, 0, 0, 0},
                                 5,
                                 12,
                                 -5,
                                 4,
                                 9,
                                 1890};
    static const WeightForm cplx{{1, 49, 441, 1225, 1225, 441, 49, 1},
                                 {-363, -9947, -48363, -42875, 42875, 48363, 9947, 363},
                                 8,
                                 140,
                                 -1,
                                 7,
                                 15,
                                 1801800};
    return which == Ensemble::real ? real : cplx;
}

} // namespace detail

// plain double closed form; returns the exact limit at mu = 1
inline double jacobian_naive(Ensemble which, double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("jacobian_naive: mu must be >= 0");
    if (mu == 0.0) return 0.0;
    const auto& fm = detail::weight_form(which);
    if (mu == 1.0)
        return which == Ensemble::real ? 1.0 / 198450.0 : 1.0 / 1325095200.0;
    const double m2 = mu * mu;
    double lp = fm.log_part[fm.terms - 1], pp = fm.pure_part[fm.terms - 1];
    for (std::size_t k = fm.terms - 1; k-- > 0;) {
        lp = lp * m2 + fm.log_part[k];
        pp = pp * m2 + fm.pure_part[k];
    }
    const double num = fm.log_scale * lp * std::log(mu) + fm.pure_scale * pp;
    return std::pow(mu, fm.mu_power) * num /
           (fm.den_scale * std::pow(m2 - 1.0, fm.pole_order));
}

// the same closed form carried out in MPFR, rounded to double at the end
inline double jacobian_closed_form(Ensemble which, double mu, unsigned prec_bits = 320) {
    if (!(mu >= 0.0)) throw std::domain_error("jacobian_closed_form: mu must be >= 0");
    if (prec_bits < 64 || prec_bits > 8192)
        throw std::invalid_argument("jacobian_closed_form: precision out of range");
    if (mu == 0.0) return 0.0;
    if (mu == 1.0)
        return which == Ensemble::real ? 1.0 / 198450.0 : 1.0 / 1325095200.0;
    const auto& fm = detail::weight_form(which);
    const auto prec = static_cast<mpfr_prec_t>(prec_bits);
    detail::MpfrValue x(prec), x2(prec), lp(prec), pp(prec), t(prec);
    mpfr_set_d(x.get(), mu, MPFR_RNDN);
    mpfr_sqr(x2.get(), x.get(), MPFR_RNDN);
    detail::mpfr_poly(lp.get(), x2.get(), fm.log_part.data(), fm.terms);
    detail::mpfr_poly(pp.get(), x2.get(), fm.pure_part.data(), fm.terms);
    mpfr_log(t.get(), x.get(), MPFR_RNDN);          // log mu
    mpfr_mul(lp.get(), lp.get(), t.get(), MPFR_RNDN);
    mpfr_mul_si(lp.get(), lp.get(), fm.log_scale, MPFR_RNDN);
    mpfr_mul_si(pp.get(), pp.get(), fm.pure_scale, MPFR_RNDN);
    mpfr_add(lp.get(), lp.get(), pp.get(), MPFR_RNDN); // numerator polynomial part
    mpfr_pow_ui(t.get(), x.get(), fm.mu_power, MPFR_RNDN);
    mpfr_mul(lp.get(), lp.get(), t.get(), MPFR_RNDN);
    mpfr_sub_ui(t.get(), x2.get(), 1, MPFR_RNDN);
    mpfr_pow_ui(t.get(), t.get(), fm.pole_order, MPFR_RNDN);
    mpfr_mul_si(t.get(), t.get(), fm.den_scale, MPFR_RNDN);
    mpfr_div(lp.get(), lp.get(), t.get(), MPFR_RNDN);
    return mpfr_get_d(lp.get(), MPFR_RNDN);
}

class JacobianEvaluator {
public:
    static JacobianEvaluator make(Ensemble which, double switch_point = 0.95,
                                  unsigned series_degree = 100) {
        if (!(switch_point > 0.5) || !(switch_point < 1.0))
            throw std::invalid_argument(
                "JacobianEvaluator: switch point must lie in (0.5, 1)");
        JacobianEvaluator ev;
        ev.which_ = which;
        ev.switch_point_ = switch_point;
        ev.series_ = std::make_shared<const MuSeries>(series_about_one(which, series_degree));
        return ev;
    }

    Ensemble ensemble() const { return which_; }
    double switch_point() const { return switch_point_; }
    unsigned series_degree() const { return series_->degree(); }
    const MuSeries& series() const { return *series_; }

    // value at mu = 1 (exact rational constant, rounded)
    double at_one() const { return series_->coeff_d[0]; }

    // stable evaluation on (0, 1]; callers fold mu > 1 via mu -> 1/mu
    double operator()(double mu) const {
        if (!(mu > 0.0) || mu > 1.0)
            throw std::domain_error("JacobianEvaluator: mu must lie in (0, 1]");
        if (mu >= switch_point_) return (*series_)(mu);
        return jacobian_closed_form(which_, mu, stable_prec_bits);
    }

    double naive(double mu) const { return jacobian_naive(which_, mu); }

    double closed_form(double mu, unsigned prec_bits = stable_prec_bits) const {
        return jacobian_closed_form(which_, mu, prec_bits);
    }

    // integral of the weight alone over [lo, hi] within [0, 1]
    QuadratureResult integrate(double lo, double hi) const {
        if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo <= hi))
            throw std::domain_error("JacobianEvaluator::integrate: need 0 <= lo <= hi <= 1");
        const auto self = [this](double m) { return (*this)(m); };
        QuadratureResult total;
        const double cut = std::min(std::max(switch_point_, lo), hi);
        if (cut > lo) {
            auto r = integrate_adaptive(self, lo, cut, 1e-24, 1e-13);
            total.value += r.value;
            total.error_estimate += r.error_estimate;
            total.intervals += r.intervals;
        }
        if (hi > cut) {
            auto r = integrate_adaptive(self, cut, hi, 1e-24, 1e-13);
            total.value += r.value;
            total.error_estimate += r.error_estimate;
            total.intervals += r.intervals;
        }
        return total;
    }

    static constexpr unsigned stable_prec_bits = 320;

private:
    JacobianEvaluator() = default;

    Ensemble which_ = Ensemble::real;
    double switch_point_ = 0.95;
    std::shared_ptr<const MuSeries> series_;
};

// full-interval integral, for comparison against the exact constants
inline double integral_check(const JacobianEvaluator& ev) {
    return ev.integrate(0.0, 1.0).value;
}

} // namespace sepvol

#endif
