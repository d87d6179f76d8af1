#ifndef SEPVOL_RATIONAL_SERIES_HPP
#define SEPVOL_RATIONAL_SERIES_HPP

// Exact-rational Taylor expansion of the two volume-element weights about
// mu = 1. The closed forms are quotients whose numerator and denominator
// both vanish there (to order 9 in the real case, 15 in the complex one),
// so the expansion is done in t = mu - 1 with GMP rationals: expand the
// numerator, verify the leading t coefficients cancel exactly, strip them,
// and divide by the remaining unit power series. No floating point is
// involved until the final rounding of the coefficients.

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sepvol/bloore.hpp"

namespace sepvol {
namespace detail {

using QSeries = std::vector<mpq_class>; // coeff[k] multiplies t^k

inline QSeries qs_zero(std::size_t n) { return QSeries(n, mpq_class(0)); }

inline QSeries qs_mul(const QSeries& a, const QSeries& b, std::size_t n) {
    QSeries r = qs_zero(n);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i] == 0) continue;
        const std::size_t jmax = std::min(b.size(), n - i);
        for (std::size_t j = 0; j < jmax; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline void qs_axpy(QSeries& acc, const mpq_class& s, const QSeries& a) {
    if (acc.size() < a.size()) acc.resize(a.size(), mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) acc[i] += s * a[i];
}

// log(1 + t) truncated to n coefficients
inline QSeries qs_log1p(std::size_t n) {
    QSeries r = qs_zero(n);
    for (std::size_t k = 1; k < n; ++k) {
        r[k] = mpq_class(1, static_cast<unsigned long>(k));
        if (k % 2 == 0) r[k] = -r[k];
    }
    return r;
}

// polynomial sum_j a[j] mu^j rewritten in t = mu - 1
inline QSeries qs_poly_in_t(const std::vector<long>& mu_coeff, std::size_t n) {
    QSeries r = qs_zero(n);
    mpz_class binom;
    for (std::size_t j = 0; j < mu_coeff.size(); ++j) {
        if (mu_coeff[j] == 0) continue;
        const std::size_t kmax = std::min(j + 1, n);
        for (std::size_t k = 0; k < kmax; ++k) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(j),
                         static_cast<unsigned long>(k));
            r[k] += mpq_class(mu_coeff[j]) * mpq_class(binom);
        }
    }
    return r;
}

// a / b with b[0] != 0, truncated to n coefficients
inline QSeries qs_div_unit(const QSeries& a, const QSeries& b, std::size_t n) {
    if (b.empty() || b[0] == 0)
        throw std::logic_error("qs_div_unit: divisor has zero constant term");
    QSeries r = qs_zero(n);
    for (std::size_t k = 0; k < n; ++k) {
        mpq_class acc = k < a.size() ? a[k] : mpq_class(0);
        for (std::size_t j = 1; j <= k && j < b.size(); ++j) acc -= b[j] * r[k - j];
        r[k] = acc / b[0];
    }
    return r;
}

} // namespace detail

// weight(1 + t) = sum_k coeff[k] t^k; the stripped leading numerator
// coefficients are kept so callers can confirm the cancellation was exact
struct MuSeries {
    Ensemble which = Ensemble::real;
    std::vector<mpq_class> coeff;
    std::vector<mpq_class> remainders; // must all be exactly zero
    std::vector<double> coeff_d;

    unsigned degree() const { return coeff.empty() ? 0 : unsigned(coeff.size() - 1); }

    double operator()(double mu) const {
        const double t = mu - 1.0;
        double acc = 0.0;
        for (std::size_t k = coeff_d.size(); k-- > 0;) acc = acc * t + coeff_d[k];
        return acc;
    }
};

inline MuSeries series_about_one(Ensemble which, unsigned degree) {
    using namespace detail;
    if (degree < 20 || degree > 4096)
        throw std::invalid_argument("series_about_one: degree must be in 20..4096");

    const bool real = which == Ensemble::real;
    const std::size_t shift = real ? 9 : 15;          // vanishing order at mu = 1
    const long den_scale = real ? 1890 : 1801800;
    const std::size_t n = degree + shift + 1;         // working truncation

    // numerator pieces as polynomials in mu
    std::vector<long> logpoly, purepoly;
    long logscale, purescale;
    if (real) {
        // 12 G log(mu) - 5 H
        logpoly = {1, 0, 16, 0, 36, 0, 16, 0, 1};
        purepoly = {-5, 0, -32, 0, 0, 0, 32, 0, 5};
        logscale = 12;
        purescale = -5;
    } else {
        // 140 L log(mu) - P
        logpoly = {1, 0, 49, 0, 441, 0, 1225, 0, 1225, 0, 441, 0, 49, 0, 1};
        purepoly = {-363, 0, -9947, 0, -48363, 0, -42875, 0,
                    42875, 0, 48363, 0, 9947,  0, 363};
        logscale = 140;
        purescale = -1;
    }

    QSeries num = qs_mul(qs_poly_in_t(logpoly, n), qs_log1p(n), n);
    for (auto& q : num) q *= logscale;
    qs_axpy(num, mpq_class(purescale), qs_poly_in_t(purepoly, n));

    // leading mu^4 (real) or mu^7 (complex) factor
    std::vector<long> lead(real ? 5 : 8, 0);
    lead.back() = 1;
    num = qs_mul(num, qs_poly_in_t(lead, n), n);

    MuSeries out;
    out.which = which;
    out.remainders.assign(num.begin(), num.begin() + shift);
    for (const auto& q : out.remainders)
        if (q != 0)
            throw std::logic_error("series_about_one: numerator does not vanish to "
                                   "the expected order at mu = 1");

    // (mu^2 - 1)^shift = t^shift (t + 2)^shift; the t^shift part cancelled above
    QSeries shifted(num.begin() + shift, num.end());
    QSeries den = qs_zero(shift + 1); // den_scale (t + 2)^shift, binomial expansion
    {
        mpz_class binom, pw;
        for (std::size_t k = 0; k <= shift; ++k) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(shift),
                         static_cast<unsigned long>(k));
            mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(shift - k));
            den[k] = mpq_class(binom * pw) * den_scale;
        }
    }

    out.coeff = qs_div_unit(shifted, den, degree + 1);
    out.coeff_d.reserve(out.coeff.size());
    for (const auto& q : out.coeff) out.coeff_d.push_back(q.get_d());
    return out;
}

} // namespace sepvol

#endif
