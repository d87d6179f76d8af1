#ifndef SEPVOL_QUADRATURE_HPP
#define SEPVOL_QUADRATURE_HPP

// Gauss-Legendre rules with nodes found by Newton iteration on the
// Legendre recurrence, plus an adaptive bisection driver that pairs a
// 7-point and a 15-point rule for the error estimate. Intended for smooth
// integrands; intervals that refuse to converge raise numerical_error.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "sepvol/errors.hpp"

namespace sepvol {

struct GLNode {
    double x; // abscissa on [-1, 1]
    double w;
};

// n-point Gauss-Legendre rule on [-1, 1]
inline std::vector<GLNode> gauss_legendre_rule(unsigned n) {
    if (n < 1 || n > 128) throw std::invalid_argument("gauss_legendre_rule: bad order");
    std::vector<GLNode> rule(n);
    for (unsigned i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            // P_n(x) and P_n'(x) by upward recurrence
            double p0 = 1.0, p1 = x;
            for (unsigned k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        rule[i].x = x;
        rule[i].w = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

namespace detail {

inline const std::vector<GLNode>& gl_low() {
    static const std::vector<GLNode> r = gauss_legendre_rule(7);
    return r;
}

inline const std::vector<GLNode>& gl_high() {
    static const std::vector<GLNode> r = gauss_legendre_rule(15);
    return r;
}

} // namespace detail

template <class F>
double fixed_gauss(F&& f, double a, double b, const std::vector<GLNode>& rule) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (const auto& n : rule) acc += n.w * f(mid + half * n.x);
    return acc * half;
}

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    unsigned intervals = 0; // accepted subintervals
};

// Adaptive bisection: each interval is accepted once the 7/15 point
// difference falls below max(local absolute budget, rel_tol * |estimate|).
// The absolute budget halves with each split.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-16,
                                    double rel_tol = 1e-12,
                                    unsigned max_intervals = 20000) {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
        throw std::invalid_argument("integrate_adaptive: negative tolerance");
    if (a == b) return {};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    struct Piece {
        double lo, hi, tol;
    };
    std::vector<Piece> stack{{a, b, abs_tol}};
    QuadratureResult out;
    unsigned processed = 0;
    while (!stack.empty()) {
        if (++processed > 8 * max_intervals)
            throw numerical_error("integrate_adaptive: interval budget exhausted");
        const Piece p = stack.back();
        stack.pop_back();
        const double coarse = fixed_gauss(f, p.lo, p.hi, detail::gl_low());
        const double fine = fixed_gauss(f, p.lo, p.hi, detail::gl_high());
        const double err = std::abs(fine - coarse);
        const double width = p.hi - p.lo;
        const bool floor_hit = width <= 64.0 * std::numeric_limits<double>::epsilon() *
                                            std::max({std::abs(p.lo), std::abs(p.hi), 1.0});
        if (err <= std::max(p.tol, rel_tol * std::abs(fine)) || floor_hit) {
            out.value += fine;
            out.error_estimate += err;
            ++out.intervals;
            if (out.intervals > max_intervals)
                throw numerical_error("integrate_adaptive: did not converge");
            continue;
        }
        const double mid = 0.5 * (p.lo + p.hi);
        stack.push_back({p.lo, mid, 0.5 * p.tol});
        stack.push_back({mid, p.hi, 0.5 * p.tol});
    }
    out.value *= sign;
    return out;
}

} // namespace sepvol

#endif
