#ifndef SEPVOL_QUARTIC_HPP
#define SEPVOL_QUARTIC_HPP

// Real roots of polynomials up to degree 4 via companion-matrix
// eigenvalues, with a Newton polish. Written for the partial-transpose
// quartic whose coefficients are O(1) (products of entries bounded by 1),
// so absolute thresholds are used throughout.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace sepvol {

struct QuarticPoly {
    // c[k] multiplies mu^k
    std::array<double, 5> c{};

    double operator()(double mu) const {
        return (((c[4] * mu + c[3]) * mu + c[2]) * mu + c[1]) * mu + c[0];
    }
    double deriv(double mu) const {
        return ((4.0 * c[4] * mu + 3.0 * c[3]) * mu + 2.0 * c[2]) * mu + c[1];
    }
};

namespace detail {

// eigenvalues of the companion matrix of the monic polynomial
// x^n + a[n-1] x^(n-1) + ... + a[0]
template <int N>
void companion_roots(const std::array<double, N>& a, std::vector<std::complex<double>>& out) {
    Eigen::Matrix<double, N, N> m = Eigen::Matrix<double, N, N>::Zero();
    for (int i = 1; i < N; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < N; ++i) m(i, N - 1) = -a[i];
    Eigen::EigenSolver<Eigen::Matrix<double, N, N>> es(m, false);
    for (int i = 0; i < N; ++i) out.push_back(es.eigenvalues()(i));
}

} // namespace detail

// Real roots of p inside [lo, hi], sorted ascending, roots closer than
// merge_tol merged, complex pairs with |imag| < imag_tol treated as real
// double roots. Degenerate leading coefficients reduce the degree.
inline std::vector<double> real_roots_in(const QuarticPoly& p, double lo, double hi,
                                         double merge_tol = 1e-12, double imag_tol = 1e-10) {
    constexpr double lead_tol = 1e-14;
    int deg = 4;
    while (deg > 0 && std::abs(p.c[deg]) < lead_tol) --deg;

    std::vector<std::complex<double>> cand;
    switch (deg) {
    case 0:
        return {};
    case 1:
        cand.emplace_back(-p.c[0] / p.c[1], 0.0);
        break;
    case 2: {
        const double a = p.c[2], b = p.c[1], c = p.c[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            // stable split: avoid cancellation in the smaller root
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            cand.emplace_back(q / a, 0.0);
            cand.emplace_back(q != 0.0 ? c / q : -b / (2.0 * a), 0.0);
        } else {
            cand.emplace_back(-b / (2.0 * a), std::sqrt(-disc) / (2.0 * a));
            cand.emplace_back(-b / (2.0 * a), -std::sqrt(-disc) / (2.0 * a));
        }
        break;
    }
    case 3: {
        std::array<double, 3> a{p.c[0] / p.c[3], p.c[1] / p.c[3], p.c[2] / p.c[3]};
        detail::companion_roots<3>(a, cand);
        break;
    }
    default: {
        std::array<double, 4> a{p.c[0] / p.c[4], p.c[1] / p.c[4], p.c[2] / p.c[4],
                                p.c[3] / p.c[4]};
        detail::companion_roots<4>(a, cand);
        break;
    }
    }

    std::vector<double> roots;
    for (const auto& r : cand) {
        if (std::abs(r.imag()) >= imag_tol) continue;
        double x = r.real();
        // one Newton step unless the root is (near) multiple
        const double d = p.deriv(x);
        if (std::abs(d) > 1e-8) x -= p(x) / d;
        if (x >= lo - 1e-9 && x <= hi + 1e-9) roots.push_back(std::clamp(x, lo, hi));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return b - a < merge_tol; }),
                roots.end());
    return roots;
}

} // namespace sepvol

#endif
