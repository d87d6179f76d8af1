#ifndef SEPVOL_MU_QUARTIC_HPP
#define SEPVOL_MU_QUARTIC_HPP

// The Peres-Horodecki determinant as a quartic in the diagonal ratio mu.
// For a 4x4 state the partial transpose has at most one negative
// eigenvalue, so det(rho_PT) >= 0 is equivalent to separability. In the
// Bloore variables det(rho_PT)/A depends on the diagonal only through
// mu = sqrt(rho11 rho44 / (rho22 rho33)), and
//     q(mu) = mu^2 * det(rho_PT) / A
// is a polynomial of degree 4 in mu (mu^2 > 0, so the sign is unchanged).

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sepvol/bloore.hpp"
#include "sepvol/errors.hpp"
#include "sepvol/quartic.hpp"

namespace sepvol {

// real case: explicit coefficients
inline QuarticPoly mu_quartic(const BlooreReal& z) {
    const double z12 = z.z12, z13 = z.z13, z14 = z.z14;
    const double z23 = z.z23, z24 = z.z24, z34 = z.z34;
    QuarticPoly q;
    q.c[4] = -z14 * z14;
    q.c[3] = 2.0 * z14 * (z12 * z13 + z24 * z34);
    q.c[2] = (z34 * z34 - 1.0) * z12 * z12
           - 2.0 * (z14 * z23 + z13 * z24) * z34 * z12
           - z13 * z13 + z14 * z14 * z23 * z23
           + (z13 * z13 - 1.0) * z24 * z24
           - z34 * z34 - 2.0 * z13 * z14 * z23 * z24 + 1.0;
    q.c[1] = 2.0 * z23 * (z12 * z24 + z13 * z34);
    q.c[0] = -z23 * z23;
    return q;
}

namespace detail {

template <class S>
double ptdet_q_reconstructed(const BlooreVector<S>& z, double mu) {
    const auto d = representative_diagonal(mu);
    const auto rho = reconstruct(z, d);
    const auto pt = partial_transpose(rho);
    const double A = d[0] * d[1] * d[2] * d[3];
    double det;
    if constexpr (std::is_same_v<S, double>) det = pt.determinant();
    else det = pt.determinant().real();
    return mu * mu * det / A;
}

} // namespace detail

// q extends continuously to mu = 0 (value -|z23|^2), which the grid needs
inline double ptdet_q(const BlooreReal& z, double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("ptdet_q: mu must be >= 0");
    return mu_quartic(z)(mu);
}

// complex case: recover the quartic coefficients by interpolating
// q at five nodes, then verify the degree bound at a sixth
inline QuarticPoly mu_quartic(const BlooreCplx& z) {
    static const std::array<double, 5> nodes{1.0 / 3.0, 0.5, 1.0, 1.5, 2.0};
    Eigen::Matrix<double, 5, 5> V;
    Eigen::Matrix<double, 5, 1> rhs;
    for (int r = 0; r < 5; ++r) {
        double p = 1.0;
        for (int c = 0; c < 5; ++c) { V(r, c) = p; p *= nodes[r]; }
        rhs(r) = detail::ptdet_q_reconstructed(z, nodes[r]);
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(V);
    if (!lu.isInvertible())
        throw numerical_error("mu_quartic: singular interpolation system");
    const Eigen::Matrix<double, 5, 1> c = lu.solve(rhs);
    QuarticPoly q;
    for (int k = 0; k < 5; ++k) q.c[k] = c(k);

    // a residual here means q was not actually a quartic in mu
    const double probe = 0.77;
    const double direct = detail::ptdet_q_reconstructed(z, probe);
    const double interp = q(probe);
    const double scale = std::max({1.0, std::abs(direct), std::abs(interp)});
    if (std::abs(direct - interp) > 1e-9 * scale)
        throw numerical_error("mu_quartic: interpolation residual exceeds 1e-9");
    return q;
}

// complex case: no printed closed form; evaluate through the reconstructed
// matrix and its partial transpose (polynomial limit at mu = 0)
inline double ptdet_q(const BlooreCplx& z, double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("ptdet_q: mu must be >= 0");
    if (mu == 0.0) return mu_quartic(z)(0.0);
    return detail::ptdet_q_reconstructed(z, mu);
}

template <class S>
bool is_separable(const BlooreVector<S>& z, double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("is_separable: mu must be >= 0");
    return is_density(z) && ptdet_q(z, mu) >= -boundary_tol;
}

// Closed subintervals of [0, 1] where q(mu) >= 0, i.e. where the state
// with ratio mu is separable. Non-density z yields the empty list. A
// quartic has at most 4 roots in (0, 1), so at most 3 components.
template <class S>
std::vector<std::array<double, 2>> separable_mu_set(const BlooreVector<S>& z) {
    std::vector<std::array<double, 2>> out;
    if (!is_density(z)) return out;
    const QuarticPoly q = mu_quartic(z);

    std::vector<double> cuts = real_roots_in(q, 0.0, 1.0);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(1.0);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-15) continue;
        if (q(0.5 * (a + b)) >= 0.0) {
            if (!out.empty() && out.back()[1] >= a - 1e-15) out.back()[1] = b;
            else out.push_back({a, b});
        }
    }
    return out;
}

} // namespace sepvol

#endif
