#ifndef SEPVOL_BLOORE_HPP
#define SEPVOL_BLOORE_HPP

// Bloore-style parameterization of 4x4 density matrices:
//   rho_ij = sqrt(rho_ii rho_jj) z_ij,  |z_ij| <= 1,
// which factors det(rho) = A * B with A = prod(rho_ii) and B = det(Z),
// Z the unit-diagonal matrix of the z_ij. Positivity of rho depends on z
// alone, so the diagonal and off-diagonal sectors decouple.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "sepvol/errors.hpp"

namespace sepvol {

enum class Ensemble { real, cplx };

inline const char* ensemble_name(Ensemble e) {
    return e == Ensemble::real ? "real" : "complex";
}

inline Ensemble ensemble_from_name(const std::string& s) {
    if (s == "real") return Ensemble::real;
    if (s == "complex") return Ensemble::cplx;
    throw std::invalid_argument("unknown case '" + s + "' (expected real|complex)");
}

// values within +/- boundary_tol of zero count as nonnegative in all
// positivity tests (shared convention across the library)
inline constexpr double boundary_tol = 1e-12;

template <class S>
struct BlooreVector {
    S z12, z13, z14, z23, z24, z34;

    // entry above the diagonal, 1-based indices i < j
    S entry(int i, int j) const {
        if (i == 1 && j == 2) return z12;
        if (i == 1 && j == 3) return z13;
        if (i == 1 && j == 4) return z14;
        if (i == 2 && j == 3) return z23;
        if (i == 2 && j == 4) return z24;
        if (i == 3 && j == 4) return z34;
        throw std::invalid_argument("BlooreVector::entry: bad index pair");
    }
};

using BlooreReal = BlooreVector<double>;
using BlooreCplx = BlooreVector<std::complex<double>>;

namespace detail {

inline double abs2(double x) { return x * x; }
inline double abs2(const std::complex<double>& x) { return std::norm(x); }

inline double conj_(double x) { return x; }
inline std::complex<double> conj_(const std::complex<double>& x) { return std::conj(x); }

} // namespace detail

// unit-diagonal correlation-style matrix of the z entries
template <class S>
Eigen::Matrix<S, 4, 4> to_matrix(const BlooreVector<S>& z) {
    Eigen::Matrix<S, 4, 4> m;
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = S(1);
    m(0, 1) = z.z12; m(1, 0) = detail::conj_(z.z12);
    m(0, 2) = z.z13; m(2, 0) = detail::conj_(z.z13);
    m(0, 3) = z.z14; m(3, 0) = detail::conj_(z.z14);
    m(1, 2) = z.z23; m(2, 1) = detail::conj_(z.z23);
    m(1, 3) = z.z24; m(3, 1) = detail::conj_(z.z24);
    m(2, 3) = z.z34; m(3, 2) = detail::conj_(z.z34);
    return m;
}

// det(Z) for the real case, as the explicit degree-6 polynomial
inline double factor_B(const BlooreReal& z) {
    const double z12 = z.z12, z13 = z.z13, z14 = z.z14;
    const double z23 = z.z23, z24 = z.z24, z34 = z.z34;
    return (z34 * z34 - 1.0) * z12 * z12
         + 2.0 * (z14 * (z24 - z23 * z34) + z13 * (z23 - z24 * z34)) * z12
         - z23 * z23 - z24 * z24 - z34 * z34
         + z14 * z14 * (z23 * z23 - 1.0)
         + z13 * z13 * (z24 * z24 - 1.0)
         + 2.0 * z23 * z24 * z34
         + 2.0 * z13 * z14 * (z34 - z23 * z24)
         + 1.0;
}

// det(Z) for the complex case; the determinant of a Hermitian matrix is
// real, so the imaginary part is dropped (it is roundoff only)
inline double factor_B(const BlooreCplx& z) {
    return to_matrix(z).determinant().real();
}

// principal 3x3 minor of Z for a strictly increasing index triple out of
// {1,2,3,4}: det = 1 - |a|^2 - |b|^2 - |c|^2 + 2 Re(a conj(b) c)
// with a = z_ij, b = z_ik, c = z_jk
template <class S>
double minor3(const BlooreVector<S>& z, const std::array<int, 3>& idx) {
    const auto [i, j, k] = idx;
    if (!(1 <= i && i < j && j < k && k <= 4))
        throw std::invalid_argument("minor3: index triple must be strictly increasing in 1..4");
    const S a = z.entry(i, j), b = z.entry(i, k), c = z.entry(j, k);
    const S cross = a * detail::conj_(b) * c;
    double re;
    if constexpr (std::is_same_v<S, double>) re = cross;
    else re = cross.real();
    return 1.0 - detail::abs2(a) - detail::abs2(b) - detail::abs2(c) + 2.0 * re;
}

// Positivity test for the reconstructed density matrix, valid inside the
// componentwise box |z_ij| <= 1: the box plus B >= 0 plus one principal
// 3x3 minor >= 0 is sufficient (the 3x3 block is PSD by a Gershgorin
// argument, and Cauchy interlacing then pins every eigenvalue but one,
// whose sign det Z settles a.e.).
template <class S>
bool is_density(const BlooreVector<S>& z) {
    const double lim = 1.0 + boundary_tol;
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            if (std::sqrt(detail::abs2(z.entry(i, j))) > lim) return false;
    return factor_B(z) >= -boundary_tol && minor3(z, {1, 2, 3}) >= -boundary_tol;
}

// Nested one-dimensional bounds of the density-matrix region in the order
// z23, z24, z34 (cylindrical decomposition over the free box on
// z12, z13, z14). Inside the feasible region the two inner radicands of
// the z34 bound are individually negative; their product is the
// nonnegative quantity used here, clamped at zero against roundoff.
struct CadBox {
    std::array<double, 2> i23, i24, i34;
    bool degenerate = false; // 1 - z12^2 vanished; i34 is the limit interval
};

inline CadBox cad_box(double z12, double z13, double z14, double z23, double z24) {
    for (double v : {z12, z13, z14})
        if (!(std::abs(v) <= 1.0 + boundary_tol))
            throw std::domain_error("cad_box: z12, z13, z14 must lie in [-1, 1]");
    CadBox box;
    const double r12 = std::sqrt(std::max(0.0, 1.0 - z12 * z12));
    const double r13 = std::sqrt(std::max(0.0, 1.0 - z13 * z13));
    const double r14 = std::sqrt(std::max(0.0, 1.0 - z14 * z14));
    box.i23 = {z12 * z13 - r12 * r13, z12 * z13 + r12 * r13};
    box.i24 = {z12 * z14 - r12 * r14, z12 * z14 + r12 * r14};

    const double den = 1.0 - z12 * z12;
    if (den < 1e-14) {
        // z12 = +-1 collapses z23, z24 to points; rows 1 and 2 of Z merge
        // and the surviving constraint is the 3x3 minor on {1,3,4}
        box.degenerate = true;
        const double r = r13 * r14;
        box.i34 = {z13 * z14 - r, z13 * z14 + r};
        return box;
    }
    const double p1 = 1.0 - z12 * z12 - z13 * z13 + 2.0 * z12 * z13 * z23 - z23 * z23;
    const double p2 = 1.0 - z12 * z12 - z14 * z14 + 2.0 * z12 * z14 * z24 - z24 * z24;
    const double s = std::sqrt(std::max(0.0, p1 * p2));
    const double num = z13 * z14 - z12 * z14 * z23 - z12 * z13 * z24 + z23 * z24;
    box.i34 = {(num - s) / den, (num + s) / den};
    return box;
}

// trace-1 diagonal with rho11 = rho44, rho22 = rho33 and diagonal ratio
// sqrt(rho11 rho44 / (rho22 rho33)) = mu; any mu > 0 is meaningful (the
// estimation pipeline restricts itself to (0, 1])
inline std::array<double, 4> representative_diagonal(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("representative_diagonal: mu must be positive");
    const double t = 1.0 / (2.0 * (1.0 + mu));
    return {mu * t, t, t, mu * t};
}

template <class S>
Eigen::Matrix<S, 4, 4> reconstruct(const BlooreVector<S>& z, const std::array<double, 4>& diag) {
    for (double d : diag)
        if (!(d > 0.0)) throw std::domain_error("reconstruct: diagonal entries must be positive");
    Eigen::Matrix<S, 4, 4> m = to_matrix(z);
    std::array<double, 4> sq;
    for (int i = 0; i < 4; ++i) sq[i] = std::sqrt(diag[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) *= sq[i] * sq[j];
    return m;
}

// partial transpose over the second qubit: transpose each 2x2 block of the
// 4x4 matrix partitioned into 2x2 blocks
template <class S>
Eigen::Matrix<S, 4, 4> partial_transpose(const Eigen::Matrix<S, 4, 4>& m) {
    Eigen::Matrix<S, 4, 4> r;
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
            r.template block<2, 2>(2 * bi, 2 * bj) =
                m.template block<2, 2>(2 * bi, 2 * bj).transpose();
    return r;
}

// ascending eigenvalues of a Hermitian 4x4; rejects visibly non-Hermitian
// input (test oracle, not used by the estimation hot path)
inline std::array<double, 4> eigen_oracle(const Eigen::Matrix4cd& m, double herm_tol = 1e-12) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (((m - m.adjoint()).cwiseAbs().maxCoeff()) > herm_tol * scale)
        throw std::domain_error("eigen_oracle: matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    std::array<double, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

} // namespace sepvol

#endif
