#pragma once

#include <array>
#include <string>

#include "embedlog/matrix.hpp"
#include "embedlog/tolerances.hpp"

namespace embedlog {

/// Eigendecomposition M = P diag(1, lambda, mu, conj(mu)) P^-1 of a matrix in
/// the spectral class: lambda in (0,1), Im(mu) > 0.
template <class Real>
struct Spectrum {
    std::array<Complex<Real>, 4> eigenvalues;  ///< [1, lambda, mu, conj(mu)]
    CMat4<Real> eigenvectors;                  ///< P, columns in eigenvalue order
    CMat4<Real> inverse;                       ///< P^-1
    Real condition{0};                         ///< ||P||_inf ||P^-1||_inf

    const Real& lambda() const { return eigenvalues[1].re; }
    const Complex<Real>& mu() const { return eigenvalues[2]; }

    /// P diag(eigenvalues) P^-1, real part.
    RMat4<Real> recompose() const;
};

/// Result of removing the known right eigenvector (1,1,1,1) from a matrix
/// with constant row sums: H m H = [[row_sum, coupling], [0, block]] with H
/// the symmetric orthogonal 4x4 Hadamard matrix / 2.
template <class Real>
struct Deflation {
    Real row_sum{0};
    std::array<Real, 3> coupling{};
    std::array<std::array<Real, 3>, 3> block{};
    Real residual{0};  ///< largest discarded entry of the first column below the diagonal
};

template <class Real>
Deflation<Real> deflate(const RMat4<Real>& m);

/// Roots of x^3 - c2 x^2 + c1 x - c0 in closed form: one real root via
/// Cardano (Newton-polished) plus the quadratic factor, or the trigonometric
/// form when all three are real. Ordered real roots first, complex pair with
/// Im >= 0 before its conjugate.
template <class Real>
struct CubicRoots {
    std::array<Complex<Real>, 3> roots;
    bool one_real_pair = false;   ///< one real root and a non-real conjugate pair
    Real normalized_discriminant{0};  ///< discriminant of the cubic in x / scale
};

template <class Real>
CubicRoots<Real> solve_cubic(const Real& c2, const Real& c1, const Real& c0);

/// Characteristic coefficients (trace, sum of principal minors, determinant)
/// of a 3x3 block.
template <class Real>
std::array<Real, 3> characteristic_coefficients(const std::array<std::array<Real, 3>, 3>& block);

/// The four eigenvalues of any matrix having (1,1,1,1) as right eigenvector:
/// the row sum followed by the three roots of the deflated block.
template <class Real>
std::array<Complex<Real>, 4> deflated_eigenvalues(const RMat4<Real>& m);

/// Throws RowSumViolation or SpectrumOutOfClass (with a diagnostic naming the
/// failed test).
template <class Real>
Spectrum<Real> eigendecompose_markov(const RMat4<Real>& m, const Tolerances& tol = {});

}  // namespace embedlog
