#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "embedlog/embed.hpp"
#include "embedlog/matrix.hpp"
#include "embedlog/tolerances.hpp"

namespace embedlog {

/// Largest |l| accepted by the family constructors.
constexpr std::int64_t kMaxFamilyIndex = 6;

/// M = P D P^-1 with unique Markov generator Log_l(M).
template <class Real>
struct FamilyInstance {
    std::int64_t l = 0;
    MarkovMatrix<Real> m;
    RateMatrix<Real> expected_generator;
    CMat4<Real> p_matrix;
    CMat4<Real> d_matrix;
};

/// Eigenvalues lambda and mu of the unperturbed family member l.
template <class Real>
Real family_lambda(std::int64_t l);
template <class Real>
Complex<Real> family_mu(std::int64_t l);

/// Eigenvector matrix with columns (1,1,1,1), v_lambda, v_mu, conj(v_mu).
template <class Real>
CMat4<Real> family_p(std::int64_t l);

/// Real basis S with P = S R, R = [[1,0,0,0],[0,1,0,0],[0,0,1,1],[0,0,i,-i]].
template <class Real>
RMat4<Real> family_s(std::int64_t l);

template <class Real>
CMat4<Real> r_matrix();

/// Throws LOutOfRange for |l| > 6 or when the construction fails its
/// round-trip check.
template <class Real>
FamilyInstance<Real> build_example(std::int64_t l, const Tolerances& tol = {});

/// pi/4 times the integer matrix of Log_k for the family member l.
template <class Real>
RMat4<Real> closed_form_log(std::int64_t l, std::int64_t k);

template <class Real>
struct PerturbationDelta {
    std::array<Real, 12> delta{};  ///< delta[0] is delta_1
    double kappa = 1e-3;

    const Real& operator[](std::size_t i) const { return delta[i - 1]; }  ///< 1-based
    Real& operator[](std::size_t i) { return delta[i - 1]; }
};

/// A_delta = [[1,d1,d4,d7],[0,1,d5,d8],[0,d2,1,d9],[0,d3,d6,1]].
template <class Real>
RMat4<Real> a_matrix(const PerturbationDelta<Real>& d);

/// diag(1, (1+d10) lambda, |mu| (d11 + i(1+d12)), conj). The pair is scaled
/// by |mu| so that d11 moves the argument by O(d11) whatever the modulus.
template <class Real>
CMat4<Real> d_matrix(std::int64_t l, const PerturbationDelta<Real>& d);

/// M_delta = (S A R) D (S A R)^-1. Throws DeltaOutOfBound, NotMarkov,
/// LOutOfRange.
template <class Real>
MarkovMatrix<Real> build_perturbed(std::int64_t l, const PerturbationDelta<Real>& d, const Tolerances& tol = {});

/// Inverse of build_perturbed off the set delta6 + delta9 = 0. Throws
/// NearDegenerateY, NotInFamily.
template <class Real>
PerturbationDelta<Real> recover_delta(std::int64_t l, const MarkovMatrix<Real>& m, double kappa = 1e-3,
                                      const Tolerances& tol = {});

/// Uniform on the open box (-kappa, kappa)^12, resampled until
/// |delta6 + delta9| >= y_guard. Bit-identical across platforms for a seed.
template <class Real>
PerturbationDelta<Real> sample_delta(std::mt19937_64& rng, double kappa, double y_guard);

/// Halves kappa until every corner of the box (at 0.999 kappa) yields a
/// Markov matrix for this l.
double validated_kappa(std::int64_t l, double kappa = 1e-3, const Tolerances& tol = {});

template <class Real>
struct WitnessMargins {
    Real generator_min{0};    ///< min off-diagonal of Log_l, positive
    Real lower_violation{0};  ///< -min off-diagonal of Log_{l-1}, positive
    Real upper_violation{0};  ///< -min off-diagonal of Log_{l+1}, positive
    /// Entrywise size of a row-sum-preserving perturbation of M that keeps all
    /// three margins positive, to first order.
    Real radius{0};
};

template <class Real>
struct OpenSetWitness {
    std::int64_t l = 0;
    PerturbationDelta<Real> delta;
    MarkovMatrix<Real> m;
    EmbeddabilityReport<Real> report;
    WitnessMargins<Real> margins;
};

/// Throws NotAWitness naming the failing margin.
template <class Real>
OpenSetWitness<Real> certify_witness(std::int64_t l, const PerturbationDelta<Real>& d, const Tolerances& tol = {});

/// Random row-sum-preserving perturbation: off-diagonal entries uniform in
/// (-size, size), diagonal absorbing the row sum.
template <class Real>
RMat4<Real> random_row_sum_zero(std::mt19937_64& rng, const Real& size);

/// Uniform double in [0, 1) from 53 random bits.
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace embedlog
