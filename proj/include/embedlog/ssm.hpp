#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "embedlog/matrix.hpp"
#include "embedlog/tolerances.hpp"

namespace embedlog {

/// Strand-symmetric layout: rows (a,b,c,d), (e,f,g,h), (h,g,f,e), (d,c,b,a).
template <class Real>
struct SSPattern {
    Real a{0}, b{0}, c{0}, d{0}, e{0}, f{0}, g{0}, h{0};

    RMat4<Real> expand() const {
        return RMat4<Real>{a, b, c, d, e, f, g, h, h, g, f, e, d, c, b, a};
    }
    /// Reads rows 1 and 2; no check that rows 3 and 4 agree.
    static SSPattern from_matrix(const RMat4<Real>& m) {
        return {m(0, 0), m(0, 1), m(0, 2), m(0, 3), m(1, 0), m(1, 1), m(1, 2), m(1, 3)};
    }
};

/// True iff m(3-i, 3-j) == m(i, j) for all entries, within tol.pattern.
template <class Real>
bool is_ss(const RMat4<Real>& m, const Tolerances& tol = {});

template <class Real>
using Vec6 = std::array<Real, 6>;

/// Angle theta (radians, branch included when the caller wants it) and
/// v = (v1..v6).
template <class Real>
struct GeneratorParams {
    Real theta{0};
    Vec6<Real> v{};
};

template <class Real>
RMat4<Real> build_q(const GeneratorParams<Real>& p);

/// v4^2 - v5 v6 + 1/4; zero on the variety.
template <class Real>
Real variety_residual(const Vec6<Real>& v);

/// {0, 4 v1, -2 v3 + theta i, -2 v3 - theta i}. Throws OffVariety.
template <class Real>
std::array<Complex<Real>, 4> q_spectrum(const GeneratorParams<Real>& p, const Tolerances& tol = {});

/// (v1, -v2, v3, -v4, v6, v5): maps the first component onto the second.
template <class Real>
Vec6<Real> swap_components(const Vec6<Real>& v);

struct ConeVerdict {
    bool in_P_theta = false;
    bool in_C1 = false;
    bool in_C2 = false;
    std::vector<std::string> violated;  ///< "Q(i,j)" for P(theta), "C1.n" for the n-th component inequality
    std::vector<std::string> binding;   ///< component inequalities met with equality (within tol.entry)
};

/// Values of the seven component inequalities for angle theta and branch k,
/// written as f_n(v) with the constraint f_1 < 0 and f_n >= 0 for n >= 2.
template <class Real>
std::array<Real, 7> component_inequalities(const Vec6<Real>& v, const Real& theta, std::int64_t k);

template <class Real>
ConeVerdict cone_check(const GeneratorParams<Real>& p, std::int64_t k, const Tolerances& tol = {});

template <class Real>
struct RayGenerators {
    Vec6<Real> w1, w2, w3;
};

/// Throws KZero.
template <class Real>
RayGenerators<Real> ray_generators(const Real& theta, std::int64_t k);

/// v = c (sum weights_i w_i + shift (-pi/4, 0, pi/2, 0, 0, 0)), with c > 0
/// chosen so that v lies on the variety. Throws KZero, InvalidArgument (theta
/// outside (-pi, pi) minus 0, non-positive weight), NotRescalable.
template <class Real>
GeneratorParams<Real> sample_interior(const Real& theta, std::int64_t k, const std::array<Real, 3>& weights,
                                      const Real& shift, const Tolerances& tol = {});

}  // namespace embedlog
