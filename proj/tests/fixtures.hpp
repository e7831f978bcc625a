#pragma once

#include <initializer_list>

#include "embedlog/embedlog.hpp"

namespace fixtures {

using namespace embedlog;

/// The 10-decimal matrix with unique generator Log_-1.
inline const RMat4<double> kTenDecimal{0.1428588867, 0.3571393697, 0.3571463443, 0.1428553993,
                                    0.1428588866, 0.3571411134, 0.3571446008, 0.1428553992,
                                    0.1428553992, 0.3571446008, 0.3571411134, 0.1428588866,
                                    0.1428553993, 0.3571463443, 0.3571393697, 0.1428588867};

template <class Real>
RMat4<Real> quarter_pi(std::initializer_list<int> e) {
    RMat4<Real> m;
    std::size_t n = 0;
    for (int x : e) m.data()[n++] = Real(x) * pi<Real>() / 4;
    return m;
}

template <class Real>
RMat4<Real> log_minus_one() {
    return quarter_pi<Real>({-21, 4, 16, 1, 7, -9, 1, 1, 1, 1, -9, 7, 1, 16, 4, -21});
}

template <class Real>
RMat4<Real> principal_log() {
    return quarter_pi<Real>({-17, 12, 8, -3, 3, -13, 5, 5, 5, 5, -13, 3, -3, 8, 12, -17});
}

/// Relabels states 2 and 3.
template <class Real>
RMat4<Real> swap_middle(const RMat4<Real>& a) {
    const std::size_t perm[4] = {0, 2, 1, 3};
    RMat4<Real> r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) = a(perm[i], perm[j]);
    return r;
}

template <class Real>
std::vector<std::int64_t> generators(const RMat4<Real>& m, const Tolerances& tol = {}) {
    return classify(validate_markov(m, tol), tol).generators;
}

}  // namespace fixtures
