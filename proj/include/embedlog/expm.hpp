#pragma once

#include "embedlog/matrix.hpp"

namespace embedlog {

/// Scaling and squaring: s = max(0, ceil(log2 ||q||_1) + 4), Taylor series of
/// q / 2^s summed until it stagnates, then s squarings.
template <class Real>
RMat4<Real> expm(const RMat4<Real>& q);

template <class Real>
struct OracleExpm {
    RMat4<Real> value;
    double tail_bound = 0;  ///< ||q||_1^terms / terms!
};

/// Plain truncated Taylor sum (no scaling) with error-free-transformation
/// accumulation. Verification only; run it in Extended for ||q||_1 up to ~50,
/// where the terms grow far beyond the result.
template <class Real>
OracleExpm<Real> oracle_expm(const RMat4<Real>& q, int terms);

}  // namespace embedlog
