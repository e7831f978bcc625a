#include "embedlog/expm.hpp"

#include <cmath>

#include "embedlog/error.hpp"

namespace embedlog {

template <class Real>
RMat4<Real> expm(const RMat4<Real>& q) {
    const double norm = to_double(q.norm1());
    int squarings = 0;
    if (norm > 0) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm))) + 4);

    using std::ldexp;
    const RMat4<Real> a = q * ldexp(Real(1), -squarings);
    RMat4<Real> sum = RMat4<Real>::identity();
    RMat4<Real> term = RMat4<Real>::identity();
    for (int n = 1; n < 1000; ++n) {
        term = term * a;
        term *= Real(1) / Real(n);
        const RMat4<Real> next = sum + term;
        if (next == sum) break;
        sum = next;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

namespace {

// Knuth's TwoSum: s + e == a + b exactly.
template <class Real>
void two_sum(const Real& a, const Real& b, Real& s, Real& e) {
    s = a + b;
    const Real bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

}  // namespace

template <class Real>
OracleExpm<Real> oracle_expm(const RMat4<Real>& q, int terms) {
    if (terms < 1) throw Error(ErrorCode::InvalidArgument, "oracle_expm needs at least one term");
    RMat4<Real> sum = RMat4<Real>::identity();
    RMat4<Real> comp;
    RMat4<Real> term = RMat4<Real>::identity();
    for (int n = 1; n < terms; ++n) {
        term = term * q;
        term *= Real(1) / Real(n);
        for (std::size_t i = 0; i < 16; ++i) {
            Real s, e;
            two_sum(sum.data()[i], term.data()[i], s, e);
            sum.data()[i] = s;
            comp.data()[i] += e;
        }
    }
    OracleExpm<Real> out;
    out.value = sum + comp;
    const double norm = to_double(q.norm1());
    out.tail_bound = norm == 0 ? 0.0 : std::exp(terms * std::log(norm) - std::lgamma(terms + 1.0));
    return out;
}

#define EMBEDLOG_INSTANTIATE(Real)                              \
    template RMat4<Real> expm<Real>(const RMat4<Real>&);        \
    template OracleExpm<Real> oracle_expm<Real>(const RMat4<Real>&, int);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
