#include <doctest.h>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace embedlog;
using namespace fixtures;
using X = Extended;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

PerturbationDelta<X> scaled(const PerturbationDelta<X>& d, const X& c) {
    PerturbationDelta<X> r = d;
    for (auto& x : r.delta) x *= c;
    return r;
}

}  // namespace

TEST_SUITE("families") {

TEST_CASE("eigenvalues of the family") {
    CHECK(to_double(abs(family_lambda<X>(-1) - exp(-7 * pi<X>()))) == 0);
    CHECK(family_lambda<double>(-1) == doctest::Approx(2.8142684574855527e-10).epsilon(1e-14));
    CHECK(to_double(abs(family_lambda<X>(1) - exp(-11 * pi<X>()))) == 0);
    CHECK(to_double(family_mu<X>(-1).im / exp(-4 * pi<X>())) == 1);
    CHECK(to_double(family_mu<X>(2).im / exp(-10 * pi<X>())) == 1);
    CHECK(family_mu<double>(0).re == 0);
}

TEST_CASE("P = S R with the derived S") {
    for (std::int64_t l = -4; l <= 4; ++l) {
        const auto s = family_s<X>(l);
        CHECK(to_double(max_abs_diff(complexify(s) * r_matrix<X>(), family_p<X>(l))) <= 1e-90);
        CHECK(to_double(max_abs_diff(mat_inverse(family_p<X>(l)), oracle::cofactor_inverse(family_p<X>(l)))) <= 1e-80);
    }
    // Row 3 of S for l >= 0 reads (1, -2l-1, 0, -1).
    const auto s1 = family_s<double>(1);
    CHECK(s1(2, 0) == 1);
    CHECK(s1(2, 1) == -3);
    CHECK(s1(2, 2) == 0);
    CHECK(s1(2, 3) == -1);
}

TEST_CASE("closed_form_log") {
    CHECK(max_abs_diff(closed_form_log<double>(-1, 0), principal_log<double>()) <= 1e-14);
    CHECK(max_abs_diff(closed_form_log<double>(-1, -1), log_minus_one<double>()) <= 1e-14);
    CHECK(closed_form_log<double>(3, 3)(1, 0) == doctest::Approx(pi<double>() / 4));
    CHECK(min_offdiagonal(closed_form_log<double>(3, 3)) == 0);
    CHECK(max_abs_diff(closed_form_log<double>(0, 0),
                       quarter_pi<double>({-9, 6, 2, 1, 1, -5, 1, 3, 3, 1, -5, 1, 1, 2, 6, -9})) <= 1e-14);
    for (std::int64_t l = -5; l <= 5; ++l)
        for (std::int64_t k = -4; k <= 4; ++k) {
            const auto lhs = closed_form_log<X>(l, k) - closed_form_log<X>(l, 0);
            const auto rhs = (closed_form_log<X>(l, 1) - closed_form_log<X>(l, 0)) * X(k);
            CHECK(to_double(max_abs_diff(lhs, rhs)) <= 1e-90);
        }
}

TEST_CASE("build_example") {
    const auto e = build_example<X>(-1);
    CHECK(to_double(max_abs_diff(e.expected_generator.matrix(), log_minus_one<X>())) <= 1e-60);
    // The reference ten-decimal matrix lists states 2 and 3 the other way round.
    CHECK(max_abs_diff(swap_middle(convert<double>(e.m.matrix())), kTenDecimal) <= 5e-10);
    CHECK(max_abs_diff(convert<double>(e.m.matrix()), kTenDecimal) > 5e-6);

    for (std::int64_t l = -3; l <= 3; ++l) {
        const auto f = build_example<X>(l);
        CHECK(to_double(max_abs_diff(expm(f.expected_generator.matrix()), f.m.matrix())) <= 5e-9);
        CHECK(is_ss(f.m.matrix()));
        const auto r = classify(f.m);
        CHECK(r.generators == std::vector<std::int64_t>{l});
        CHECK(r.principal_is_generator == (l == 0));
        for (std::int64_t k = l - 2; k <= l + 2; ++k)
            CHECK(to_double(max_abs_diff(branch_log(r.spectrum, k).log, closed_form_log<X>(l, k))) <= 1e-7);
    }
    CHECK(code_of([] { build_example<X>(7); }) == ErrorCode::LOutOfRange);
    CHECK(code_of([] { build_example<double>(-7); }) == ErrorCode::LOutOfRange);
}

TEST_CASE("build_perturbed at delta = 0 is the example") {
    for (std::int64_t l = -2; l <= 2; ++l) {
        const auto m = build_perturbed<X>(l, PerturbationDelta<X>{});
        CHECK(to_double(max_abs_diff(m.matrix(), build_example<X>(l).m.matrix())) <= 1e-10);
    }
    // Second eigenvalue of the l = 1 member is e^{-11 pi}.
    const auto s = eigendecompose_markov(build_perturbed<X>(1, PerturbationDelta<X>{}).matrix());
    CHECK(to_double(abs(s.lambda() / exp(-11 * pi<X>()) - 1)) <= 1e-60);

    PerturbationDelta<X> d;
    d[1] = X("5e-4");
    CHECK(generators(build_perturbed<X>(-1, d).matrix()) == std::vector<std::int64_t>{-1});

    PerturbationDelta<X> big;
    big[3] = X("2e-3");
    CHECK(code_of([&] { build_perturbed<X>(-1, big); }) == ErrorCode::DeltaOutOfBound);
    big.kappa = 0.5;
    big[3] = X(0);
    big[4] = X("0.4");
    CHECK(code_of([&] { build_perturbed<X>(-1, big); }) == ErrorCode::NotMarkov);
}

TEST_CASE("perturbed eigenvalues follow delta") {
    PerturbationDelta<X> d;
    d[10] = X("3e-4");
    d[11] = X("-2e-4");
    d[12] = X("1e-4");
    const auto s = eigendecompose_markov(build_perturbed<X>(-2, d).matrix());
    CHECK(to_double(abs(s.lambda() / (family_lambda<X>(-2) * (1 + d[10])) - 1)) <= 1e-50);
    const X r = abs(family_mu<X>(-2));
    CHECK(to_double(abs(s.mu().re / (r * d[11]) - 1)) <= 1e-50);
    CHECK(to_double(abs(s.mu().im / (r * (1 + d[12])) - 1)) <= 1e-50);
}

TEST_CASE("continuity at delta = 0 is linear") {
    std::mt19937_64 rng(5);
    for (std::int64_t l : {-2, -1, 1, 2}) {
        const auto base = build_example<X>(l).m.matrix();
        const auto unit = sample_delta<X>(rng, 0.999, 0.0);
        const X d3 = to_double(max_abs_diff(build_perturbed<X>(l, scaled(unit, X("1e-3"))).matrix(), base));
        const X d6 = to_double(max_abs_diff(build_perturbed<X>(l, scaled(unit, X("1e-6"))).matrix(), base));
        CHECK(d6 < d3);
        const double ratio = to_double(d3 / d6);
        CHECK(ratio >= 1e2);
        CHECK(ratio <= 1e4);
    }
}

TEST_CASE("recover_delta round-trips") {
    std::mt19937_64 rng(99);
    for (std::int64_t l : {-2, -1, 0, 1, 2}) {
        for (int t = 0; t < 10; ++t) {
            const auto d = sample_delta<X>(rng, 1e-3, 1e-3);
            const auto m = build_perturbed<X>(l, d);
            const auto back = recover_delta<X>(l, m);
            for (std::size_t i = 1; i <= 12; ++i) CHECK(to_double(abs(back[i] - d[i])) <= 1e-8);
        }
    }
    // delta6 + delta9 = 1e-3 exactly.
    PerturbationDelta<X> d = sample_delta<X>(rng, 1e-3, 0);
    d[6] = X("4e-4");
    d[9] = X("6e-4");
    const auto back = recover_delta<X>(-1, build_perturbed<X>(-1, d));
    for (std::size_t i = 1; i <= 12; ++i) CHECK(to_double(abs(back[i] - d[i])) <= 1e-8);

    const auto m0 = build_perturbed<X>(-1, PerturbationDelta<X>{});
    CHECK(code_of([&] { recover_delta<X>(-1, m0); }) == ErrorCode::NearDegenerateY);
    CHECK(code_of([&] { recover_delta<X>(-1, validate_markov(RMat4<X>::identity() * X(0.5) +
                                                              RMat4<X>::constant(X(0.125)))); }) ==
          ErrorCode::NotInFamily);
    // Member of a different family.
    CHECK(code_of([&] { recover_delta<X>(2, build_perturbed<X>(-1, d)); }) == ErrorCode::NotInFamily);
}

TEST_CASE("injectivity off Y [100 pairs]") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 100; ++t) {
        const std::int64_t l = (t % 2) ? -1 : 1;
        const auto a = sample_delta<X>(rng, 1e-3, 1e-8);
        const auto b = sample_delta<X>(rng, 1e-3, 1e-8);
        CHECK(to_double(max_abs_diff(build_perturbed<X>(l, a).matrix(), build_perturbed<X>(l, b).matrix())) > 1e-12);
    }
}

TEST_CASE("sample_delta is deterministic and guarded") {
    std::mt19937_64 a(7), b(7);
    for (int t = 0; t < 20; ++t) {
        const auto x = sample_delta<double>(a, 1e-3, 1e-4);
        const auto y = sample_delta<double>(b, 1e-3, 1e-4);
        CHECK(x.delta == y.delta);
        CHECK(std::abs(x[6] + x[9]) >= 1e-4);
        for (double e : x.delta) CHECK(std::abs(e) < 1e-3);
    }
}

TEST_CASE("validated_kappa") {
    for (std::int64_t l = -2; l <= 2; ++l) CHECK(validated_kappa(l) == 1e-3);
    CHECK(validated_kappa(1, 0.5) < 0.5);
}

TEST_CASE("certify_witness") {
    const auto w = certify_witness<X>(-1, PerturbationDelta<X>{});
    CHECK(w.report.generators == std::vector<std::int64_t>{-1});
    CHECK(to_double(w.margins.generator_min) >= pi<double>() / 4 - 1e-9);
    CHECK(w.margins.lower_violation > 0);
    CHECK(w.margins.upper_violation > 0);
    CHECK(w.margins.radius > 0);

    const auto w0 = certify_witness<X>(0, PerturbationDelta<X>{});
    CHECK(w0.report.generators == std::vector<std::int64_t>{0});

    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) CHECK_NOTHROW(certify_witness<X>(2, sample_delta<X>(rng, 1e-4, 1e-8)));

    Tolerances strict;
    strict.margin = 10;
    CHECK(code_of([&] { certify_witness<X>(-1, PerturbationDelta<X>{}, strict); }) == ErrorCode::NotAWitness);
}

TEST_CASE("witness radius keeps the generator set") {
    std::mt19937_64 rng(77);
    for (std::int64_t l : {-2, -1, 1, 2}) {
        const auto w = certify_witness<X>(l, sample_delta<X>(rng, 1e-4, 1e-8));
        for (int t = 0; t < 10; ++t) {
            const auto m = w.m.matrix() + random_row_sum_zero<X>(rng, w.margins.radius / 100);
            CHECK(generators(m) == std::vector<std::int64_t>{l});
        }
    }
}

}  // TEST_SUITE
