// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace embedlog;
using namespace fixtures;
using X = Extended;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = convert<double>(build_example<X>(-1).m.matrix());
    const double err = max_abs_diff(m, kTenDecimal);
    const double t = seconds_since(t0);
    return {err <= 5e-10 && t < 1, "max entry error " + fmt(err) + " (bound 5e-10), " + fmt(t) + " s"};
}

Outcome ac2() {
    const auto s = eigendecompose_markov(build_example<X>(-1).m.matrix());
    const double e0 = to_double(max_abs_diff(branch_log(s, 0).log, principal_log<X>()));
    const double e1 = to_double(max_abs_diff(branch_log(s, -1).log, log_minus_one<X>()));
    return {e0 <= 1e-8 && e1 <= 1e-8, "Log_0 error " + fmt(e0) + ", Log_-1 error " + fmt(e1)};
}

Outcome ac3() {
    const auto r = classify(validate_markov(kTenDecimal));
    const bool ok = r.verdict == Verdict::Embeddable && r.generators == std::vector<std::int64_t>{-1} &&
                    !r.principal_is_generator;
    std::string gens;
    for (auto k : r.generators) gens += (gens.empty() ? "" : ",") + std::to_string(k);
    return {ok, "generators {" + gens + "}, principal " + (r.principal_is_generator ? "is" : "is not") + " a generator"};
}

Outcome ac4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst = 0;
    for (std::int64_t l = -3; l <= 3; ++l) {
        const auto r = classify(build_example<X>(l).m);
        ok = ok && r.generators == std::vector<std::int64_t>{l};
        for (std::int64_t k = l - 2; k <= l + 2; ++k)
            worst = std::max(worst, to_double(max_abs_diff(branch_log(r.spectrum, k).log, closed_form_log<X>(l, k))));
    }
    const double t = seconds_since(t0);
    return {ok && worst <= 1e-7 && t < 5,
            std::string(ok ? "generators {l} for all l" : "generator mismatch") + ", closed-form error " + fmt(worst) +
                ", " + fmt(t) + " s"};
}

Outcome ac5() {
    const double p = pi<double>();
    const Vec6<double> v{-5 * p / 2, -5 * p / 4, 5 * p / 2, 0.5, 1, 0.5};
    const auto l = build_q(GeneratorParams<double>{p / 2, v});
    const auto r = build_q(GeneratorParams<double>{p / 2 + 2 * p, v});
    const double el = max_abs_diff(l, quarter_pi<double>({-26, 17, 13, -4, 4, -14, 4, 6, 6, 4, -14, 4, -4, 13, 17, -26}));
    const double er = max_abs_diff(r, quarter_pi<double>({-30, 25, 5, 0, 0, -10, 0, 10, 10, 0, -10, 0, 0, 5, 25, -30}));
    bool r_rate = true;
    try {
        validate_rate(r);
    } catch (const Error&) {
        r_rate = false;
    }
    bool l_rejected = false;
    try {
        validate_rate(l);
    } catch (const Error& e) {
        const std::string w = e.what();
        l_rejected = e.code() == ErrorCode::NegativeOffDiagonal && w.find("(1,4)") != std::string::npos &&
                     w.find("(4,1)") != std::string::npos;
    }
    const double ee = max_abs_diff(expm(l), expm(r));
    return {el <= 1e-12 && er <= 1e-12 && r_rate && l_rejected && ee <= 1e-9,
            "L error " + fmt(el) + ", R error " + fmt(er) + ", R rate " + (r_rate ? "yes" : "no") +
                ", L rejected at (1,4),(4,1) " + (l_rejected ? "yes" : "no") + ", |e^L - e^R| " + fmt(ee)};
}

Outcome ac6() {
    std::mt19937_64 rng(6);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        const GeneratorParams<double> p{oracle::angle(rng), oracle::random_on_variety(rng)};
        const auto expected = q_spectrum(p);
        const auto got = deflated_eigenvalues(build_q(p));
        for (std::size_t i = 0; i < 4; ++i) {
            double best = 1e300;
            for (std::size_t j = 0; j < 4; ++j) best = std::min(best, abs(got[i] - expected[j]));
            worst = std::max(worst, best);
        }
    }
    return {worst <= 1e-8, "50 samples, worst eigenvalue error " + fmt(worst)};
}

Outcome ac7() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(7);
    int certified = 0, stable = 0;
    std::string failure;
    for (std::int64_t l : {-2, -1, 1, 2}) {
        std::optional<OpenSetWitness<X>> first;
        for (int t = 0; t < 50; ++t) {
            try {
                auto w = certify_witness<X>(l, sample_delta<X>(rng, 1e-4, 1e-8));
                ++certified;
                if (!first) first = std::move(w);
            } catch (const Error& e) {
                if (failure.empty()) failure = e.what();
            }
        }
        if (!first) continue;
        for (int t = 0; t < 10; ++t) {
            const auto m = first->m.matrix() + random_row_sum_zero<X>(rng, first->margins.radius / 100);
            try {
                stable += generators(m) == std::vector<std::int64_t>{l};
            } catch (const Error&) {
            }
        }
    }
    const double t = seconds_since(t0);
    return {certified == 200 && stable == 40 && t < 30,
            std::to_string(certified) + "/200 certified, " + std::to_string(stable) + "/40 perturbations stable, " +
                fmt(t) + " s" + (failure.empty() ? "" : "; first failure: " + failure)};
}

Outcome ac8() {
    std::mt19937_64 rng(8);
    double worst = 0;
    int ok = 0;
    for (int t = 0; t < 100; ++t) {
        const std::int64_t l = std::int64_t(t % 5) - 2;
        const auto d = sample_delta<X>(rng, 1e-3, 1e-3);
        try {
            const auto back = recover_delta<X>(l, build_perturbed<X>(l, d));
            double e = 0;
            for (std::size_t i = 1; i <= 12; ++i) e = std::max(e, to_double(abs(back[i] - d[i])));
            worst = std::max(worst, e);
            ok += e <= 1e-8;
        } catch (const Error&) {
        }
    }
    return {ok == 100, std::to_string(ok) + "/100 recovered, worst component error " + fmt(worst)};
}

Outcome ac9() {
    std::mt19937_64 rng(9);
    double worst = 0, worst_row = 0;
    for (int t = 0; t < 200; ++t) {
        const auto q = oracle::random_rate_with_norm(rng, oracle::uniform(rng, 0.01, 30));
        const auto e = expm(q);
        const auto o = oracle_expm(convert<X>(q), 150);
        worst = std::max(worst, to_double(max_abs_diff(convert<X>(e), o.value)));
        for (std::size_t i = 0; i < 4; ++i) worst_row = std::max(worst_row, std::abs(e.row_sum(i) - 1));
    }
    return {worst <= 1e-8 && worst_row <= 1e-10,
            "200 matrices, worst oracle gap " + fmt(worst) + ", worst row-sum error " + fmt(worst_row)};
}

Outcome ac10() {
    std::mt19937_64 rng(10);
    int symmetric = 0;
    for (int t = 0; t < 1000; ++t) {
        const double theta = oracle::angle(rng);
        const std::int64_t k = std::int64_t(rng() % 5) - 2;
        Vec6<double> v;
        for (auto& x : v) x = oracle::uniform(rng, -10, 10);
        const auto a = cone_check(GeneratorParams<double>{theta, v}, k);
        const auto b = cone_check(GeneratorParams<double>{theta, swap_components(v)}, k);
        symmetric += a.in_C2 == b.in_C1 && a.in_C1 == b.in_C2;
    }
    int preserved = 0;
    for (int t = 0; t < 50; ++t) {
        GeneratorParams<double> p;
        p.theta = oracle::angle(rng);
        auto& v = p.v;
        for (std::size_t i : {1, 3, 4, 5}) v[i] = oracle::uniform(rng, -2, 2);
        const double a = std::abs(p.theta);
        v[0] = -std::abs(v[1]) - a * (std::abs(v[4]) + std::abs(v[5])) - oracle::uniform(rng, 0.01, 1);
        v[2] = -v[0] + std::abs(v[1]) + a * std::abs(v[3]) + oracle::uniform(rng, 0.01, 1);
        if (!cone_check(p, 1).in_P_theta) continue;
        for (int s = 0; s < 20; ++s) {
            GeneratorParams<double> q = p;
            const double c = std::exp(oracle::uniform(rng, -5, 5));
            for (auto& x : q.v) x *= c;
            preserved += cone_check(q, 1).in_P_theta;
        }
    }
    return {symmetric == 1000 && preserved == 1000,
            std::to_string(symmetric) + "/1000 symmetric, " + std::to_string(preserved) + "/1000 scalings in P(theta)"};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AC1 ten-decimal reproduction", ac1}, {"AC2 logarithm fixtures", ac2},
        {"AC3 classification", ac3},           {"AC4 family sweep", ac4},
        {"AC5 strand-symmetric example", ac5}, {"AC6 spectrum formula", ac6},
        {"AC7 open-set witness", ac7},         {"AC8 delta recovery", ac8},
        {"AC9 oracle equivalence", ac9},       {"AC10 cone properties", ac10},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
    return failed ? 1 : 0;
}
