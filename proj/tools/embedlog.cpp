// embedlog: classify 4x4 Markov matrices, enumerate logarithm branches and
// generate certified families of embeddable matrices.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "embedlog/embedlog.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace embedlog;
using Real = Extended;

namespace {

enum Exit { kOk = 0, kNegative = 1, kError = 2 };

struct Options {
    std::string input = "-";
    std::string generator_input;
    std::string output;
    std::string format = "json";
    bool pretty = false;
    std::string tol;
    int digits = 0;
    std::uint64_t seed = 0;
    double kappa = 1e-3;
    std::int64_t l = 0;
    bool l_given = false;
    double theta = 0;
    std::int64_t k = 1;
    std::vector<double> weights{0.25, 0.25, 0.5};
    double shift = 0;
    int count = 1;
    std::optional<std::int64_t> k_from, k_to;
    std::string kind;
};

std::string read_text(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << text;
}

// --format names the output; inputs follow their extension or content.
MatrixFormat input_format(const std::string& path) {
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".csv") return MatrixFormat::Csv;
    if (ext == ".json") return MatrixFormat::Json;
    return MatrixFormat::Auto;
}

RMat4<Real> read_matrix(const std::string& path) {
    return parse_matrix<Real>(read_text(path), input_format(path));
}

// A plain number sets the command's primary threshold; key=value lists
// override the tolerance record.
struct ToleranceChoice {
    Tolerances record;
    std::optional<double> scalar;
};

ToleranceChoice resolve_tolerances(const std::string& flag) {
    ToleranceChoice c{Tolerances::from_env(), std::nullopt};
    if (flag.empty()) return c;
    if (flag.find('=') != std::string::npos) {
        c.record = Tolerances::parse(flag, c.record);
        return c;
    }
    try {
        c.scalar = parse_decimal<double>(flag);
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidArgument, "--tol expects a number or key=value list, got '" + flag + "'");
    }
    if (!(*c.scalar >= 0)) throw Error(ErrorCode::InvalidArgument, "--tol must be non-negative");
    return c;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string ext_of(const Options& o) { return o.format == "csv" ? ".csv" : ".json"; }

MatrixFormat out_format(const Options& o) { return o.format == "csv" ? MatrixFormat::Csv : MatrixFormat::Json; }

void write_bundle_file(const Options& o, const std::string& name, const RMat4<Real>& m) {
    write_text((fs::path(o.output) / (name + ext_of(o))).string(), format_matrix(m, out_format(o), o.digits));
}

// ---------------------------------------------------------------- classify

int cmd_classify(const Options& o) {
    auto tc = resolve_tolerances(o.tol);
    if (tc.scalar) tc.record.entry = *tc.scalar;
    const auto m = validate_markov(read_matrix(o.input), tc.record);
    const auto report = classify(m, tc.record);
    write_text(o.output, o.pretty ? report_table(report) : dump(report_json(report)));
    return report.verdict == Verdict::Embeddable ? kOk : kNegative;
}

// ---------------------------------------------------------------- branches

int cmd_branches(const Options& o) {
    auto tc = resolve_tolerances(o.tol);
    if (tc.scalar) tc.record.entry = *tc.scalar;
    const auto m = validate_markov(read_matrix(o.input), tc.record);
    const auto report = classify(m, tc.record);
    std::int64_t lo, hi;
    if (o.k_from || o.k_to) {
        lo = o.k_from.value_or(o.k_to.value_or(0));
        hi = o.k_to.value_or(lo);
        if (hi < lo) throw Error(ErrorCode::InvalidArgument, "--to must not be below --from");
        if (hi - lo > 10000) throw Error(ErrorCode::InvalidArgument, "branch range wider than 10000");
    } else {
        lo = report.branches.front().k;
        hi = report.branches.back().k;
    }
    json list = json::array();
    std::ostringstream table;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const auto b = branch_log(report.spectrum, k, tc.record);
        list.push_back({{"k", k}, {"matrix", matrix_json(b.log)}, {"is_rate", b.is_rate},
                        {"min_offdiag", to_double(b.min_offdiag)}});
        table << "Log_" << k << (b.is_rate ? "  (rate matrix)\n" : "\n");
        for (std::size_t i = 0; i < 4; ++i) {
            table << "  ";
            for (std::size_t j = 0; j < 4; ++j) table << to_decimal(to_double(b.log(i, j)), 12) << (j < 3 ? "  " : "\n");
        }
    }
    json doc = {{"schema_version", kSchemaVersion}, {"generators", report.generators}, {"branches", list}};
    write_text(o.output, o.pretty ? table.str() : dump(doc));
    return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o) {
    auto tc = resolve_tolerances(o.tol);
    const double match_tol = tc.scalar.value_or(5e-9);
    if (o.generator_input.empty()) throw Error(ErrorCode::InvalidArgument, "verify needs --generator");
    const RMat4<Real> m = read_matrix(o.input);
    const RMat4<Real> q = read_matrix(o.generator_input);

    json doc = {{"schema_version", kSchemaVersion}};
    try {
        (void)validate_rate(q, tc.record);
    } catch (const Error& e) {
        doc["ok"] = false;
        doc["error"] = error_json(e)["error"];
        write_text(o.output, o.pretty ? std::string(e.what()) + "\n" : dump(doc));
        return kNegative;
    }
    const double diff = to_double(max_abs_diff(expm(q), m));
    const bool ok = diff <= match_tol;
    doc["ok"] = ok;
    doc["max_abs_diff"] = diff;
    doc["tolerance"] = match_tol;
    if (o.pretty) {
        std::ostringstream os;
        os << (ok ? "verified" : "mismatch") << ": max |exp(Q) - M| = " << to_decimal(diff, 6) << " (tolerance "
           << to_decimal(match_tol) << ")\n";
        write_text(o.output, os.str());
    } else {
        write_text(o.output, dump(doc));
    }
    return ok ? kOk : kNegative;
}

// ---------------------------------------------------------------- generate

int generate_example(const Options& o, const Tolerances& tol) {
    if (!o.l_given) throw Error(ErrorCode::InvalidArgument, "generate example needs --l");
    const auto fi = build_example<Real>(o.l, tol);
    const auto report = classify(fi.m, tol);
    json doc = {{"schema_version", kSchemaVersion},
                {"kind", "example"},
                {"l", o.l},
                {"matrix", matrix_json(fi.m.matrix())},
                {"generator", matrix_json(fi.expected_generator.matrix())},
                {"report", report_json(report)}};
    if (!o.output.empty()) {
        fs::create_directories(o.output);
        write_bundle_file(o, "matrix", fi.m.matrix());
        write_bundle_file(o, "generator", fi.expected_generator.matrix());
        write_text((fs::path(o.output) / "report.json").string(), dump(doc));
    } else {
        std::cout << (o.pretty ? format_matrix(fi.m.matrix(), MatrixFormat::Csv, 10) : dump(doc));
    }
    return report.generators == std::vector<std::int64_t>{o.l} ? kOk : kNegative;
}

json witness_json(const OpenSetWitness<Real>& w) {
    return {{"generator_min", to_double(w.margins.generator_min)},
            {"lower_violation", to_double(w.margins.lower_violation)},
            {"upper_violation", to_double(w.margins.upper_violation)},
            {"radius", to_double(w.margins.radius)}};
}

int generate_perturbed(const Options& o, const Tolerances& tol) {
    if (!o.l_given) throw Error(ErrorCode::InvalidArgument, "generate perturbed needs --l");
    if (o.count < 1) throw Error(ErrorCode::InvalidArgument, "--count must be positive");
    const double kappa = validated_kappa(o.l, o.kappa, tol);
    std::mt19937_64 rng(o.seed);
    json instances = json::array();
    bool all_certified = true;
    if (!o.output.empty()) fs::create_directories(o.output);
    for (int n = 0; n < o.count; ++n) {
        const auto d = sample_delta<Real>(rng, kappa, tol.y_guard);
        std::vector<double> delta;
        for (const auto& x : d.delta) delta.push_back(to_double(x));
        const auto m = build_perturbed(o.l, d, tol);
        json inst = {{"index", n}, {"delta", delta}, {"matrix", matrix_json(m.matrix())}};
        try {
            const auto w = certify_witness(o.l, d, tol);
            inst["certified"] = true;
            inst["margins"] = witness_json(w);
            inst["generator"] = matrix_json(branch_log(w.report.spectrum, o.l, tol).log);
            inst["report"] = report_json(w.report);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotAWitness) throw;
            all_certified = false;
            inst["certified"] = false;
            inst["reason"] = error_json(e)["error"]["message"];
            inst["report"] = report_json(classify(m, tol));
        }
        if (!o.output.empty()) {
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), o.count > 1 ? "_%04d" : "", n);
            write_bundle_file(o, std::string("matrix") + suffix, m.matrix());
            if (inst["certified"].get<bool>())
                write_bundle_file(o, std::string("generator") + suffix,
                                  branch_log(eigendecompose_markov(m.matrix(), tol), o.l, tol).log);
        }
        instances.push_back(std::move(inst));
    }
    json doc = {{"schema_version", kSchemaVersion}, {"kind", "perturbed"}, {"l", o.l},
                {"seed", o.seed},                   {"kappa_requested", o.kappa}, {"kappa", kappa},
                {"instances", instances}};
    if (!o.output.empty())
        write_text((fs::path(o.output) / "report.json").string(), dump(doc));
    else
        std::cout << dump(doc);
    return all_certified ? kOk : kNegative;
}

int generate_ssm(const Options& o, const Tolerances& tol) {
    if (o.weights.size() != 3) throw Error(ErrorCode::InvalidArgument, "--weights takes three values");
    const Real theta = parse_decimal<Real>(to_decimal(o.theta));
    const auto p = sample_interior<Real>(theta, o.k, {Real(o.weights[0]), Real(o.weights[1]), Real(o.weights[2])},
                                         Real(o.shift), tol);
    GeneratorParams<Real> full = p;
    full.theta = theta + 2 * pi<Real>() * Real(o.k);
    const RMat4<Real> L = build_q(p);
    const RMat4<Real> R = build_q(full);
    const auto m = validate_markov(expm(L), tol);
    const auto report = classify(m, tol);
    const ConeVerdict cone = cone_check(p, o.k, tol);
    std::vector<double> v;
    for (const auto& x : p.v) v.push_back(to_double(x));
    json doc = {{"schema_version", kSchemaVersion},
                {"kind", "ssm"},
                {"theta", o.theta},
                {"k", o.k},
                {"v", v},
                {"variety_residual", to_double(variety_residual(p.v))},
                {"cone", {{"in_P_theta", cone.in_P_theta}, {"in_C1", cone.in_C1}, {"in_C2", cone.in_C2},
                          {"binding", cone.binding}}},
                {"L", matrix_json(L)},
                {"R", matrix_json(R)},
                {"matrix", matrix_json(m.matrix())},
                {"report", report_json(report)}};
    if (!o.output.empty()) {
        fs::create_directories(o.output);
        write_bundle_file(o, "matrix", m.matrix());
        write_bundle_file(o, "L", L);
        write_bundle_file(o, "R", R);
        write_text((fs::path(o.output) / "report.json").string(), dump(doc));
    } else if (o.pretty) {
        const Real scale = 4 / pi<Real>();
        std::cout << "L = pi/4 *\n" << format_matrix(RMat4<Real>(L * scale), MatrixFormat::Csv, 12) << "R = pi/4 *\n"
                  << format_matrix(RMat4<Real>(R * scale), MatrixFormat::Csv, 12);
    } else {
        std::cout << dump(doc);
    }
    const bool ok = std::find(report.generators.begin(), report.generators.end(), o.k) != report.generators.end();
    return ok ? kOk : kNegative;
}

int cmd_generate(const Options& o) {
    auto tc = resolve_tolerances(o.tol);
    if (tc.scalar) tc.record.entry = *tc.scalar;
    if (o.kind == "example") return generate_example(o, tc.record);
    if (o.kind == "perturbed") return generate_perturbed(o, tc.record);
    if (o.kind == "ssm") return generate_ssm(o, tc.record);
    throw Error(ErrorCode::InvalidArgument, "unknown kind '" + o.kind + "' (example, perturbed, ssm)");
}

// ---------------------------------------------------------------- selftest

int cmd_selftest(const Options& o) {
    auto tc = resolve_tolerances(o.tol);
    const Tolerances& tol = tc.record;
    int failures = 0;
    auto check = [&](const std::string& name, auto&& body) {
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
        failures += !ok;
    };
    const Real q4 = pi<Real>() / 4;
    auto scaled = [&](std::initializer_list<int> e) {
        RMat4<Real> m;
        std::size_t n = 0;
        for (int x : e) m.data()[n++] = Real(x) * q4;
        return m;
    };
    const RMat4<Real> reference_log0 = scaled({-17, 12, 8, -3, 3, -13, 5, 5, 5, 5, -13, 3, -3, 8, 12, -17});
    const RMat4<Real> reference_log_m1 = scaled({-21, 4, 16, 1, 7, -9, 1, 1, 1, 1, -9, 7, 1, 16, 4, -21});

    check("ten-decimal matrix classifies with generators {-1}", [&](std::string& d) {
        const RMat4<Real> m = parse_matrix<Real>(
            "0.1428588867,0.3571393697,0.3571463443,0.1428553993\n"
            "0.1428588866,0.3571411134,0.3571446008,0.1428553992\n"
            "0.1428553992,0.3571446008,0.3571411134,0.1428588866\n"
            "0.1428553993,0.3571463443,0.3571393697,0.1428588867\n",
            MatrixFormat::Csv);
        const auto r = classify(validate_markov(m, tol), tol);
        d = "generators size " + std::to_string(r.generators.size());
        return r.generators == std::vector<std::int64_t>{-1} && !r.principal_is_generator;
    });
    check("family l=-1 logarithms match the closed-form Log_0 and Log_-1", [&](std::string& d) {
        const auto r = classify(build_example<Real>(-1, tol).m, tol);
        const double e0 = to_double(max_abs_diff(branch_log(r.spectrum, 0, tol).log, reference_log0));
        const double e1 = to_double(max_abs_diff(branch_log(r.spectrum, -1, tol).log, reference_log_m1));
        d = "errors " + to_decimal(e0, 3) + ", " + to_decimal(e1, 3);
        return e0 <= 1e-8 && e1 <= 1e-8;
    });
    check("family sweep l=-3..3 has unique generator l", [&](std::string& d) {
        for (std::int64_t l = -3; l <= 3; ++l) {
            const auto r = classify(build_example<Real>(l, tol).m, tol);
            if (r.generators != std::vector<std::int64_t>{l}) {
                d = "l = " + std::to_string(l);
                return false;
            }
        }
        return true;
    });
    check("strand-symmetric L/R pair at theta=pi/2, k=1", [&](std::string& d) {
        GeneratorParams<Real> p;
        p.theta = pi<Real>() / 2;
        p.v = {-5 * pi<Real>() / 2, -5 * pi<Real>() / 4, 5 * pi<Real>() / 2, Real(0.5), Real(1), Real(0.5)};
        GeneratorParams<Real> full = p;
        full.theta += 2 * pi<Real>();
        const RMat4<Real> L = build_q(p), R = build_q(full);
        const double eL = to_double(max_abs_diff(L, scaled({-26, 17, 13, -4, 4, -14, 4, 6, 6, 4, -14, 4, -4, 13, 17, -26})));
        const double eR = to_double(max_abs_diff(R, scaled({-30, 25, 5, 0, 0, -10, 0, 10, 10, 0, -10, 0, 0, 5, 25, -30})));
        const double ee = to_double(max_abs_diff(expm(L), expm(R)));
        d = "errors " + to_decimal(eL, 3) + ", " + to_decimal(eR, 3) + ", exp gap " + to_decimal(ee, 3);
        return eL <= 1e-12 && eR <= 1e-12 && ee <= 1e-9;
    });
    check("unperturbed l=-1 witness has margin pi/4", [&](std::string& d) {
        const auto w = certify_witness<Real>(-1, PerturbationDelta<Real>{}, tol);
        d = "margin " + to_decimal(to_double(w.margins.generator_min), 10);
        return w.margins.generator_min >= q4 - Real(1e-9);
    });
    return failures == 0 ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embeddability of 4x4 Markov matrices with spectrum {1, lambda, mu, conj(mu)}"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "embedlog 0.1.0");
    Options o;

    auto common = [&](CLI::App* sub, bool input) {
        if (input) sub->add_option("-i,--input", o.input, "Matrix file (CSV or JSON; '-' for stdin)");
        sub->add_option("-o,--output", o.output, "Output file (directory for generate)");
        sub->add_option("--format", o.format, "Output matrix format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--pretty", o.pretty, "Human-readable output");
        sub->add_option("--tol", o.tol, "Threshold, or key=value list overriding the tolerance record");
    };

    auto* classify_cmd = app.add_subcommand("classify", "Decide embeddability and list every generator");
    common(classify_cmd, true);

    auto* branches_cmd = app.add_subcommand("branches", "Dump Log_k over the generator window or a given range");
    common(branches_cmd, true);
    branches_cmd->add_option("--from", o.k_from, "First branch index");
    branches_cmd->add_option("--to", o.k_to, "Last branch index");

    auto* verify_cmd = app.add_subcommand("verify", "Check that a generator is a rate matrix with exp(Q) = M");
    common(verify_cmd, true);
    verify_cmd->add_option("-g,--generator", o.generator_input, "Generator file")->required();

    auto* generate_cmd = app.add_subcommand("generate", "Construct example, perturbed or strand-symmetric matrices");
    common(generate_cmd, false);
    generate_cmd->add_option("kind", o.kind, "example | perturbed | ssm")
        ->required()
        ->check(CLI::IsMember({"example", "perturbed", "ssm"}));
    generate_cmd->add_option("--l", o.l, "Family index, |l| <= 6")->each([&](const std::string&) { o.l_given = true; });
    generate_cmd->add_option("--seed", o.seed, "Random seed");
    generate_cmd->add_option("--kappa", o.kappa, "Bound on |delta_i|");
    generate_cmd->add_option("--count", o.count, "Number of perturbed instances");
    generate_cmd->add_option("--theta", o.theta, "Angle in (-pi, pi), non-zero (radians)");
    generate_cmd->add_option("--k", o.k, "Branch index, non-zero");
    generate_cmd->add_option("--weights", o.weights, "Ray weights a,b,c")->delimiter(',')->expected(3);
    generate_cmd->add_option("--shift", o.shift, "Multiple of (-pi/4, 0, pi/2, 0, 0, 0) added to v");
    generate_cmd->add_option("--digits", o.digits, "Significant digits in written matrix files (0: shortest binary64)");

    auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in fixture regression");
    selftest_cmd->add_option("--tol", o.tol, "key=value list overriding the tolerance record");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*classify_cmd) return cmd_classify(o);
        if (*branches_cmd) return cmd_branches(o);
        if (*verify_cmd) return cmd_verify(o);
        if (*generate_cmd) return cmd_generate(o);
        if (*selftest_cmd) return cmd_selftest(o);
    } catch (const Error& e) {
        std::cerr << "embedlog: " << e.what() << "\n";
        if (!o.pretty && !*selftest_cmd) std::cout << dump(error_json(e));
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "embedlog: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
