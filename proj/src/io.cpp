#include "embedlog/io.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>
#include <vector>

namespace embedlog {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

template <class Real>
RMat4<Real> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (!rows.empty()) throw Error(ErrorCode::ParseError, "comment line " + std::to_string(lineno) + " after data");
            continue;
        }
        rows.push_back(t);
    }
    if (rows.size() != 4)
        throw Error(ErrorCode::ParseError, "expected 4 rows, found " + std::to_string(rows.size()));
    RMat4<Real> m;
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<std::string> fields;
        std::stringstream ss(rows[i]);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(trim(f));
        if (!rows[i].empty() && rows[i].back() == ',') fields.push_back("");
        if (fields.size() != 4)
            throw Error(ErrorCode::ParseError,
                        "row " + std::to_string(i + 1) + " has " + std::to_string(fields.size()) + " fields, expected 4");
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = parse_decimal<Real>(fields[j]);
    }
    return m;
}

// SAX handler that keeps the literal text of every number under "matrix".
class MatrixSax : public nlohmann::json_sax<nlohmann::json> {
public:
    std::vector<std::vector<std::string>> rows;
    bool seen = false;
    std::string problem;

    bool null() override { return other("null"); }
    bool boolean(bool) override { return other("boolean"); }
    bool number_integer(number_integer_t v) override { return number(std::to_string(v)); }
    bool number_unsigned(number_unsigned_t v) override { return number(std::to_string(v)); }
    bool number_float(number_float_t, const string_t& s) override { return number(s); }
    bool string(string_t&) override { return other("string"); }
    bool binary(binary_t&) override { return other("binary"); }
    bool start_object(std::size_t) override {
        if (depth_ == 0) {
            ++depth_;
            return true;
        }
        return open_other("object");
    }
    bool key(string_t& k) override {
        if (depth_ == 1) in_matrix_ = (k == "matrix");
        return true;
    }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override {
        if (depth_ == 1 && in_matrix_) {
            if (seen) return fail("duplicate \"matrix\" key");
            seen = true;
        } else if (depth_ == 2 && inside_matrix()) {
            rows.emplace_back();
        } else {
            return open_other("array");
        }
        ++depth_;
        return true;
    }
    bool end_array() override { return close(); }
    bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) override {
        problem = "malformed JSON at byte " + std::to_string(pos) + ": " + ex.what();
        return false;
    }

private:
    int depth_ = 0;
    int skip_ = 0;  // nesting of containers outside the matrix
    bool in_matrix_ = false;

    bool inside_matrix() const { return in_matrix_ && skip_ == 0; }
    bool fail(const std::string& why) {
        problem = why;
        return false;
    }
    bool open_other(const char* what) {
        if (inside_matrix() && depth_ >= 2) return fail(std::string("unexpected ") + what + " inside \"matrix\"");
        if (depth_ == 0) return fail("top level must be an object");
        ++skip_;
        ++depth_;
        return true;
    }
    bool close() {
        if (skip_ > 0) --skip_;
        --depth_;
        return true;
    }
    bool other(const char* what) {
        if (depth_ == 0) return fail("top level must be an object");
        if (inside_matrix() && depth_ >= 2) return fail(std::string("unexpected ") + what + " inside \"matrix\"");
        if (inside_matrix() && depth_ == 1) return fail("\"matrix\" must be an array");
        return true;
    }
    bool number(const std::string& s) {
        if (depth_ == 0) return fail("top level must be an object");
        if (!inside_matrix() || depth_ == 1) return other("number");
        if (depth_ == 2) return fail("\"matrix\" rows must be arrays");
        rows.back().push_back(s);
        return true;
    }
};

template <class Real>
RMat4<Real> parse_json(const std::string& text) {
    MatrixSax sax;
    const bool ok = nlohmann::json::sax_parse(text, &sax);
    if (!ok) throw Error(ErrorCode::ParseError, sax.problem.empty() ? "malformed JSON" : sax.problem);
    if (!sax.seen) throw Error(ErrorCode::ParseError, "missing \"matrix\" key");
    if (sax.rows.size() != 4)
        throw Error(ErrorCode::ParseError, "expected 4 rows, found " + std::to_string(sax.rows.size()));
    RMat4<Real> m;
    for (std::size_t i = 0; i < 4; ++i) {
        if (sax.rows[i].size() != 4)
            throw Error(ErrorCode::ParseError, "row " + std::to_string(i + 1) + " has " +
                                                   std::to_string(sax.rows[i].size()) + " entries, expected 4");
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = parse_decimal<Real>(sax.rows[i][j]);
    }
    return m;
}

template <class Real>
std::string entry_text(const Real& x, int digits) {
    if (digits <= 0) return to_decimal(to_double(x));
    return to_decimal(x, digits);
}

nlohmann::json complex_json(double re, double im) { return {{"re", re}, {"im", im}}; }

}  // namespace

MatrixFormat parse_format(const std::string& name) {
    if (name == "csv") return MatrixFormat::Csv;
    if (name == "json") return MatrixFormat::Json;
    if (name == "auto") return MatrixFormat::Auto;
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + name + "' (csv, json, auto)");
}

template <class Real>
RMat4<Real> parse_matrix(const std::string& text, MatrixFormat format) {
    if (format == MatrixFormat::Auto) {
        const std::string t = trim(text);
        format = (!t.empty() && t[0] == '{') ? MatrixFormat::Json : MatrixFormat::Csv;
    }
    return format == MatrixFormat::Json ? parse_json<Real>(text) : parse_csv<Real>(text);
}

template <class Real>
std::string format_matrix(const RMat4<Real>& m, MatrixFormat format, int digits) {
    std::ostringstream os;
    if (format == MatrixFormat::Csv) {
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) os << entry_text(m(i, j), digits) << (j < 3 ? "," : "\n");
        return os.str();
    }
    os << "{\n  \"matrix\": [\n";
    for (std::size_t i = 0; i < 4; ++i) {
        os << "    [";
        for (std::size_t j = 0; j < 4; ++j) os << entry_text(m(i, j), digits) << (j < 3 ? ", " : "");
        os << (i < 3 ? "],\n" : "]\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

template <class Real>
nlohmann::json matrix_json(const RMat4<Real>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < 4; ++j) row.push_back(to_double(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json tolerances_json(const Tolerances& t) {
    return {{"rowsum", t.rowsum},   {"class", t.cls},       {"recompose", t.recompose}, {"inverse", t.inverse},
            {"singular", t.singular}, {"entry", t.entry},   {"real", t.real},           {"pattern", t.pattern},
            {"variety", t.variety}, {"margin", t.margin},   {"y_guard", t.y_guard}};
}

template <class Real>
nlohmann::json report_json(const EmbeddabilityReport<Real>& r) {
    nlohmann::json eig = nlohmann::json::array();
    for (const auto& z : r.spectrum.eigenvalues) eig.push_back(complex_json(to_double(z.re), to_double(z.im)));
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& b : r.branches)
        branches.push_back({{"k", b.k},
                            {"matrix", matrix_json(b.log)},
                            {"is_rate", b.is_rate},
                            {"min_offdiag", to_double(b.min_offdiag)}});
    return {{"schema_version", kSchemaVersion},
            {"verdict", r.verdict == Verdict::Embeddable ? "embeddable" : "not_embeddable"},
            {"generators", r.generators},
            {"principal_is_generator", r.principal_is_generator},
            {"spectrum", {{"eigenvalues", eig}, {"condition", to_double(r.spectrum.condition)}}},
            {"branches", branches},
            {"tolerances", tolerances_json(r.tolerances)}};
}

nlohmann::json error_json(const Error& e) {
    std::string message = e.what();
    const std::string prefix = std::string(error_name(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message = message.substr(prefix.size());
    return {{"schema_version", kSchemaVersion}, {"error", {{"code", std::string(error_name(e.code()))}, {"message", message}}}};
}

template <class Real>
std::string report_table(const EmbeddabilityReport<Real>& r) {
    std::ostringstream os;
    os << "verdict: " << (r.verdict == Verdict::Embeddable ? "embeddable" : "not embeddable") << "\n";
    os << "generators: {";
    for (std::size_t i = 0; i < r.generators.size(); ++i) os << (i ? ", " : "") << r.generators[i];
    os << "}\nprincipal logarithm is a generator: " << (r.principal_is_generator ? "yes" : "no") << "\n";
    os << "eigenvalues:\n";
    for (const auto& z : r.spectrum.eigenvalues)
        os << "  " << to_decimal(to_double(z.re), 12) << (z.im < 0 ? " - " : " + ")
           << to_decimal(to_double(z.im < 0 ? Real(-z.im) : z.im), 12) << "i\n";
    for (const auto& b : r.branches) {
        os << "Log_" << b.k << (b.is_rate ? "  (rate matrix)" : "  (min off-diagonal " + to_decimal(to_double(b.min_offdiag), 6) + ")")
           << "\n";
        for (std::size_t i = 0; i < 4; ++i) {
            os << "  ";
            for (std::size_t j = 0; j < 4; ++j) os << std::setw(16) << to_decimal(to_double(b.log(i, j)), 9);
            os << "\n";
        }
    }
    return os.str();
}

#define EMBEDLOG_INSTANTIATE(Real)                                                              \
    template RMat4<Real> parse_matrix<Real>(const std::string&, MatrixFormat);                  \
    template std::string format_matrix<Real>(const RMat4<Real>&, MatrixFormat, int);            \
    template nlohmann::json matrix_json<Real>(const RMat4<Real>&);                              \
    template nlohmann::json report_json<Real>(const EmbeddabilityReport<Real>&);                \
    template std::string report_table<Real>(const EmbeddabilityReport<Real>&);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
