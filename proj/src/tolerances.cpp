#include "embedlog/tolerances.hpp"

#include <cstdlib>
#include <sstream>
#include <string_view>

#include "embedlog/error.hpp"
#include "embedlog/scalar.hpp"

namespace embedlog {

namespace {

double* field(Tolerances& t, std::string_view key) {
    if (key == "rowsum") return &t.rowsum;
    if (key == "class" || key == "cls") return &t.cls;
    if (key == "recompose") return &t.recompose;
    if (key == "inverse") return &t.inverse;
    if (key == "singular") return &t.singular;
    if (key == "entry") return &t.entry;
    if (key == "real") return &t.real;
    if (key == "pattern") return &t.pattern;
    if (key == "variety") return &t.variety;
    if (key == "margin") return &t.margin;
    if (key == "y_guard") return &t.y_guard;
    return nullptr;
}

}  // namespace

Tolerances Tolerances::parse(const std::string& spec, Tolerances base) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "tolerance item '" + item + "' lacks '='");
        const std::string key = item.substr(0, eq);
        double* slot = field(base, key);
        if (!slot) throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + key + "'");
        const std::string value = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0' || !(v >= 0))
            throw Error(ErrorCode::InvalidArgument, "bad tolerance value '" + value + "' for " + key);
        *slot = v;
    }
    return base;
}

Tolerances Tolerances::parse(const std::string& spec) { return parse(spec, Tolerances{}); }

Tolerances Tolerances::from_env() {
    const char* env = std::getenv("EMBEDLOG_TOL");
    if (!env) return {};
    return parse(env);
}

std::string Tolerances::to_string() const {
    std::ostringstream os;
    os << "rowsum=" << to_decimal(rowsum) << ",class=" << to_decimal(cls) << ",recompose=" << to_decimal(recompose)
       << ",inverse=" << to_decimal(inverse) << ",singular=" << to_decimal(singular) << ",entry=" << to_decimal(entry)
       << ",real=" << to_decimal(real) << ",pattern=" << to_decimal(pattern) << ",variety=" << to_decimal(variety)
       << ",margin=" << to_decimal(margin) << ",y_guard=" << to_decimal(y_guard);
    return os.str();
}

}  // namespace embedlog
