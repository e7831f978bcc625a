#include "embedlog/scalar.hpp"

#include <charconv>
#include <ios>

#include "embedlog/error.hpp"

namespace embedlog {

std::string to_decimal(double x, int digits) {
    char buf[64];
    auto res = digits > 0 ? std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, digits)
                          : std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string to_decimal(const Extended& x, int digits) {
    return x.str(digits, std::ios_base::fmtflags(0));
}

template <>
double parse_decimal<double>(const std::string& text) {
    double v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
    return v;
}

template <>
Extended parse_decimal<Extended>(const std::string& text) {
    // Validate through the binary64 grammar first; boost accepts some tokens
    // (e.g. leading whitespace) we want to reject.
    (void)parse_decimal<double>(text);
    try {
        return Extended(text);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
    }
}

}  // namespace embedlog
