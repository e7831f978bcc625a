#pragma once

#include <string>

namespace embedlog {

/// Every numerical threshold used by the library. Passed explicitly; the
/// defaults sit one order looser than 10-decimal fixtures.
struct Tolerances {
    double rowsum = 1e-9;     ///< |row sum - target|
    double cls = 1e-9;        ///< spectral-class decisions (normalized discriminant, 1 - lambda)
    double recompose = 1e-9;  ///< ||P D P^-1 - M||_max relative to ||M||_max
    double inverse = 1e-10;   ///< ||A A^-1 - I||_max
    double singular = 1e-12;  ///< |det| relative to ||A||^4
    double entry = 1e-12;     ///< sign tests on entries (rate / Markov membership)
    double real = 1e-9;       ///< imaginary residue of an assembled real logarithm
    double pattern = 1e-9;    ///< strand-symmetric layout match
    double variety = 1e-9;    ///< |v4^2 - v5 v6 + 1/4|
    double margin = 1e-6;     ///< witness margins
    double y_guard = 1e-8;    ///< |delta6 + delta9| lower bound for recovery

    /// Parses "key=value,key=value"; unknown keys raise InvalidArgument.
    static Tolerances parse(const std::string& spec);
    static Tolerances parse(const std::string& spec, Tolerances base);

    /// Defaults overridden by the EMBEDLOG_TOL environment variable, if set.
    static Tolerances from_env();

    std::string to_string() const;
};

}  // namespace embedlog
