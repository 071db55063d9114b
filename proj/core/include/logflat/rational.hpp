#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace logflat {

using Rational = mpq_class;

/// Thrown for malformed user input (bad rational strings, bad labels, ...).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Accepts "n", "-n", "n/d"; the result is canonicalized.
Rational parse_rational(std::string_view text);

/// Always "num/den", e.g. "3/1", "-2/5".
std::string to_string(const Rational& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

/// Caller must check is_integer() first.
std::int64_t to_int64(const Rational& value);

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Floor division/modulo for possibly negative numerators.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);

}  // namespace logflat
