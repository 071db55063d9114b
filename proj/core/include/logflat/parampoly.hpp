#pragma once

// Laurent polynomials with rational coefficients in named parameters, used to
// check parametric families of connections symbolically.

#include "logflat/rational.hpp"

#include <map>
#include <string>
#include <string_view>

namespace logflat {

class ParamPoly {
public:
    /// Sorted parameter name -> nonzero exponent.
    using Monomial = std::map<std::string, int>;

    ParamPoly() = default;
    ParamPoly(const Rational& c);  // NOLINT: constants convert implicitly
    ParamPoly(int c) : ParamPoly(Rational(c)) {}  // NOLINT

    static ParamPoly variable(const std::string& name);

    /// Grammar: sums and differences of products of factors; a factor is a
    /// rational literal ("3", "3/4"), a name, or a parenthesized expression,
    /// optionally raised to an integer power ("s^-1" is allowed only for a
    /// single monomial). Throws InputError on malformed text.
    static ParamPoly parse(std::string_view text);

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;

    /// Substitute values for every parameter; throws std::invalid_argument if one
    /// is missing or a negative power meets a zero value.
    Rational evaluate(const std::map<std::string, Rational>& values) const;

    ParamPoly& operator+=(const ParamPoly& other);
    ParamPoly& operator-=(const ParamPoly& other);
    ParamPoly& operator*=(const ParamPoly& other);

    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
    friend ParamPoly operator-(const ParamPoly& a) { return ParamPoly(-1) * a; }
    friend ParamPoly operator*(ParamPoly a, const ParamPoly& b) { return a *= b; }
    friend bool operator==(const ParamPoly&, const ParamPoly&) = default;

    /// Integer power; negative exponents need a single-term polynomial.
    ParamPoly pow(int e) const;

    std::string to_string() const;

private:
    void add_term(const Monomial& m, const Rational& c);

    std::map<Monomial, Rational> terms_;
};

}  // namespace logflat
