#include "logflat/parampoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace logflat {

ParamPoly::ParamPoly(const Rational& c)
{
    add_term({}, c);
}

ParamPoly ParamPoly::variable(const std::string& name)
{
    ParamPoly r;
    r.add_term({{name, 1}}, Rational(1));
    return r;
}

void ParamPoly::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
    it->second.canonicalize();
    if (it->second == 0) terms_.erase(it);
}

bool ParamPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational ParamPoly::constant_term() const
{
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational ParamPoly::evaluate(const std::map<std::string, Rational>& values) const
{
    Rational total = 0;
    for (const auto& [mono, coef] : terms_) {
        Rational term = coef;
        for (const auto& [name, e] : mono) {
            auto it = values.find(name);
            if (it == values.end()) throw std::invalid_argument("no value for parameter " + name);
            if (e < 0 && it->second == 0) throw std::invalid_argument("parameter " + name + " is zero in a denominator");
            Rational base = e < 0 ? Rational(1) / it->second : it->second;
            for (int k = 0; k < std::abs(e); ++k) term *= base;
        }
        total += term;
    }
    total.canonicalize();
    return total;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& other)
{
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& other)
{
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& other)
{
    ParamPoly result;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : other.terms_) {
            Monomial m = m1;
            for (const auto& [name, e] : m2) {
                int& slot = m[name];
                slot += e;
                if (slot == 0) m.erase(name);
            }
            result.add_term(m, c1 * c2);
        }
    }
    *this = std::move(result);
    return *this;
}

ParamPoly ParamPoly::pow(int e) const
{
    if (e < 0) {
        if (terms_.size() != 1) throw InputError("negative power of a non-monomial expression");
        const auto& [m, c] = *terms_.begin();
        Monomial inv;
        for (const auto& [name, k] : m) inv[name] = -k;
        ParamPoly base;
        base.add_term(inv, Rational(1) / c);
        return base.pow(-e);
    }
    ParamPoly result(1);
    for (int k = 0; k < e; ++k) result *= *this;
    return result;
}

std::string ParamPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) out << " + ";
        first = false;
        out << logflat::to_string(c);
        for (const auto& [name, e] : m) {
            out << '*' << name;
            if (e != 1) out << '^' << e;
        }
    }
    return out.str();
}

namespace {

// Recursive descent over: expr := term (('+'|'-') term)*
//                         term := unary (('*'|'/') unary)*
//                         unary := '-' unary | power
//                         power := atom ('^' int)?
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParamPoly parse_all()
    {
        ParamPoly r = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw InputError("malformed expression '" + std::string(text_) + "': " + what + " at position " +
                         std::to_string(pos_));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ParamPoly expr()
    {
        ParamPoly r = term();
        for (;;) {
            if (accept('+')) r += term();
            else if (accept('-')) r -= term();
            else return r;
        }
    }

    ParamPoly term()
    {
        ParamPoly r = unary();
        for (;;) {
            if (accept('*')) {
                r *= unary();
            } else if (accept('/')) {
                ParamPoly d = unary();
                if (d.is_zero()) fail("division by zero");
                r *= d.pow(-1);
            } else {
                return r;
            }
        }
    }

    ParamPoly unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    ParamPoly power()
    {
        ParamPoly base = atom();
        if (accept('^')) {
            skip_space();
            bool negative = false;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
                negative = text_[pos_] == '-';
                ++pos_;
            }
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_ || pos_ - start > 4) fail("expected a small integer exponent");
            int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
            return base.pow(negative ? -e : e);
        }
        return base;
    }

    ParamPoly atom()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ParamPoly r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return ParamPoly(parse_rational(text_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return ParamPoly::variable(std::string(text_.substr(start, pos_ - start)));
        }
        fail("unexpected character");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ParamPoly ParamPoly::parse(std::string_view text)
{
    return Parser(text).parse_all();
}

}  // namespace logflat
