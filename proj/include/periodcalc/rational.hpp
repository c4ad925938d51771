#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace periodcalc {

// Exact rational arithmetic for exponents, weights and critical bounds.
// All symbolic computation in this library is exact; floating point is
// confined to the Dirichlet/Gauss-sum module.
using Rational = boost::rational<long long>;

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline long long to_integer(const Rational& r)
{
    if (!is_integer(r))
        throw std::domain_error("rational is not an integer: " + std::to_string(r.numerator()) + "/" +
                                std::to_string(r.denominator()));
    return r.numerator();
}

inline bool denominator_divides_two(const Rational& r)
{
    return r.denominator() == 1 || r.denominator() == 2;
}

inline Rational floor_rat(const Rational& r)
{
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0)
        --q;
    return Rational(q);
}

inline Rational ceil_rat(const Rational& r) { return -floor_rat(-r); }

inline std::string to_string(const Rational& r)
{
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1)
        s += "/" + std::to_string(r.denominator());
    return s;
}

// Accepts "n" or "n/d" with optional leading minus.
inline std::optional<Rational> parse_rational(std::string_view text)
{
    auto parse_int = [](std::string_view t, long long& out) -> bool {
        if (t.empty())
            return false;
        std::size_t i = 0;
        bool neg = false;
        if (t[0] == '-' || t[0] == '+') {
            neg = t[0] == '-';
            i = 1;
            if (i == t.size())
                return false;
        }
        long long v = 0;
        for (; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9')
                return false;
            v = v * 10 + (t[i] - '0');
        }
        out = neg ? -v : v;
        return true;
    };
    auto slash = text.find('/');
    long long num = 0, den = 1;
    if (slash == std::string_view::npos) {
        if (!parse_int(text, num))
            return std::nullopt;
    } else {
        if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den) || den == 0)
            return std::nullopt;
    }
    return Rational(num, den);
}

} // namespace periodcalc
