#include "cantor_ei/rational.hpp"

#include "cantor_ei/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace cantor_ei {

Rational make_rational(long num, long den)
{
    if (den == 0) throw domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0) throw domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer parse_integer(std::string_view s)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw domain_error("malformed integer '" + std::string(s) + "'");
    Integer v(std::string(s), 10);
    return negative ? Integer(-v) : v;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    text = trim(text);
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (negative || (!whole.empty() && whole.front() == '+')) whole.remove_prefix(1);
        if (whole.empty()) whole = "0";
        if (frac.empty() || !all_digits(frac)) throw domain_error("malformed decimal '" + std::string(text) + "'");
        Integer scale = ipow(Integer(10), frac.size());
        Integer num = parse_integer(whole) * scale + parse_integer(frac);
        if (negative) num = -num;
        return make_rational(num, scale);
    }
    return Rational(parse_integer(text));
}

std::size_t denominator_bits(const Rational& r)
{
    return mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

double to_double(const Rational& r)
{
    return r.get_d();
}

std::string format_real(double x)
{
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Integer ipow(const Integer& base, unsigned long exponent)
{
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

} // namespace cantor_ei
