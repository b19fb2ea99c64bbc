#include "mwpdiv/rational.hpp"

#include <stdexcept>

#include "mwpdiv/types.hpp"

namespace mwpdiv {

using Int = boost::multiprecision::cpp_int;

Rational parse_number(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    Int numerator = 0;
    Int denominator = 1;
    bool any_digit = false;
    bool seen_dot = false;
    bool seen_slash = false;
    Int slash_denom = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            any_digit = true;
            if (seen_slash) {
                slash_denom = slash_denom * 10 + (c - '0');
            } else {
                numerator = numerator * 10 + (c - '0');
                if (seen_dot) denominator *= 10;
            }
        } else if (c == ',' && !seen_dot && !seen_slash) {
            continue;  // thousands separator
        } else if (c == '.' && !seen_dot && !seen_slash) {
            seen_dot = true;
        } else if (c == '/' && !seen_slash && any_digit) {
            seen_slash = true;
        } else {
            throw InputError("bad number \"" + std::string(text) + "\"");
        }
    }
    if (!any_digit) throw InputError("bad number \"" + std::string(text) + "\"");
    Rational value(numerator, denominator);
    if (seen_slash) {
        if (slash_denom == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
        value /= Rational(slash_denom);
    }
    return negative ? -value : value;
}

std::string format_rational(const Rational& r) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();

    // scale to a terminating decimal when the denominator is 2^a * 5^b
    Int d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    const int digits = std::max(twos, fives);
    if (d == 1 && digits <= 18) {
        Int scale = 1;
        for (int k = 0; k < digits; ++k) scale *= 10;
        Int scaled = num * scale / den;
        bool neg = scaled < 0;
        if (neg) scaled = -scaled;
        std::string s = scaled.str();
        if (s.size() <= static_cast<std::size_t>(digits))
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
        return (neg ? "-" : "") + s;
    }
    return num.str() + "/" + den.str();
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

bool answers_match(const Rational& computed, const Rational& labeled) {
    static const Rational tol(1, 1000000);
    Rational diff = computed - labeled;
    if (diff < 0) diff = -diff;
    Rational scale = labeled < 0 ? Rational(-labeled) : labeled;
    if (scale < 1) scale = 1;
    return diff <= tol * scale;
}

}  // namespace mwpdiv
