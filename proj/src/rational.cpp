#include "crowdcap/rational.hpp"

#include <array>
#include <cctype>
#include <cmath>

namespace crowdcap {

std::string rational_to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in: " + text);
        return Rational(num, den);
    }
    auto dot = text.find('.');
    auto exp = text.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
        return Rational(BigInt(text));
    }
    // Decimal / scientific: mantissa digits over a power of ten.
    std::string digits;
    int64_t scale = 0; // decimal exponent to apply
    bool neg = false;
    size_t i = 0;
    if (text[i] == '+' || text[i] == '-') { neg = text[i] == '-'; ++i; }
    bool seen_dot = false;
    for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
        if (text[i] == '.') {
            if (seen_dot) throw std::invalid_argument("malformed rational: " + text);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits.push_back(text[i]);
            if (seen_dot) --scale;
        } else {
            throw std::invalid_argument("malformed rational: " + text);
        }
    }
    if (i < text.size()) scale += std::stoll(text.substr(i + 1));
    if (digits.empty()) throw std::invalid_argument("malformed rational: " + text);
    size_t nz = digits.find_first_not_of('0'); // cpp_int reads a leading 0 as octal
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    BigInt num(digits);
    if (neg) num = -num;
    BigInt den = 1;
    if (scale >= 0) {
        for (int64_t k = 0; k < scale; ++k) num *= 10;
    } else {
        for (int64_t k = 0; k < -scale; ++k) den *= 10;
    }
    return Rational(num, den);
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return parse_rational(std::string(buf.data(), res.ptr));
}

} // namespace crowdcap
