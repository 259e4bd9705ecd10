#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace capelli {

// Expression templates are off so that arithmetic yields values of the same
// type; the coefficient rings here are deduced template parameters.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                          boost::multiprecision::et_off>;

inline bool is_zero(const Rat& r) { return r.is_zero(); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline long to_long(const Rat& r) {
    if (!is_integer(r)) throw std::domain_error("rational is not an integer");
    return static_cast<long>(numerator(r));
}

// True iff r is an integer and r >= 0.  Used for the Z_{>=0} side conditions.
inline bool is_nonneg_integer(const Rat& r) { return is_integer(r) && r >= 0; }
inline bool is_pos_integer(const Rat& r) { return is_integer(r) && r > 0; }

inline Rat rat_pow(const Rat& base, long e) {
    if (e < 0) {
        if (is_zero(base)) throw std::domain_error("0^negative");
        return rat_pow(Rat(1) / base, -e);
    }
    Rat acc(1), b = base;
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// Generalized binomial coefficient binom(k, j) for integer k (possibly
// negative) and j >= 0; always an integer.
inline Int binom(long k, long j) {
    if (j < 0) return 0;
    Int num = 1;
    for (long t = 0; t < j; ++t) num *= Int(k - t);
    Int den = 1;
    for (long t = 2; t <= j; ++t) den *= t;
    return num / den;
}

// Canonical text: "p" when the denominator is 1, else "p/q".
inline std::string rat_text(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational: " + s);
    }
}

}  // namespace capelli
