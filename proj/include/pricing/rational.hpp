#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <string>

#include "pricing/errors.hpp"

namespace pricing {

// Every value, price, and bound in the library is an exact rational. The
// inequalities certified by the verify module can be tight, so no operation
// may introduce rounding.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    require(den != 0, ErrorKind::Input, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const Integer& num, const Integer& den) {
    require(sgn(den) != 0, ErrorKind::Input, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Renders "7" for integers and "7/2" otherwise; parse_rational inverts this.
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_integer_text(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    require(is_integer_text(num), ErrorKind::Input, "bad rational literal: " + text);
    if (slash == std::string::npos) {
        Rational q{Integer(num), Integer(1)};
        return q;
    }
    const std::string den = text.substr(slash + 1);
    require(is_integer_text(den) && den[0] != '-' && Integer(den) != 0,
            ErrorKind::Input, "bad rational literal: " + text);
    Rational q{Integer(num), Integer(den)};
    q.canonicalize();
    return q;
}

// 2^e as an exact rational; e may be negative.
inline Rational pow2(long e) {
    Integer shifted = 1;
    if (e >= 0) {
        mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), static_cast<unsigned long>(e));
        return Rational(shifted);
    }
    mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), static_cast<unsigned long>(-e));
    return rat(Integer(1), shifted);
}

// Smallest e with 2^e >= q, for q > 0. Exact: never evaluates a float log.
inline long ceil_log2(const Rational& q) {
    require(sgn(q) > 0, ErrorKind::Input, "ceil_log2 requires a positive argument");
    const Integer& num = q.get_num();
    const Integer& den = q.get_den();
    long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
    const auto holds = [&](long cand) {
        Integer lhs = 1;
        Integer rhs = 1;
        if (cand >= 0) {
            mpz_mul_2exp(lhs.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(cand));
            rhs = num;
        } else {
            mpz_mul_2exp(rhs.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(-cand));
            lhs = den;
        }
        return lhs >= rhs;
    };
    while (!holds(e)) ++e;
    while (holds(e - 1)) --e;
    return e;
}

// Smallest integer >= q.
inline Integer ceil_to_integer(const Rational& q) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

} // namespace pricing
