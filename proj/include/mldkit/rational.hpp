#pragma once

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace mldkit {

// Exact arithmetic everywhere: rationals are GMP mpq, integers mpz.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p/q" or "p" (decimal-free). Whitespace is not accepted.
inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw error(errc::parse_error, "empty rational literal");
    for (char c : text) {
        if (!(c == '/' || c == '-' || (c >= '0' && c <= '9')))
            throw error(errc::parse_error, "bad rational literal '" + text + "'");
    }
    try {
        Rat q(text);
        if (q.get_den() == 0) throw error(errc::parse_error, "zero denominator in '" + text + "'");
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw error(errc::parse_error, "bad rational literal '" + text + "'");
    }
}

// Canonical form: integers render without "/1".
inline std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_rat(const Rat& q) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return f;
}

inline Int pow2(unsigned long e) {
    Int r = 1;
    r <<= e;
    return r;
}

inline Int fibonacci(unsigned long n) {
    Int f;
    mpz_fib_ui(f.get_mpz_t(), n);
    return f;
}

} // namespace mldkit
