#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "lgglue/errors.hpp"

namespace lgglue {

// Exact arithmetic only: arbitrary-precision integers and rationals.
using Int = mpz_class;
using Rat = mpq_class;

inline Int factorial(long n)
{
    if (n < 0)
        throw lg_error(errc::invalid_data, "factorial of negative argument");
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline Int binomial(long n, long k)
{
    if (k < 0)
        return 0;
    if (n >= 0) {
        if (k > n)
            return 0;
        Int r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return r;
    }
    // C(n, k) = (-1)^k C(k - n - 1, k) for n < 0
    Int r = binomial(k - n - 1, k);
    return (k % 2 == 0) ? r : Int(-r);
}

// Rational exponentiation c^e for integer e (c != 0 when e < 0).
inline Rat rat_pow(const Rat& c, long e)
{
    if (e == 0)
        return Rat(1);
    Rat base = c;
    if (e < 0) {
        if (c == 0)
            throw lg_error(errc::invalid_data, "zero to a negative power");
        base = Rat(1) / c;
        e = -e;
    }
    Rat r(1);
    while (e > 0) {
        if (e & 1)
            r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Parses "p/q" or "p"; used by config files and the canonical text format.
inline Rat rat_parse(const std::string& s)
{
    try {
        Rat r(s);
        if (r.get_den() == 0)
            throw lg_error(errc::config_parse, "zero denominator in '" + s + "'");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw lg_error(errc::config_parse, "bad rational literal '" + s + "'");
    }
}

// Always renders as "p/q" (denominator 1 included) for stable golden files.
inline std::string rat_str(const Rat& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

} // namespace lgglue
