#pragma once

// Exact integer/rational arithmetic on top of GMP, plus base-b digit helpers.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "normal/errors.hpp"

namespace normal {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den) {
    if (den == 0) {
        throw ValidationError("rational with zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Integer pow_integer(const Integer &base, unsigned long exponent) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

inline Integer pow_integer(unsigned long base, unsigned long exponent) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
    return out;
}

inline Integer floor_of(const Rational &x) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return out;
}

inline Integer ceil_of(const Rational &x) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return out;
}

// Non-negative remainder of a modulo m (m > 0).
inline Integer mod_floor(const Integer &a, const Integer &m) {
    Integer out;
    mpz_fdiv_r(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return out;
}

/// Canonical "p/q" text; the denominator is always printed, so zero is "0/1".
inline std::string to_string(const Rational &x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Integer parse_integer(std::string_view text) {
    std::string s(text);
    if (s.empty()) {
        throw ValidationError("empty integer literal");
    }
    Integer out;
    if (out.set_str(s, 10) != 0) {
        throw ValidationError("malformed integer literal '" + s + "'");
    }
    return out;
}

/// Parses "p/q" or "p". The result is canonical, so to_string(parse_rational(s)) == s for canonical s.
inline Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text));
    }
    return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

/// Closest double; exact conversion is not attempted.
inline double to_double(const Rational &x) {
    return x.get_d();
}

struct DigitString {
    unsigned base = 10;
    std::vector<unsigned> digits;

    [[nodiscard]] std::size_t size() const noexcept { return digits.size(); }
    [[nodiscard]] bool empty() const noexcept { return digits.empty(); }

    // Bases up to 36 print one character per digit; larger bases print comma separated values.
    [[nodiscard]] std::string str() const {
        std::string out;
        if (base <= 36) {
            static constexpr char alphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
            out.reserve(digits.size());
            for (unsigned d : digits) {
                out.push_back(alphabet[d]);
            }
            return out;
        }
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (i != 0) {
                out.push_back(',');
            }
            out += std::to_string(digits[i]);
        }
        return out;
    }

    friend bool operator==(const DigitString &, const DigitString &) = default;
};

/// Fractional part {scale * t * x}, computed as ((scale*t*p) mod q)/q.
inline Rational frac_mod1(const Rational &x, const Integer &scale, const Integer &t) {
    const Integer &q = x.get_den();
    Integer residue = mod_floor(mod_floor(scale, q) * mod_floor(t, q) % q * x.get_num(), q);
    return make_rational(residue, q);
}

/// {base^exponent * t * x} via modular exponentiation; base^exponent is never formed in full.
inline Rational frac_pow_mod1(const Rational &x, const Integer &base, unsigned long exponent,
                              const Integer &t) {
    const Integer &q = x.get_den();
    Integer power;
    mpz_powm_ui(power.get_mpz_t(), base.get_mpz_t(), exponent, q.get_mpz_t());
    return frac_mod1(x, power, t);
}

inline void require_base(unsigned base) {
    if (base < 2) {
        throw ValidationError("base must be at least 2");
    }
}

/// First `count` digits of x in [0,1); the expansion never ends in a tail of (base-1)s.
inline DigitString digits_of_rational(const Rational &x, unsigned base, std::size_t count) {
    require_base(base);
    if (x < 0 || x >= 1) {
        throw ValidationError("digits_of_rational expects 0 <= x < 1");
    }
    DigitString out{base, {}};
    out.digits.reserve(count);
    Integer rem = x.get_num();
    const Integer &q = x.get_den();
    Integer digit;
    for (std::size_t i = 0; i < count; ++i) {
        rem *= base;
        mpz_fdiv_qr(digit.get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t());
        out.digits.push_back(static_cast<unsigned>(digit.get_ui()));
    }
    return out;
}

/// Longest digit prefix shared by every real in [lo, hi): the largest j with
/// floor(lo*base^j) == ceil(hi*base^j) - 1.
inline DigitString certain_digits(const Rational &lo, const Rational &hi, unsigned base) {
    require_base(base);
    if (!(lo >= 0 && lo < hi && hi <= 1)) {
        throw ValidationError("certain_digits expects 0 <= lo < hi <= 1");
    }
    DigitString out{base, {}};
    Integer scale = 1;
    Integer lower;
    Integer upper;
    while (true) {
        scale *= base;
        mpz_class lo_num = lo.get_num() * scale;
        mpz_fdiv_q(lower.get_mpz_t(), lo_num.get_mpz_t(), lo.get_den_mpz_t());
        mpz_class hi_num = hi.get_num() * scale;
        mpz_cdiv_q(upper.get_mpz_t(), hi_num.get_mpz_t(), hi.get_den_mpz_t());
        upper -= 1;
        if (lower != upper) {
            break;
        }
        Integer digit = mod_floor(lower, Integer(base));
        out.digits.push_back(static_cast<unsigned>(digit.get_ui()));
    }
    return out;
}

/// Value of 0.d1 d2 ... dn in the digit string's base.
inline Rational value_of(const DigitString &d) {
    Integer num = 0;
    for (unsigned digit : d.digits) {
        num = num * d.base + digit;
    }
    return make_rational(num, pow_integer(d.base, d.digits.size()));
}

} // namespace normal
