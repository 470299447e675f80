#pragma once

// Multiplicative structure of a base pair (r, s) and the explicit constants of the
// cancellation estimate for sums of |cos(pi r^n l / s^k)| products.
//
// Real-valued constants are closed-form expressions evaluated in double precision.
// Quantities that overflow every machine format (N0 thresholds, the all-N a14/a20)
// are carried as natural logarithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "normal/errors.hpp"
#include "normal/exact.hpp"

namespace normal {

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower &, const PrimePower &) = default;
};

using Factorization = std::vector<PrimePower>;

/// Trial division; inputs are small bases.
inline Factorization factorize(std::uint64_t n) {
    if (n < 2) {
        throw ValidationError("factorize expects n >= 2");
    }
    Factorization out;
    for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) {
            out.push_back({p, e});
        }
    }
    if (n > 1) {
        out.push_back({n, 1});
    }
    return out;
}

/// r ~ s: same prime support with proportional exponent vectors.
inline bool mult_dependent(std::uint64_t r, std::uint64_t s) {
    if (r < 2 || s < 2) {
        throw ValidationError("mult_dependent expects r, s >= 2");
    }
    const Factorization fr = factorize(r);
    const Factorization fs = factorize(s);
    if (fr.size() != fs.size()) {
        return false;
    }
    for (std::size_t i = 0; i < fr.size(); ++i) {
        if (fr[i].prime != fs[i].prime) {
            return false;
        }
        if (static_cast<std::uint64_t>(fr[i].exponent) * fs[0].exponent !=
            static_cast<std::uint64_t>(fs[i].exponent) * fr[0].exponent) {
            return false;
        }
    }
    return true;
}

struct PrimeRecord {
    std::uint64_t prime = 0;
    unsigned d = 0; // exponent in r
    unsigned e = 0; // exponent in s
    Integer u;      // t = u / v = r^e / s^d in lowest terms
    Integer v;
    Rational t;
    unsigned f = 0;       // p - 1 for odd p, 2 for p = 2
    unsigned g = 0;       // t^f = 1 + q p^(g-1) mod p^g with p not dividing q
    std::uint64_t q = 0;  // residue of q modulo p, in [1, p)
};

struct BasePairAnalysis {
    std::uint64_t r = 0;
    std::uint64_t s = 0;
    unsigned b = 0; // max(d_i) * max(e_i)
    std::vector<PrimeRecord> primes; // ordered by d_i/e_i descending, d/0 = +inf

    [[nodiscard]] std::size_t h() const noexcept { return primes.size(); }
};

namespace detail {

inline unsigned p_adic_valuation(Integer n, std::uint64_t p) {
    if (n == 0) {
        throw ValidationError("valuation of zero");
    }
    if (n < 0) {
        n = -n;
    }
    return static_cast<unsigned>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t()));
}

inline unsigned exponent_of(const Factorization &f, std::uint64_t p) {
    for (const auto &pp : f) {
        if (pp.prime == p) {
            return pp.exponent;
        }
    }
    return 0;
}

} // namespace detail

inline BasePairAnalysis analyze_pair(std::uint64_t r, std::uint64_t s) {
    if (mult_dependent(r, s)) {
        throw MultiplicativelyDependent(std::to_string(r) + " and " + std::to_string(s) +
                                        " are multiplicatively dependent");
    }
    const Factorization fr = factorize(r);
    const Factorization fs = factorize(s);
    std::vector<std::uint64_t> support;
    for (const auto &pp : fr) {
        support.push_back(pp.prime);
    }
    for (const auto &pp : fs) {
        support.push_back(pp.prime);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    BasePairAnalysis out;
    out.r = r;
    out.s = s;
    for (std::uint64_t p : support) {
        PrimeRecord rec;
        rec.prime = p;
        rec.d = detail::exponent_of(fr, p);
        rec.e = detail::exponent_of(fs, p);
        out.primes.push_back(rec);
    }
    // d_k/e_k >= d_l/e_l  <=>  d_k e_l >= d_l e_k; equal ratios keep ascending prime order.
    std::stable_sort(out.primes.begin(), out.primes.end(), [](const PrimeRecord &x, const PrimeRecord &y) {
        return static_cast<std::uint64_t>(x.d) * y.e > static_cast<std::uint64_t>(y.d) * x.e;
    });

    unsigned max_d = 0;
    unsigned max_e = 0;
    for (const auto &rec : out.primes) {
        max_d = std::max(max_d, rec.d);
        max_e = std::max(max_e, rec.e);
    }
    out.b = max_d * max_e;

    const std::size_t h = out.primes.size();
    for (std::size_t i = 0; i < h; ++i) {
        PrimeRecord &rec = out.primes[i];
        // u_i collects p_k^(d_k e_i - e_k d_i) for k <= i, v_i the reciprocal powers for k > i;
        // the ordering makes every exponent non-negative.
        rec.u = 1;
        rec.v = 1;
        for (std::size_t k = 0; k < h; ++k) {
            const auto &pk = out.primes[k];
            const long long expo = static_cast<long long>(pk.d) * rec.e - static_cast<long long>(pk.e) * rec.d;
            if (k <= i) {
                rec.u *= pow_integer(pk.prime, static_cast<unsigned long>(expo));
            } else {
                rec.v *= pow_integer(pk.prime, static_cast<unsigned long>(-expo));
            }
        }
        rec.t = make_rational(rec.u, rec.v);
        rec.f = rec.prime == 2 ? 2U : static_cast<unsigned>(rec.prime - 1);

        // t^f - 1 = (u^f - v^f) / v^f with v free of p.
        const Integer uf = pow_integer(rec.u, rec.f);
        const Integer vf = pow_integer(rec.v, rec.f);
        const Integer diff = uf - vf;
        const unsigned val = detail::p_adic_valuation(diff, rec.prime);
        rec.g = val + 1;

        Integer p_power = pow_integer(rec.prime, val);
        Integer cofactor = diff / p_power;
        Integer inv;
        const Integer p(rec.prime);
        mpz_invert(inv.get_mpz_t(), Integer(mod_floor(vf, p)).get_mpz_t(), p.get_mpz_t());
        rec.q = mod_floor(cofactor * inv, p).get_ui();
    }
    return out;
}

enum class ConstantsVariant { LargeN, AllN };

inline std::string to_string(ConstantsVariant v) {
    return v == ConstantsVariant::LargeN ? "large-n" : "all-n";
}

struct ConstantSet {
    ConstantsVariant variant = ConstantsVariant::LargeN;
    std::uint64_t r = 0;
    std::uint64_t s = 0;
    std::uint64_t m = 0; // max(r, s)

    unsigned a1 = 0;
    Integer a2;
    double a3 = 0;
    double a4 = 0;
    double alpha5 = 0;
    double a5 = 0;
    double a6 = 0;
    Integer a7;
    double a8 = 0;
    double a9 = 0;
    double a14 = 0; // may underflow to 0 in the all-N variant; log_a14 is authoritative
    double log_a14 = 0;
    double a15 = 0;
    double a21 = 0;
    double a22 = 0;
    double a20 = 0; // may underflow to 0 in the all-N variant; log_a20 is authoritative
    double log_a20 = 0;

    double logN0_HS2 = 0;
    double logN0_HS3 = 0;
    double logN0_HS4 = 0;

    [[nodiscard]] double a1_upper_bound() const {
        return 12.0 * static_cast<double>(m) * std::log(static_cast<double>(r)) * std::log(static_cast<double>(s));
    }
};

/// The simplified closed form adopted for the construction: 0.028 / log(s^2 - 2).
inline double simplified_a4(std::uint64_t s) {
    const double sd = static_cast<double>(s);
    return 0.028 / std::log(sd * sd - 2.0);
}

/// log N0 for the digit-pair counting step: 288 m L^4 + 192 L^3 + 24 L^2 with L = log m.
inline double log_n0_hs2(std::uint64_t m) {
    const double L = std::log(static_cast<double>(m));
    return 288.0 * static_cast<double>(m) * std::pow(L, 4) + 192.0 * std::pow(L, 3) + 24.0 * L * L;
}

/// log N0 = 288 (12 m L^4 + 8 L^3 + L^2), the threshold of the explicit cancellation estimate.
inline double log_n0_hs4(std::uint64_t m) {
    const double L = std::log(static_cast<double>(m));
    return 288.0 * (12.0 * static_cast<double>(m) * std::pow(L, 4) + 8.0 * std::pow(L, 3) + L * L);
}

inline ConstantSet compute_constants(const BasePairAnalysis &analysis,
                                     ConstantsVariant variant = ConstantsVariant::LargeN) {
    ConstantSet c;
    c.variant = variant;
    c.r = analysis.r;
    c.s = analysis.s;
    c.m = std::max(analysis.r, analysis.s);
    const double s = static_cast<double>(analysis.s);
    const double m = static_cast<double>(c.m);
    const double log_s = std::log(s);
    constexpr double pi = std::numbers::pi;

    c.a1 = 0;
    c.a2 = 0;
    for (const auto &rec : analysis.primes) {
        c.a1 = std::max(c.a1, rec.g);
        if (rec.e > 0) {
            Integer candidate = pow_integer(rec.prime, 2UL * analysis.b + rec.g);
            if (candidate > c.a2) {
                c.a2 = candidate;
            }
        }
    }
    c.a3 = 120.0 * std::sqrt(log_s);
    c.a4 = simplified_a4(analysis.s);
    c.alpha5 = std::numbers::e / (4.0 * pi * std::sqrt(c.a4 * (1.0 - 2.0 * c.a4)));
    c.a5 = std::numbers::ln2 / (16.0 * log_s);
    c.a6 = 0.014 / log_s * (1.0 / log_s - 1.0 / s);
    c.a7 = c.a2 * Integer(analysis.s);
    c.a8 = c.a5 - (std::log(7.0) + 3.0 * std::log(std::log(m))) / (288.0 * m);
    c.a9 = c.a6 / 2.0;

    c.logN0_HS2 = log_n0_hs2(c.m);
    c.logN0_HS3 = 2.0 * c.logN0_HS2;
    c.logN0_HS4 = log_n0_hs4(c.m);

    c.a21 = std::cos(pi / (s * s));
    const double neg_log_a21 = -std::log(c.a21);

    if (variant == ConstantsVariant::LargeN) {
        c.a14 = c.a8 / 6.0;
        c.log_a14 = std::log(c.a14);
        c.a15 = c.a9 / 6.0;
        c.a22 = c.a15 * neg_log_a21;
        c.a20 = std::min(c.a14, c.a22);
        c.log_a20 = std::log(c.a20);
    } else {
        const double log_n0 = c.logN0_HS4;
        c.log_a14 = -(log_n0 + std::log(log_n0)); // a14 = 1/(N0 log N0)
        c.a14 = std::exp(c.log_a14);
        c.a15 = 1.0 / (2.0 * log_n0);
        c.a22 = c.a15 * neg_log_a21;
        c.log_a20 = std::min(c.log_a14, std::log(c.a22));
        c.a20 = std::exp(c.log_a20);
    }
    return c;
}

inline ConstantSet compute_constants(std::uint64_t r, std::uint64_t s,
                                     ConstantsVariant variant = ConstantsVariant::LargeN) {
    return compute_constants(analyze_pair(r, s), variant);
}

/// Right-hand side f(a) = 2^(1/4 + 2a) a^a (1 - 2a)^(1/2 - a) of the admissibility condition for a4.
inline double a4_rhs(double a) {
    return std::pow(2.0, 0.25 + 2.0 * a) * std::pow(a, a) * std::pow(1.0 - 2.0 * a, 0.5 - a);
}

/// Supremum of a in (0, 1/16] with (s^2 - 2)^a < f(a), by bisection to relative tolerance 1e-6.
inline double solve_exact_a4(std::uint64_t s) {
    if (s < 2) {
        throw ValidationError("solve_exact_a4 expects s >= 2");
    }
    const double base = static_cast<double>(s) * static_cast<double>(s) - 2.0;
    const auto admissible = [base](double a) {
        // Compare logarithms; both sides are positive on (0, 1/2).
        return a * std::log(base) < std::log(a4_rhs(a));
    };
    double hi = 1.0 / 16.0;
    if (admissible(hi)) {
        return hi;
    }
    double lo = 0.0;
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid > 0.0 && admissible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace normal
