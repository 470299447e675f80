#pragma once

// Certified real enclosures built on MPFR directed rounding.
//
// A CertifiedReal is an expression tree that can be re-evaluated at any working
// precision; every evaluation returns an interval [lo, hi] that contains the exact
// value. certified_floor doubles the precision until both ends share a floor.

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "normal/errors.hpp"
#include "normal/exact.hpp"

namespace normal {

class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t precision) { mpfr_init2(value_, precision); }
    BigFloat(const BigFloat &other) {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    BigFloat(BigFloat &&other) noexcept : BigFloat(MPFR_PREC_MIN) { mpfr_swap(value_, other.value_); }
    BigFloat &operator=(BigFloat other) noexcept {
        mpfr_swap(value_, other.value_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(value_); }

    mpfr_ptr get() noexcept { return value_; }
    [[nodiscard]] mpfr_srcptr get() const noexcept { return value_; }
    [[nodiscard]] mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }
    [[nodiscard]] double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  private:
    mpfr_t value_;
};

struct Enclosure {
    BigFloat lo;
    BigFloat hi;

    explicit Enclosure(mpfr_prec_t precision) : lo(precision), hi(precision) {}
    [[nodiscard]] mpfr_prec_t precision() const { return lo.precision(); }
    [[nodiscard]] bool finite() const { return mpfr_number_p(lo.get()) && mpfr_number_p(hi.get()); }
};

struct PrecisionPolicy {
    mpfr_prec_t start_bits = 128;
    mpfr_prec_t cap_bits = 4096;

    /// Reads NORMAL_PRECISION_CAP (bits) if set; otherwise the 4096-bit default.
    static PrecisionPolicy from_environment() {
        PrecisionPolicy policy;
        if (const char *env = std::getenv("NORMAL_PRECISION_CAP"); env != nullptr && *env != '\0') {
            const long bits = std::strtol(env, nullptr, 10);
            if (bits >= static_cast<long>(policy.start_bits)) {
                policy.cap_bits = static_cast<mpfr_prec_t>(bits);
            }
        }
        return policy;
    }
};

class CertifiedReal {
  public:
    using Evaluator = std::function<Enclosure(mpfr_prec_t)>;

    CertifiedReal(std::string description, Evaluator evaluator)
        : description_(std::move(description)),
          evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))) {}

    [[nodiscard]] Enclosure enclose(mpfr_prec_t precision) const { return (*evaluator_)(precision); }
    [[nodiscard]] const std::string &description() const noexcept { return description_; }

    /// Rational endpoints of the enclosure at the given precision (must be finite).
    [[nodiscard]] std::pair<Rational, Rational> bounds(mpfr_prec_t precision) const {
        Enclosure e = enclose(precision);
        if (!e.finite()) {
            throw PrecisionExhausted("enclosure of '" + description_ + "' is unbounded");
        }
        Rational lo;
        Rational hi;
        mpfr_get_q(lo.get_mpq_t(), e.lo.get());
        mpfr_get_q(hi.get_mpq_t(), e.hi.get());
        return {lo, hi};
    }

    static CertifiedReal integer(const Integer &n) {
        return {n.get_str(), [n](mpfr_prec_t p) {
                    Enclosure e(p);
                    mpfr_set_z(e.lo.get(), n.get_mpz_t(), MPFR_RNDD);
                    mpfr_set_z(e.hi.get(), n.get_mpz_t(), MPFR_RNDU);
                    return e;
                }};
    }

    static CertifiedReal rational(const Rational &q) {
        return {to_string(q), [q](mpfr_prec_t p) {
                    Enclosure e(p);
                    mpfr_set_q(e.lo.get(), q.get_mpq_t(), MPFR_RNDD);
                    mpfr_set_q(e.hi.get(), q.get_mpq_t(), MPFR_RNDU);
                    return e;
                }};
    }

    static CertifiedReal pi() {
        return {"pi", [](mpfr_prec_t p) {
                    Enclosure e(p);
                    mpfr_const_pi(e.lo.get(), MPFR_RNDD);
                    mpfr_const_pi(e.hi.get(), MPFR_RNDU);
                    return e;
                }};
    }

  private:
    std::string description_;
    std::shared_ptr<const Evaluator> evaluator_;
};

namespace detail {

using Binary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Endpoint products/quotients in all four combinations; min of the downward roundings,
// max of the upward ones.
inline Enclosure corners(const Enclosure &a, const Enclosure &b, Binary op, mpfr_prec_t p) {
    Enclosure out(p);
    BigFloat tmp(p);
    bool first = true;
    for (const BigFloat *x : {&a.lo, &a.hi}) {
        for (const BigFloat *y : {&b.lo, &b.hi}) {
            op(tmp.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || mpfr_less_p(tmp.get(), out.lo.get())) {
                mpfr_set(out.lo.get(), tmp.get(), MPFR_RNDD);
            }
            op(tmp.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || mpfr_greater_p(tmp.get(), out.hi.get())) {
                mpfr_set(out.hi.get(), tmp.get(), MPFR_RNDU);
            }
            first = false;
        }
    }
    if (mpfr_nan_p(out.lo.get()) || mpfr_nan_p(out.hi.get())) {
        mpfr_set_inf(out.lo.get(), -1);
        mpfr_set_inf(out.hi.get(), 1);
    }
    return out;
}

inline Enclosure unbounded(mpfr_prec_t p) {
    Enclosure out(p);
    mpfr_set_inf(out.lo.get(), -1);
    mpfr_set_inf(out.hi.get(), 1);
    return out;
}

} // namespace detail

inline CertifiedReal operator+(const CertifiedReal &a, const CertifiedReal &b) {
    return {"(" + a.description() + " + " + b.description() + ")", [a, b](mpfr_prec_t p) {
                Enclosure x = a.enclose(p);
                Enclosure y = b.enclose(p);
                Enclosure out(p);
                mpfr_add(out.lo.get(), x.lo.get(), y.lo.get(), MPFR_RNDD);
                mpfr_add(out.hi.get(), x.hi.get(), y.hi.get(), MPFR_RNDU);
                return out;
            }};
}

inline CertifiedReal operator-(const CertifiedReal &a, const CertifiedReal &b) {
    return {"(" + a.description() + " - " + b.description() + ")", [a, b](mpfr_prec_t p) {
                Enclosure x = a.enclose(p);
                Enclosure y = b.enclose(p);
                Enclosure out(p);
                mpfr_sub(out.lo.get(), x.lo.get(), y.hi.get(), MPFR_RNDD);
                mpfr_sub(out.hi.get(), x.hi.get(), y.lo.get(), MPFR_RNDU);
                return out;
            }};
}

inline CertifiedReal operator*(const CertifiedReal &a, const CertifiedReal &b) {
    return {a.description() + " * " + b.description(), [a, b](mpfr_prec_t p) {
                return detail::corners(a.enclose(p), b.enclose(p), mpfr_mul, p);
            }};
}

inline CertifiedReal operator/(const CertifiedReal &a, const CertifiedReal &b) {
    return {a.description() + " / " + b.description(), [a, b](mpfr_prec_t p) {
                Enclosure y = b.enclose(p);
                // A denominator enclosure touching zero carries no information yet.
                if (mpfr_sgn(y.lo.get()) <= 0 && mpfr_sgn(y.hi.get()) >= 0) {
                    return detail::unbounded(p);
                }
                return detail::corners(a.enclose(p), y, mpfr_div, p);
            }};
}

namespace detail {

using Unary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

inline CertifiedReal monotone(const std::string &name, const CertifiedReal &a, Unary fn) {
    return {name + "(" + a.description() + ")", [a, fn](mpfr_prec_t p) {
                Enclosure x = a.enclose(p);
                Enclosure out(p);
                fn(out.lo.get(), x.lo.get(), MPFR_RNDD);
                fn(out.hi.get(), x.hi.get(), MPFR_RNDU);
                if (mpfr_nan_p(out.lo.get()) || mpfr_nan_p(out.hi.get())) {
                    return unbounded(p);
                }
                return out;
            }};
}

} // namespace detail

inline CertifiedReal exp(const CertifiedReal &a) { return detail::monotone("exp", a, mpfr_exp); }

/// Natural logarithm; an enclosure reaching zero or below yields an unbounded result.
inline CertifiedReal log(const CertifiedReal &a) { return detail::monotone("log", a, mpfr_log); }

inline CertifiedReal sqrt(const CertifiedReal &a) { return detail::monotone("sqrt", a, mpfr_sqrt); }

/// a^c for a >= 1 and rational c > 0, via exp(c log a).
inline CertifiedReal pow(const CertifiedReal &a, const Rational &c) {
    CertifiedReal r = exp(CertifiedReal::rational(c) * log(a));
    return {a.description() + "^" + to_string(c), [r](mpfr_prec_t p) { return r.enclose(p); }};
}

inline CertifiedReal cos(const CertifiedReal &a) {
    return {"cos(" + a.description() + ")", [a](mpfr_prec_t p) {
                Enclosure x = a.enclose(p);
                if (!x.finite()) {
                    Enclosure out(p);
                    mpfr_set_si(out.lo.get(), -1, MPFR_RNDD);
                    mpfr_set_si(out.hi.get(), 1, MPFR_RNDU);
                    return out;
                }
                Enclosure out(p);
                BigFloat tmp(p);
                mpfr_cos(out.lo.get(), x.lo.get(), MPFR_RNDD);
                mpfr_cos(tmp.get(), x.hi.get(), MPFR_RNDD);
                mpfr_min(out.lo.get(), out.lo.get(), tmp.get(), MPFR_RNDD);
                mpfr_cos(out.hi.get(), x.lo.get(), MPFR_RNDU);
                mpfr_cos(tmp.get(), x.hi.get(), MPFR_RNDU);
                mpfr_max(out.hi.get(), out.hi.get(), tmp.get(), MPFR_RNDU);

                // Interior extrema sit at integer multiples of pi; use a conservative
                // enclosure of x/pi to find any that might be inside.
                Enclosure pi = CertifiedReal::pi().enclose(p);
                Enclosure ratio = detail::corners(x, pi, mpfr_div, p);
                Integer k_lo;
                Integer k_hi;
                mpfr_get_z(k_lo.get_mpz_t(), ratio.lo.get(), MPFR_RNDU);
                mpfr_get_z(k_hi.get_mpz_t(), ratio.hi.get(), MPFR_RNDD);
                for (Integer k = k_lo; k <= k_hi && k <= k_lo + 2; ++k) {
                    if (mpz_even_p(k.get_mpz_t())) {
                        mpfr_set_si(out.hi.get(), 1, MPFR_RNDU);
                    } else {
                        mpfr_set_si(out.lo.get(), -1, MPFR_RNDD);
                    }
                }
                return out;
            }};
}

/// Floor of a real expression, certified: precision doubles from policy.start_bits until the
/// enclosure's endpoints share a floor. Throws PrecisionExhausted past policy.cap_bits.
inline Integer certified_floor(const CertifiedReal &e, const PrecisionPolicy &policy = {}) {
    for (mpfr_prec_t p = policy.start_bits; p <= policy.cap_bits; p *= 2) {
        Enclosure enc = e.enclose(p);
        if (!enc.finite()) {
            continue;
        }
        Integer lo;
        Integer hi;
        mpfr_get_z(lo.get_mpz_t(), enc.lo.get(), MPFR_RNDD);
        mpfr_get_z(hi.get_mpz_t(), enc.hi.get(), MPFR_RNDD);
        if (lo == hi) {
            return lo;
        }
    }
    throw PrecisionExhausted("floor of '" + e.description() + "' undecided at " +
                             std::to_string(policy.cap_bits) + " bits");
}

} // namespace normal
