#pragma once

// Equidistribution measurements: exact discrepancy, Weyl sums over orbits {b^n x}, the
// Erdos-Turan bound, the cosine-product sum over r^n l / s^k, nice digit pairs and the
// cell-deviation to discrepancy bridge.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "normal/constants.hpp"
#include "normal/errors.hpp"
#include "normal/exact.hpp"
#include "normal/schmidt.hpp"

namespace normal {

struct PointSet {
    std::vector<Rational> points;

    PointSet() = default;
    explicit PointSet(std::vector<Rational> pts) : points(std::move(pts)) {
        for (const Rational &x : points) {
            if (x < 0 || x >= 1) {
                throw ValidationError("point " + to_string(x) + " outside [0, 1)");
            }
        }
    }
    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

namespace detail {

inline std::vector<Rational> sorted_points(const PointSet &ps) {
    if (ps.points.empty()) {
        throw EmptySet("discrepancy of an empty point set");
    }
    std::vector<Rational> xs = ps.points;
    std::sort(xs.begin(), xs.end());
    return xs;
}

} // namespace detail

/// D_N = max_i (i/N - x_(i)) + max_i (x_(i) - (i-1)/N).
inline Rational discrepancy_extreme(const PointSet &ps) {
    const std::vector<Rational> xs = detail::sorted_points(ps);
    const auto n = static_cast<unsigned long>(xs.size());
    Rational over = make_rational(1, n) - xs[0];
    Rational under = xs[0];
    for (unsigned long i = 1; i <= n; ++i) {
        over = std::max<Rational>(over, make_rational(i, n) - xs[i - 1]);
        under = std::max<Rational>(under, xs[i - 1] - make_rational(i - 1, n));
    }
    return over + under;
}

/// D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N).
inline Rational discrepancy_star(const PointSet &ps) {
    const std::vector<Rational> xs = detail::sorted_points(ps);
    const auto n = static_cast<unsigned long>(xs.size());
    Rational best = 0;
    for (unsigned long i = 1; i <= n; ++i) {
        best = std::max<Rational>(best, make_rational(i, n) - xs[i - 1]);
        best = std::max<Rational>(best, xs[i - 1] - make_rational(i - 1, n));
    }
    return best;
}

struct OrbitSpec {
    Rational x;
    std::uint64_t base = 2;
    std::uint64_t N = 1;
    long t = 1;

    void validate() const {
        if (base < 2) {
            throw ValidationError("orbit base must be at least 2");
        }
        if (N < 1) {
            throw ValidationError("orbit length N must be at least 1");
        }
        if (t == 0) {
            throw ValidationError("Weyl frequency t must be non-zero");
        }
    }
};

/// {b^n x} for n = 1..N, exactly.
inline PointSet orbit_points(const Rational &x, std::uint64_t base, std::uint64_t N) {
    OrbitSpec{x, base, N, 1}.validate();
    const Integer &q = x.get_den();
    Integer residue = mod_floor(x.get_num(), q);
    std::vector<Rational> pts;
    pts.reserve(N);
    for (std::uint64_t n = 0; n < N; ++n) {
        residue = mod_floor(residue * static_cast<unsigned long>(base), q);
        pts.push_back(make_rational(residue, q));
    }
    return PointSet(std::move(pts));
}

/// sum_{n=1}^N e(b^n t x), residues (b^n t p) mod q updated exactly, compensated sums.
inline std::complex<double> weyl_sum(const OrbitSpec &spec) {
    spec.validate();
    const Integer &q = spec.x.get_den();
    Integer residue = mod_floor(spec.x.get_num() * Integer(spec.t), q);
    Integer scratch;
    CompensatedSum re;
    CompensatedSum im;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::uint64_t n = 0; n < spec.N; ++n) {
        residue = mod_floor(residue * static_cast<unsigned long>(spec.base), q);
        const double theta = detail::centered_phase(detail::fixed_point_fraction(residue, q, scratch));
        double s = 0.0;
        double c = 0.0;
        ::sincos(two_pi * theta, &s, &c);
        re.add(c);
        im.add(s);
    }
    return {re.value(), im.value()};
}

struct ErdosTuranConstants {
    double c1 = 1.0;
    double c2 = 3.0;
};

/// C1/H + C2 sum_{t=1}^H (1/t) |(1/N) sum_n e(b^n t x)|.
inline double erdos_turan_bound(const Rational &x, std::uint64_t base, std::uint64_t N, std::uint64_t H,
                                const ErdosTuranConstants &k = {}) {
    if (H < 1) {
        throw ValidationError("Erdos-Turan cutoff H must be at least 1");
    }
    double sum = 0.0;
    for (std::uint64_t t = 1; t <= H; ++t) {
        const std::complex<double> s = weyl_sum(OrbitSpec{x, base, N, static_cast<long>(t)});
        sum += std::abs(s) / static_cast<double>(N) / static_cast<double>(t);
    }
    return k.c1 / static_cast<double>(H) + k.c2 * sum;
}

/// floor(log N), at least 1.
inline std::uint64_t log_cutoff(std::uint64_t N) {
    const auto h = static_cast<std::uint64_t>(std::floor(std::log(static_cast<double>(N))));
    return std::max<std::uint64_t>(h, 1);
}

struct Hs5Result {
    double value = 0.0;
    double certified_error = 0.0;
    bool hypothesis_ok = true;       // l >= s^K
    std::uint64_t factors_evaluated = 0;
};

/// sum_{n=0}^{N-1} prod_{k=K+1}^inf |cos(pi r^n l / s^k)|.
///
/// y_k = frac(r^n l / s^k) is read from the base-s digits of r^n l. Factors are evaluated
/// individually until r^n l / s^k < tol; the remaining product lies in [1 - tail, 1] with
/// tail = (pi^2/2) y^2 / (1 - s^-2). The returned error also covers digit truncation of y_k,
/// rounding in every factor and product, and terms cut short once the product underflows.
inline Hs5Result hs5_sum(std::uint64_t r, std::uint64_t s, const Integer &l, std::uint64_t K, std::uint64_t N,
                         double tol = 1e-12) {
    if (r < 2 || s < 2) {
        throw ValidationError("hs5_sum expects r, s >= 2");
    }
    if (mult_dependent(r, s)) {
        throw MultiplicativelyDependent("hs5_sum expects multiplicatively independent r and s");
    }
    if (l < 1 || N < 1) {
        throw ValidationError("hs5_sum expects l >= 1 and N >= 1");
    }
    if (!(tol > 0 && tol < 1e-3)) {
        throw ValidationError("hs5_sum tolerance must lie in (0, 1e-3)");
    }
    Hs5Result out;
    out.hypothesis_ok = l >= pow_integer(s, K);

    constexpr double kUnit = 0x1p-53;
    const double sd = static_cast<double>(s);
    const double log_s = std::log(sd);
    // Enough leading digits that the truncated part of y_k is below 2^-60.
    const auto lead = static_cast<std::size_t>(std::ceil(60.0 * std::numbers::ln2 / log_s)) + 1;
    const double digit_trunc = std::pow(sd, -static_cast<double>(lead));
    const double per_factor = std::numbers::pi * (digit_trunc + (static_cast<double>(lead) + 4.0) * kUnit) + 4.0 * kUnit;
    const double tail_scale = (std::numbers::pi * std::numbers::pi / 2.0) / (1.0 - 1.0 / (sd * sd));
    const double log_tol = std::log(tol);

    Integer x = l;
    CompensatedSum total;
    double error = 0.0;
    std::vector<unsigned> digits; // least significant first
    for (std::uint64_t n = 0; n < N; ++n) {
        if (n > 0) {
            x *= static_cast<unsigned long>(r);
        }
        const std::string text = x.get_str(static_cast<int>(std::min<std::uint64_t>(s, 36)));
        digits.clear();
        if (s <= 36) {
            for (auto it = text.rbegin(); it != text.rend(); ++it) {
                const char ch = *it;
                digits.push_back(ch <= '9' ? static_cast<unsigned>(ch - '0') : static_cast<unsigned>(ch - 'a' + 10));
            }
        } else {
            Integer rest = x;
            Integer digit;
            while (rest > 0) {
                mpz_fdiv_qr_ui(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), s);
                digits.push_back(static_cast<unsigned>(digit.get_ui()));
            }
        }
        const std::size_t length = digits.size();
        // log(x) for the stopping rule x / s^k < tol.
        long x_exp = 0;
        const double x_mant = mpz_get_d_2exp(&x_exp, x.get_mpz_t());
        const double log_x = std::log(x_mant) + static_cast<double>(x_exp) * std::numbers::ln2;

        // |product - exact head product| <= err, propagated factor by factor.
        double product = 1.0;
        double err = 0.0;
        std::uint64_t count = 0;
        bool underflow = false;
        std::uint64_t k = K + 1;
        for (;; ++k) {
            const double log_y = log_x - static_cast<double>(k) * log_s;
            if (log_y < log_tol) {
                break;
            }
            // y_k = 0.d_{k-1} d_{k-2} ... in base s (positions >= length are 0).
            double y = 0.0;
            const std::size_t stop = k > lead ? k - lead : 0;
            for (std::size_t pos = stop; pos < k; ++pos) {
                const double d = pos < length ? static_cast<double>(digits[pos]) : 0.0;
                y = (y + d) / sd;
            }
            const double factor = std::fabs(std::cos(std::numbers::pi * y));
            const double previous = product;
            product *= factor;
            err = err * std::min(1.0, factor + per_factor) + previous * per_factor + kUnit * product;
            ++count;
            if (product < 1e-300) {
                underflow = true;
                break;
            }
        }
        out.factors_evaluated += count;
        double term_error = err;
        if (underflow) {
            term_error += product + err; // remaining factors lie in [0, 1]
        } else {
            const double y_tail = std::exp(log_x - static_cast<double>(k) * log_s);
            term_error += (product + err) * tail_scale * y_tail * y_tail;
        }
        total.add(product);
        error += term_error;
    }
    out.value = total.value();
    // Summation rounding: compensated sum of N non-negative terms.
    out.certified_error = error + 4.0 * kUnit * out.value + static_cast<double>(N) * 1e-300;
    return out;
}

enum class PairCounting { Overlapping, NonOverlapping };

enum class NicePredicate {
    NotBothZeroOrBothMax, // excludes (0,0) and (s-1,s-1)
    NotBothExtreme        // excludes every pair with both digits in {0, s-1}
};

inline bool is_nice_pair(unsigned a, unsigned b, unsigned base, NicePredicate rule) {
    const unsigned top = base - 1;
    if (rule == NicePredicate::NotBothZeroOrBothMax) {
        return !((a == 0 && b == 0) || (a == top && b == top));
    }
    const bool ea = a == 0 || a == top;
    const bool eb = b == 0 || b == top;
    return !(ea && eb);
}

/// z_K: nice pairs (d_i, d_{i+1}) with 0-based i >= K.
inline std::uint64_t nice_digit_pairs(const DigitString &d, std::size_t K,
                                      PairCounting mode = PairCounting::Overlapping,
                                      NicePredicate rule = NicePredicate::NotBothZeroOrBothMax) {
    require_base(d.base);
    std::uint64_t count = 0;
    const std::size_t stride = mode == PairCounting::Overlapping ? 1 : 2;
    for (std::size_t i = K; i + 1 < d.size(); i += stride) {
        if (is_nice_pair(d.digits[i], d.digits[i + 1], d.base, rule)) {
            ++count;
        }
    }
    return count;
}

/// 2 q^-k + q^k dev, exact.
inline Rational cell_deviation_discrepancy_bound(const Integer &q, unsigned long k, const Rational &dev) {
    if (q < 2 || k < 1 || dev < 0) {
        throw ValidationError("cell deviation bound expects q >= 2, k >= 1, dev >= 0");
    }
    const Integer cells = pow_integer(q, k);
    return make_rational(2, cells) + Rational(cells) * dev;
}

/// 2 q^-L + q^L dev for a real level L > 0.
inline double cell_deviation_discrepancy_bound(double q, double level, double dev) {
    if (!(q >= 2) || !(level > 0) || !(dev >= 0)) {
        throw ValidationError("cell deviation bound expects q >= 2, level > 0, dev >= 0");
    }
    return 2.0 * std::pow(q, -level) + std::pow(q, level) * dev;
}

/// Turing parameters: L = sqrt(log N)/4 and dev = e^{-L^2}.
inline double turing_bridge_bound(std::uint64_t base, double N) {
    const double level = std::sqrt(std::log(N)) / 4.0;
    return cell_deviation_discrepancy_bound(static_cast<double>(base), level, std::exp(-level * level));
}

/// Per-cell deviation (24/eps)^(1/6) q^(1/3) N^(-1/6) of the Sierpinski construction.
inline double sierpinski_cell_deviation(std::uint64_t q, double eps, double N) {
    return std::pow(24.0 / eps, 1.0 / 6.0) * std::cbrt(static_cast<double>(q)) * std::pow(N, -1.0 / 6.0);
}

} // namespace normal
