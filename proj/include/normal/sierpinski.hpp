#pragma once

// Effective Sierpinski construction: the interval families Delta_{q,m,n,p}, truncated unions
// Delta_k, and greedy digit selection that keeps the current cell as free of Delta as possible.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normal/errors.hpp"
#include "normal/exact.hpp"
#include "normal/interval_set.hpp"

namespace normal {

/// n_{m,q} = floor(24 m^6 q^2 / eps) + 2.
inline Integer n_lower(std::uint64_t m, std::uint64_t q, const Rational &eps) {
    if (m < 1 || q < 2) {
        throw ValidationError("n_lower expects m >= 1 and q >= 2");
    }
    if (!(eps > 0 && eps <= Rational(1, 2))) {
        throw ValidationError("epsilon must lie in (0, 1/2]");
    }
    const Integer numerator = Integer(24) * pow_integer(m, 6) * pow_integer(q, 2);
    return floor_of(Rational(numerator) / eps) + 2;
}

/// Digit p is too frequent or too rare: |N_p/n - 1/q| >= 1/m.
inline bool deviates(std::uint64_t count, std::uint64_t n, std::uint64_t q, std::uint64_t m) {
    const auto qn = static_cast<__int128>(q) * static_cast<__int128>(count);
    const __int128 diff = qn > static_cast<__int128>(n) ? qn - n : static_cast<__int128>(n) - qn;
    return diff * static_cast<__int128>(m) >= static_cast<__int128>(n) * static_cast<__int128>(q);
}

inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 22;

namespace detail {

inline void require_family(std::uint64_t q, std::uint64_t m, std::uint64_t n, std::uint64_t p) {
    if (q < 2 || m < 1 || n < 1 || p >= q) {
        throw ValidationError("Delta family expects q >= 2, m >= 1, n >= 1, 0 <= p < q");
    }
}

inline std::uint64_t checked_power(std::uint64_t q, std::uint64_t n, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (v > cap / q) {
            throw ScaleExceedsCap("q^n = " + std::to_string(q) + "^" + std::to_string(n) +
                                  " strings exceed the enumeration cap; use bound mode or smaller toy caps");
        }
        v *= q;
    }
    return v;
}

// Runs [lo, hi) in units of q^-n from the string intervals [B-1, B+2) of the bad strings with
// first <= B <= last, clipped to [0, q^n). `bad` decides from the digit counts.
template <class Bad>
std::vector<std::pair<std::int64_t, std::int64_t>> bad_runs(std::uint64_t q, std::uint64_t n, std::int64_t first,
                                                            std::int64_t last, Bad bad) {
    const auto total = static_cast<std::int64_t>(checked_power(q, n, kEnumerationCap));
    first = std::max<std::int64_t>(first, 0);
    last = std::min<std::int64_t>(last, total - 1);
    std::vector<std::pair<std::int64_t, std::int64_t>> runs;
    std::vector<std::uint64_t> counts(q);
    for (std::int64_t B = first; B <= last; ++B) {
        std::fill(counts.begin(), counts.end(), 0);
        auto v = static_cast<std::uint64_t>(B);
        for (std::uint64_t i = 0; i < n; ++i) {
            ++counts[v % q];
            v /= q;
        }
        if (!bad(counts)) {
            continue;
        }
        const std::int64_t lo = std::max<std::int64_t>(B - 1, 0);
        const std::int64_t hi = std::min<std::int64_t>(B + 2, total);
        if (!runs.empty() && lo <= runs.back().second) {
            runs.back().second = std::max(runs.back().second, hi);
        } else {
            runs.emplace_back(lo, hi);
        }
    }
    return runs;
}

inline std::vector<IntervalSet::Interval> to_rational(const std::vector<std::pair<std::int64_t, std::int64_t>> &runs,
                                                      const Integer &scale) {
    std::vector<IntervalSet::Interval> out;
    out.reserve(runs.size());
    for (const auto &[lo, hi] : runs) {
        out.emplace_back(make_rational(Integer(static_cast<long>(lo)), scale),
                         make_rational(Integer(static_cast<long>(hi)), scale));
    }
    return out;
}

} // namespace detail

/// Delta_{q,m,n,p}: union of ((B-1)/q^n, (B+2)/q^n) over strings b_1..b_n (value B) whose digit
/// p deviates, clipped to [0, 1). Stored half-open; the measure is unaffected.
inline IntervalSet delta_family(std::uint64_t q, std::uint64_t m, std::uint64_t n, std::uint64_t p) {
    detail::require_family(q, m, n, p);
    const auto total = static_cast<std::int64_t>(detail::checked_power(q, n, kEnumerationCap));
    const auto runs = detail::bad_runs(q, n, 0, total - 1, [&](const std::vector<std::uint64_t> &counts) {
        return deviates(counts[p], n, q, m);
    });
    return IntervalSet::from_intervals(detail::to_rational(runs, pow_integer(q, n)));
}

/// 3 q^-n sum_{j deviating} C(n, j) (q-1)^(n-j): subadditive bound on the measure of Delta_{q,m,n,p}.
inline Rational delta_measure_bound(std::uint64_t q, std::uint64_t m, std::uint64_t n, std::uint64_t p) {
    detail::require_family(q, m, n, p);
    Integer count = 0;
    Integer binom;
    for (std::uint64_t j = 0; j <= n; ++j) {
        if (deviates(j, n, q, m)) {
            mpz_bin_uiui(binom.get_mpz_t(), n, j);
            count += binom * pow_integer(q - 1, n - j);
        }
    }
    return make_rational(3 * count, pow_integer(q, n));
}

/// Number of length-n base-q strings with value in [lo, hi] whose digit p deviates.
class DeviationCounter {
  public:
    DeviationCounter(std::uint64_t q, std::uint64_t m, std::uint64_t n, std::uint64_t p) : q_(q), n_(n), p_(p) {
        detail::require_family(q, m, n, p);
        bad_.resize(n + 1);
        for (std::uint64_t j = 0; j <= n; ++j) {
            bad_[j] = deviates(j, n, q, m);
        }
        // completions_[f][c]: strings of f free digits that bring a count c to a deviating total.
        completions_.assign(n + 1, std::vector<Integer>(n + 1, 0));
        Integer binom;
        for (std::uint64_t f = 0; f <= n; ++f) {
            for (std::uint64_t c = 0; c <= n; ++c) {
                Integer sum = 0;
                for (std::uint64_t extra = 0; extra <= f && c + extra <= n; ++extra) {
                    if (bad_[c + extra]) {
                        mpz_bin_uiui(binom.get_mpz_t(), f, extra);
                        sum += binom * pow_integer(q - 1, f - extra);
                    }
                }
                completions_[f][c] = sum;
            }
        }
    }

    /// Strings with value <= x (x may exceed the range; negative x gives 0).
    [[nodiscard]] Integer count_at_most(const Integer &x) const {
        if (x < 0) {
            return 0;
        }
        const Integer total = pow_integer(q_, n_);
        if (x >= total - 1) {
            return completions_[n_][0];
        }
        // Digits of x, most significant first.
        std::vector<std::uint64_t> digits(n_);
        Integer rest = x;
        Integer d;
        for (std::uint64_t i = n_; i-- > 0;) {
            mpz_fdiv_qr_ui(rest.get_mpz_t(), d.get_mpz_t(), rest.get_mpz_t(), q_);
            digits[i] = d.get_ui();
        }
        Integer result = 0;
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < n_; ++i) {
            const std::uint64_t free = n_ - i - 1;
            for (std::uint64_t dig = 0; dig < digits[i]; ++dig) {
                result += completions_[free][c + (dig == p_ ? 1 : 0)];
            }
            if (digits[i] == p_) {
                ++c;
            }
        }
        if (bad_[c]) {
            result += 1; // x itself
        }
        return result;
    }

    [[nodiscard]] Integer count_between(const Integer &lo, const Integer &hi) const {
        if (hi < lo) {
            return 0;
        }
        return count_at_most(hi) - count_at_most(lo - 1);
    }

  private:
    std::uint64_t q_;
    std::uint64_t n_;
    std::uint64_t p_;
    std::vector<bool> bad_;
    std::vector<std::vector<Integer>> completions_;
};

/// Optional caps that shrink Delta_k to desk scale. Any cap makes the run non-certified.
struct ToyCaps {
    std::optional<std::uint64_t> k_cap;
    std::optional<std::uint64_t> q_cap;
    std::optional<std::uint64_t> m_cap;
    std::optional<std::uint64_t> n_cap;
    std::optional<std::uint64_t> n_base; // replaces n_{m,q}

    [[nodiscard]] bool any() const { return k_cap || q_cap || m_cap || n_cap || n_base; }
};

struct SierpinskiParams {
    Rational epsilon = Rational(1, 2);
    unsigned base = 2;
    ToyCaps caps;

    void validate() const {
        if (!(epsilon > 0 && epsilon <= Rational(1, 2))) {
            throw ValidationError("epsilon must lie in (0, 1/2]");
        }
        require_base(base);
        for (const auto &cap : {caps.k_cap, caps.q_cap, caps.m_cap, caps.n_cap, caps.n_base}) {
            if (cap && *cap < 1) {
                throw ValidationError("toy caps must be positive");
            }
        }
        if (caps.q_cap && *caps.q_cap < 2) {
            throw ValidationError("toy q cap must be at least 2");
        }
    }
    [[nodiscard]] bool certified() const { return !caps.any(); }
};

/// p_n = 5 (b-1) 2^(2n-2).
inline Integer p_index(unsigned base, std::uint64_t n) {
    if (n < 1) {
        throw ValidationError("digit index must be at least 1");
    }
    return Integer(5UL * (base - 1UL)) * pow_integer(2, 2 * n - 2);
}

/// One (q, n) slab of Delta_k: every (m, p) with n_{m,q} <= n <= k n_{m,q} shares the string set,
/// and a string is bad iff some digit deviates for the largest such m.
struct DeltaSlab {
    std::uint64_t q = 0;
    std::uint64_t n = 0;
    std::uint64_t m_max = 0;
    std::vector<std::uint64_t> ms; // every m contributing to this slab
};

/// Slabs of the truncated Delta_k under the caps, ordered by (q, n).
inline std::vector<DeltaSlab> truncated_slabs(const Integer &k, const SierpinskiParams &params) {
    params.validate();
    const Integer k_eff = params.caps.k_cap ? std::min<Integer>(k, Integer(*params.caps.k_cap)) : k;
    if (k_eff < 1) {
        return {};
    }
    const auto limit = [](const Integer &v, const std::optional<std::uint64_t> &cap) {
        Integer out = v;
        if (cap && out > *cap) {
            out = Integer(*cap);
        }
        return out;
    };
    const Integer q_hi = limit(k_eff + 1, params.caps.q_cap);
    const Integer m_hi = limit(k_eff, params.caps.m_cap);
    if (!q_hi.fits_ulong_p() || !m_hi.fits_ulong_p() || q_hi > 4096 || m_hi > 4096) {
        throw ScaleExceedsCap("truncated Delta_k has " + q_hi.get_str() + " bases and " + m_hi.get_str() +
                              " deviation levels; set toy caps");
    }
    std::map<std::pair<std::uint64_t, std::uint64_t>, DeltaSlab> slabs;
    for (std::uint64_t q = 2; q <= q_hi.get_ui(); ++q) {
        for (std::uint64_t m = 1; m <= m_hi.get_ui(); ++m) {
            const Integer n0 = params.caps.n_base ? Integer(*params.caps.n_base) : n_lower(m, q, params.epsilon);
            const Integer n1 = limit(k_eff * n0, params.caps.n_cap);
            if (n0 > n1) {
                continue;
            }
            if (!n1.fits_ulong_p() || n1 - n0 > (1UL << 20)) {
                throw ScaleExceedsCap("string lengths up to " + n1.get_str() + " in Delta_k; set toy caps");
            }
            for (std::uint64_t n = n0.get_ui(); n <= n1.get_ui(); ++n) {
                DeltaSlab &slab = slabs[{q, n}];
                slab.q = q;
                slab.n = n;
                slab.m_max = std::max(slab.m_max, m);
                slab.ms.push_back(m);
            }
        }
    }
    std::vector<DeltaSlab> out;
    out.reserve(slabs.size());
    for (auto &[key, slab] : slabs) {
        out.push_back(std::move(slab));
    }
    return out;
}

/// Delta_k intersected with [lo, hi), exactly (strings enumerated only near the window).
inline IntervalSet truncated_delta(const Integer &k, const SierpinskiParams &params, const Rational &lo,
                                   const Rational &hi) {
    std::vector<IntervalSet::Interval> all;
    std::uint64_t enumerated = 0;
    for (const DeltaSlab &slab : truncated_slabs(k, params)) {
        const Integer scale = pow_integer(slab.q, slab.n);
        // String interval [(B-1)/q^n, (B+2)/q^n) meets [lo, hi) iff lo q^n - 2 < B < hi q^n + 1.
        const Integer first = floor_of(lo * scale) - 2;
        const Integer last = ceil_of(hi * scale) + 1;
        detail::checked_power(slab.q, slab.n, kEnumerationCap);
        const Integer span = last - first + 1;
        enumerated += span.get_ui();
        if (enumerated > 4 * kEnumerationCap) {
            throw ScaleExceedsCap("exact Delta_k enumeration exceeds the cap; use bound mode or smaller toy caps");
        }
        const std::uint64_t q = slab.q;
        const std::uint64_t n = slab.n;
        const std::uint64_t m = slab.m_max;
        const auto runs = detail::bad_runs(q, n, first.get_si(), last.get_si(), [&](const std::vector<std::uint64_t> &c) {
            return std::any_of(c.begin(), c.end(), [&](std::uint64_t count) { return deviates(count, n, q, m); });
        });
        auto part = detail::to_rational(runs, scale);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return IntervalSet::from_intervals(std::move(all)).intersect(IntervalSet::single(lo, hi));
}

/// Upper bound on |Delta_k cap [lo, hi)| by counting deviating strings whose interval meets the
/// window; each (q, m, n, p) family contributes at most min(3 count / q^n, hi - lo).
inline Rational truncated_delta_bound(const Integer &k, const SierpinskiParams &params, const Rational &lo,
                                      const Rational &hi) {
    const Rational length = hi - lo;
    Rational total = 0;
    for (const DeltaSlab &slab : truncated_slabs(k, params)) {
        const Integer scale = pow_integer(slab.q, slab.n);
        const Integer first = std::max<Integer>(floor_of(lo * scale) - 1, Integer(0));
        const Integer last = std::min<Integer>(ceil_of(hi * scale), scale - 1);
        // Deviation sets grow with m, so the largest m of the slab covers the others.
        for (std::uint64_t p = 0; p < slab.q; ++p) {
            const DeviationCounter counter(slab.q, slab.m_max, slab.n, p);
            const Integer count = counter.count_between(first, last);
            total += std::min<Rational>(make_rational(3 * count, scale), length);
            if (total >= length) {
                return length;
            }
        }
    }
    return total;
}

enum class MeasureMode { Exact, Bound };

inline std::string to_string(MeasureMode mode) { return mode == MeasureMode::Exact ? "exact" : "bound"; }

struct DigitChoice {
    unsigned digit = 0;
    Integer k;                      // p_n
    MeasureMode mode = MeasureMode::Exact;
    std::vector<Rational> measures; // per candidate digit d (exact measure or bound)
    Rational cell_length;           // b^-n
};

/// Picks digit n (= prefix length + 1) as the smallest d minimizing the Delta_{p_n} measure in c_d^n.
inline DigitChoice select_digit(const DigitString &prefix, const SierpinskiParams &params, MeasureMode mode) {
    params.validate();
    if (prefix.base != params.base) {
        throw ValidationError("prefix base does not match the output base");
    }
    const std::uint64_t n = prefix.size() + 1;
    const Rational parent_lo = value_of(prefix);
    const Integer denom = pow_integer(params.base, n);
    DigitChoice out;
    out.k = p_index(params.base, n);
    out.mode = mode;
    out.cell_length = make_rational(1, denom);
    const Rational parent_hi = parent_lo + make_rational(1, pow_integer(params.base, n - 1));
    if (mode == MeasureMode::Exact) {
        const IntervalSet delta = truncated_delta(out.k, params, parent_lo, parent_hi);
        for (unsigned d = 0; d < params.base; ++d) {
            const Rational lo = parent_lo + make_rational(d, denom);
            out.measures.push_back(delta.measure_within(lo, lo + out.cell_length));
        }
    } else {
        for (unsigned d = 0; d < params.base; ++d) {
            const Rational lo = parent_lo + make_rational(d, denom);
            out.measures.push_back(truncated_delta_bound(out.k, params, lo, lo + out.cell_length));
        }
    }
    for (unsigned d = 1; d < params.base; ++d) {
        if (out.measures[d] < out.measures[out.digit]) {
            out.digit = d;
        }
    }
    return out;
}

struct SierpinskiStep {
    std::uint64_t n = 0;
    unsigned digit = 0;
    Integer k;
    std::vector<Rational> measures;
    Rational cell_length;
    bool survives = true; // chosen cell not covered by the truncated Delta (exact mode)
};

struct SierpinskiState {
    SierpinskiParams params;
    MeasureMode mode = MeasureMode::Exact;
    DigitString digits{2, {}};
    std::vector<SierpinskiStep> steps;

    [[nodiscard]] bool diagnostics_ok() const {
        return std::all_of(steps.begin(), steps.end(), [](const SierpinskiStep &s) { return s.survives; });
    }
};

inline SierpinskiState initial_sierpinski(const SierpinskiParams &params, MeasureMode mode) {
    params.validate();
    SierpinskiState state;
    state.params = params;
    state.mode = mode;
    state.digits = DigitString{params.base, {}};
    return state;
}

inline SierpinskiState sierpinski_step(const SierpinskiState &state) {
    const DigitChoice choice = select_digit(state.digits, state.params, state.mode);
    SierpinskiState next = state;
    SierpinskiStep rec;
    rec.n = state.digits.size() + 1;
    rec.digit = choice.digit;
    rec.k = choice.k;
    rec.measures = choice.measures;
    rec.cell_length = choice.cell_length;
    rec.survives = choice.measures[choice.digit] < choice.cell_length;
    next.digits.digits.push_back(choice.digit);
    next.steps.push_back(std::move(rec));
    return next;
}

inline SierpinskiState sierpinski_run(SierpinskiState state, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) {
        state = sierpinski_step(state);
    }
    return state;
}

struct ModeCheck {
    bool bounds_dominate = true; // bound >= exact for every candidate digit
    bool guarded_agree = true;   // bound mode picks the exact digit whenever the bounds separate it
    bool separated = false;
    unsigned exact_digit = 0;
    unsigned bound_digit = 0;
};

/// Compares both measure modes on the same prefix.
inline ModeCheck cross_check_modes(const DigitString &prefix, const SierpinskiParams &params) {
    const DigitChoice exact = select_digit(prefix, params, MeasureMode::Exact);
    const DigitChoice bound = select_digit(prefix, params, MeasureMode::Bound);
    ModeCheck out;
    out.exact_digit = exact.digit;
    out.bound_digit = bound.digit;
    out.separated = true;
    for (unsigned d = 0; d < params.base; ++d) {
        if (bound.measures[d] < exact.measures[d]) {
            out.bounds_dominate = false;
        }
        if (d != exact.digit && !(bound.measures[exact.digit] < exact.measures[d])) {
            out.separated = false;
        }
    }
    out.guarded_agree = !out.separated || bound.digit == exact.digit;
    return out;
}

} // namespace normal
