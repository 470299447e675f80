#pragma once

// Step-m iteration of Schmidt's construction of an absolutely normal number.
//
// Each step enumerates the candidate set sigma_m(xi_{m-1}) (the grid point eta_m followed by
// 0/1 digits in base s_m at positions a_m+1 .. b_m-2), evaluates the objective A'_m on every
// candidate and keeps the smallest minimizer. Phases e(r^j t x) are reduced exactly with
// modular arithmetic before any floating-point work.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "normal/certified.hpp"
#include "normal/errors.hpp"
#include "normal/exact.hpp"
#include "normal/plan.hpp"
#include "normal/schedule.hpp"

namespace normal {

struct BuilderConfig {
    unsigned width_cap = 24;
    unsigned threads = 1;
    double tie_relative = 1e-12;     // near-tie window for high-precision re-evaluation
    mpfr_prec_t tie_precision = 113; // quadruple working precision
};

/// Neumaier summation.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

using u128 = unsigned __int128;

// floor(residue * 2^128 / modulus) for 0 <= residue < modulus.
inline u128 fixed_point_fraction(const Integer &residue, const Integer &modulus, Integer &scratch) {
    mpz_mul_2exp(scratch.get_mpz_t(), residue.get_mpz_t(), 128);
    mpz_fdiv_q(scratch.get_mpz_t(), scratch.get_mpz_t(), modulus.get_mpz_t());
    u128 out = 0;
    std::size_t count = 0;
    std::uint64_t words[2] = {0, 0};
    mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, scratch.get_mpz_t());
    out = (static_cast<u128>(words[1]) << 64) | words[0];
    return out;
}

// Fraction in [-1/2, 1/2) represented by a 128-bit fixed-point phase.
inline double centered_phase(u128 phase) noexcept {
    return static_cast<double>(static_cast<__int128>(phase)) * 0x1p-128;
}

} // namespace detail

/// One base r_i of the objective: exponents j in (lo, hi], with multiplicity when r_i repeats.
struct ObjectiveTerm {
    std::uint64_t base = 0;
    unsigned multiplicity = 0;
    Integer lo; // <m; r>
    Integer hi; // <m+1; r>
    std::vector<Integer> residues; // r^j mod denominator, j = lo+1 .. hi
};

/// A'_m(x) for every x with a fixed denominator.
class ObjectiveKernel {
  public:
    ObjectiveKernel(std::uint64_t m, const SequencePlan &plan, const Schedule &schedule, Integer denominator)
        : m_(m), denominator_(std::move(denominator)) {
        if (m < 1 || m > plan.horizon) {
            throw HorizonTooShort("objective index " + std::to_string(m) + " outside the plan horizon");
        }
        const Integer bracket_m = schedule.bracket(m);
        const Integer bracket_next = schedule.bracket(m + 1);
        for (std::size_t i = 1; i <= m; ++i) {
            const std::uint64_t r = plan.r_at(i);
            if (plan.m0_of(r) > m) {
                continue;
            }
            auto it = std::find_if(terms_.begin(), terms_.end(), [r](const ObjectiveTerm &t) { return t.base == r; });
            if (it != terms_.end()) {
                ++it->multiplicity;
                continue;
            }
            ObjectiveTerm term;
            term.base = r;
            term.multiplicity = 1;
            term.lo = schedule.floor_over_log(bracket_m, r);
            term.hi = schedule.floor_over_log(bracket_next, r);
            if (term.hi > term.lo) {
                Integer power;
                const Integer base(static_cast<unsigned long>(r));
                const Integer start = term.lo + 1;
                mpz_powm(power.get_mpz_t(), base.get_mpz_t(), start.get_mpz_t(), denominator_.get_mpz_t());
                for (Integer j = start; j <= term.hi; ++j) {
                    term.residues.push_back(power);
                    power = mod_floor(power * base, denominator_);
                }
            }
            terms_.push_back(std::move(term));
        }
    }

    [[nodiscard]] std::uint64_t m() const noexcept { return m_; }
    [[nodiscard]] const Integer &denominator() const noexcept { return denominator_; }
    [[nodiscard]] const std::vector<ObjectiveTerm> &terms() const noexcept { return terms_; }

    /// e(.) evaluations performed per candidate (t > 0 only; the t < 0 half is its conjugate).
    [[nodiscard]] std::uint64_t evaluations_per_candidate() const noexcept {
        std::uint64_t n = 0;
        for (const auto &term : terms_) {
            n += term.residues.size() * m_;
        }
        return n;
    }

    /// e(.) count of the formula as written: both signs of t and every repeated base.
    [[nodiscard]] std::uint64_t formula_evaluations_per_candidate() const noexcept {
        std::uint64_t n = 0;
        for (const auto &term : terms_) {
            n += term.residues.size() * term.multiplicity * 2 * m_;
        }
        return n;
    }

    struct Workspace {
        Integer product;
        Integer scratch;
        std::vector<CompensatedSum> re;
        std::vector<CompensatedSum> im;
    };

    /// Objective at numerator/denominator in double arithmetic with compensated sums.
    [[nodiscard]] double evaluate(const Integer &numerator, Workspace &ws) const {
        long double total = 0.0L;
        const double two_pi = 2.0 * std::numbers::pi;
        for (const auto &term : terms_) {
            ws.re.assign(m_, CompensatedSum{});
            ws.im.assign(m_, CompensatedSum{});
            for (const Integer &residue : term.residues) {
                mpz_mul(ws.product.get_mpz_t(), residue.get_mpz_t(), numerator.get_mpz_t());
                mpz_fdiv_r(ws.product.get_mpz_t(), ws.product.get_mpz_t(), denominator_.get_mpz_t());
                const detail::u128 base_phase = detail::fixed_point_fraction(ws.product, denominator_, ws.scratch);
                detail::u128 phase = 0;
                for (std::uint64_t t = 0; t < m_; ++t) {
                    phase += base_phase; // (t+1) * x r^j mod 1
                    double s = 0.0;
                    double c = 0.0;
                    ::sincos(two_pi * detail::centered_phase(phase), &s, &c);
                    ws.re[t].add(c);
                    ws.im[t].add(s);
                }
            }
            long double part = 0.0L;
            for (std::uint64_t t = 0; t < m_; ++t) {
                const long double re = ws.re[t].value();
                const long double im = ws.im[t].value();
                part += re * re + im * im;
            }
            total += 2.0L * term.multiplicity * part;
        }
        return static_cast<double>(total);
    }

    [[nodiscard]] double evaluate(const Rational &x) const {
        if (x.get_den() != denominator_) {
            return ObjectiveKernel(*this, x.get_den()).evaluate(x.get_num());
        }
        return evaluate(x.get_num());
    }

    [[nodiscard]] double evaluate(const Integer &numerator) const {
        Workspace ws;
        return evaluate(numerator, ws);
    }

    /// Objective at `precision` bits with MPFR; phases from exact residues (t x r^j) mod denominator.
    [[nodiscard]] BigFloat evaluate_high(const Integer &numerator, mpfr_prec_t precision) const {
        BigFloat total(precision);
        mpfr_set_zero(total.get(), 1);
        BigFloat two_pi(precision);
        mpfr_const_pi(two_pi.get(), MPFR_RNDN);
        mpfr_mul_2ui(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
        BigFloat angle(precision);
        BigFloat sn(precision);
        BigFloat cs(precision);
        BigFloat tmp(precision);
        Integer a;
        Integer b;
        for (const auto &term : terms_) {
            std::vector<BigFloat> re(m_, BigFloat(precision));
            std::vector<BigFloat> im(m_, BigFloat(precision));
            for (std::uint64_t t = 0; t < m_; ++t) {
                mpfr_set_zero(re[t].get(), 1);
                mpfr_set_zero(im[t].get(), 1);
            }
            for (const Integer &residue : term.residues) {
                a = mod_floor(residue * numerator, denominator_);
                for (std::uint64_t t = 0; t < m_; ++t) {
                    b = mod_floor(a * static_cast<unsigned long>(t + 1), denominator_);
                    mpfr_set_z(angle.get(), b.get_mpz_t(), MPFR_RNDN);
                    mpfr_div_z(angle.get(), angle.get(), denominator_.get_mpz_t(), MPFR_RNDN);
                    mpfr_mul(angle.get(), angle.get(), two_pi.get(), MPFR_RNDN);
                    mpfr_sin_cos(sn.get(), cs.get(), angle.get(), MPFR_RNDN);
                    mpfr_add(re[t].get(), re[t].get(), cs.get(), MPFR_RNDN);
                    mpfr_add(im[t].get(), im[t].get(), sn.get(), MPFR_RNDN);
                }
            }
            for (std::uint64_t t = 0; t < m_; ++t) {
                mpfr_sqr(tmp.get(), re[t].get(), MPFR_RNDN);
                mpfr_mul_ui(tmp.get(), tmp.get(), 2UL * term.multiplicity, MPFR_RNDN);
                mpfr_add(total.get(), total.get(), tmp.get(), MPFR_RNDN);
                mpfr_sqr(tmp.get(), im[t].get(), MPFR_RNDN);
                mpfr_mul_ui(tmp.get(), tmp.get(), 2UL * term.multiplicity, MPFR_RNDN);
                mpfr_add(total.get(), total.get(), tmp.get(), MPFR_RNDN);
            }
        }
        return total;
    }

  private:
    // Same terms re-based onto another denominator.
    ObjectiveKernel(const ObjectiveKernel &other, Integer denominator)
        : m_(other.m_), denominator_(std::move(denominator)), terms_(other.terms_) {
        for (auto &term : terms_) {
            Integer power;
            const Integer base(static_cast<unsigned long>(term.base));
            const Integer start = term.lo + 1;
            mpz_powm(power.get_mpz_t(), base.get_mpz_t(), start.get_mpz_t(), denominator_.get_mpz_t());
            for (auto &residue : term.residues) {
                residue = power;
                power = mod_floor(power * base, denominator_);
            }
        }
    }

    std::uint64_t m_;
    Integer denominator_;
    std::vector<ObjectiveTerm> terms_;
};

/// A'_m(x) for x in [0, 1).
inline double objective_Am(const Rational &x, std::uint64_t m, const SequencePlan &plan, const Schedule &schedule) {
    if (x < 0 || x >= 1) {
        throw ValidationError("objective_Am expects 0 <= x < 1");
    }
    return ObjectiveKernel(m, plan, schedule, x.get_den()).evaluate(x.get_num());
}

/// Smallest grid point g s^-a with xi_prev <= g s^-a.
inline Rational eta(const Rational &xi_prev, std::uint64_t s, std::uint64_t a) {
    const Integer scale = pow_integer(s, a);
    return make_rational(ceil_of(xi_prev * scale), scale);
}

struct StepRecord {
    std::uint64_t m = 0;
    std::uint64_t s = 0;
    Integer a;
    Integer b;
    Integer bracket;      // <m>
    Integer bracket_next; // <m+1>
    Rational eta;
    long long width = 0;        // b - a - 2 (may be negative for toy schedules)
    std::uint64_t candidates = 0;
    std::string chosen_digits;  // c_{a+1} .. c_{b-2}
    double objective = 0;       // A'_m(xi_m)
    std::optional<double> objective_second; // best objective among the other candidates
    std::uint64_t near_ties = 1;
    bool tie_reevaluated = false;
    std::uint64_t phase_evaluations = 0;
    std::uint64_t formula_phase_evaluations = 0;
    double log_beta = 0;
    double lemma_ratio = 0;     // A'_m / (m^2 (<m+1> - <m>)^(2 - beta_m))
    bool lemma_within_bound = false;
    bool nested_ok = true;
    bool order_ok = true;       // xi_{m-1} <= eta <= xi_m < eta + s^-a and xi_m < 1
};

inline constexpr double kLemmaConstant = 36.0;
inline constexpr int kStateVersion = 1;

struct ConstructionState {
    SequencePlan plan;
    Schedule schedule = Schedule::paper(3);
    unsigned width_cap = 24;
    std::uint64_t m = 0;
    Rational xi = 0;
    std::vector<StepRecord> steps;

    [[nodiscard]] bool diagnostics_ok() const {
        return std::all_of(steps.begin(), steps.end(), [](const StepRecord &r) { return r.nested_ok && r.order_ok; });
    }
};

/// Step 0: xi_0 = 0.
inline ConstructionState initial_state(SequencePlan plan, Schedule schedule, unsigned width_cap = 24) {
    ConstructionState state;
    state.plan = std::move(plan);
    state.schedule = std::move(schedule);
    state.width_cap = width_cap;
    return state;
}

/// Half-open interval [xi_m, xi_m + s_m^-(b_m - 2)) known to contain the limit; [0, 1) at step 0.
inline std::pair<Rational, Rational> enclosing_interval(const ConstructionState &state) {
    if (state.steps.empty()) {
        return {Rational(0), Rational(1)};
    }
    const StepRecord &last = state.steps.back();
    const Integer exponent = last.b - 2;
    Rational width = 1;
    if (exponent > 0) {
        width = make_rational(1, pow_integer(last.s, exponent.get_ui()));
    } else if (exponent < 0) {
        const Integer neg = -exponent;
        width = Rational(pow_integer(last.s, neg.get_ui()));
    }
    Rational hi = state.xi + width;
    if (hi > 1) {
        hi = 1;
    }
    return {state.xi, hi};
}

/// Candidate grid for step m.
struct CandidateSet {
    Rational eta;
    std::uint64_t s = 0;
    Integer a;
    Integer b;
    unsigned width = 0;        // number of free 0/1 digits
    Integer denominator;       // s^max(b-2, a)
    Integer base_numerator;    // eta * denominator
    std::vector<Integer> weights; // weights[k] = s^(e - (a+1+k)) for the digit at position a+1+k

    [[nodiscard]] std::uint64_t size() const noexcept { return std::uint64_t{1} << width; }

    // Digit at position a+1+k is bit (width-1-k) of the index, so index order is value order.
    void numerator_of(std::uint64_t index, Integer &out) const {
        out = base_numerator;
        for (unsigned k = 0; k < width; ++k) {
            if ((index >> (width - 1 - k)) & 1U) {
                out += weights[k];
            }
        }
    }

    [[nodiscard]] Rational value_of(std::uint64_t index) const {
        Integer num;
        numerator_of(index, num);
        return make_rational(num, denominator);
    }

    [[nodiscard]] std::string digits_of(std::uint64_t index) const {
        std::string out;
        for (unsigned k = 0; k < width; ++k) {
            out.push_back(((index >> (width - 1 - k)) & 1U) ? '1' : '0');
        }
        return out;
    }
};

inline CandidateSet make_candidates(const Rational &xi_prev, std::uint64_t s, const Integer &a, const Integer &b,
                                    unsigned width_cap) {
    if (a < 0) {
        throw ScheduleInvalid("a_m must be non-negative");
    }
    CandidateSet set;
    set.s = s;
    set.a = a;
    set.b = b;
    set.eta = eta(xi_prev, s, a.get_ui());
    const Integer w = b - a - 2;
    if (w > width_cap) {
        throw WidthExceedsCap("candidate width " + w.get_str() + " exceeds the cap of " + std::to_string(width_cap) +
                              " (2^width candidates); use a toy or power schedule");
    }
    set.width = w > 0 ? static_cast<unsigned>(w.get_ui()) : 0U;
    const unsigned long a_ui = a.get_ui();
    const unsigned long top = set.width > 0 ? Integer(b - 2).get_ui() : a_ui;
    set.denominator = pow_integer(s, top);
    set.base_numerator = set.eta.get_num() * (set.denominator / set.eta.get_den());
    for (unsigned k = 0; k < set.width; ++k) {
        set.weights.push_back(pow_integer(s, top - (a_ui + 1 + k)));
    }
    return set;
}

namespace detail {

// Objectives for every candidate, computed in contiguous chunks across threads. Each slot is
// written by exactly one worker, so the result does not depend on the thread count.
inline std::vector<double> evaluate_all(const ObjectiveKernel &kernel, const CandidateSet &set, unsigned threads) {
    const std::uint64_t n = set.size();
    std::vector<double> out(n);
    const auto work = [&](std::uint64_t begin, std::uint64_t end) {
        ObjectiveKernel::Workspace ws;
        Integer numerator;
        for (std::uint64_t c = begin; c < end; ++c) {
            set.numerator_of(c, numerator);
            out[c] = kernel.evaluate(numerator, ws);
        }
    };
    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, n));
    if (workers == 1) {
        work(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(n, begin + chunk);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto &t : pool) {
        t.join();
    }
    return out;
}

} // namespace detail

struct Selection {
    std::uint64_t index = 0;
    double objective = 0;
    std::optional<double> second;
    std::uint64_t near_ties = 1;
    bool reevaluated = false;
};

/// Minimum objective, ties to the smallest candidate; near-ties are re-ranked at higher precision.
inline Selection select_minimum(const std::vector<double> &objectives, const ObjectiveKernel &kernel,
                                const CandidateSet &set, const BuilderConfig &config) {
    Selection sel;
    for (std::uint64_t c = 1; c < objectives.size(); ++c) {
        if (objectives[c] < objectives[sel.index]) {
            sel.index = c;
        }
    }
    const double best = objectives[sel.index];
    const double window = config.tie_relative * std::max(std::fabs(best), 1e-300);
    std::vector<std::uint64_t> near;
    for (std::uint64_t c = 0; c < objectives.size(); ++c) {
        if (objectives[c] - best <= window) {
            near.push_back(c);
        }
    }
    sel.near_ties = near.size();
    if (near.size() > 1) {
        sel.reevaluated = true;
        Integer numerator;
        std::optional<BigFloat> best_high;
        std::uint64_t best_index = near.front();
        BigFloat diff(config.tie_precision);
        for (std::uint64_t c : near) {
            set.numerator_of(c, numerator);
            BigFloat value = kernel.evaluate_high(numerator, config.tie_precision);
            if (!best_high) {
                best_high = value;
                best_index = c;
                continue;
            }
            // Strictly smaller beyond working-precision noise; otherwise keep the smaller index.
            mpfr_sub(diff.get(), best_high->get(), value.get(), MPFR_RNDN);
            const double gap = mpfr_get_d(diff.get(), MPFR_RNDN);
            const double scale = std::max(std::fabs(best_high->to_double()), 1e-300);
            if (gap > scale * 1e-28) {
                best_high = value;
                best_index = c;
            }
        }
        sel.index = best_index;
    }
    sel.objective = objectives[sel.index];
    for (std::uint64_t c = 0; c < objectives.size(); ++c) {
        if (c != sel.index && (!sel.second || objectives[c] < *sel.second)) {
            sel.second = objectives[c];
        }
    }
    return sel;
}

/// Executes step m = state.m + 1.
inline ConstructionState step(const ConstructionState &state, const BuilderConfig &config = {}) {
    const std::uint64_t m = state.m + 1;
    const SequencePlan &plan = state.plan;
    const Schedule &schedule = state.schedule;
    if (m > plan.horizon) {
        throw HorizonTooShort("step " + std::to_string(m) + " is beyond the plan horizon " +
                              std::to_string(plan.horizon));
    }
    StepRecord rec;
    rec.m = m;
    rec.s = plan.s_at(m);
    rec.bracket = schedule.bracket(m);
    rec.bracket_next = schedule.bracket(m + 1);
    if (rec.bracket_next <= rec.bracket) {
        throw ScheduleInvalid("<m> must be strictly increasing (fails at m = " + std::to_string(m) + ")");
    }
    rec.a = schedule.floor_over_log(rec.bracket, rec.s);
    rec.b = schedule.floor_over_log(rec.bracket_next, rec.s);
    const Integer w = rec.b - rec.a - 2;
    rec.width = w.get_si();

    BuilderConfig effective = config;
    effective.width_cap = std::min(config.width_cap, state.width_cap);
    const CandidateSet set = make_candidates(state.xi, rec.s, rec.a, rec.b, effective.width_cap);
    rec.eta = set.eta;
    rec.candidates = set.size();

    const ObjectiveKernel kernel(m, plan, schedule, set.denominator);
    const std::vector<double> objectives = detail::evaluate_all(kernel, set, config.threads);
    const Selection sel = select_minimum(objectives, kernel, set, config);

    rec.chosen_digits = set.digits_of(sel.index);
    rec.objective = sel.objective;
    rec.objective_second = sel.second;
    rec.near_ties = sel.near_ties;
    rec.tie_reevaluated = sel.reevaluated;
    rec.phase_evaluations = kernel.evaluations_per_candidate() * set.size();
    rec.formula_phase_evaluations = kernel.formula_evaluations_per_candidate() * set.size();

    ConstructionState next = state;
    next.m = m;
    next.xi = set.value_of(sel.index);

    const auto [prev_lo, prev_hi] = enclosing_interval(state);
    const Rational grid_step = make_rational(1, pow_integer(rec.s, rec.a.get_ui()));
    rec.order_ok = state.xi <= set.eta && set.eta <= next.xi && next.xi < set.eta + grid_step && next.xi < 1;

    // Cancellation diagnostic, in log space since <m+1> - <m> can be enormous.
    rec.log_beta = plan.log_beta_at(m);
    const double beta = std::exp(rec.log_beta);
    const Integer gap = rec.bracket_next - rec.bracket;
    long gap_exp = 0;
    const double gap_mant = mpz_get_d_2exp(&gap_exp, gap.get_mpz_t());
    const double log_gap = std::log(gap_mant) + static_cast<double>(gap_exp) * std::numbers::ln2;
    const double md = static_cast<double>(m);
    rec.lemma_ratio = sel.objective > 0
                          ? std::exp(std::log(sel.objective) - 2.0 * std::log(md) - (2.0 - beta) * log_gap)
                          : 0.0;
    rec.lemma_within_bound = rec.lemma_ratio <= kLemmaConstant;

    next.steps.push_back(rec);
    const auto [lo, hi] = enclosing_interval(next);
    next.steps.back().nested_ok = prev_lo <= lo && hi <= prev_hi;
    return next;
}

inline ConstructionState run_steps(ConstructionState state, std::uint64_t count, const BuilderConfig &config = {}) {
    for (std::uint64_t i = 0; i < count; ++i) {
        state = step(state, config);
    }
    return state;
}

/// Digits of the limit in `out_base` that are certain at the current step.
inline DigitString emit_digits(const ConstructionState &state, unsigned out_base) {
    require_base(out_base);
    if (state.m == 0) {
        return DigitString{out_base, {}};
    }
    const auto [lo, hi] = enclosing_interval(state);
    return certain_digits(lo, hi, out_base);
}

struct ArgminCheck {
    bool ok = true;
    std::uint64_t candidates = 0;
    std::uint64_t smallest_index = 0;
    double smallest = 0;
    double chosen = 0;
};

/// Single-threaded re-enumeration of step `record.m` from the state before it, with a separate
/// evaluation path (full powers r^j, per-t reductions, plain complex sums). Fails if any
/// candidate beats the recorded choice by more than `relative`.
inline ArgminCheck verify_argmin(const ConstructionState &before, const StepRecord &record, double relative = 1e-9) {
    const CandidateSet set = make_candidates(before.xi, record.s, record.a, record.b, 64);
    const ObjectiveKernel kernel(record.m, before.plan, before.schedule, set.denominator);
    const auto naive = [&](const Integer &numerator) {
        double total = 0.0;
        const Integer &den = set.denominator;
        for (const auto &term : kernel.terms()) {
            for (std::uint64_t t = 1; t <= record.m; ++t) {
                double re = 0.0;
                double im = 0.0;
                for (Integer j = term.lo + 1; j <= term.hi; ++j) {
                    const Integer power = pow_integer(Integer(static_cast<unsigned long>(term.base)), j.get_ui());
                    const Integer residue = mod_floor(power * numerator * static_cast<unsigned long>(t), den);
                    const double theta = Rational(residue, den).get_d();
                    re += std::cos(2.0 * std::numbers::pi * theta);
                    im += std::sin(2.0 * std::numbers::pi * theta);
                }
                total += 2.0 * term.multiplicity * (re * re + im * im);
            }
        }
        return total;
    };
    ArgminCheck check;
    check.candidates = set.size();
    Integer numerator;
    std::uint64_t chosen_index = 0;
    for (unsigned k = 0; k < set.width; ++k) {
        chosen_index = (chosen_index << 1) | (record.chosen_digits.at(k) == '1' ? 1U : 0U);
    }
    set.numerator_of(chosen_index, numerator);
    check.chosen = naive(numerator);
    check.smallest = check.chosen;
    check.smallest_index = chosen_index;
    for (std::uint64_t c = 0; c < set.size(); ++c) {
        set.numerator_of(c, numerator);
        const double value = naive(numerator);
        if (value < check.smallest) {
            check.smallest = value;
            check.smallest_index = c;
        }
    }
    const double slack = relative * std::max(std::fabs(check.chosen), 1.0);
    check.ok = check.chosen - check.smallest <= slack;
    return check;
}

} // namespace normal
