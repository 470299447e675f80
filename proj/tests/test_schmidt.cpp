#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace normal;

TEST(Eta, Examples) {
    EXPECT_EQ(eta(Rational(1, 3), 3, 2), Rational(1, 3));
    EXPECT_EQ(eta(Rational(2, 5), 5, 1), Rational(2, 5));
    EXPECT_EQ(eta(Rational(41, 100), 5, 1), Rational(3, 5));
    EXPECT_EQ(eta(Rational(0), 7, 5), Rational(0));
}

TEST(CompensatedSum, RecoversCancellation) {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1.0);
}

TEST(Kernel, MatchesDefinition) {
    const SequencePlan plan = fixture::toy_plan();
    const Schedule sch = fixture::toy_schedule();
    std::mt19937_64 rng(23);
    for (std::uint64_t m = 1; m <= 5; ++m) {
        for (int trial = 0; trial < 6; ++trial) {
            const Integer den = pow_integer(5, 10 + rng() % 40);
            Integer num;
            num = Integer(static_cast<unsigned long>(rng())) % den;
            const Rational x = make_rational(num, den);
            const double got = objective_Am(x, m, plan, sch);
            const double ref = oracle::naive_objective(x, m, plan, sch);
            ASSERT_NEAR(got, ref, 1e-9 * std::max(1.0, ref)) << "m=" << m << " x=" << to_string(x);
        }
    }
}

TEST(Kernel, NonGridDenominators) {
    const SequencePlan plan = fixture::toy_plan();
    const Schedule sch = fixture::toy_schedule();
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const Rational x = oracle::random_unit(rng, 1000000007UL);
        const double got = objective_Am(x, 2, plan, sch);
        const double ref = oracle::naive_objective(x, 2, plan, sch);
        ASSERT_NEAR(got, ref, 1e-9 * std::max(1.0, ref));
    }
    EXPECT_THROW(objective_Am(Rational(1), 1, plan, sch), ValidationError);
}

TEST(Step, ToyRunInvariants) {
    ConstructionState state = run_steps(fixture::toy_state(), 6);
    ASSERT_EQ(state.m, 6U);
    ASSERT_EQ(state.steps.size(), 6U);
    EXPECT_TRUE(state.diagnostics_ok());
    Rational lo_prev = 0;
    Rational hi_prev = 1;
    ConstructionState replay = fixture::toy_state();
    for (const StepRecord &rec : state.steps) {
        EXPECT_GE(rec.width, 0);
        EXPECT_EQ(rec.candidates, std::uint64_t{1} << rec.width);
        EXPECT_EQ(rec.chosen_digits.size(), static_cast<std::size_t>(rec.width));
        EXPECT_TRUE(rec.nested_ok);
        EXPECT_TRUE(rec.order_ok);
        const ArgminCheck check = verify_argmin(replay, rec);
        EXPECT_TRUE(check.ok) << "m=" << rec.m;
        replay = step(replay);
        const auto [lo, hi] = enclosing_interval(replay);
        EXPECT_GE(lo, lo_prev);
        EXPECT_LE(hi, hi_prev);
        EXPECT_LT(lo, hi);
        lo_prev = lo;
        hi_prev = hi;
        const DigitString digits = emit_digits(replay, static_cast<unsigned>(rec.s));
        EXPECT_EQ(Integer(static_cast<unsigned long>(digits.size())), rec.b - 2);
    }
    EXPECT_EQ(replay.xi, state.xi);
}

TEST(Step, ThreadCountDoesNotChangeResult) {
    BuilderConfig one;
    BuilderConfig many;
    many.threads = 4;
    const ConstructionState a = run_steps(fixture::toy_state(), 5, one);
    const ConstructionState b = run_steps(fixture::toy_state(), 5, many);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Step, WidthCap) {
    BuilderConfig cfg;
    cfg.width_cap = 3;
    EXPECT_THROW(step(fixture::toy_state(), cfg), WidthExceedsCap);
}

TEST(Step, HorizonExhausted) {
    const ConstructionState state = run_steps(fixture::toy_state(), 6);
    EXPECT_THROW(step(state), HorizonTooShort);
}

TEST(EmitDigits, EmptyBeforeFirstStep) {
    EXPECT_TRUE(emit_digits(fixture::toy_state(), 10).empty());
    EXPECT_EQ(enclosing_interval(fixture::toy_state()), std::make_pair(Rational(0), Rational(1)));
}
