#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace normal;

TEST(Sequences, DefaultS) {
    EXPECT_EQ(default_s_sequence(5), (std::vector<std::uint64_t>{3, 5, 6, 7, 10}));
    EXPECT_EQ(default_r_sequence(4), (std::vector<std::uint64_t>{2, 3, 4, 5}));
}

TEST(Sequences, PerfectPowers) {
    for (std::uint64_t n = 2; n < 2000; ++n) {
        bool brute = false;
        for (std::uint64_t b = 2; b * b <= n && !brute; ++b) {
            std::uint64_t v = b * b;
            while (v < n) {
                v *= b;
            }
            brute = v == n;
        }
        ASSERT_EQ(is_perfect_power(n), brute) << n;
    }
}

TEST(Phi, Example) {
    const std::vector<double> log_beta{std::log(0.4), std::log(0.3), std::log(0.1)};
    const std::vector<std::uint64_t> gamma{5, 5, 5};
    EXPECT_EQ(compute_phi(log_beta, gamma, 4), (std::vector<std::size_t>{1, 1, 1, 2}));
}

TEST(Phi, Invariants) {
    const SequencePlan plan = build_default_plan(64);
    ASSERT_EQ(plan.phi.size(), 64U);
    EXPECT_EQ(plan.phi[0], 1U);
    for (std::size_t k = 2; k <= 64; ++k) {
        EXPECT_LE(plan.phi[k - 1], plan.phi[k - 2] + 1);
        EXPECT_GE(plan.log_beta[plan.phi[k - 1] - 1], plan.log_beta[0] - 0.25 * std::log(static_cast<double>(k)) - 1e-12);
        EXPECT_LE(plan.gamma[plan.phi[k - 1] - 1], plan.gamma[0] * k);
        EXPECT_GT(plan.s_at(k), 2U);
        EXPECT_LE(plan.s_at(k), k * plan.s_at(1));
    }
}

TEST(M0, Examples) {
    EXPECT_EQ(compute_m0(2, std::vector<std::uint64_t>{3, 4, 5}), 3U);
    EXPECT_EQ(compute_m0(2, std::vector<std::uint64_t>{3, 5, 6}), 1U);
    EXPECT_THROW(compute_m0(2, std::vector<std::uint64_t>{3, 5, 8}), HorizonTooShort);
}

TEST(M0, IsMinimal) {
    const SequencePlan plan = build_default_plan(40);
    for (const auto &[r, m0] : plan.m0) {
        for (std::size_t m = m0; m <= plan.horizon; ++m) {
            EXPECT_FALSE(mult_dependent(r, plan.s_at(m)));
        }
        if (m0 > 1) {
            EXPECT_TRUE(mult_dependent(r, plan.s_at(m0 - 1)));
        }
    }
}

TEST(ToyPlan, ParsesCsv) {
    const SequencePlan plan = fixture::toy_plan(6);
    EXPECT_FALSE(plan.certified);
    EXPECT_EQ(plan.r_at(1), 2U);
    EXPECT_EQ(plan.s_at(1), 5U);
    EXPECT_THROW(parse_toy_plan_csv("k,r,s,beta\n1,2,5\n", 2), ValidationError);
    EXPECT_THROW(parse_toy_plan_csv("k,r,s,beta\n1,2,5,0.6\n", 2), PlanInfeasible);
}

TEST(Schedule, PowerExample) {
    const Schedule sch = Schedule::power(Rational(1, 2));
    EXPECT_EQ(sch.bracket(4), 7);
    EXPECT_EQ(sch.bracket(1), 2);
    EXPECT_EQ(sch.rate_exponent(), Rational(1));
    EXPECT_THROW(Schedule::power(Rational(1)), ScheduleInvalid);
}

TEST(Schedule, PowerMatchesDirectEvaluation) {
    for (std::uint64_t m = 1; m <= 200; ++m) {
        ASSERT_EQ(Schedule::power(Rational(1, 2)).bracket(m), oracle::floor_power_bracket(m, 1, 2)) << m;
        ASSERT_EQ(Schedule::power(Rational(2, 3)).bracket(m), oracle::floor_power_bracket(m, 2, 3)) << m;
    }
}

TEST(Schedule, PaperExamples) {
    const Schedule sch = Schedule::paper(3);
    EXPECT_EQ(sch.bracket(1), 8);
    EXPECT_EQ(Schedule::paper(3).bracket(2), 52);
    for (std::uint64_t m = 1; m <= 100; ++m) {
        ASSERT_LT(sch.bracket(m), sch.bracket(m + 1));
    }
}

TEST(Schedule, OverLogMatchesDirectEvaluation) {
    const Schedule sch = Schedule::paper(3);
    for (std::uint64_t m = 1; m <= 60; ++m) {
        for (std::uint64_t x : {2, 3, 5, 7, 10}) {
            ASSERT_EQ(sch.bracket_over_log(m, x), oracle::floor_over_log(oracle::floor_paper_bracket(m, 3), x));
        }
    }
}

TEST(Schedule, ToyTable) {
    const Schedule sch = fixture::toy_schedule();
    EXPECT_EQ(sch.bracket(1), 10);
    EXPECT_EQ(sch.bracket(7), 130);
    EXPECT_THROW(sch.bracket(8), HorizonTooShort);
}

TEST(Objective, ZeroPoint) {
    const SequencePlan plan = build_default_plan(4);
    ASSERT_EQ(plan.r_at(1), 2U);
    EXPECT_DOUBLE_EQ(objective_Am(Rational(0), 1, plan, Schedule::paper(plan.s_at(1))), 8192.0);
}
