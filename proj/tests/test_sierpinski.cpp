#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace normal;

TEST(NLower, Examples) {
    EXPECT_EQ(n_lower(1, 2, Rational(1, 2)), 194);
    EXPECT_EQ(n_lower(1, 2, Rational(1, 4)), 386);
    EXPECT_EQ(n_lower(2, 3, Rational(1, 2)), 24 * 64 * 9 * 2 + 2);
    EXPECT_THROW(n_lower(1, 2, Rational(3, 4)), ValidationError);
}

TEST(PIndex, Examples) {
    EXPECT_EQ(p_index(2, 1), 5);
    EXPECT_EQ(p_index(2, 2), 20);
    EXPECT_EQ(p_index(2, 3), 80);
    EXPECT_EQ(p_index(10, 1), 45);
}

TEST(Deviates, MatchesRationalComparison) {
    for (std::uint64_t q = 2; q <= 5; ++q) {
        for (std::uint64_t m = 1; m <= 6; ++m) {
            for (std::uint64_t n = 1; n <= 20; ++n) {
                for (std::uint64_t c = 0; c <= n; ++c) {
                    Rational dev = make_rational(Integer(static_cast<unsigned long>(c)), Integer(static_cast<unsigned long>(n))) -
                                   make_rational(1, Integer(static_cast<unsigned long>(q)));
                    dev = abs(dev);
                    ASSERT_EQ(deviates(c, n, q, m), dev >= make_rational(1, Integer(static_cast<unsigned long>(m))));
                }
            }
        }
    }
}

TEST(DeltaFamily, ExampleAtMTwo) {
    const IntervalSet d = delta_family(2, 2, 2, 0);
    EXPECT_EQ(d, IntervalSet::single(Rational(0), Rational(1)));
    EXPECT_EQ(delta_measure_bound(2, 2, 2, 0), Rational(3, 2));
}

TEST(DeltaFamily, MatchesEnumeration) {
    for (std::uint64_t q = 2; q <= 3; ++q) {
        for (std::uint64_t m = 1; m <= 4; ++m) {
            for (std::uint64_t n = 1; n <= (q == 2 ? 10U : 7U); ++n) {
                for (std::uint64_t p = 0; p < q; ++p) {
                    const IntervalSet got = delta_family(q, m, n, p);
                    ASSERT_EQ(got, oracle::brute_delta(q, m, n, p)) << q << " " << m << " " << n << " " << p;
                    ASSERT_LE(got.measure(), delta_measure_bound(q, m, n, p));
                }
            }
        }
    }
}

TEST(DeviationCounter, MatchesEnumeration) {
    for (std::uint64_t q = 2; q <= 4; ++q) {
        for (std::uint64_t m = 1; m <= 4; ++m) {
            for (std::uint64_t n = 1; n <= 6; ++n) {
                for (std::uint64_t p = 0; p < q; ++p) {
                    const DeviationCounter counter(q, m, n, p);
                    const std::uint64_t total = pow_integer(q, n).get_ui();
                    std::vector<std::uint64_t> prefix(total + 1, 0);
                    for (std::uint64_t B = 0; B < total; ++B) {
                        std::uint64_t v = B;
                        std::uint64_t c = 0;
                        for (std::uint64_t i = 0; i < n; ++i, v /= q) {
                            c += (v % q == p) ? 1 : 0;
                        }
                        prefix[B + 1] = prefix[B] + (deviates(c, n, q, m) ? 1 : 0);
                    }
                    // Every window for short strings, a stride of windows otherwise.
                    const std::uint64_t stride = total <= 256 ? 1 : 7;
                    for (std::uint64_t lo = 0; lo < total; lo += stride) {
                        for (std::uint64_t hi = lo; hi < total; hi += stride) {
                            ASSERT_EQ(counter.count_between(Integer(lo), Integer(hi)), prefix[hi + 1] - prefix[lo]);
                        }
                    }
                    ASSERT_EQ(counter.count_between(Integer(0), Integer(total - 1)), prefix[total]);
                }
            }
        }
    }
}

TEST(IntervalSetAlgebra, InclusionExclusion) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<IntervalSet::Interval> ra;
        std::vector<IntervalSet::Interval> rb;
        for (int i = 0; i < 4; ++i) {
            Rational x = oracle::random_unit(rng, 10000);
            Rational y = oracle::random_unit(rng, 10000);
            (i % 2 == 0 ? ra : rb).emplace_back(std::min(x, y), std::max(x, y));
        }
        const IntervalSet a = IntervalSet::from_intervals(ra);
        const IntervalSet b = IntervalSet::from_intervals(rb);
        ASSERT_EQ(a.unite(b).measure() + a.intersect(b).measure(), a.measure() + b.measure());
        ASSERT_EQ(a.unite(b), b.unite(a));
        ASSERT_EQ(a.intersect(b), b.intersect(a));
        const Rational probe = oracle::random_unit(rng, 10000);
        ASSERT_EQ(a.unite(b).contains(probe), a.contains(probe) || b.contains(probe));
        ASSERT_EQ(a.intersect(b).contains(probe), a.contains(probe) && b.contains(probe));
    }
}

TEST(IntervalSetAlgebra, MergesTouching) {
    const IntervalSet s = IntervalSet::from_intervals(
        {{Rational(1, 2), Rational(3, 4)}, {Rational(-1), Rational(1, 4)}, {Rational(1, 4), Rational(1, 3)}});
    ASSERT_EQ(s.size(), 2U);
    EXPECT_EQ(s.measure(), Rational(1, 3) + Rational(1, 4));
    EXPECT_EQ(s.measure_within(Rational(0), Rational(1, 2)), Rational(1, 3));
}

TEST(Truncated, BoundDominatesExactMeasure) {
    const SierpinskiParams params = fixture::toy_params();
    for (std::uint64_t n = 1; n <= 3; ++n) {
        const Integer k = p_index(2, n);
        const Integer cells = pow_integer(2, n);
        const IntervalSet delta = truncated_delta(k, params, Rational(0), Rational(1));
        for (Integer c = 0; c < cells; ++c) {
            const Rational lo = make_rational(c, cells);
            const Rational hi = make_rational(c + 1, cells);
            ASSERT_LE(delta.measure_within(lo, hi), truncated_delta_bound(k, params, lo, hi));
            ASSERT_EQ(truncated_delta(k, params, lo, hi).measure(), delta.measure_within(lo, hi));
        }
    }
}

TEST(Sierpinski, ToyRunSurvivesAndIsDeterministic) {
    const SierpinskiParams params = fixture::toy_params();
    const SierpinskiState a = sierpinski_run(initial_sierpinski(params, MeasureMode::Exact), 6);
    const SierpinskiState b = sierpinski_run(initial_sierpinski(params, MeasureMode::Exact), 6);
    EXPECT_TRUE(a.diagnostics_ok());
    EXPECT_EQ(a.digits, b.digits);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    for (const SierpinskiStep &s : a.steps) {
        EXPECT_LT(s.measures[s.digit], s.cell_length);
    }
    // Resuming from a prefix reproduces the run.
    const SierpinskiState half = sierpinski_run(initial_sierpinski(params, MeasureMode::Exact), 3);
    EXPECT_EQ(sierpinski_run(half, 3).digits, a.digits);
}

TEST(Sierpinski, ModesCrossCheck) {
    const SierpinskiParams params = fixture::toy_params();
    SierpinskiState state = initial_sierpinski(params, MeasureMode::Exact);
    for (int i = 0; i < 5; ++i) {
        const ModeCheck check = cross_check_modes(state.digits, params);
        EXPECT_TRUE(check.bounds_dominate);
        EXPECT_TRUE(check.guarded_agree);
        state = sierpinski_step(state);
    }
}

TEST(Sierpinski, Base3) {
    const SierpinskiParams params = fixture::toy_params(3);
    const SierpinskiState a = sierpinski_run(initial_sierpinski(params, MeasureMode::Bound), 3);
    EXPECT_EQ(a.digits.size(), 3U);
    EXPECT_EQ(a.digits.base, 3U);
}

TEST(Sierpinski, UncappedExactIsOutOfScale) {
    SierpinskiParams params;
    EXPECT_TRUE(params.certified());
    EXPECT_THROW(sierpinski_step(initial_sierpinski(params, MeasureMode::Exact)), LimitError);
}
