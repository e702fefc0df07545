#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcorr;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

IntervalSet random_set(oracle::Rng& rng, std::int64_t den) {
    std::vector<Interval> v;
    int n = static_cast<int>(oracle::uniform_int(rng, 0, 6));
    for (int i = 0; i < n; ++i) {
        std::int64_t a = oracle::uniform_int(rng, 0, den - 1);
        std::int64_t b = oracle::uniform_int(rng, a + 1, den);
        v.emplace_back(q(a, den), q(b, den));
    }
    return IntervalSet(std::move(v));
}

}  // namespace

TEST(Rational, ParsesFractionsAndRejectsDecimalsForEndpoints) {
    EXPECT_EQ(parse_rational("3/6"), q(1, 2));
    EXPECT_EQ(parse_rational("-2"), q(-2));
    EXPECT_THROW(parse_rational("0.5"), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_EQ(parse_decimal("-0.125"), q(-1, 8));
    EXPECT_EQ(parse_decimal("25e-2"), q(1, 4));
    EXPECT_EQ(to_decimal_string(q(-3, 8)), "-0.375");
    EXPECT_EQ(parse_decimal(to_decimal_string(q(1, 3))), q(1, 3));
}

TEST(Measure, Examples) {
    EXPECT_EQ(IntervalSet::full().measure(), 1);
    EXPECT_EQ(IntervalSet({Interval(q(1, 8), q(3, 8)), Interval(q(5, 8), q(7, 8))}).measure(), q(1, 2));
    EXPECT_EQ(IntervalSet().measure(), 0);
}

TEST(Intersect, Examples) {
    EXPECT_EQ(IntervalSet({Interval(0, q(1, 2))}).intersect(IntervalSet({Interval(q(1, 4), q(3, 4))})),
              IntervalSet({Interval(q(1, 4), q(1, 2))}));
    EXPECT_TRUE(IntervalSet({Interval(0, q(1, 2))}).intersect(IntervalSet()).empty());
    EXPECT_EQ(trig_comb(Interval(0, 1), q(1, 2), 2).intersect(IntervalSet({Interval(0, q(1, 2))})),
              IntervalSet({Interval(q(1, 8), q(3, 8))}));
}

TEST(IntervalSet, NormalizesAdjacentAndOverlapping) {
    IntervalSet s({Interval(q(1, 2), q(3, 4)), Interval(0, q(1, 4)), Interval(q(1, 4), q(1, 2)), Interval(q(5, 8), q(7, 8))});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.intervals()[0], Interval(0, q(7, 8)));
    EXPECT_FALSE(s.contains(q(7, 8)));  // half-open
    EXPECT_TRUE(s.contains(q(0)));
}

TEST(UniformComb, Examples) {
    EXPECT_EQ(uniform_comb(q(1, 2), 2), IntervalSet({Interval(0, q(1, 4)), Interval(q(1, 2), q(3, 4))}));
    EXPECT_EQ(uniform_comb(q(1, 4), 1), IntervalSet({Interval(0, q(1, 4))}));
    EXPECT_EQ(uniform_comb(q(1, 3), 7).measure(), q(1, 3));
    EXPECT_THROW(uniform_comb(q(3, 2), 4), std::invalid_argument);
}

TEST(TrigComb, Examples) {
    EXPECT_EQ(trig_comb(Interval(0, 1), q(1, 2), 2), IntervalSet({Interval(q(1, 8), q(3, 8)), Interval(q(5, 8), q(7, 8))}));
    EXPECT_EQ(trig_comb(Interval(0, 1), q(1, 2), 1), IntervalSet({Interval(q(1, 4), q(3, 4))}));
    EXPECT_EQ(trig_comb(Interval(q(1, 2), 1), q(1, 8), 16).measure(), q(1, 16));
}

TEST(Dilate, Examples) {
    EXPECT_EQ(dilate(IntervalSet({Interval(0, q(1, 2))}), 2), IntervalSet({Interval(0, q(1, 4)), Interval(q(1, 2), q(3, 4))}));
    IntervalSet e({Interval(q(1, 5), q(2, 3))});
    EXPECT_EQ(dilate(e, 1), e);
    EXPECT_EQ(dilate(IntervalSet({Interval(0, q(1, 8))}), 16).measure(), q(1, 8));
}

TEST(WalshComb, Examples) {
    EXPECT_EQ(walsh_comb(Interval(0, 1), 1, 1, 1), IntervalSet({Interval(0, q(1, 4)), Interval(q(1, 2), q(3, 4))}));
    EXPECT_EQ(walsh_comb(Interval(0, 1), 3, 1, 5).measure(), q(1, 8));
    EXPECT_TRUE(walsh_comb(Interval(0, q(1, 2)), 1, 2, 0).empty());
    EXPECT_THROW(walsh_comb(Interval(0, q(1, 3)), 1, 1, 1), std::invalid_argument);
}

TEST(RefineStep, Examples) {
    StepFunction one = StepFunction::indicator(Interval(0, 1));
    StepFunction r = refine_step(one, IntervalBasis::dyadic(), q(1, 2));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.pieces()[0].interval, Interval(0, q(1, 2)));
    EXPECT_EQ(r.pieces()[1].interval, Interval(q(1, 2), 1));
    EXPECT_EQ(r.pieces()[0].coefficient, 1);

    StepFunction third = StepFunction::indicator(Interval(0, q(1, 3)));
    StepFunction t = refine_step(third, IntervalBasis::rational(), q(1, 4));
    for (const auto& p : t.pieces()) EXPECT_LE(p.interval.length(), q(1, 6));
    EXPECT_TRUE(same_function(t, third));
}

TEST(RefineStep, DyadicBasisKeepsPiecesDyadic) {
    oracle::Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        StepFunction f = oracle::random_dyadic_step(rng, 6, 5);
        StepFunction r = refine_step(f, IntervalBasis::dyadic(), q(1, 64));
        for (const auto& p : r.pieces()) {
            EXPECT_TRUE(p.interval.is_dyadic());
            EXPECT_LE(p.interval.length(), q(1, 64));
        }
        EXPECT_EQ(r.l1_norm(), f.l1_norm());
    }
}

// ---- properties ------------------------------------------------------------------

TEST(Property, MeasureIsAdditive) {
    oracle::Rng rng(1);
    for (int i = 0; i < 300; ++i) {
        std::int64_t den = oracle::uniform_int(rng, 2, 40);
        IntervalSet s = random_set(rng, den), t = random_set(rng, oracle::uniform_int(rng, 2, 40));
        EXPECT_EQ(s.unite(t).measure() + s.intersect(t).measure(), s.measure() + t.measure());
        EXPECT_EQ(s.minus(t).measure(), s.measure() - s.intersect(t).measure());
        EXPECT_EQ(s.complement().measure(), 1 - s.measure());
    }
}

TEST(Property, DilatePreservesMeasure) {
    oracle::Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        IntervalSet e = random_set(rng, oracle::uniform_int(rng, 2, 30));
        std::int64_t n = oracle::uniform_int(rng, 1, 50);
        IntervalSet d = dilate(e, n);
        EXPECT_EQ(d.measure(), e.measure());
        // x in dilate(E,n) iff frac(n x) in E
        Rational x(oracle::uniform_int(rng, 0, 9999), 10000);
        EXPECT_EQ(d.contains(x), e.contains(frac_of(x * n)));
    }
}

TEST(Property, TrigCombInsideParentWithExactMeasure) {
    oracle::Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::int64_t den = oracle::uniform_int(rng, 2, 50);
        std::int64_t a = oracle::uniform_int(rng, 0, den - 1), b = oracle::uniform_int(rng, a + 1, den);
        Interval delta(q(a, den), q(b, den));
        std::int64_t ed = oracle::uniform_int(rng, 2, 40);
        Rational eps(oracle::uniform_int(rng, 1, ed - 1), ed);
        std::int64_t l = oracle::uniform_int(rng, 1, 64);
        IntervalSet g = trig_comb(delta, eps, l);
        EXPECT_TRUE(g.is_subset_of(IntervalSet({delta})));
        EXPECT_EQ(g.measure(), eps * delta.length());
    }
}

TEST(Property, UniformCombHasMeasureExactlyEps) {
    oracle::Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        std::int64_t ed = oracle::uniform_int(rng, 2, 100);
        Rational eps(oracle::uniform_int(rng, 1, ed - 1), ed);
        EXPECT_EQ(uniform_comb(eps, oracle::uniform_int(rng, 1, 300)).measure(), eps);
    }
}

TEST(Property, RefineStepKeepsPointwiseValues) {
    oracle::Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        StepFunction f = oracle::random_rational_step(rng, 8);
        Rational delta(1, oracle::uniform_int(rng, 2, 40));
        StepFunction r = refine_step(f, IntervalBasis::rational(), delta);
        for (const auto& p : r.pieces()) EXPECT_LE(p.interval.length(), delta);
        for (int i = 0; i < 2000; ++i) {
            Rational x(oracle::uniform_int(rng, 0, 999'999), 1'000'000);
            ASSERT_EQ(r(x), f(x));
        }
    }
}

TEST(Property, PureFrequencyVanishesOnUniformCombs) {
    for (std::int64_t l : {2, 3, 5, 8, 13}) {
        for (Rational eps : {q(1, 4), q(1, 3), q(2, 7)}) {
            IntervalSet g = uniform_comb(eps, l);
            for (std::int64_t k = -(l - 1); k <= l - 1; ++k) {
                if (k == 0) continue;
                FrequencyGap gap = weak_convergence_gap(g, k);
                EXPECT_TRUE(gap.exactly_zero) << "l=" << l << " k=" << k;
                EXPECT_LE(gap.value, 1e-12);
            }
        }
    }
    // k = l is not covered: the teeth all see the same phase.
    FrequencyGap at_l = weak_convergence_gap(uniform_comb(q(1, 4), 5), 5);
    EXPECT_FALSE(at_l.exactly_zero);
    EXPECT_GT(at_l.value, 0.1);
}
