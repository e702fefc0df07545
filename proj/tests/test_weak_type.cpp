#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcorr;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

MaximalScan constant_scan(double v, std::int64_t size) {
    Grid grid = Grid::midpoint(size);
    return {"trig", 1, {grid, std::vector<double>(static_cast<std::size_t>(size), v)}, std::vector<std::int64_t>(static_cast<std::size_t>(size), 0)};
}

}  // namespace

TEST(DistributionScan, ConstantMaximalFunction) {
    MaximalScan one = constant_scan(1.0, 16);
    WeakTypeReport r = distribution_scan(one, 1, {0.5, 2.0});
    EXPECT_DOUBLE_EQ(r.values[0], 0.5);
    EXPECT_DOUBLE_EQ(r.values[1], 0.0);
    EXPECT_DOUBLE_EQ(r.c_emp, 0.5);
    EXPECT_DOUBLE_EQ(r.superlevel[0], 1.0);
}

TEST(DistributionScan, RejectsBadInput) {
    MaximalScan one = constant_scan(1.0, 4);
    EXPECT_THROW(distribution_scan(one, 1, {}), std::invalid_argument);
    EXPECT_THROW(distribution_scan(one, 0, {0.5}), std::invalid_argument);
    EXPECT_THROW(distribution_scan(one, 1, {0.5, 0.25}), std::invalid_argument);
    EXPECT_THROW(distribution_scan(one, 1, {-1.0}), std::invalid_argument);
}

TEST(LambdaGrid, DefaultRangeAndClipping) {
    auto g = default_lambda_grid(0.125, 1024, 1e9);
    ASSERT_EQ(g.size(), 64u);
    EXPECT_DOUBLE_EQ(g.front(), 0.125 / 4);
    EXPECT_DOUBLE_EQ(g.back(), 4.0 * 1024 * 0.125);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    auto clipped = default_lambda_grid(0.125, 1024, 3.0);
    EXPECT_DOUBLE_EQ(clipped.back(), 3.0);
}

TEST(WeakGap, Examples) {
    FrequencyGap z = weak_convergence_gap(uniform_comb(q(1, 4), 5), 3);
    EXPECT_TRUE(z.exactly_zero);
    EXPECT_EQ(z.value, 0.0);
    StepFunction one = StepFunction::indicator(Interval(0, 1));
    for (const IntervalSet& g : {uniform_comb(q(1, 4), 7), trig_comb(Interval(q(1, 3), 1), q(1, 5), 4), walsh_comb(Interval(0, 1), 3, 2, 4)})
        EXPECT_EQ(weak_convergence_gap(g, one), 0);
}

TEST(WeakGap, IndicatorOfAThirdOnUniformCombs) {
    // For l = 4^j the teeth up to 1/3 cover (l-1)/3 full cells plus a quarter of the
    // last one, so the gap is exactly 2/(3l).
    for (std::int64_t l : {4, 16, 64, 256})
        EXPECT_EQ(weak_convergence_gap(uniform_comb(q(1, 4), l), StepFunction::indicator(Interval(0, q(1, 3)))), q(2, 3 * l));
}

TEST(StabilityStudy, SmallTrigConfiguration) {
    TrigFamily fam(2048);
    CombSpec spec;
    StabilityStudy s = stability_study(fam, spec, {4, 8, 16}, 256);
    ASSERT_EQ(s.reports.size(), 3u);
    EXPECT_LE(s.ratio, 2.0);
    for (const auto& r : s.reports) {
        EXPECT_EQ(r.g_measure, q(1, 8));
        EXPECT_GT(r.c_emp, 0.0);
    }
}

TEST(StabilityStudy, SequentialAndParallelAgree) {
    WalshFamily fam(10);
    CombSpec spec;
    spec.family = FamilyKind::walsh;
    auto a = stability_study(fam, spec, {3, 4, 5}, 512, false);
    auto b = stability_study(fam, spec, {3, 4, 5}, 512, true);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.reports[i].values, b.reports[i].values);
}

TEST(BasisTransfer, FullIntervalTrig) {
    TrigFamily fam(512);
    BasisTransfer t = basis_transfer_check(fam, {trig_comb(Interval(0, 1), q(1, 8), 8)}, Interval(0, 1), 128);
    EXPECT_LE(t.interval_report.c_emp, 1.0 + 1e-12);
    EXPECT_EQ(t.comb_reports.size(), 1u);
}

// ---- properties ------------------------------------------------------------------

TEST(Property, SuperlevelNonincreasingAndMaxOnGrid) {
    oracle::Rng rng(41);
    TrigFamily trig(1024);
    WalshFamily walsh(10);
    for (int rep = 0; rep < 8; ++rep) {
        const OperatorFamily& fam = rep % 2 ? static_cast<const OperatorFamily&>(walsh) : trig;
        StepFunction f = rep % 2 ? oracle::random_dyadic_step(rng, 6, 6) : oracle::random_rational_step(rng, 6);
        MaximalScan scan = fam.maximal(f, 200);
        Rational measure = f.support().measure();
        WeakTypeReport r = distribution_scan(scan, measure, default_lambda_grid(to_double(measure), 200, scan.values.max_abs()));
        for (std::size_t i = 1; i < r.superlevel.size(); ++i) EXPECT_LE(r.superlevel[i], r.superlevel[i - 1]);
        EXPECT_NE(std::find(r.values.begin(), r.values.end(), r.c_emp), r.values.end());
    }
}

TEST(Property, GridDoublingMovesConstantLittle) {
    CombSpec trig_spec;
    for (std::int64_t l : {4, 16}) {
        double a = comb_report(TrigFamily(1 << 12), trig_spec, l, 512).c_emp;
        double b = comb_report(TrigFamily(1 << 13), trig_spec, l, 512).c_emp;
        EXPECT_LE(std::abs(a - b), 0.1 * b) << l;
    }
    CombSpec walsh_spec;
    walsh_spec.family = FamilyKind::walsh;
    for (std::int64_t l : {3, 6}) {
        double a = comb_report(WalshFamily(12), walsh_spec, l, 1024).c_emp;
        double b = comb_report(WalshFamily(13), walsh_spec, l, 1024).c_emp;
        EXPECT_LE(std::abs(a - b), 0.1 * b) << l;
    }
}
