#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcorr;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

}  // namespace

TEST(TrigCoeffs, IndicatorClosedForm) {
    // c_k of 1_[0,1/2): 1/2 at k = 0, 0 for even k, 1/(iπk) for odd k.
    TrigCoefficients c = trig_coeffs(StepFunction::indicator(Interval(0, q(1, 2))), 9);
    EXPECT_NEAR(c[0].real(), 0.5, 1e-15);
    for (std::int64_t k = 1; k <= 9; ++k) {
        std::complex<double> want = k % 2 ? std::complex<double>(0, -1.0 / (std::numbers::pi * k)) : 0.0;
        EXPECT_NEAR(std::abs(c[k] - want), 0, 1e-14) << k;
        EXPECT_NEAR(std::abs(c[-k] - std::conj(c[k])), 0, 1e-15);
    }
}

TEST(TrigPartialSum, ConstantIsFixed) {
    StepFunction one = StepFunction::indicator(Interval(0, 1));
    Grid grid = Grid::midpoint(128);
    for (std::int64_t n : {0, 1, 7, 100}) {
        TrigPartialSum s = trig_partial_sum(one, n, grid);
        for (double v : s.values.samples) EXPECT_NEAR(v, 1.0, 1e-13);
    }
}

TEST(TrigPartialSum, HalfIndicatorConvergesInL1) {
    StepFunction f = StepFunction::indicator(Interval(0, q(1, 2)));
    Grid grid = Grid::midpoint(1 << 14);
    GridFunction exact = sample(f, grid);
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t n : {4, 16, 64, 256}) {
        GridFunction s = trig_partial_sum(f, n, grid).values;
        double err = 0;
        for (std::size_t j = 0; j < s.samples.size(); ++j) err += std::abs(s.samples[j] - exact.samples[j]);
        err /= static_cast<double>(s.samples.size());
        EXPECT_LT(err, prev) << n;
        prev = err;
    }
}

TEST(TrigPartialSum, MatchesQuadratureOracle) {
    oracle::Rng rng(21);
    Grid grid = Grid::midpoint(64);
    for (int rep = 0; rep < 6; ++rep) {
        StepFunction f = oracle::random_rational_step(rng, 6);
        auto c = oracle::trig_coefficients(f, 64, 200'000);
        for (std::int64_t n : {0, 7, 64}) {
            TrigPartialSum s = trig_partial_sum(f, n, grid);
            EXPECT_LT(s.imag_residue, 1e-10);
            for (std::int64_t j = 0; j < grid.size(); ++j)
                ASSERT_NEAR(s.values.samples[static_cast<std::size_t>(j)], oracle::trig_partial_sum_at(c, n, grid.x(j)), 1e-8);
        }
    }
}

TEST(TrigSweep, AgreesWithDirectPartialSums) {
    oracle::Rng rng(22);
    StepFunction f = oracle::random_rational_step(rng, 5);
    Grid grid = Grid::midpoint(97);
    std::vector<std::vector<double>> seen;
    trig_sweep(f, 40, grid, [&](std::int64_t n, std::span<const double> s) {
        EXPECT_EQ(n, static_cast<std::int64_t>(seen.size()));
        seen.emplace_back(s.begin(), s.end());
    });
    ASSERT_EQ(seen.size(), 41u);
    for (std::int64_t n : {0, 1, 13, 40}) {
        GridFunction d = trig_partial_sum(f, n, grid).values;
        for (std::size_t j = 0; j < d.samples.size(); ++j) EXPECT_NEAR(seen[static_cast<std::size_t>(n)][j], d.samples[j], 1e-11);
    }
}

TEST(TrigMaximal, ConstantAndScanConsistency) {
    Grid grid = Grid::midpoint(64);
    MaximalScan one = trig_maximal(StepFunction::indicator(Interval(0, 1)), 50, grid);
    for (double v : one.values.samples) EXPECT_NEAR(v, 1.0, 1e-13);

    oracle::Rng rng(23);
    StepFunction f = oracle::random_rational_step(rng, 6);
    MaximalScan scan = trig_maximal(f, 60, grid);
    GridFunction last = trig_partial_sum(f, 60, grid).values;
    for (std::size_t j = 0; j < last.samples.size(); ++j) {
        EXPECT_GE(scan.values.samples[j] + 1e-12, std::abs(last.samples[j]));
        std::int64_t n = scan.argmax[j];
        ASSERT_GE(n, 0);
        ASSERT_LE(n, 60);
        EXPECT_NEAR(std::abs(trig_partial_sum(f, n, grid).values.samples[j]), scan.values.samples[j], 1e-10);
    }
}

// ---- properties ------------------------------------------------------------------

TEST(Property, ParsevalBound) {
    oracle::Rng rng(24);
    for (int rep = 0; rep < 20; ++rep) {
        StepFunction f = oracle::random_rational_step(rng, 8);
        std::int64_t n = oracle::uniform_int(rng, 1, 512);
        TrigCoefficients c = trig_coeffs(f, n);
        double energy = 0;
        for (const auto& v : c.values) energy += std::norm(v);
        EXPECT_LE(energy, to_double(f.l2_norm_squared()) + 1e-8);
    }
}

TEST(Property, Linearity) {
    oracle::Rng rng(25);
    Grid grid = Grid::midpoint(256);
    for (int rep = 0; rep < 10; ++rep) {
        StepFunction f = oracle::random_rational_step(rng, 6), g = oracle::random_rational_step(rng, 6);
        Rational a = oracle::random_coefficient(rng), b = oracle::random_coefficient(rng);
        std::int64_t n = oracle::uniform_int(rng, 0, 200);
        auto lhs = trig_partial_sum(f.scaled(a) + g.scaled(b), n, grid).values.samples;
        auto sf = trig_partial_sum(f, n, grid).values.samples, sg = trig_partial_sum(g, n, grid).values.samples;
        for (std::size_t j = 0; j < lhs.size(); ++j)
            ASSERT_NEAR(lhs[j], to_double(a) * sf[j] + to_double(b) * sg[j], 1e-10);
    }
}

TEST(Property, TranslationCovariance) {
    oracle::Rng rng(26);
    for (int rep = 0; rep < 20; ++rep) {
        // Keep f inside [0, 1/2) and shift by tau <= 1/2 so no piece wraps.
        StepFunction base = oracle::random_step(rng, 5, 2 * oracle::uniform_int(rng, 3, 40));
        std::vector<StepPiece> half, moved;
        for (const auto& p : base.pieces()) half.push_back({Interval(p.interval.a() / 2, p.interval.b() / 2), p.coefficient});
        Rational tau(oracle::uniform_int(rng, 0, 50), 100);
        for (const auto& p : half) moved.push_back({Interval(p.interval.a() + tau, p.interval.b() + tau), p.coefficient});
        TrigCoefficients c = trig_coeffs(StepFunction(half), 40), d = trig_coeffs(StepFunction(moved), 40);
        for (std::int64_t k = -40; k <= 40; ++k) {
            std::complex<double> rot = std::polar(1.0, -2 * std::numbers::pi * to_double(frac_of(tau * k)));
            EXPECT_NEAR(std::abs(d[k] - c[k] * rot), 0, 1e-12);
        }
    }
}

TEST(Property, MaximalMonotoneInTruncation) {
    oracle::Rng rng(27);
    Grid grid = Grid::midpoint(200);
    for (int rep = 0; rep < 5; ++rep) {
        StepFunction f = oracle::random_rational_step(rng, 8);
        auto a = trig_maximal(f, 30, grid).values.samples, b = trig_maximal(f, 90, grid).values.samples;
        for (std::size_t j = 0; j < a.size(); ++j) EXPECT_GE(b[j], a[j]);
    }
}
