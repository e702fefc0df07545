#pragma once

// Independent reference computations and random generators shared by the tests
// and the acceptance runner. Nothing here calls the transform or coefficient code
// under test.

#include "hcorr/hcorr.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using hcorr::Interval;
using hcorr::Rational;
using hcorr::StepFunction;
using hcorr::StepPiece;

/// Piecewise composite Simpson for c_k = ∫ f(t) e^{-2πikt} dt, |k| <= n, using about
/// `nodes` points split across the pieces in proportion to their length.
inline std::vector<std::complex<double>> trig_coefficients(const StepFunction& f, std::int64_t n, std::int64_t nodes) {
    std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (const auto& p : f.pieces()) {
        const double a = hcorr::to_double(p.interval.a()), b = hcorr::to_double(p.interval.b());
        const double v = hcorr::to_double(p.coefficient);
        std::int64_t m = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::llround(static_cast<double>(nodes) * (b - a))));
        if (m % 2) ++m;
        const double h = (b - a) / static_cast<double>(m);
        // Accumulate Σ w_i e^{-2πik t_i} for k = 0..n by a running product per node.
        std::vector<std::complex<double>> acc(static_cast<std::size_t>(n + 1), 0.0);
        for (std::int64_t i = 0; i <= m; ++i) {
            const double t = a + h * static_cast<double>(i);
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const std::complex<double> step = std::polar(1.0, -2 * std::numbers::pi * t);
            std::complex<double> e = 1.0;
            for (std::int64_t k = 0; k <= n; ++k) {
                // Re-anchor every 16 steps to keep the running product accurate.
                if (k % 16 == 0) e = std::polar(1.0, -2 * std::numbers::pi * std::fmod(static_cast<double>(k) * t, 1.0));
                acc[static_cast<std::size_t>(k)] += w * e;
                e *= step;
            }
        }
        for (std::int64_t k = 0; k <= n; ++k) {
            std::complex<double> ck = acc[static_cast<std::size_t>(k)] * (v * h / 3.0);
            c[static_cast<std::size_t>(n + k)] += ck;
            if (k > 0) c[static_cast<std::size_t>(n - k)] += std::conj(ck);  // f is real
        }
    }
    return c;
}

/// Σ_{|k|<=n} c_k e^{2πikx} from quadrature coefficients.
inline double trig_partial_sum_at(const std::vector<std::complex<double>>& c, std::int64_t n, double x) {
    const std::int64_t order = (static_cast<std::int64_t>(c.size()) - 1) / 2;
    std::complex<double> s = c[static_cast<std::size_t>(order)];
    for (std::int64_t k = 1; k <= n; ++k) {
        std::complex<double> e = std::polar(1.0, 2 * std::numbers::pi * std::fmod(static_cast<double>(k) * x, 1.0));
        s += c[static_cast<std::size_t>(order + k)] * e + c[static_cast<std::size_t>(order - k)] * std::conj(e);
    }
    return s.real();
}

/// Paley w_k at j/2^p by bit reversal: digit i+1 of x is bit p-1-i of j.
inline int walsh_at(std::uint64_t k, std::uint64_t j, unsigned p) {
    std::uint64_t rev = 0;
    for (unsigned i = 0; i < p; ++i)
        if ((j >> (p - 1 - i)) & 1u) rev |= std::uint64_t(1) << i;
    return (std::popcount(k & rev) & 1) ? -1 : 1;
}

/// S_m f on the level-p grid as 2^{-p} Σ_t D_m(x ⊕ t) f(t), D_m tabulated by summing w_k.
inline std::vector<double> walsh_partial_sum(const StepFunction& f, std::uint64_t m, unsigned p) {
    const std::uint64_t size = std::uint64_t(1) << p;
    std::vector<double> d(size, 0.0), fv(size, 0.0), out(size, 0.0);
    for (std::uint64_t z = 0; z < size; ++z) {
        std::uint64_t rev = 0;
        for (unsigned i = 0; i < p; ++i)
            if ((z >> (p - 1 - i)) & 1u) rev |= std::uint64_t(1) << i;
        long s = 0;
        for (std::uint64_t k = 0; k < m; ++k) s += (std::popcount(k & rev) & 1) ? -1 : 1;
        d[z] = static_cast<double>(s);
    }
    for (std::uint64_t j = 0; j < size; ++j) fv[j] = hcorr::to_double(f(Rational(hcorr::BigInt(j), hcorr::BigInt(size))));
    for (std::uint64_t x = 0; x < size; ++x) {
        double acc = 0;
        for (std::uint64_t t = 0; t < size; ++t)
            if (fv[t] != 0) acc += d[x ^ t] * fv[t];
        out[x] = acc / static_cast<double>(size);
    }
    return out;
}

// ---- generators ----------------------------------------------------------------

using Rng = std::mt19937_64;

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Nonzero coefficient in {±1/4, ..., ±4}.
inline Rational random_coefficient(Rng& rng) {
    std::int64_t v = uniform_int(rng, 1, 16);
    return Rational(uniform_int(rng, 0, 1) ? v : -v, 4);
}

/// Step function with 1..max_pieces pieces on breakpoints of denominator den.
inline StepFunction random_step(Rng& rng, int max_pieces, std::int64_t den) {
    const int pieces = static_cast<int>(uniform_int(rng, 1, max_pieces));
    std::set<std::int64_t> cuts;
    while (static_cast<int>(cuts.size()) < pieces + 1 && static_cast<std::int64_t>(cuts.size()) <= den)
        cuts.insert(uniform_int(rng, 0, den));
    std::vector<std::int64_t> c(cuts.begin(), cuts.end());
    std::vector<StepPiece> v;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) v.push_back({Interval(Rational(c[i], den), Rational(c[i + 1], den)), random_coefficient(rng)});
    return StepFunction(std::move(v));
}

/// Step function with rational breakpoints of assorted denominators (not dyadic in general).
inline StepFunction random_rational_step(Rng& rng, int max_pieces) {
    static const std::int64_t dens[] = {3, 5, 6, 7, 12, 30, 97};
    return random_step(rng, max_pieces, dens[uniform_int(rng, 0, 6)]);
}

inline StepFunction random_dyadic_step(Rng& rng, int max_pieces, unsigned level) {
    return random_step(rng, max_pieces, std::int64_t(1) << level);
}

}  // namespace oracle
