#pragma once

#include "hcorr/grid.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace hcorr {

using Complex = std::complex<double>;

/// Fourier coefficients c_k, |k| <= N, of a step function in the system e^{2πikx}.
struct TrigCoefficients {
    std::int64_t order = 0;
    std::vector<Complex> values;  // values[k + order]

    const Complex& operator[](std::int64_t k) const { return values.at(static_cast<std::size_t>(k + order)); }
};

namespace detail {

/// x = num/den with both fitting comfortably in 64 bits, or a double fallback.
struct ExactPoint {
    bool exact = false;
    std::int64_t num = 0, den = 1;
    double value = 0;
};

inline ExactPoint exact_point(const Rational& q) {
    ExactPoint p;
    p.value = to_double(q);
    p.exact = fits_int64(q, p.num, p.den);
    return p;
}

/// frac(k·x) for x = num/den, computed without rounding before the final division.
inline double frac_times(std::int64_t k, const ExactPoint& x) {
    if (x.exact) {
        __int128 prod = static_cast<__int128>(k) * x.num;
        __int128 r = prod % x.den;
        if (r < 0) r += x.den;
        return static_cast<double>(static_cast<std::int64_t>(r)) / static_cast<double>(x.den);
    }
    double t = static_cast<double>(k) * x.value;
    return t - std::floor(t);
}

/// Coefficient contribution of v·1_{[a,b)}: v·e^{-iπk(a+b)}·sin(πk(b-a))/(πk).
struct PieceTerms {
    ExactPoint half_sum;  // (a+b)/2
    ExactPoint half_len;  // (b-a)/2
    double length = 0;
    double value = 0;
};

inline std::vector<PieceTerms> piece_terms(const StepFunction& f) {
    std::vector<PieceTerms> out;
    out.reserve(f.size());
    for (const auto& p : f.pieces()) {
        PieceTerms t;
        t.half_sum = exact_point((p.interval.a() + p.interval.b()) / 2);
        t.half_len = exact_point(p.interval.length() / 2);
        t.length = to_double(p.interval.length());
        t.value = to_double(p.coefficient);
        out.push_back(t);
    }
    return out;
}

inline Complex coefficient(const std::vector<PieceTerms>& terms, std::int64_t k) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (k == 0) {
        double s = 0;
        for (const auto& t : terms) s += t.value * t.length;
        return {s, 0.0};
    }
    Complex s = 0;
    double pk = std::numbers::pi * static_cast<double>(k);
    for (const auto& t : terms) {
        double phase = frac_times(k, t.half_sum);      // k(a+b)/2 mod 1
        double width = frac_times(k, t.half_len);      // k(b-a)/2 mod 1
        double sine = std::sin(two_pi * width);        // sin(πk(b-a)), sign-correct since 2π·frac ≡ πk(b-a) mod 2π
        s += t.value * (sine / pk) * Complex(std::cos(two_pi * phase), -std::sin(two_pi * phase));
    }
    return s;
}

/// e^{2πi·n·x_j} via a table of D-th roots of unity, where D·x_j is an integer.
class PhaseTable {
public:
    explicit PhaseTable(const Grid& grid) : size_(grid.size()) {
        BigInt od = denominator_of(grid.offset());
        BigInt d = boost::multiprecision::lcm(od, BigInt(grid.size()));
        if (d > BigInt(1) << 26) throw std::invalid_argument("grid offset denominator too large for phase table");
        den_ = d.convert_to<std::int64_t>();
        std::int64_t base = (numerator_of(grid.offset()) * (d / od)).convert_to<std::int64_t>();
        std::int64_t step = den_ / size_;
        units_.resize(static_cast<std::size_t>(size_));
        for (std::int64_t j = 0; j < size_; ++j) units_[static_cast<std::size_t>(j)] = (base + j * step) % den_;
        cos_.resize(static_cast<std::size_t>(den_));
        sin_.resize(static_cast<std::size_t>(den_));
        for (std::int64_t r = 0; r < den_; ++r) {
            double a = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den_);
            cos_[static_cast<std::size_t>(r)] = std::cos(a);
            sin_[static_cast<std::size_t>(r)] = std::sin(a);
        }
    }

    std::int64_t den() const { return den_; }
    std::int64_t unit(std::int64_t j) const { return units_[static_cast<std::size_t>(j)]; }
    double cos_at(std::int64_t r) const { return cos_[static_cast<std::size_t>(r)]; }
    double sin_at(std::int64_t r) const { return sin_[static_cast<std::size_t>(r)]; }
    /// Table index of n·x_j.
    std::int64_t index(std::int64_t n, std::int64_t j) const {
        __int128 v = static_cast<__int128>(n % den_ + den_) * unit(j);
        return static_cast<std::int64_t>(v % den_);
    }

private:
    std::int64_t size_;
    std::int64_t den_ = 1;
    std::vector<std::int64_t> units_;
    std::vector<double> cos_, sin_;
};

}  // namespace detail

inline TrigCoefficients trig_coeffs(const StepFunction& f, std::int64_t order) {
    if (order < 0) throw std::invalid_argument("trig_coeffs: order must be nonnegative");
    auto terms = detail::piece_terms(f);
    TrigCoefficients c;
    c.order = order;
    c.values.resize(static_cast<std::size_t>(2 * order + 1));
    for (std::int64_t k = -order; k <= order; ++k) c.values[static_cast<std::size_t>(k + order)] = detail::coefficient(terms, k);
    return c;
}

struct TrigPartialSum {
    GridFunction values;
    double imag_residue = 0;
};

/// S_n f = Σ_{|k|<=n} c_k e^{2πikx} on the grid. Both halves of the spectrum are
/// summed independently; a large imaginary part signals a coefficient defect.
inline TrigPartialSum trig_partial_sum(const StepFunction& f, std::int64_t n, const Grid& grid) {
    if (n < 0) throw std::invalid_argument("trig_partial_sum: n must be nonnegative");
    auto c = trig_coeffs(f, n);
    detail::PhaseTable table(grid);
    TrigPartialSum out{{grid, std::vector<double>(static_cast<std::size_t>(grid.size()))}, 0.0};
    for (std::int64_t j = 0; j < grid.size(); ++j) {
        Complex s = 0;
        for (std::int64_t k = -n; k <= n; ++k) {
            std::int64_t r = table.index(k, j);
            s += c[k] * Complex(table.cos_at(r), table.sin_at(r));
        }
        out.values.samples[static_cast<std::size_t>(j)] = s.real();
        out.imag_residue = std::max(out.imag_residue, std::abs(s.imag()));
    }
    if (out.imag_residue > 1e-8)
        throw std::runtime_error("trig_partial_sum: imaginary residue " + std::to_string(out.imag_residue) + " exceeds 1e-8");
    return out;
}

/// Visits S_0 f, S_1 f, ..., S_{n_max} f in order on the grid; O(M) per step.
template <class Visitor>
void trig_sweep(const StepFunction& f, std::int64_t n_max, const Grid& grid, Visitor&& visit) {
    if (n_max < 0) throw std::invalid_argument("trig_sweep: n_max must be nonnegative");
    auto terms = detail::piece_terms(f);
    detail::PhaseTable table(grid);
    const auto m = static_cast<std::size_t>(grid.size());
    std::vector<double> s(m, detail::coefficient(terms, 0).real());
    std::vector<std::int64_t> idx(m, 0);
    visit(std::int64_t(0), std::span<const double>(s));
    const std::int64_t den = table.den();
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Complex c = detail::coefficient(terms, n);
        double re = 2.0 * c.real(), im = 2.0 * c.imag();
        for (std::size_t j = 0; j < m; ++j) {
            std::int64_t r = idx[j] + table.unit(static_cast<std::int64_t>(j));
            if (r >= den) r -= den;
            idx[j] = r;
            s[j] += re * table.cos_at(r) - im * table.sin_at(r);
        }
        visit(n, std::span<const double>(s));
    }
}

/// S* f = max_{0<=n<=n_max} |S_n f| on the grid, with the first maximizing n.
inline MaximalScan trig_maximal(const StepFunction& f, std::int64_t n_max, const Grid& grid) {
    if (n_max < 1) throw std::invalid_argument("trig_maximal: n_max must be at least 1");
    auto terms = detail::piece_terms(f);
    std::vector<Complex> c(static_cast<std::size_t>(n_max + 1));
    for (std::int64_t n = 0; n <= n_max; ++n) c[static_cast<std::size_t>(n)] = detail::coefficient(terms, n);
    detail::PhaseTable table(grid);
    MaximalScan scan{"trig", n_max, {grid, std::vector<double>(static_cast<std::size_t>(grid.size()))},
                     std::vector<std::int64_t>(static_cast<std::size_t>(grid.size()))};
    const std::int64_t den = table.den();
    detail::parallel_chunks(grid.size(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t j = b; j < e; ++j) {
            const std::int64_t u = table.unit(j);
            double s = c[0].real();
            double best = std::abs(s);
            std::int64_t arg = 0;
            std::int64_t r = 0;
            for (std::int64_t n = 1; n <= n_max; ++n) {
                r += u;
                if (r >= den) r -= den;
                const Complex& cn = c[static_cast<std::size_t>(n)];
                s += 2.0 * (cn.real() * table.cos_at(r) - cn.imag() * table.sin_at(r));
                if (std::abs(s) > best) {
                    best = std::abs(s);
                    arg = n;
                }
            }
            scan.values.samples[static_cast<std::size_t>(j)] = best;
            scan.argmax[static_cast<std::size_t>(j)] = arg;
        }
    });
    return scan;
}

}  // namespace hcorr
