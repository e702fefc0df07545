#pragma once

#include "hcorr/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hcorr {

/// numerator / 2^level in [0,1).
class DyadicPoint {
public:
    DyadicPoint() = default;
    DyadicPoint(std::uint64_t numerator, unsigned level) : num_(numerator), level_(level) {
        if (level > 62) throw std::invalid_argument("dyadic level above 62");
        if (num_ >= (std::uint64_t(1) << level)) throw std::invalid_argument("dyadic point outside [0,1)");
    }
    static DyadicPoint from_rational(const Rational& x) {
        auto lvl = dyadic_level(x);
        if (!lvl || x < 0 || x >= 1) throw std::invalid_argument("not a dyadic point of [0,1)");
        return DyadicPoint(numerator_of(x).convert_to<std::uint64_t>(), *lvl);
    }

    std::uint64_t numerator() const { return num_; }
    unsigned level() const { return level_; }
    double value() const { return std::ldexp(static_cast<double>(num_), -static_cast<int>(level_)); }
    Rational exact() const { return Rational(BigInt(num_), BigInt(1) << level_); }

    /// Same point at a finer level.
    DyadicPoint at_level(unsigned p) const {
        if (p < level_) throw std::invalid_argument("cannot coarsen a dyadic point");
        return DyadicPoint(num_ << (p - level_), p);
    }

    /// k-th binary digit x_k of x = Σ x_k 2^{-k}, k >= 1.
    unsigned digit(unsigned k) const {
        if (k == 0 || k > level_) return 0;
        return static_cast<unsigned>((num_ >> (level_ - k)) & 1u);
    }

    friend bool operator==(const DyadicPoint& x, const DyadicPoint& y) {
        unsigned p = std::max(x.level_, y.level_);
        return x.at_level(p).num_ == y.at_level(p).num_;
    }

private:
    std::uint64_t num_ = 0;
    unsigned level_ = 0;
};

/// x ⊕ y: digitwise exclusive-or.
inline DyadicPoint dyadic_add(const DyadicPoint& x, const DyadicPoint& y) {
    unsigned p = std::max(x.level(), y.level());
    return DyadicPoint(x.at_level(p).numerator() ^ y.at_level(p).numerator(), p);
}

/// Rademacher r_i(x) = (-1)^{x_{i+1}}.
inline int rademacher(unsigned i, const DyadicPoint& x) { return x.digit(i + 1) ? -1 : 1; }

/// Paley-ordered Walsh function w_n(x) = Π_{bits i of n} r_i(x).
inline int walsh_fn(std::uint64_t n, const DyadicPoint& x) {
    // Bits of n beyond the level of x select digits that are zero.
    std::uint64_t digits = 0;
    unsigned p = x.level();
    for (unsigned i = 0; i < p && i < 64; ++i) digits |= std::uint64_t(x.digit(i + 1)) << i;
    return (std::popcount(n & digits) & 1) ? -1 : 1;
}

/// D_m(x) = Σ_{k=0}^{m-1} w_k(x).
inline double walsh_dirichlet(std::uint64_t m, const DyadicPoint& x) {
    if (m < 1) throw std::invalid_argument("walsh_dirichlet: m must be positive");
    std::int64_t s = 0;
    for (std::uint64_t k = 0; k < m; ++k) s += walsh_fn(k, x);
    return static_cast<double>(s);
}

namespace detail {

inline std::uint64_t reverse_bits(std::uint64_t j, unsigned p) {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < p; ++i) r |= ((j >> i) & 1u) << (p - 1 - i);
    return r;
}

/// In-place unnormalized Walsh–Hadamard butterfly (natural order).
inline void hadamard_butterfly(std::span<double> v) {
    const std::size_t n = v.size();
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t i = 0; i < n; i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                double x = v[j], y = v[j + h];
                v[j] = x + y;
                v[j + h] = x - y;
            }
}

inline void bit_reverse_permute(std::span<double> v, unsigned p) {
    for (std::uint64_t j = 0; j < v.size(); ++j) {
        std::uint64_t r = reverse_bits(j, p);
        if (r > j) std::swap(v[j], v[r]);
    }
}

inline unsigned level_of(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("transform length must be a power of two");
    return static_cast<unsigned>(std::countr_zero(n));
}

}  // namespace detail

/// Paley-ordered Walsh coefficients a_n = ∫ f w_n of a function constant on
/// generation-p dyadic intervals, from its 2^p cell values.
inline std::vector<double> walsh_forward(std::vector<double> values) {
    unsigned p = detail::level_of(values.size());
    detail::bit_reverse_permute(values, p);
    detail::hadamard_butterfly(values);
    double scale = std::ldexp(1.0, -static_cast<int>(p));
    for (double& v : values) v *= scale;
    return values;
}

/// Cell values Σ_n a_n w_n(x_j) from Paley-ordered coefficients.
inline std::vector<double> walsh_inverse(std::vector<double> coeffs) {
    unsigned p = detail::level_of(coeffs.size());
    detail::hadamard_butterfly(coeffs);
    detail::bit_reverse_permute(coeffs, p);
    return coeffs;
}

/// Cell values of a dyadic step function on the generation-p grid.
inline std::vector<double> dyadic_cells(const StepFunction& f, unsigned p) {
    for (const auto& piece : f.pieces()) {
        auto la = dyadic_level(piece.interval.a());
        auto lb = dyadic_level(piece.interval.b());
        if (!la || !lb) throw std::invalid_argument("Walsh evaluation needs dyadic piece endpoints");
        if (*la > p || *lb > p) throw std::invalid_argument("piece endpoints finer than the dyadic grid level");
    }
    return sample(f, Grid::dyadic(p)).samples;
}

struct WalshSpectrum {
    unsigned level = 0;
    std::vector<double> coefficients;
};

inline WalshSpectrum walsh_spectrum(const StepFunction& f, unsigned p) { return {p, walsh_forward(dyadic_cells(f, p))}; }

/// S_m f = Σ_{n<m} a_n w_n, exact on the generation-p grid (fast transform path).
inline GridFunction walsh_partial_sum(const StepFunction& f, std::uint64_t m, unsigned p) {
    if (m > (std::uint64_t(1) << p)) throw std::invalid_argument("walsh_partial_sum: m exceeds 2^p");
    auto a = walsh_forward(dyadic_cells(f, p));
    for (std::size_t n = m; n < a.size(); ++n) a[n] = 0.0;
    return {Grid::dyadic(p), walsh_inverse(std::move(a))};
}

/// Visits S_1 f, ..., S_{m_max} f on the generation-p grid, adding one Walsh term per step.
template <class Visitor>
void walsh_sweep(const StepFunction& f, std::uint64_t m_max, unsigned p, Visitor&& visit) {
    if (m_max > (std::uint64_t(1) << p)) throw std::invalid_argument("walsh_sweep: m_max exceeds 2^p");
    auto a = walsh_forward(dyadic_cells(f, p));
    const std::size_t size = a.size();
    std::vector<std::uint64_t> rev(size);
    for (std::size_t j = 0; j < size; ++j) rev[j] = detail::reverse_bits(j, p);
    std::vector<double> s(size, 0.0);
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        const double c = a[m - 1];
        if (c != 0.0)
            for (std::size_t j = 0; j < size; ++j) s[j] += (std::popcount((m - 1) & rev[j]) & 1) ? -c : c;
        visit(static_cast<std::int64_t>(m), std::span<const double>(s));
    }
}

/// S* f = max_{1<=m<=m_max} |S_m f| on the generation-p grid.
inline MaximalScan walsh_maximal(const StepFunction& f, std::uint64_t m_max, unsigned p) {
    if (m_max < 1) throw std::invalid_argument("walsh_maximal: m_max must be at least 1");
    if (m_max > (std::uint64_t(1) << p)) throw std::invalid_argument("walsh_maximal: m_max exceeds 2^p");
    auto a = walsh_forward(dyadic_cells(f, p));
    const auto size = static_cast<std::int64_t>(a.size());
    MaximalScan scan{"walsh", static_cast<std::int64_t>(m_max), {Grid::dyadic(p), std::vector<double>(a.size(), 0.0)},
                     std::vector<std::int64_t>(a.size(), 1)};
    std::vector<std::uint64_t> nonzero;
    for (std::uint64_t n = 0; n < m_max; ++n)
        if (a[n] != 0.0) nonzero.push_back(n);
    detail::parallel_chunks(size, [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t j = b; j < e; ++j) {
            const std::uint64_t r = detail::reverse_bits(static_cast<std::uint64_t>(j), p);
            double s = 0.0, best = -1.0;
            std::int64_t arg = 1;
            std::size_t next = 0;
            // S_m only changes at m = n+1 for nonzero a_n; between changes the value is flat.
            for (std::uint64_t m = 1; m <= m_max;) {
                if (next < nonzero.size() && nonzero[next] == m - 1) {
                    const double c = a[m - 1];
                    s += (std::popcount((m - 1) & r) & 1) ? -c : c;
                    ++next;
                }
                if (std::abs(s) > best) {
                    best = std::abs(s);
                    arg = static_cast<std::int64_t>(m);
                }
                std::uint64_t jump = next < nonzero.size() ? nonzero[next] + 1 : m_max + 1;
                m = std::max(m + 1, jump);
            }
            scan.values.samples[static_cast<std::size_t>(j)] = best;
            scan.argmax[static_cast<std::size_t>(j)] = arg;
        }
    });
    return scan;
}

}  // namespace hcorr
