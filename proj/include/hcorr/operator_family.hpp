#pragma once

#include "hcorr/trig.hpp"
#include "hcorr/walsh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace hcorr {

enum class FamilyKind { trig, walsh };

inline std::string to_string(FamilyKind k) { return k == FamilyKind::trig ? "trig" : "walsh"; }

inline FamilyKind parse_family(const std::string& s) {
    if (s == "trig") return FamilyKind::trig;
    if (s == "walsh") return FamilyKind::walsh;
    throw std::invalid_argument("unknown family '" + s + "' (expected trig or walsh)");
}

using SweepVisitor = std::function<void(std::int64_t, std::span<const double>)>;

/// Index n -> linear operator U_n on step functions, evaluated on the family grid.
///
/// Also carries the interval basis and the comb sources (plain, and the
/// variant inside a prescribed open set) that the corrector draws from.
class OperatorFamily {
public:
    virtual ~OperatorFamily() = default;

    virtual FamilyKind kind() const = 0;
    std::string name() const { return to_string(kind()); }
    virtual const Grid& grid() const = 0;
    virtual IntervalBasis basis() const = 0;

    virtual GridFunction apply(std::int64_t n, const StepFunction& f) const = 0;
    virtual MaximalScan maximal(const StepFunction& f, std::int64_t n_max) const = 0;
    /// Calls visit(n, U_n f) for n = 1..n_max in increasing order.
    virtual void sweep(const StepFunction& f, std::int64_t n_max, const SweepVisitor& visit) const = 0;
    /// max |coefficient| over the spectrum kept by U_n; a lower bound for ||U_n f||_1.
    /// Scanning may stop early once the running maximum reaches stop_at.
    virtual double coefficient_bound(const StepFunction& f, std::int64_t n,
                                     double stop_at = std::numeric_limits<double>::infinity()) const = 0;
    /// True when the grid is fine enough to represent f (exactly for Walsh, two cells per piece for trig).
    virtual bool resolves(const StepFunction& f) const = 0;

    /// G_m(eps) from the comb source, alpha·eps <= |G_m| <= eps.
    virtual IntervalSet comb(const Rational& eps, std::int64_t m) const = 0;
    virtual Rational alpha() const = 0;
    /// A comb with at most measure eps lying inside u, or nullopt when index m admits none.
    virtual std::optional<IntervalSet> comb_inside(const IntervalSet& u, std::int64_t m, const Rational& eps) const = 0;

    GridFunction sample(const StepFunction& f) const { return hcorr::sample(f, grid()); }
};

namespace detail {

/// {y in [0,1): (j + y)/q in u for every j < q}.
inline IntervalSet fold(const IntervalSet& u, std::int64_t q) {
    // a gap of length >= 2/q swallows a whole cell, so nothing survives
    for (const auto& gap : u.complement().intervals())
        if (gap.length() * q >= 2) return IntervalSet();
    IntervalSet acc = IntervalSet::full();
    for (std::int64_t j = 0; j < q && !acc.empty(); ++j) {
        Rational lo(j, q), hi(j + 1, q);
        std::vector<Interval> parts;
        for (const auto& iv : u.intervals()) {
            Rational a = std::max<Rational>(iv.a(), lo), b = std::min<Rational>(iv.b(), hi);
            if (a < b) parts.emplace_back(a * q - j, b * q - j);
        }
        acc = acc.intersect(IntervalSet(std::move(parts)));
    }
    return acc;
}

}  // namespace detail

/// Symmetric trigonometric partial sums on a midpoint grid.
class TrigFamily final : public OperatorFamily {
public:
    explicit TrigFamily(std::int64_t grid_size) : grid_(Grid::midpoint(grid_size)) {}
    explicit TrigFamily(Grid grid) : grid_(std::move(grid)) {}

    FamilyKind kind() const override { return FamilyKind::trig; }
    const Grid& grid() const override { return grid_; }
    IntervalBasis basis() const override { return IntervalBasis::rational(); }

    GridFunction apply(std::int64_t n, const StepFunction& f) const override {
        return trig_partial_sum(f, n, grid_).values;
    }
    MaximalScan maximal(const StepFunction& f, std::int64_t n_max) const override {
        return trig_maximal(f, n_max, grid_);
    }
    void sweep(const StepFunction& f, std::int64_t n_max, const SweepVisitor& visit) const override {
        trig_sweep(f, n_max, grid_, [&](std::int64_t n, std::span<const double> s) {
            if (n >= 1) visit(n, s);
        });
    }
    double coefficient_bound(const StepFunction& f, std::int64_t n, double stop_at) const override {
        auto terms = detail::piece_terms(f);
        double m = 0;
        for (std::int64_t k = 0; k <= n && m < stop_at; ++k) m = std::max(m, std::abs(detail::coefficient(terms, k)));
        return m;
    }
    /// Every piece spans at least two grid cells.
    bool resolves(const StepFunction& f) const override {
        Rational cell(1, grid_.size());
        for (const auto& p : f.pieces())
            if (p.interval.length() < 2 * cell) return false;
        return true;
    }

    IntervalSet comb(const Rational& eps, std::int64_t m) const override { return trig_comb(Interval(0, 1), eps, m); }
    Rational alpha() const override { return 1; }

    std::optional<IntervalSet> comb_inside(const IntervalSet& u, std::int64_t m, const Rational& eps) const override {
        IntervalSet centers = detail::fold(u, m);  // admissible offsets, scaled by m
        if (centers.empty()) return std::nullopt;
        const Interval* best = &centers.intervals().front();
        for (const auto& iv : centers.intervals())
            if (iv.length() > best->length()) best = &iv;
        Rational alpha_scaled = (best->a() + best->b()) / 2;
        Rational half = std::min<Rational>(best->length() / 2, eps / 2);
        std::vector<Interval> teeth;
        for (std::int64_t k = 0; k < m; ++k)
            teeth.emplace_back((Rational(k) + alpha_scaled - half) / m, (Rational(k) + alpha_scaled + half) / m);
        return IntervalSet(std::move(teeth));
    }

private:
    Grid grid_;
};

/// Paley-ordered Walsh partial sums S_m (first m coefficients) on a dyadic grid.
class WalshFamily final : public OperatorFamily {
public:
    explicit WalshFamily(unsigned level) : level_(level), grid_(Grid::dyadic(level)) {}

    unsigned level() const { return level_; }
    FamilyKind kind() const override { return FamilyKind::walsh; }
    const Grid& grid() const override { return grid_; }
    IntervalBasis basis() const override { return IntervalBasis::dyadic(); }

    GridFunction apply(std::int64_t n, const StepFunction& f) const override {
        return walsh_partial_sum(f, static_cast<std::uint64_t>(n), level_);
    }
    MaximalScan maximal(const StepFunction& f, std::int64_t n_max) const override {
        return walsh_maximal(f, static_cast<std::uint64_t>(n_max), level_);
    }
    void sweep(const StepFunction& f, std::int64_t n_max, const SweepVisitor& visit) const override {
        walsh_sweep(f, static_cast<std::uint64_t>(n_max), level_, visit);
    }
    double coefficient_bound(const StepFunction& f, std::int64_t n, double) const override {
        auto a = walsh_spectrum(f, level_).coefficients;
        double m = 0;
        for (std::int64_t k = 0; k < n && k < static_cast<std::int64_t>(a.size()); ++k)
            m = std::max(m, std::abs(a[static_cast<std::size_t>(k)]));
        return m;
    }
    bool resolves(const StepFunction& f) const override {
        for (const auto& p : f.pieces()) {
            auto la = dyadic_level(p.interval.a()), lb = dyadic_level(p.interval.b());
            if (!la || !lb || *la > level_ || *lb > level_) return false;
        }
        return true;
    }

    /// Smallest r with 2^-r <= eps, so eps/2 < 2^-r <= eps.
    static unsigned tooth_level(const Rational& eps) {
        if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
        unsigned r = 1;
        while (pow2_inverse(r) > eps) ++r;
        return r;
    }

    IntervalSet comb(const Rational& eps, std::int64_t m) const override {
        return walsh_comb(Interval(0, 1), tooth_level(eps), 1, static_cast<unsigned>(m));
    }
    Rational alpha() const override { return Rational(1, 2); }

    std::optional<IntervalSet> comb_inside(const IntervalSet& u, std::int64_t m, const Rational& eps) const override {
        if (m < 0 || m > 30) return std::nullopt;
        IntervalSet offsets = detail::fold(u, std::int64_t(1) << m);
        if (offsets.empty()) return std::nullopt;
        unsigned r0 = 1;
        while (pow2_inverse(r0) > eps) ++r0;
        for (unsigned r = r0; r <= r0 + 24; ++r) {
            BigInt scale = BigInt(1) << r;
            for (const auto& iv : offsets.intervals()) {
                BigInt t = ceil_of(iv.a() * Rational(scale)) + 1;
                if (Rational(t) <= iv.b() * Rational(scale))
                    return walsh_comb(Interval(0, 1), r, t.convert_to<std::uint64_t>(), static_cast<unsigned>(m));
            }
        }
        return std::nullopt;
    }

private:
    unsigned level_;
    Grid grid_;
};

inline std::unique_ptr<OperatorFamily> make_family(FamilyKind kind, std::int64_t grid_size, unsigned level) {
    if (kind == FamilyKind::trig) return std::make_unique<TrigFamily>(grid_size);
    return std::make_unique<WalshFamily>(level);
}

}  // namespace hcorr
