#pragma once

#include "hcorr/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hcorr {

struct StepPiece {
    Interval interval;
    Rational coefficient;
};

/// f(x) = Σ a_k 1_{Δ_k}(x) with pairwise disjoint Δ_k and nonzero a_k.
///
/// Pieces are kept sorted by left endpoint. The constructor does not merge
/// adjacent pieces, so a refinement stays a refinement; sums and differences
/// come back with equal-valued neighbours merged. Double copies of endpoints and coefficients
/// are cached for grid evaluation.
class StepFunction {
public:
    StepFunction() = default;

    explicit StepFunction(std::vector<StepPiece> pieces) {
        pieces.erase(std::remove_if(pieces.begin(), pieces.end(),
                                    [](const StepPiece& p) { return p.coefficient == 0; }),
                     pieces.end());
        std::sort(pieces.begin(), pieces.end(),
                  [](const StepPiece& p, const StepPiece& q) { return p.interval.a() < q.interval.a(); });
        for (std::size_t i = 1; i < pieces.size(); ++i)
            if (pieces[i].interval.a() < pieces[i - 1].interval.b())
                throw std::invalid_argument("step function pieces overlap");
        pieces_ = std::move(pieces);
        cache();
    }

    static StepFunction indicator(const Interval& iv, Rational c = 1) { return StepFunction({{iv, std::move(c)}}); }
    static StepFunction indicator(const IntervalSet& s, const Rational& c = 1) {
        std::vector<StepPiece> v;
        for (const auto& iv : s.intervals()) v.push_back({iv, c});
        return StepFunction(std::move(v));
    }

    const std::vector<StepPiece>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    bool is_zero() const { return pieces_.empty(); }

    Rational operator()(const Rational& x) const {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const Rational& v, const StepPiece& p) { return v < p.interval.a(); });
        if (it == pieces_.begin()) return 0;
        --it;
        return it->interval.contains(x) ? it->coefficient : Rational(0);
    }

    double eval(double x) const {
        auto it = std::upper_bound(lo_.begin(), lo_.end(), x);
        if (it == lo_.begin()) return 0.0;
        std::size_t i = static_cast<std::size_t>(it - lo_.begin()) - 1;
        return x < hi_[i] ? val_[i] : 0.0;
    }

    Rational integral() const {
        Rational s = 0;
        for (const auto& p : pieces_) s += p.coefficient * p.interval.length();
        return s;
    }
    Rational l1_norm() const {
        Rational s = 0;
        for (const auto& p : pieces_) s += abs(p.coefficient) * p.interval.length();
        return s;
    }
    Rational l2_norm_squared() const {
        Rational s = 0;
        for (const auto& p : pieces_) s += p.coefficient * p.coefficient * p.interval.length();
        return s;
    }
    Rational max_abs_coefficient() const {
        Rational m = 0;
        for (const auto& p : pieces_) m = std::max<Rational>(m, abs(p.coefficient));
        return m;
    }

    IntervalSet support() const {
        std::vector<Interval> v;
        for (const auto& p : pieces_) v.push_back(p.interval);
        return IntervalSet(std::move(v));
    }

    StepFunction scaled(const Rational& c) const {
        if (c == 0) return {};
        auto v = pieces_;
        for (auto& p : v) p.coefficient *= c;
        return StepFunction(std::move(v));
    }

    /// Pointwise sum on the common refinement of both breakpoint sets.
    friend StepFunction operator+(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const Rational& x, const Rational& y) { return x + y; });
    }
    friend StepFunction operator-(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const Rational& x, const Rational& y) { return x - y; });
    }

    /// {x : f(x) != g(x)} as an exact interval set.
    friend IntervalSet difference_locus(const StepFunction& f, const StepFunction& g) { return (f - g).support(); }

    /// Pointwise equality (refinements of each other compare equal).
    friend bool same_function(const StepFunction& f, const StepFunction& g) { return (f - g).is_zero(); }

private:
    template <class Op>
    static StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
        std::vector<Rational> cuts;
        cuts.reserve(2 * (f.size() + g.size()));
        for (const auto& p : f.pieces_) { cuts.push_back(p.interval.a()); cuts.push_back(p.interval.b()); }
        for (const auto& p : g.pieces_) { cuts.push_back(p.interval.a()); cuts.push_back(p.interval.b()); }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<StepPiece> out;
        std::size_t i = 0, j = 0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const Rational& lo = cuts[c];
            while (i < f.size() && f.pieces_[i].interval.b() <= lo) ++i;
            while (j < g.size() && g.pieces_[j].interval.b() <= lo) ++j;
            Rational fv = (i < f.size() && f.pieces_[i].interval.contains(lo)) ? f.pieces_[i].coefficient : Rational(0);
            Rational gv = (j < g.size() && g.pieces_[j].interval.contains(lo)) ? g.pieces_[j].coefficient : Rational(0);
            Rational v = op(fv, gv);
            if (v == 0) continue;
            out.push_back({Interval(lo, cuts[c + 1]), std::move(v)});
        }
        return StepFunction(merge_runs(std::move(out)));
    }

    static std::vector<StepPiece> merge_runs(std::vector<StepPiece> v) {
        std::vector<StepPiece> out;
        for (auto& p : v) {
            if (!out.empty() && out.back().interval.b() == p.interval.a() && out.back().coefficient == p.coefficient)
                out.back().interval = Interval(out.back().interval.a(), p.interval.b());
            else
                out.push_back(std::move(p));
        }
        return out;
    }

    void cache() {
        lo_.clear(); hi_.clear(); val_.clear();
        for (const auto& p : pieces_) {
            lo_.push_back(to_double(p.interval.a()));
            hi_.push_back(to_double(p.interval.b()));
            val_.push_back(to_double(p.coefficient));
        }
    }

    std::vector<StepPiece> pieces_;
    std::vector<double> lo_, hi_, val_;
};

/// Interval basis: [0,1) plus everything reachable by admissible equal splits.
///
/// Rational: every rational subinterval, any split count. Dyadic: dyadic
/// intervals, split counts restricted to powers of two.
class IntervalBasis {
public:
    enum class Kind { rational, dyadic };

    explicit IntervalBasis(Kind kind) : kind_(kind) {}
    static IntervalBasis rational() { return IntervalBasis(Kind::rational); }
    static IntervalBasis dyadic() { return IntervalBasis(Kind::dyadic); }

    Kind kind() const { return kind_; }

    bool contains(const Interval& iv) const { return kind_ == Kind::rational || iv.is_dyadic(); }
    bool admissible_split(std::uint64_t s) const {
        if (s < 1) return false;
        return kind_ == Kind::rational || (s & (s - 1)) == 0;
    }

    /// Smallest admissible split count s with |iv|/s <= delta.
    std::uint64_t split_count(const Interval& iv, const Rational& delta) const {
        if (delta <= 0) throw std::invalid_argument("refinement size must be positive");
        Rational ratio = iv.length() / delta;
        BigInt s = ceil_of(ratio);
        if (s < 1) s = 1;
        if (kind_ == Kind::dyadic) {
            BigInt p = 1;
            while (p < s) p <<= 1;
            s = p;
        }
        if (s > BigInt(std::uint64_t(1) << 40)) throw std::invalid_argument("refinement would need more than 2^40 pieces");
        return s.convert_to<std::uint64_t>();
    }

    std::vector<Interval> split(const Interval& iv, std::uint64_t s) const {
        if (!admissible_split(s)) throw std::invalid_argument("split count not admissible for this basis");
        std::vector<Interval> out;
        Rational d = iv.length() / Rational(BigInt(s));
        for (std::uint64_t j = 0; j < s; ++j)
            out.emplace_back(iv.a() + Rational(BigInt(j)) * d, iv.a() + Rational(BigInt(j + 1)) * d);
        return out;
    }

private:
    Kind kind_;
};

/// Same function, every piece a basis interval of length <= delta.
///
/// Pieces of a dyadic basis that are not dyadic intervals but have dyadic
/// endpoints are first decomposed into maximal dyadic intervals.
inline StepFunction refine_step(const StepFunction& f, const IntervalBasis& basis, const Rational& delta) {
    std::vector<StepPiece> out;
    for (const auto& p : f.pieces()) {
        std::vector<Interval> parts;
        if (basis.contains(p.interval)) {
            parts.push_back(p.interval);
        } else if (basis.kind() == IntervalBasis::Kind::dyadic) {
            parts = dyadic_decomposition(p.interval);
        } else {
            throw std::invalid_argument("piece not splittable under basis");
        }
        for (const auto& iv : parts)
            for (auto& sub : basis.split(iv, basis.split_count(iv, delta))) out.push_back({sub, p.coefficient});
    }
    return StepFunction(std::move(out));
}

}  // namespace hcorr
