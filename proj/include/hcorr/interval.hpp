#pragma once

#include "hcorr/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcorr {

/// Half-open interval [a,b) with 0 <= a < b <= 1 and exact rational endpoints.
class Interval {
public:
    Interval(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
        if (!(a_ >= 0 && a_ < b_ && b_ <= 1))
            throw std::invalid_argument("interval [" + to_string(a_) + "," + to_string(b_) + ") is not inside [0,1)");
    }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    Rational length() const { return b_ - a_; }
    bool contains(const Rational& x) const { return a_ <= x && x < b_; }
    bool contains(double x) const { return to_double(a_) <= x && x < to_double(b_); }

    /// True when the interval is [(k-1)/2^n, k/2^n) for some n, k.
    bool is_dyadic() const {
        auto level = dyadic_level(length());
        if (!level || numerator_of(length()) != 1) return false;
        Rational scaled = a_ / length();
        return denominator_of(scaled) == 1;
    }
    /// Generation n of a dyadic interval; throws if not dyadic.
    unsigned dyadic_generation() const {
        if (!is_dyadic()) throw std::invalid_argument("interval is not dyadic");
        return *dyadic_level(length());
    }

    friend bool operator==(const Interval& x, const Interval& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

private:
    Rational a_;
    Rational b_;
};

/// Dyadic interval [(k-1)/2^n, k/2^n), 1 <= k <= 2^n.
inline Interval dyadic_interval(unsigned n, std::uint64_t k) {
    BigInt den = BigInt(1) << n;
    if (k < 1 || BigInt(k) > den) throw std::invalid_argument("dyadic index out of range");
    return Interval(Rational(BigInt(k - 1), den), Rational(BigInt(k), den));
}

/// Finite union of half-open intervals in canonical form: sorted, disjoint, non-adjacent.
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::vector<Interval> parts) : parts_(normalize(std::move(parts))) {}
    IntervalSet(std::initializer_list<Interval> parts) : IntervalSet(std::vector<Interval>(parts)) {}

    static IntervalSet full() { return IntervalSet({Interval(0, 1)}); }

    const std::vector<Interval>& intervals() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }

    Rational measure() const {
        Rational m = 0;
        for (const auto& p : parts_) m += p.length();
        return m;
    }

    bool contains(const Rational& x) const {
        auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                                   [](const Rational& v, const Interval& p) { return v < p.a(); });
        if (it == parts_.begin()) return false;
        return std::prev(it)->contains(x);
    }

    bool is_subset_of(const IntervalSet& other) const { return intersect(other) == *this; }

    IntervalSet intersect(const IntervalSet& other) const {
        std::vector<Interval> out;
        std::size_t i = 0, j = 0;
        const auto& x = parts_;
        const auto& y = other.parts_;
        while (i < x.size() && j < y.size()) {
            const Rational& lo = x[i].a() > y[j].a() ? x[i].a() : y[j].a();
            const Rational& hi = x[i].b() < y[j].b() ? x[i].b() : y[j].b();
            if (lo < hi) out.emplace_back(lo, hi);
            if (x[i].b() < y[j].b()) ++i; else ++j;
        }
        IntervalSet s;
        s.parts_ = normalize(std::move(out));
        return s;
    }

    IntervalSet unite(const IntervalSet& other) const {
        std::vector<Interval> all = parts_;
        all.insert(all.end(), other.parts_.begin(), other.parts_.end());
        return IntervalSet(std::move(all));
    }

    /// [0,1) minus this set.
    IntervalSet complement() const {
        std::vector<Interval> out;
        Rational cur = 0;
        for (const auto& p : parts_) {
            if (cur < p.a()) out.emplace_back(cur, p.a());
            cur = p.b();
        }
        if (cur < 1) out.emplace_back(cur, 1);
        IntervalSet s;
        s.parts_ = std::move(out);
        return s;
    }

    IntervalSet minus(const IntervalSet& other) const { return intersect(other.complement()); }

    friend bool operator==(const IntervalSet& x, const IntervalSet& y) { return x.parts_ == y.parts_; }

private:
    static std::vector<Interval> normalize(std::vector<Interval> v) {
        std::sort(v.begin(), v.end(), [](const Interval& p, const Interval& q) { return p.a() < q.a(); });
        std::vector<Interval> out;
        out.reserve(v.size());
        for (auto& p : v) {
            if (!out.empty() && p.a() <= out.back().b()) {
                if (p.b() > out.back().b()) out.back() = Interval(out.back().a(), p.b());
            } else {
                out.push_back(std::move(p));
            }
        }
        return out;
    }

    std::vector<Interval> parts_;
};

/// Preimage of E under x -> n·x mod 1, restricted to the window [lo, hi).
inline IntervalSet dilate_within(const IntervalSet& e, const BigInt& n, const Rational& lo, const Rational& hi) {
    if (n < 1) throw std::invalid_argument("dilation factor must be positive");
    std::vector<Interval> out;
    BigInt k_lo = floor_of(lo * Rational(n));
    BigInt k_hi = ceil_of(hi * Rational(n));
    for (BigInt k = k_lo; k < k_hi; ++k) {
        for (const auto& p : e.intervals()) {
            Rational a = (p.a() + Rational(k)) / Rational(n);
            Rational b = (p.b() + Rational(k)) / Rational(n);
            if (a < lo) a = lo;
            if (b > hi) b = hi;
            if (a < b) out.emplace_back(a, b);
        }
    }
    return IntervalSet(std::move(out));
}

/// E(n) = {x in [0,1): n·x in E}, with E continued 1-periodically.
inline IntervalSet dilate(const IntervalSet& e, const BigInt& n) { return dilate_within(e, n, 0, 1); }

/// Union over k < l of [k/l, (k+eps)/l).
inline IntervalSet uniform_comb(const Rational& eps, std::int64_t l) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("uniform_comb: eps must lie in (0,1)");
    if (l < 1) throw std::invalid_argument("uniform_comb: l must be positive");
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(l));
    for (std::int64_t k = 0; k < l; ++k) out.emplace_back(Rational(k, l), (Rational(k) + eps) / Rational(l));
    return IntervalSet(std::move(out));
}

/// Centered comb inside delta: l teeth of length eps·|delta|/l, one at the center of each cell.
inline IntervalSet trig_comb(const Interval& delta, const Rational& eps, std::int64_t l) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("trig_comb: eps must lie in (0,1)");
    if (l < 1) throw std::invalid_argument("trig_comb: l must be positive");
    Rational d = delta.length() / Rational(l);
    Rational half = d * eps / 2;
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(l));
    for (std::int64_t k = 1; k <= l; ++k) {
        Rational t = delta.a() + Rational(2 * k - 1) * d / 2;
        out.emplace_back(t - half, t + half);
    }
    return IntervalSet(std::move(out));
}

/// delta ∩ Δ_t^{(r)}(2^l) for a dyadic delta; 1 <= t <= 2^r.
inline IntervalSet walsh_comb(const Interval& delta, unsigned r, std::uint64_t t, unsigned l) {
    if (!delta.is_dyadic()) throw std::invalid_argument("walsh_comb: delta must be a dyadic interval");
    if (r < 1) throw std::invalid_argument("walsh_comb: r must be positive");
    IntervalSet base({dyadic_interval(r, t)});
    return dilate_within(base, BigInt(1) << l, delta.a(), delta.b());
}

/// Splits an interval with dyadic endpoints into maximal dyadic intervals.
inline std::vector<Interval> dyadic_decomposition(const Interval& iv) {
    if (!dyadic_level(iv.a()) || !dyadic_level(iv.b()))
        throw std::invalid_argument("interval endpoints are not dyadic");
    std::vector<Interval> out;
    Rational cur = iv.a();
    while (cur < iv.b()) {
        // largest 2^-n such that cur is a multiple of it and cur + 2^-n <= b
        unsigned n = *dyadic_level(cur);
        if (cur == 0) n = 0;
        Rational len = pow2_inverse(n);
        while (cur + len > iv.b()) len /= 2;
        out.emplace_back(cur, cur + len);
        cur += len;
    }
    return out;
}

}  // namespace hcorr
