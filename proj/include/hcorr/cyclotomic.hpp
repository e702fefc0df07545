#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hcorr {

/// Integer polynomial, coefficients in increasing degree.
using IntPoly = std::vector<std::int64_t>;

namespace detail {

inline void trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Remainder of p modulo a monic divisor.
inline IntPoly monic_remainder(IntPoly p, const IntPoly& d) {
    trim(p);
    const std::size_t dd = d.size() - 1;
    while (p.size() > dd) {
        std::int64_t lead = p.back();
        std::size_t shift = p.size() - 1 - dd;
        for (std::size_t i = 0; i <= dd; ++i) {
            __int128 v = static_cast<__int128>(p[shift + i]) - static_cast<__int128>(lead) * d[i];
            if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("cyclotomic remainder overflow");
            p[shift + i] = static_cast<std::int64_t>(v);
        }
        trim(p);
    }
    return p;
}

/// Exact quotient of p by a monic divisor (remainder must vanish).
inline IntPoly monic_quotient(IntPoly p, const IntPoly& d) {
    trim(p);
    const std::size_t dd = d.size() - 1;
    IntPoly q(p.size() > dd ? p.size() - dd : 1, 0);
    while (p.size() > dd) {
        std::int64_t lead = p.back();
        std::size_t shift = p.size() - 1 - dd;
        q[shift] = lead;
        for (std::size_t i = 0; i <= dd; ++i) p[shift + i] -= lead * d[i];
        trim(p);
    }
    if (!p.empty()) throw std::logic_error("inexact cyclotomic division");
    return q;
}

}  // namespace detail

/// Φ_n, the n-th cyclotomic polynomial.
inline const IntPoly& cyclotomic(std::int64_t n) {
    static std::map<std::int64_t, IntPoly> memo;
    static std::recursive_mutex guard;
    std::lock_guard lock(guard);
    if (n < 1) throw std::invalid_argument("cyclotomic index must be positive");
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    IntPoly p(static_cast<std::size_t>(n + 1), 0);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (std::int64_t d = 1; d < n; ++d)
        if (n % d == 0) p = detail::monic_quotient(std::move(p), cyclotomic(d));
    return memo.emplace(n, std::move(p)).first->second;
}

/// True when Σ_r counts[r]·e^{2πir/Q} == 0 exactly, Q = counts.size().
///
/// The sum is P(ζ) for a primitive Q-th root ζ; it vanishes iff Φ_Q divides P.
inline bool root_sum_is_zero(const std::vector<std::int64_t>& counts) {
    if (counts.empty()) return true;
    IntPoly p(counts.begin(), counts.end());
    detail::trim(p);
    if (p.empty()) return true;
    return detail::monic_remainder(std::move(p), cyclotomic(static_cast<std::int64_t>(counts.size()))).empty();
}

}  // namespace hcorr
