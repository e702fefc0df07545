#pragma once

#include "hcorr/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hcorr {

/// Uniform grid x_j = offset + j/M, j = 0..M-1, with 0 <= offset < 1/M.
class Grid {
public:
    Grid(std::int64_t size, Rational offset) : size_(size), offset_(std::move(offset)) {
        if (size_ < 1) throw std::invalid_argument("grid size must be positive");
        if (offset_ < 0 || offset_ >= Rational(1, size_)) throw std::invalid_argument("grid offset must lie in [0,1/M)");
    }
    /// Midpoint grid, offset 1/(2M); avoids sampling on jump points of dyadic-ish step functions.
    static Grid midpoint(std::int64_t size) { return Grid(size, Rational(1, 2 * size)); }
    /// Left endpoints of the generation-p dyadic intervals.
    static Grid dyadic(unsigned level) {
        if (level > 30) throw std::invalid_argument("dyadic grid level above 30");
        return Grid(std::int64_t(1) << level, 0);
    }

    std::int64_t size() const { return size_; }
    const Rational& offset() const { return offset_; }
    Rational point(std::int64_t j) const { return offset_ + Rational(j, size_); }
    double x(std::int64_t j) const { return to_double(point(j)); }

    /// Index range [first, last) of grid points inside [a,b).
    std::pair<std::int64_t, std::int64_t> index_range(const Rational& a, const Rational& b) const {
        auto idx = [&](const Rational& t) {
            BigInt c = ceil_of((t - offset_) * Rational(size_));
            if (c < 0) return std::int64_t(0);
            if (c > size_) return size_;
            return c.convert_to<std::int64_t>();
        };
        return {idx(a), idx(b)};
    }

    friend bool operator==(const Grid& g, const Grid& h) { return g.size_ == h.size_ && g.offset_ == h.offset_; }

private:
    std::int64_t size_;
    Rational offset_;
};

struct GridFunction {
    Grid grid;
    std::vector<double> samples;

    double l1_norm() const {
        double s = 0;
        for (double v : samples) s += std::abs(v);
        return s / static_cast<double>(grid.size());
    }
    double max_abs() const {
        double m = 0;
        for (double v : samples) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Truncated maximal function sampled on a grid.
struct MaximalScan {
    std::string family;
    std::int64_t n_max = 0;
    GridFunction values;
    std::vector<std::int64_t> argmax;
};

/// Samples f exactly: membership of each grid point is decided in rational arithmetic.
inline GridFunction sample(const StepFunction& f, const Grid& grid) {
    GridFunction out{grid, std::vector<double>(static_cast<std::size_t>(grid.size()), 0.0)};
    for (const auto& p : f.pieces()) {
        auto [first, last] = grid.index_range(p.interval.a(), p.interval.b());
        double v = to_double(p.coefficient);
        for (std::int64_t j = first; j < last; ++j) out.samples[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

namespace detail {

inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : std::min(n, 16u);
}

/// Runs body(begin, end) over contiguous chunks of [0, count). Each index is
/// owned by exactly one chunk, so results written per index are deterministic.
inline void parallel_chunks(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body) {
    unsigned workers = worker_count();
    if (workers <= 1 || count < 4096) {
        body(0, count);
        return;
    }
    std::vector<std::thread> threads;
    std::int64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::int64_t b = w * chunk, e = std::min(count, b + chunk);
        if (b >= e) break;
        threads.emplace_back(body, b, e);
    }
    for (auto& t : threads) t.join();
}

}  // namespace detail

}  // namespace hcorr
