#pragma once

#include "hcorr/cyclotomic.hpp"
#include "hcorr/operator_family.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcorr {

/// Ordered key/value description of the set a scan was run on.
using Descriptor = std::vector<std::pair<std::string, std::string>>;

/// λ·|{S* > λ}|/|G| over a λ grid, plus the constants it measures.
struct WeakTypeReport {
    std::string family;
    Descriptor set;
    std::int64_t n_max = 0;
    std::int64_t grid_size = 0;
    Rational g_measure = 0;
    double s_star_max = 0;
    std::vector<double> lambdas;
    std::vector<double> superlevel;  // |{S* > λ}|
    std::vector<double> values;      // λ·superlevel/|G|
    double c_emp = 0;
    std::optional<double> alpha_emp;  // |G|/ε when G comes from a comb source with nominal ε
    double beta_emp = 0;
};

/// 64 log-spaced values in [|G|/4, 4·N_max·|G|], upper end clipped to S*_max.
inline std::vector<double> default_lambda_grid(double g_measure, std::int64_t n_max, double s_star_max,
                                               std::size_t count = 64) {
    if (!(g_measure > 0)) throw std::invalid_argument("lambda grid needs a set of positive measure");
    if (count < 2) throw std::invalid_argument("lambda grid needs at least two points");
    double lo = g_measure / 4, hi = 4.0 * static_cast<double>(n_max) * g_measure;
    if (s_star_max > 0) hi = std::min(hi, s_star_max);
    if (hi <= lo) lo = hi / 4;
    std::vector<double> out(count);
    double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

inline WeakTypeReport distribution_scan(const MaximalScan& scan, const Rational& g_measure,
                                        const std::vector<double>& lambdas) {
    if (lambdas.empty()) throw std::invalid_argument("distribution_scan: empty lambda grid");
    if (g_measure <= 0) throw std::invalid_argument("distribution_scan: set of zero measure");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0)) throw std::invalid_argument("distribution_scan: lambda values must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw std::invalid_argument("distribution_scan: lambda grid not ascending");
    }
    const auto& s = scan.values.samples;
    if (s.empty()) throw std::invalid_argument("distribution_scan: empty scan");
    std::vector<double> sorted(s);
    std::sort(sorted.begin(), sorted.end());

    WeakTypeReport r;
    r.family = scan.family;
    r.n_max = scan.n_max;
    r.grid_size = scan.values.grid.size();
    r.g_measure = g_measure;
    r.s_star_max = sorted.back();
    r.lambdas = lambdas;
    const double g = to_double(g_measure);
    const double m = static_cast<double>(sorted.size());
    for (double lam : lambdas) {
        auto above = static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lam));
        r.superlevel.push_back(above / m);
        r.values.push_back(lam * (above / m) / g);
    }
    r.c_emp = *std::max_element(r.values.begin(), r.values.end());
    r.beta_emp = r.c_emp;
    return r;
}

/// Comb parameters for the stability study. Trig uses eps, Walsh uses (r, t).
struct CombSpec {
    FamilyKind family = FamilyKind::trig;
    Rational eps = Rational(1, 8);
    unsigned r = 3;
    std::uint64_t t = 1;

    IntervalSet make(std::int64_t l) const {
        if (family == FamilyKind::trig) return trig_comb(Interval(0, 1), eps, l);
        return walsh_comb(Interval(0, 1), r, t, static_cast<unsigned>(l));
    }
    /// Measure the comb is meant to have.
    Rational nominal_measure() const { return family == FamilyKind::trig ? eps : pow2_inverse(r); }
    Descriptor describe(std::int64_t l) const {
        if (family == FamilyKind::trig) return {{"comb", "trig"}, {"eps", to_string(eps)}, {"l", std::to_string(l)}};
        return {{"comb", "walsh"}, {"r", std::to_string(r)}, {"t", std::to_string(t)}, {"l", std::to_string(l)}};
    }
};

/// Scan of the comb indicator for one l, with the default λ grid.
inline WeakTypeReport comb_report(const OperatorFamily& family, const CombSpec& spec, std::int64_t l, std::int64_t n_max) {
    IntervalSet g = spec.make(l);
    if (g.empty()) throw std::invalid_argument("comb is empty");
    MaximalScan scan = family.maximal(StepFunction::indicator(g), n_max);
    double smax = *std::max_element(scan.values.samples.begin(), scan.values.samples.end());
    WeakTypeReport r = distribution_scan(scan, g.measure(), default_lambda_grid(to_double(g.measure()), n_max, smax));
    r.set = spec.describe(l);
    r.alpha_emp = to_double(g.measure() / spec.nominal_measure());
    return r;
}

struct StabilityStudy {
    std::vector<std::int64_t> l_list;
    std::vector<WeakTypeReport> reports;
    double c_min = 0, c_max = 0;
    double ratio = 0;            // max_l c_emp / min_l c_emp
    bool monotone_growth = false;  // c_emp strictly increasing along l_list
};

inline StabilityStudy summarize(std::vector<std::int64_t> l_list, std::vector<WeakTypeReport> reports) {
    StabilityStudy s{std::move(l_list), std::move(reports)};
    s.c_min = std::numeric_limits<double>::infinity();
    for (const auto& r : s.reports) {
        s.c_min = std::min(s.c_min, r.c_emp);
        s.c_max = std::max(s.c_max, r.c_emp);
    }
    s.ratio = s.c_min > 0 ? s.c_max / s.c_min : std::numeric_limits<double>::infinity();
    s.monotone_growth = s.reports.size() >= 2;
    for (std::size_t i = 1; i < s.reports.size(); ++i)
        if (!(s.reports[i].c_emp > s.reports[i - 1].c_emp)) s.monotone_growth = false;
    return s;
}

/// One report per l; the l values run as independent tasks and are collected in input order.
inline StabilityStudy stability_study(const OperatorFamily& family, const CombSpec& spec,
                                      const std::vector<std::int64_t>& l_list, std::int64_t n_max, bool parallel = true) {
    if (l_list.empty()) throw std::invalid_argument("stability_study: empty l list");
    for (std::size_t i = 1; i < l_list.size(); ++i)
        if (l_list[i] <= l_list[i - 1]) throw std::invalid_argument("stability_study: l list not ascending");
    if (spec.family != family.kind()) throw std::invalid_argument("stability_study: comb family differs from operator family");
    std::vector<WeakTypeReport> reports;
    if (parallel && detail::worker_count() > 1) {
        std::vector<std::future<WeakTypeReport>> jobs;
        for (auto l : l_list)
            jobs.push_back(std::async(std::launch::async, [&, l] { return comb_report(family, spec, l, n_max); }));
        for (auto& j : jobs) reports.push_back(j.get());
    } else {
        for (auto l : l_list) reports.push_back(comb_report(family, spec, l, n_max));
    }
    return summarize(l_list, std::move(reports));
}

/// |∫_G h/|G| − ∫_0^1 h| for a step test h, exact.
inline Rational weak_convergence_gap(const IntervalSet& g, const StepFunction& test) {
    Rational mg = g.measure();
    if (mg == 0) throw std::invalid_argument("weak_convergence_gap: set of zero measure");
    Rational on_g = 0;
    for (const auto& p : test.pieces()) on_g += p.coefficient * g.intersect(IntervalSet({p.interval})).measure();
    return abs(on_g / mg - test.integral());
}

struct FrequencyGap {
    double value = 0;
    bool exactly_zero = false;  // decided in exact arithmetic when the endpoint denominators allow it
};

/// The same gap for the test e^{2πikx}. ∫_G e^{2πikx} = Σ (e^{2πikb} − e^{2πika})/(2πik), and the
/// root-of-unity sum is tested for exact vanishing through the cyclotomic polynomial of order Q.
inline FrequencyGap weak_convergence_gap(const IntervalSet& g, std::int64_t k) {
    Rational mg = g.measure();
    if (mg == 0) throw std::invalid_argument("weak_convergence_gap: set of zero measure");
    if (k == 0) return {0.0, true};
    BigInt q = 1;
    for (const auto& iv : g.intervals())
        q = boost::multiprecision::lcm(q, boost::multiprecision::lcm(denominator_of(iv.a()), denominator_of(iv.b())));
    auto phase_index = [&](const Rational& x) {
        Rational t = frac_of(x * k) * Rational(q);
        return numerator_of(t).convert_to<std::int64_t>();  // integer by choice of q
    };
    FrequencyGap out;
    if (q <= BigInt(1) << 16) {
        std::vector<std::int64_t> counts(q.convert_to<std::size_t>(), 0);
        for (const auto& iv : g.intervals()) {
            counts[static_cast<std::size_t>(phase_index(iv.b()))] += 1;
            counts[static_cast<std::size_t>(phase_index(iv.a()))] -= 1;
        }
        if (root_sum_is_zero(counts)) return {0.0, true};
    }
    Complex v = 0;
    for (const auto& iv : g.intervals()) {
        double pb = 2 * std::numbers::pi * to_double(frac_of(iv.b() * k));
        double pa = 2 * std::numbers::pi * to_double(frac_of(iv.a() * k));
        v += Complex(std::cos(pb), std::sin(pb)) - Complex(std::cos(pa), std::sin(pa));
    }
    out.value = std::abs(v) / (2 * std::numbers::pi * std::abs(static_cast<double>(k))) / to_double(mg);
    return out;
}

/// Scan of S*(1_Δ) for a basis interval Δ, set against the comb scans it is meant to match.
struct BasisTransfer {
    WeakTypeReport interval_report;
    std::vector<WeakTypeReport> comb_reports;
    double comb_c_max = 0;
};

inline BasisTransfer basis_transfer_check(const OperatorFamily& family, const std::vector<IntervalSet>& g_list,
                                          const Interval& delta, std::int64_t n_max,
                                          std::optional<std::vector<double>> lambdas = std::nullopt) {
    if (!family.basis().contains(delta)) throw std::invalid_argument("basis_transfer_check: interval not in the family basis");
    auto run = [&](const IntervalSet& s) {
        MaximalScan scan = family.maximal(StepFunction::indicator(s), n_max);
        double smax = *std::max_element(scan.values.samples.begin(), scan.values.samples.end());
        return distribution_scan(scan, s.measure(),
                                 lambdas ? *lambdas : default_lambda_grid(to_double(s.measure()), n_max, smax));
    };
    BasisTransfer out;
    out.interval_report = run(IntervalSet({delta}));
    out.interval_report.set = {{"interval", "[" + to_string(delta.a()) + "," + to_string(delta.b()) + ")"}};
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        out.comb_reports.push_back(run(g_list[i]));
        out.comb_reports.back().set = {{"set", "G" + std::to_string(i)}};
        out.comb_c_max = std::max(out.comb_c_max, out.comb_reports.back().c_emp);
    }
    return out;
}

}  // namespace hcorr
