#include "hcorr/corrector.hpp"

#include <algorithm>
#include <limits>

namespace hcorr {

namespace detail {

void validate(const StepFunction& f, const CorrectionConfig& c) {
    if (f.is_zero()) throw std::invalid_argument("correction needs a nonzero step function");
    if (!(c.eps > 0 && c.eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(c.eta > 0 && c.eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
    if (c.n_max < 1) throw std::invalid_argument("n_max must be positive");
    if (c.m_cap < 1) throw std::invalid_argument("m_cap must be positive");
    if (c.delta && *c.delta <= 0) throw std::invalid_argument("delta must be positive");
}

CorrectionResult assemble(const StepFunction& f, const OperatorFamily& family, const CorrectionConfig& config,
                          PieceSet set, std::optional<IntervalSet> u) {
    const std::size_t l = set.sources.size();
    const double f1 = to_double(f.l1_norm());
    const double l2 = static_cast<double>(l) * static_cast<double>(l);
    double xi = config.xi ? *config.xi : f1 / (2.0 * l2);
    if (!(xi < f1 / l2)) throw std::invalid_argument("xi must be below ||f||_1 / l^2 = " + std::to_string(f1 / l2));

    ScheduleOutcome sched = find_schedule(set.sources, family, xi, config.eta, config.n_max, config.m_cap);

    CorrectionResult r;
    r.family = family.name();
    r.config = config;
    r.config.xi = xi;
    r.in_set = u.has_value();
    r.target_set = std::move(u);
    r.f = f;
    r.refined = std::move(set.refined);
    r.delta = set.delta;
    r.pieces = std::move(sched.pieces);
    r.schedule = std::move(sched.schedule);
    std::vector<Interval> mod;
    bool zero_mean = true;
    for (const auto& p : r.pieces) {
        r.g = r.g + p.lambda;
        mod.insert(mod.end(), p.g.intervals().begin(), p.g.intervals().end());
        zero_mean = zero_mean && p.lambda.integral() == 0;
    }
    r.modified = IntervalSet(std::move(mod));
    r.f_l1 = f.l1_norm();
    r.g_l1 = r.g.l1_norm();
    r.checks.locus_exact = difference_locus(f, r.g) == r.modified;
    r.checks.norm_doubling = r.g_l1 <= 2 * r.f_l1;
    r.checks.zero_mean = zero_mean;
    r.checks.measure_bound = r.modified.measure() <= config.eps;
    r.checks.inside_set = r.target_set && r.modified.is_subset_of(*r.target_set);
    correction_diagnostics(r, family);
    return r;
}

}  // namespace detail

Rational default_delta(const StepFunction& f, const OperatorFamily& family, const Rational& eps) {
    if (f.is_zero()) throw std::invalid_argument("default_delta: zero function");
    Rational rho = family.comb(eps / 2, 1).measure();
    Rational amax = f.max_abs_coefficient();
    Rational l1 = f.l1_norm();
    return l1 * l1 / (amax * amax * (1 / rho - 1));
}

PieceSet make_pieces(const StepFunction& f, const OperatorFamily& family, const Rational& eps,
                     std::optional<Rational> delta, bool refine,
                     const std::optional<IntervalSet>& inside) {
    if (f.is_zero()) throw std::invalid_argument("make_pieces: zero function");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("make_pieces: eps must lie in (0,1)");
    PieceSet s;
    s.default_delta = refine && !delta;
    if (refine && !delta) delta = default_delta(f, family, eps);
    s.delta = delta;
    if (delta) {
        s.refined = refine_step(f, family.basis(), *delta);
    } else {
        // no length refinement, but pieces must still be basis intervals
        s.refined = refine_step(f, family.basis(), Rational(1));
    }
    Rational l1 = f.l1_norm();
    for (std::size_t k = 0; k < s.refined.size(); ++k)
        s.sources.emplace_back(k + 1, s.refined.pieces()[k], eps, l1, s.default_delta, inside);
    return s;
}

TailProfile tail_profile(const OperatorFamily& family, const StepFunction& lambda, std::int64_t n_max, double thr) {
    const auto base = family.sample(lambda).samples;
    const std::size_t size = base.size();
    TailProfile t;
    t.err.assign(static_cast<std::size_t>(n_max + 1), 0.0);
    std::vector<std::int64_t> last_bad(size, 0);
    family.sweep(lambda, n_max, [&](std::int64_t n, std::span<const double> s) {
        double acc = 0;
        for (std::size_t j = 0; j < size; ++j) {
            double d = std::abs(s[j] - base[j]);
            acc += d;
            if (d > thr) last_bad[j] = n;
        }
        t.err[static_cast<std::size_t>(n)] = acc / static_cast<double>(size);
    });
    t.suffix_max.assign(static_cast<std::size_t>(n_max + 2), 0.0);
    for (std::int64_t n = n_max; n >= 1; --n)
        t.suffix_max[static_cast<std::size_t>(n)] = std::max(t.suffix_max[static_cast<std::size_t>(n + 1)], t.err[static_cast<std::size_t>(n)]);
    std::vector<std::int64_t> hist(static_cast<std::size_t>(n_max + 2), 0);
    for (auto b : last_bad) ++hist[static_cast<std::size_t>(b)];
    t.bad_measure.assign(static_cast<std::size_t>(n_max + 2), 0.0);
    std::int64_t run = 0;
    for (std::int64_t n = n_max; n >= 1; --n) {
        run += hist[static_cast<std::size_t>(n)];
        t.bad_measure[static_cast<std::size_t>(n)] = static_cast<double>(run) / static_cast<double>(size);
    }
    return t;
}

double head_norm(const OperatorFamily& family, const StepFunction& lambda, std::int64_t n_hi) {
    double worst = 0;
    family.sweep(lambda, n_hi, [&](std::int64_t, std::span<const double> s) {
        double acc = 0;
        for (double v : s) acc += std::abs(v);
        worst = std::max(worst, acc / static_cast<double>(s.size()));
    });
    return worst;
}

ScheduleOutcome find_schedule(const std::vector<PieceSource>& sources, const OperatorFamily& family, double xi,
                              const Rational& eta, std::int64_t n_max, std::int64_t m_cap) {
    if (sources.empty()) throw std::invalid_argument("find_schedule: no pieces");
    if (!(xi > 0)) throw std::invalid_argument("find_schedule: xi must be positive");
    if (!(eta > 0 && eta < 1)) throw std::invalid_argument("find_schedule: eta must lie in (0,1)");
    if (n_max < 1) throw std::invalid_argument("find_schedule: n_max must be positive");
    const std::size_t l = sources.size();
    const double thr = to_double(eta) / (4.0 * static_cast<double>(l));
    ScheduleOutcome out;
    auto& sch = out.schedule;
    sch.l = l;
    sch.xi = xi;
    sch.eta = eta;
    sch.n_max = n_max;

    std::int64_t m_prev = 0, n_prev = 0;
    for (std::size_t j = 1; j <= l; ++j) {
        const auto& src = sources[j - 1];
        const double l_thr = n_prev > 0 ? xi / static_cast<double>(n_prev) : 0.0;
        double best_l = -std::numeric_limits<double>::infinity();
        bool any_candidate = false;
        std::optional<CorrectionPiece> chosen;
        double head = 0;
        std::int64_t m = m_prev + 1;
        for (; m <= m_cap; ++m) {
            Candidate c = src.at(family, m);
            if (c.status == CandidateStatus::unresolved) break;
            if (c.status == CandidateStatus::rejected) continue;
            any_candidate = true;
            if (n_prev > 0) {
                double bound = family.coefficient_bound(c.piece->lambda, n_prev, l_thr);
                if (bound >= l_thr) {
                    best_l = std::max(best_l, l_thr - bound);
                    continue;
                }
                head = head_norm(family, c.piece->lambda, n_prev);
                if (head >= l_thr) {
                    best_l = std::max(best_l, l_thr - head);
                    continue;
                }
            }
            chosen = std::move(c.piece);
            break;
        }
        if (!chosen) {
            std::string why = m > m_cap ? "m search reached the cap " + std::to_string(m_cap)
                                        : "m search reached the grid resolution at m = " + std::to_string(m);
            if (any_candidate && n_prev > 0)
                throw ScheduleFailure("head", j, best_l, m, n_prev, sch, why + "; best margin " + std::to_string(best_l));
            throw ScheduleFailure("sandwich", j, std::numeric_limits<double>::quiet_NaN(), m, n_prev, sch,
                                  why + "; no admissible comb for this piece");
        }
        if (n_prev > 0) sch.certificates.push_back({"head", j, 1, n_prev, head, l_thr});

        TailProfile tp = tail_profile(family, chosen->lambda, n_max, thr);
        std::int64_t found = 0;
        for (std::int64_t n = n_prev + 1; n <= n_max; ++n)
            if (tp.suffix_max[static_cast<std::size_t>(n)] < xi && tp.bad_measure[static_cast<std::size_t>(n)] < xi) {
                found = n;
                break;
            }
        if (found == 0) {
            // The whole admissible range failed; report the margins at the last index.
            double ll = xi - tp.err[static_cast<std::size_t>(n_max)];
            double lll = xi - tp.bad_measure[static_cast<std::size_t>(n_max)];
            sch.m.push_back(chosen->m);
            if (n_prev >= n_max)
                throw ScheduleFailure("tail", j, std::numeric_limits<double>::quiet_NaN(), chosen->m, n_max, sch,
                                      "no index left in (N_{j-1}, n_max]");
            if (ll <= 0)
                throw ScheduleFailure("tail", j, ll, chosen->m, n_max, sch,
                                      "||U_n λ − λ||_1 = " + std::to_string(tp.err[static_cast<std::size_t>(n_max)]) +
                                          " at n_max against ξ = " + std::to_string(xi));
            throw ScheduleFailure("spike", j, lll, chosen->m, n_max, sch,
                                  "bad-set measure " + std::to_string(tp.bad_measure[static_cast<std::size_t>(n_max)]) +
                                      " at n_max against ξ = " + std::to_string(xi));
        }
        sch.certificates.push_back({"tail", j, found, n_max, tp.suffix_max[static_cast<std::size_t>(found)], xi});
        sch.certificates.push_back({"spike", j, found, n_max, tp.bad_measure[static_cast<std::size_t>(found)], xi});
        sch.m.push_back(chosen->m);
        sch.n.push_back(found);
        m_prev = chosen->m;
        n_prev = found;
        out.pieces.push_back(std::move(*chosen));
    }
    return out;
}

void correction_diagnostics(CorrectionResult& r, const OperatorFamily& family) {
    const std::int64_t n_max = r.config.n_max;
    r.sn_l1.assign(static_cast<std::size_t>(n_max), 0.0);
    family.sweep(r.g, n_max, [&](std::int64_t n, std::span<const double> s) {
        double acc = 0;
        for (double v : s) acc += std::abs(v);
        r.sn_l1[static_cast<std::size_t>(n - 1)] = acc / static_cast<double>(s.size());
    });
    r.sup_sn_l1 = *std::max_element(r.sn_l1.begin(), r.sn_l1.end());

    MaximalScan scan = family.maximal(r.g, n_max);
    std::vector<double> sorted = scan.values.samples;
    std::sort(sorted.begin(), sorted.end());
    const double eta = to_double(r.config.eta), f1 = to_double(r.f_l1);
    const int count = 32;
    r.t_grid.clear();
    r.t_values.clear();
    for (int i = 1; i <= count; ++i) {
        double t = eta * std::pow(1.0 / eta, static_cast<double>(i) / (count + 1));
        double above = static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
        r.t_grid.push_back(t);
        r.t_values.push_back(t * above / static_cast<double>(sorted.size()) / f1);
    }
    r.t_constant = *std::max_element(r.t_values.begin(), r.t_values.end());
}

CorrectionResult build_correction(const StepFunction& f, const OperatorFamily& family, const CorrectionConfig& config) {
    detail::validate(f, config);
    PieceSet set = make_pieces(f, family, config.eps, config.delta, true);
    return detail::assemble(f, family, config, std::move(set), std::nullopt);
}

CorrectionResult build_correction_in_set(const StepFunction& f, const OperatorFamily& family, const IntervalSet& u,
                                         const CorrectionConfig& config) {
    detail::validate(f, config);
    if (u.empty()) throw std::invalid_argument("target set is empty");
    PieceSet set = make_pieces(f, family, config.eps, config.delta, config.delta.has_value(), u);
    for (const auto& s : set.sources)
        if (u.intersect(IntervalSet({s.interval()})).empty())
            throw std::invalid_argument("target set misses the piece [" + to_string(s.interval().a()) + "," +
                                        to_string(s.interval().b()) + ")");
    return detail::assemble(f, family, config, std::move(set), u);
}

std::vector<Certificate> replay_certificates(const CorrectionResult& r, const OperatorFamily& family) {
    const auto& s = r.schedule;
    const double thr = to_double(s.eta) / (4.0 * static_cast<double>(s.l));
    std::vector<Certificate> out;
    for (std::size_t j = 1; j <= r.pieces.size(); ++j) {
        const auto& lambda = r.pieces[j - 1].lambda;
        const std::int64_t n_prev = j > 1 ? s.n[j - 2] : 0;
        if (n_prev > 0)
            out.push_back({"head", j, 1, n_prev, head_norm(family, lambda, n_prev), s.xi / static_cast<double>(n_prev)});
        TailProfile tp = tail_profile(family, lambda, s.n_max, thr);
        const auto nj = static_cast<std::size_t>(s.n[j - 1]);
        out.push_back({"tail", j, s.n[j - 1], s.n_max, tp.suffix_max[nj], s.xi});
        out.push_back({"spike", j, s.n[j - 1], s.n_max, tp.bad_measure[nj], s.xi});
    }
    return out;
}

StepFunction dyadic_average(const StepFunction& f, unsigned level) {
    if (level > 20) throw std::invalid_argument("dyadic_average: level above 20");
    const std::int64_t cells = std::int64_t(1) << level;
    std::vector<Rational> acc(static_cast<std::size_t>(cells), 0);
    for (const auto& p : f.pieces()) {
        std::int64_t first = floor_of(p.interval.a() * cells).convert_to<std::int64_t>();
        std::int64_t last = ceil_of(p.interval.b() * cells).convert_to<std::int64_t>();
        for (std::int64_t c = first; c < last; ++c) {
            Rational lo = std::max<Rational>(p.interval.a(), Rational(c, cells));
            Rational hi = std::min<Rational>(p.interval.b(), Rational(c + 1, cells));
            if (lo < hi) acc[static_cast<std::size_t>(c)] += p.coefficient * (hi - lo) * cells;
        }
    }
    std::vector<StepPiece> v;
    for (std::int64_t c = 0; c < cells; ++c)
        if (acc[static_cast<std::size_t>(c)] != 0) v.push_back({dyadic_interval(level, static_cast<std::uint64_t>(c + 1)), acc[static_cast<std::size_t>(c)]});
    return StepFunction(std::move(v));
}

std::vector<StepFunction> telescoping_targets(const StepFunction& f, std::size_t stages) {
    if (stages < 1) throw std::invalid_argument("telescoping_targets: need at least one stage");
    unsigned level = 0;
    for (const auto& p : f.pieces()) {
        auto la = dyadic_level(p.interval.a()), lb = dyadic_level(p.interval.b());
        if (!la || !lb) throw std::invalid_argument("telescoping_targets: target needs dyadic piece endpoints");
        level = std::max({level, *la, *lb});
    }
    std::vector<StepFunction> out;
    StepFunction prev;
    for (std::size_t k = 1; k <= stages; ++k) {
        long lk = static_cast<long>(level) - 2 * static_cast<long>(stages - k);
        StepFunction cur = dyadic_average(f, static_cast<unsigned>(std::max(0L, lk)));
        out.push_back(cur - prev);
        prev = std::move(cur);
    }
    return out;
}

StagedCorrection finite_stage_driver(const std::vector<StepFunction>& targets, const OperatorFamily& family,
                                     const CorrectionConfig& config) {
    if (targets.empty()) throw std::invalid_argument("finite_stage_driver: no stages");
    if (!(config.eps > 0 && config.eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
    StagedCorrection s;
    s.targets = targets;
    std::vector<Interval> mod;
    for (std::size_t k = 1; k <= targets.size(); ++k) {
        CorrectionConfig c = config;
        c.eps = config.eps * pow2_inverse(static_cast<unsigned>(k));
        c.eta = pow2_inverse(static_cast<unsigned>(2 * k));
        c.xi.reset();
        s.eps_k.push_back(c.eps);
        s.eta_k.push_back(c.eta);
        if (targets[k - 1].is_zero()) {
            s.stages.emplace_back(std::nullopt);
            continue;
        }
        try {
            CorrectionResult r = build_correction(targets[k - 1], family, c);
            s.g = s.g + r.g;
            mod.insert(mod.end(), r.modified.intervals().begin(), r.modified.intervals().end());
            s.stages.emplace_back(std::move(r));
        } catch (const ScheduleFailure& e) {
            s.failed_stage = k;
            s.failure = e.what();
            s.failed_condition = e.condition();
            s.failed_margin = e.margin();
            break;
        }
    }
    s.modified = IntervalSet(std::move(mod));
    s.complete = !s.failed_stage;
    const auto base = family.sample(s.g).samples;
    s.residual_l1.assign(static_cast<std::size_t>(config.n_max), 0.0);
    family.sweep(s.g, config.n_max, [&](std::int64_t n, std::span<const double> v) {
        double acc = 0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += std::abs(v[j] - base[j]);
        s.residual_l1[static_cast<std::size_t>(n - 1)] = acc / static_cast<double>(v.size());
    });
    return s;
}

}  // namespace hcorr
