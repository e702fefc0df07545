#pragma once

#include "hcorr/operator_family.hpp"
#include "hcorr/weak_type.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcorr {

struct CorrectionConfig {
    Rational eps = Rational(1, 8);
    Rational eta = Rational(1, 16);
    std::optional<double> xi;        // default ||f||_1 / (2 l^2)
    std::optional<Rational> delta;   // default from the L2 bound on the pieces
    std::int64_t n_max = 1024;
    std::int64_t m_cap = 4096;
};

/// λ = a·(1_Δ − |Δ|·1_G/|G|) for the k-th piece, drawn at comb index m.
struct CorrectionPiece {
    std::size_t k = 0;
    Rational a;
    Interval delta{0, 1};
    std::int64_t m = 0;
    IntervalSet g;
    StepFunction lambda;
    Rational density;            // |G|/|Δ|
    Rational lambda_l2_squared;  // ||λ||_2^2, exact
};

inline StepFunction correction_lambda(const Rational& a, const Interval& delta, const IntervalSet& g) {
    Rational ratio = delta.length() / g.measure();
    std::vector<StepPiece> v;
    IntervalSet rest = IntervalSet({delta}).minus(g);
    for (const auto& iv : rest.intervals()) v.push_back({iv, a});
    for (const auto& iv : g.intervals()) v.push_back({iv, a * (1 - ratio)});
    return StepFunction(std::move(v));
}

enum class CandidateStatus { ok, rejected, unresolved };

struct Candidate {
    CandidateStatus status = CandidateStatus::rejected;
    std::optional<CorrectionPiece> piece;
};

/// Candidates G_m^{(k)} for one piece a·1_Δ, indexed by m.
///
/// Without a target set the comb is G_m(ε/2) ∩ Δ and must satisfy
/// (αε/4)|Δ| <= |G| <= ε|Δ|. With a target set u the comb comes from inside u
/// and only 0 < |G| <= ε|Δ| is required.
class PieceSource {
public:
    PieceSource(std::size_t k, StepPiece piece, Rational eps, Rational f_l1, bool enforce_l2,
                std::optional<IntervalSet> inside = std::nullopt)
        : k_(k), piece_(std::move(piece)), eps_(std::move(eps)), f_l1_(std::move(f_l1)),
          enforce_l2_(enforce_l2), inside_(std::move(inside)) {}

    const Interval& interval() const { return piece_.interval; }
    const Rational& coefficient() const { return piece_.coefficient; }

    Candidate at(const OperatorFamily& family, std::int64_t m) const {
        Candidate c;
        std::optional<IntervalSet> comb;
        if (inside_) comb = family.comb_inside(*inside_, m, eps_ / 2);
        else comb = family.comb(eps_ / 2, m);
        if (!comb) return c;
        IntervalSet g = comb->intersect(IntervalSet({piece_.interval}));
        if (g.empty()) return c;
        Rational density = g.measure() / piece_.interval.length();
        if (density >= 1 || density > eps_) return c;
        if (!inside_ && density < family.alpha() * eps_ / 4) return c;
        CorrectionPiece p{k_, piece_.coefficient, piece_.interval, m, g, correction_lambda(piece_.coefficient, piece_.interval, g),
                          density, 0};
        if (!family.resolves(p.lambda)) {
            c.status = CandidateStatus::unresolved;
            return c;
        }
        p.lambda_l2_squared = p.lambda.l2_norm_squared();
        if (enforce_l2_ && p.lambda_l2_squared > f_l1_ * f_l1_) return c;
        c.status = CandidateStatus::ok;
        c.piece = std::move(p);
        return c;
    }

private:
    std::size_t k_;
    StepPiece piece_;
    Rational eps_;
    Rational f_l1_;
    bool enforce_l2_;
    std::optional<IntervalSet> inside_;
};

/// Largest piece length keeping ||λ||_2 <= ||f||_1 at the nominal comb density ρ:
/// ||λ||_2^2 = a^2 |Δ| (1/ρ − 1).
Rational default_delta(const StepFunction& f, const OperatorFamily& family, const Rational& eps);

struct PieceSet {
    StepFunction refined;
    std::optional<Rational> delta;  // nullopt: no refinement
    bool default_delta = false;
    std::vector<PieceSource> sources;
};

/// Refines f so every piece is a basis interval of length <= δ, then sets up one candidate source per piece.
PieceSet make_pieces(const StepFunction& f, const OperatorFamily& family, const Rational& eps,
                     std::optional<Rational> delta, bool refine = true,
                     const std::optional<IntervalSet>& inside = std::nullopt);

struct Certificate {
    std::string condition;  // "head", "tail" or "spike"
    std::size_t j = 0;
    std::int64_t n_lo = 0, n_hi = 0;
    double measured = 0;
    double threshold = 0;
    double margin() const { return threshold - measured; }
};

struct CorrectionSchedule {
    std::size_t l = 0;
    std::vector<std::int64_t> m;
    std::vector<std::int64_t> n;
    double xi = 0;
    Rational eta;
    std::int64_t n_max = 0;
    std::vector<Certificate> certificates;
};

class ScheduleFailure : public std::runtime_error {
public:
    ScheduleFailure(std::string condition, std::size_t j, double margin, std::int64_t m, std::int64_t n,
                    CorrectionSchedule partial, const std::string& detail)
        : std::runtime_error("schedule search failed at piece " + std::to_string(j) + ": condition " + condition +
                             ": " + detail),
          condition_(std::move(condition)), j_(j), margin_(margin), m_(m), n_(n), partial_(std::move(partial)) {}

    const std::string& condition() const { return condition_; }
    std::size_t piece() const { return j_; }
    /// Best threshold − measured value reached; negative means violated.
    double margin() const { return margin_; }
    std::int64_t m() const { return m_; }
    std::int64_t n() const { return n_; }
    const CorrectionSchedule& partial() const { return partial_; }

private:
    std::string condition_;
    std::size_t j_;
    double margin_;
    std::int64_t m_, n_;
    CorrectionSchedule partial_;
};

/// Tail behaviour of U_n λ − λ over n = 1..n_max on the family grid.
struct TailProfile {
    std::vector<double> err;               // err[n] = ||U_n λ − λ||_1, index 0 unused
    std::vector<double> suffix_max;        // max_{n' >= n} err[n']
    std::vector<double> bad_measure;       // |{x : |U_n' λ − λ|(x) > thr for some n' >= n}|
};

TailProfile tail_profile(const OperatorFamily& family, const StepFunction& lambda, std::int64_t n_max, double thr);

/// max_{1<=n<=n_hi} ||U_n λ||_1.
double head_norm(const OperatorFamily& family, const StepFunction& lambda, std::int64_t n_hi);

struct ScheduleOutcome {
    CorrectionSchedule schedule;
    std::vector<CorrectionPiece> pieces;
};

/// Greedy search in the order m_1, N_1, m_2, N_2, ...; always the smallest admissible m and N.
///
/// head   ||U_n λ_j||_1 < ξ/N_{j-1} for n <= N_{j-1}
/// tail   ||U_n λ_j − λ_j||_1 < ξ for N_j <= n <= n_max
/// spike  |{sup_{N_j<=n<=n_max} |U_n λ_j − λ_j| > η/(4l)}| < ξ
ScheduleOutcome find_schedule(const std::vector<PieceSource>& sources, const OperatorFamily& family, double xi,
                              const Rational& eta, std::int64_t n_max, std::int64_t m_cap);

/// Invariants checked exactly on every result.
struct CorrectionChecks {
    bool locus_exact = false;    // {g != f} == modified
    bool norm_doubling = false;  // ||g||_1 <= 2||f||_1
    bool zero_mean = false;      // every λ integrates to 0
    bool measure_bound = false;  // |modified| <= eps (measure-budget mode)
    bool inside_set = false;     // modified ⊆ U (in-set mode)
};

struct CorrectionResult {
    std::string family;
    CorrectionConfig config;
    bool in_set = false;
    std::optional<IntervalSet> target_set;
    StepFunction f;
    StepFunction refined;
    std::optional<Rational> delta;
    std::vector<CorrectionPiece> pieces;
    CorrectionSchedule schedule;
    StepFunction g;
    IntervalSet modified;
    Rational f_l1, g_l1;
    CorrectionChecks checks;
    std::vector<double> sn_l1;  // ||U_n g||_1 for n = 1..n_max
    double sup_sn_l1 = 0;
    std::vector<double> t_grid;    // log-spaced in (η,1)
    std::vector<double> t_values;  // t·|{U* g > t}| / ||f||_1
    double t_constant = 0;
};

/// sup-norm series and weak-type curve of g, recorded on the result.
void correction_diagnostics(CorrectionResult& r, const OperatorFamily& family);

/// g = Σ_j λ_j with {g != f} of measure <= ε and tamed partial sums on [1, n_max].
CorrectionResult build_correction(const StepFunction& f, const OperatorFamily& family, const CorrectionConfig& config);

/// Same construction with every comb drawn from inside u, so {g != f} ⊆ u.
/// No refinement unless config.delta is given.
CorrectionResult build_correction_in_set(const StepFunction& f, const OperatorFamily& family, const IntervalSet& u,
                                         const CorrectionConfig& config);

/// Recomputes every stored certificate from the chosen pieces.
std::vector<Certificate> replay_certificates(const CorrectionResult& r, const OperatorFamily& family);

/// E_L f: averages of f over the generation-L dyadic intervals.
StepFunction dyadic_average(const StepFunction& f, unsigned level);

/// f = Σ_{k<=K} f_k with f_1 = E_{L_1} f and f_k = E_{L_k} f − E_{L_{k-1}} f, L_k = L − 2(K − k),
/// L the dyadic level of f. For smooth-ish f the stage norms fall by about 4 per stage.
std::vector<StepFunction> telescoping_targets(const StepFunction& f, std::size_t stages);

struct StagedCorrection {
    std::vector<StepFunction> targets;
    std::vector<Rational> eps_k, eta_k;
    std::vector<std::optional<CorrectionResult>> stages;  // nullopt for a zero target
    StepFunction g;
    IntervalSet modified;
    std::vector<double> residual_l1;  // ||U_n g − g||_1 for n = 1..n_max
    bool complete = false;
    std::optional<std::size_t> failed_stage;
    std::string failure;
    std::string failed_condition;
    double failed_margin = 0;
};

/// Corrects stage k with ε_k = ε·2^{-k}, η_k = 4^{-k} and sums the corrections.
/// A failing stage stops the run; the stages before it are kept.
StagedCorrection finite_stage_driver(const std::vector<StepFunction>& targets, const OperatorFamily& family,
                                     const CorrectionConfig& config);

}  // namespace hcorr
