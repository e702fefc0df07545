#include "hcorr/io.hpp"

#include <fstream>
#include <sstream>

namespace hcorr {

namespace detail {

std::string json_text(const Json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw std::invalid_argument(std::string(what) + " must be a string");
}

}  // namespace detail

Json to_json(const Interval& iv) { return Json::array({to_string(iv.a()), to_string(iv.b())}); }

Json to_json(const IntervalSet& s) {
    Json parts = Json::array();
    for (const auto& iv : s.intervals()) parts.push_back(to_json(iv));
    return Json{{"intervals", parts}, {"measure", to_string(s.measure())}};
}

Json to_json(const StepFunction& f) {
    Json pieces = Json::array();
    for (const auto& p : f.pieces())
        pieces.push_back(Json{{"a", to_string(p.interval.a())}, {"b", to_string(p.interval.b())},
                              {"c", to_decimal_string(p.coefficient)}});
    return Json{{"pieces", pieces}};
}

Interval interval_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("interval must be a two-element array [\"a\",\"b\"]");
    return Interval(parse_rational(detail::json_text(j[0], "endpoint")), parse_rational(detail::json_text(j[1], "endpoint")));
}

IntervalSet interval_set_from_json(const Json& j) {
    const Json& parts = j.is_object() ? j.at("intervals") : j;
    if (!parts.is_array()) throw std::invalid_argument("interval set must be an array or {\"intervals\": [...]}");
    std::vector<Interval> v;
    for (const auto& iv : parts) v.push_back(interval_from_json(iv));
    return IntervalSet(std::move(v));
}

StepFunction step_function_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("pieces") || !j.at("pieces").is_array())
        throw std::invalid_argument("step function must be {\"pieces\": [...]}");
    std::vector<StepPiece> v;
    for (const auto& p : j.at("pieces")) {
        Interval iv(parse_rational(detail::json_text(p.at("a"), "endpoint")),
                    parse_rational(detail::json_text(p.at("b"), "endpoint")));
        Rational c = parse_decimal(detail::json_text(p.at("c"), "coefficient"));
        if (c == 0) throw std::invalid_argument("step function coefficients must be nonzero");
        v.push_back({iv, c});
    }
    return StepFunction(std::move(v));
}

Json to_json(const WeakTypeReport& r) {
    Json set = Json::object();
    for (const auto& [k, v] : r.set) set[k] = v;
    Json lam = Json::array(), sup = Json::array(), val = Json::array();
    for (std::size_t i = 0; i < r.lambdas.size(); ++i) {
        lam.push_back(r.lambdas[i]);
        sup.push_back(r.superlevel[i]);
        val.push_back(r.values[i]);
    }
    Json j{{"family", r.family}, {"set", set}, {"n_max", r.n_max}, {"grid_size", r.grid_size},
           {"set_measure", to_string(r.g_measure)}, {"s_star_max", r.s_star_max}, {"c_emp", r.c_emp},
           {"alpha_emp", r.alpha_emp ? Json(*r.alpha_emp) : Json(nullptr)}, {"beta_emp", r.beta_emp},
           {"lambda", lam}, {"superlevel_measure", sup}, {"value", val}};
    return j;
}

Json to_json(const StabilityStudy& s) {
    Json reports = Json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    return Json{{"l_list", s.l_list}, {"c_min", s.c_min}, {"c_max", s.c_max}, {"ratio", number(s.ratio)},
                {"monotone_growth", s.monotone_growth}, {"reports", reports}};
}

Json to_json(const Certificate& c) {
    return Json{{"condition", c.condition}, {"j", c.j}, {"n_from", c.n_lo}, {"n_to", c.n_hi},
                {"measured", c.measured}, {"threshold", c.threshold}, {"margin", c.margin()}};
}

Json to_json(const CorrectionSchedule& s) {
    Json certs = Json::array();
    for (const auto& c : s.certificates) certs.push_back(to_json(c));
    return Json{{"l", s.l}, {"m", s.m}, {"N", s.n}, {"xi", s.xi}, {"eta", to_string(s.eta)},
                {"n_max", s.n_max}, {"certificates", certs}};
}

Json to_json(const CorrectionConfig& c) {
    return Json{{"eps", to_string(c.eps)}, {"eta", to_string(c.eta)}, {"xi", c.xi ? Json(*c.xi) : Json(nullptr)},
                {"delta", c.delta ? Json(to_string(*c.delta)) : Json(nullptr)}, {"n_max", c.n_max}, {"m_cap", c.m_cap}};
}

Json to_json(const ScheduleFailure& e) {
    return Json{{"condition", e.condition()}, {"piece", e.piece()}, {"margin", number(e.margin())},
                {"m", e.m()}, {"N", e.n()}, {"message", e.what()}, {"partial_schedule", to_json(e.partial())}};
}

Json to_json(const CorrectionResult& r) {
    Json pieces = Json::array();
    for (const auto& p : r.pieces)
        pieces.push_back(Json{{"k", p.k}, {"a", to_decimal_string(p.a)}, {"interval", to_json(p.delta)}, {"m", p.m},
                              {"G", to_json(p.g)}, {"density", to_string(p.density)},
                              {"lambda_l2_squared", to_string(p.lambda_l2_squared)}});
    Json j{{"family", r.family},
           {"mode", r.in_set ? "in-set" : "measure"},
           {"config", to_json(r.config)},
           {"delta", r.delta ? Json(to_string(*r.delta)) : Json(nullptr)},
           {"f", to_json(r.f)},
           {"refined_pieces", r.refined.size()},
           {"schedule", to_json(r.schedule)},
           {"pieces", pieces},
           {"g", to_json(r.g)},
           {"modified", to_json(r.modified)},
           {"modified_measure", to_string(r.modified.measure())},
           {"f_l1", to_string(r.f_l1)},
           {"g_l1", to_string(r.g_l1)},
           {"checks", Json{{"locus_exact", r.checks.locus_exact}, {"norm_doubling", r.checks.norm_doubling},
                           {"zero_mean", r.checks.zero_mean}, {"measure_bound", r.checks.measure_bound},
                           {"inside_set", r.checks.inside_set}}},
           {"sup_sn_l1", r.sup_sn_l1},
           {"sup_sn_l1_over_f_l1", r.sup_sn_l1 / to_double(r.f_l1)},
           {"weak_type_constant", r.t_constant}};
    if (r.target_set) j["target_set"] = to_json(*r.target_set);
    return j;
}

Json to_json(const StagedCorrection& s) {
    Json stages = Json::array();
    for (std::size_t k = 0; k < s.targets.size(); ++k) {
        Json st{{"stage", k + 1}, {"target_l1", to_string(s.targets[k].l1_norm())}};
        if (k < s.eps_k.size()) {
            st["eps"] = to_string(s.eps_k[k]);
            st["eta"] = to_string(s.eta_k[k]);
        }
        if (k < s.stages.size()) st["result"] = s.stages[k] ? to_json(*s.stages[k]) : Json("zero target, skipped");
        else st["result"] = nullptr;
        stages.push_back(st);
    }
    Json j{{"complete", s.complete}, {"stages", stages}, {"g", to_json(s.g)},
           {"modified", to_json(s.modified)}, {"modified_measure", to_string(s.modified.measure())}};
    if (s.failed_stage)
        j["failure"] = Json{{"stage", *s.failed_stage}, {"condition", s.failed_condition},
                            {"margin", number(s.failed_margin)}, {"message", s.failure}};
    if (!s.residual_l1.empty()) j["residual_l1_at_n_max"] = s.residual_l1.back();
    return j;
}

std::string scan_csv(const MaximalScan& s) {
    std::ostringstream o;
    o << "x,S_star,argmax_n\n";
    for (std::int64_t j = 0; j < s.values.grid.size(); ++j)
        o << detail::fmt(s.values.grid.x(j)) << ',' << detail::fmt(s.values.samples[static_cast<std::size_t>(j)]) << ','
          << s.argmax[static_cast<std::size_t>(j)] << '\n';
    return o.str();
}

std::string weak_type_csv(const WeakTypeReport& r) {
    std::ostringstream o;
    o << "lambda,value\n";
    for (std::size_t i = 0; i < r.lambdas.size(); ++i) o << detail::fmt(r.lambdas[i]) << ',' << detail::fmt(r.values[i]) << '\n';
    return o.str();
}

std::string series_csv(const std::string& column, const std::vector<double>& v) {
    std::ostringstream o;
    o << "n," << column << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) o << i + 1 << ',' << detail::fmt(v[i]) << '\n';
    return o.str();
}

std::string curve_csv(const std::vector<double>& t, const std::vector<double>& v) {
    std::ostringstream o;
    o << "t,value\n";
    for (std::size_t i = 0; i < t.size(); ++i) o << detail::fmt(t[i]) << ',' << detail::fmt(v[i]) << '\n';
    return o.str();
}

std::string grid_csv(const GridFunction& g) {
    std::ostringstream o;
    o << "x,value\n";
    for (std::int64_t j = 0; j < g.grid.size(); ++j)
        o << detail::fmt(g.grid.x(j)) << ',' << detail::fmt(g.samples[static_cast<std::size_t>(j)]) << '\n';
    return o.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(e.what());
    }
}

}  // namespace hcorr
