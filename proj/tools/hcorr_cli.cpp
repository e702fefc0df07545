// hcorr: comb generators, partial-sum scans, weak-type measurements and corrections.

#include "hcorr/hcorr.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace hcorr;

namespace {

enum Exit { ok = 0, input_error = 1, param_error = 2, scan_error = 3, schedule_error = 4 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ScanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- resolved configuration ------------------------------------------------

struct Run {
    std::string command;
    RunConfig cfg;
    fs::path out;

    std::string str(const std::string& key) const { return cfg.get(key); }

    std::int64_t integer(const std::string& key) const {
        const std::string v = cfg.get(key);
        try {
            std::size_t used = 0;
            long long x = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ParamError(key + ": expected an integer, got '" + v + "'");
        }
    }
    Rational rational(const std::string& key) const {
        try {
            return parse_rational(cfg.get(key));
        } catch (const std::exception&) {
            throw ParamError(key + ": expected a rational p/q, got '" + cfg.get(key) + "'");
        }
    }
    double real(const std::string& key) const {
        try {
            return to_double(parse_decimal(cfg.get(key)));
        } catch (const std::exception&) {
            throw ParamError(key + ": expected a number, got '" + cfg.get(key) + "'");
        }
    }
    std::vector<std::int64_t> integer_list(const std::string& key) const {
        std::vector<std::int64_t> out;
        std::stringstream ss(cfg.get(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stoll(item, &used));
                if (used != item.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParamError(key + ": expected a comma-separated integer list, got '" + cfg.get(key) + "'");
            }
        }
        if (out.empty()) throw ParamError(key + ": empty list");
        return out;
    }
    Interval interval(const std::string& key) const {
        const std::string v = cfg.get(key);
        auto comma = v.find(',');
        if (comma == std::string::npos) throw ParamError(key + ": expected 'a,b'");
        try {
            return Interval(parse_rational(v.substr(0, comma)), parse_rational(v.substr(comma + 1)));
        } catch (const std::exception& e) {
            throw ParamError(key + ": " + e.what());
        }
    }

    FamilyKind family() const {
        try {
            return parse_family(cfg.get("family"));
        } catch (const std::exception& e) {
            throw ParamError(e.what());
        }
    }
    std::unique_ptr<OperatorFamily> make_family() const {
        FamilyKind k = family();
        std::int64_t grid = integer("grid"), level = integer("level");
        if (k == FamilyKind::trig && (grid < 1 || grid > (1 << 22))) throw ParamError("grid must lie in [1, 2^22]");
        if (k == FamilyKind::walsh && (level < 1 || level > 24)) throw ParamError("level must lie in [1, 24]");
        return hcorr::make_family(k, grid, static_cast<unsigned>(level));
    }
    std::int64_t n_max() const {
        std::int64_t n = integer("n-max");
        if (n < 1) throw ParamError("n-max must be at least 1");
        if (family() == FamilyKind::walsh && n > (std::int64_t(1) << integer("level")))
            throw ParamError("n-max must not exceed 2^level for the walsh family");
        return n;
    }

    Json envelope() const {
        Json c = Json::object();
        for (const auto& [k, v] : cfg.values()) c[k] = v;
        return Json{{"tool", "hcorr"}, {"version", tool_version}, {"command", command}, {"config", c}};
    }
    std::string csv_header() const {
        std::string h = "# hcorr " + std::string(tool_version) + " " + command + "\n# config:";
        for (const auto& [k, v] : cfg.values()) h += " " + k + "=" + v;
        return h + "\n";
    }
    fs::path write_json(const std::string& name, Json body) const {
        Json doc = envelope();
        doc["result"] = std::move(body);
        fs::path p = out / name;
        write_atomic(p, doc.dump(2) + "\n");
        return p;
    }
    fs::path write_csv(const std::string& name, const std::string& table) const {
        fs::path p = out / name;
        write_atomic(p, csv_header() + table);
        return p;
    }
};

/// "1/8" -> "1_8" for file names.
std::string tag(const std::string& s) {
    std::string t;
    for (char c : s) t += (c == '/' || c == ',' || c == ' ') ? '_' : c;
    return t;
}

StepFunction load_step(const std::string& path) {
    if (path.empty()) throw ParamError("--input is required");
    try {
        return step_function_from_json(read_json(path));
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

IntervalSet load_set(const std::string& path) {
    try {
        return interval_set_from_json(read_json(path));
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

void require_unit(const Rational& x, const std::string& name) {
    if (!(x > 0 && x < 1)) throw ParamError(name + " must lie in (0,1), got " + to_string(x));
}

// ---- commands ---------------------------------------------------------------

IntervalSet make_comb(const Run& run, std::string& label) {
    const std::string fam = run.str("family");
    Interval delta = run.interval("interval");
    std::int64_t l = run.integer("l");
    if (fam == "trig" || fam == "uniform") {
        Rational eps = run.rational("eps");
        require_unit(eps, "eps");
        if (l < 1) throw ParamError("l must be at least 1");
        label = fam + "-eps" + tag(to_string(eps)) + "-l" + std::to_string(l);
        if (fam == "uniform") {
            if (!(delta == Interval(0, 1))) throw ParamError("uniform combs live on [0,1)");
            return uniform_comb(eps, l);
        }
        return trig_comb(delta, eps, l);
    }
    if (fam == "walsh") {
        std::int64_t r = run.integer("r"), t = run.integer("t");
        if (r < 1 || r > 40) throw ParamError("r must lie in [1,40]");
        if (t < 1 || t > (std::int64_t(1) << r)) throw ParamError("t must lie in [1, 2^r]");
        if (l < 0 || l > 24) throw ParamError("l must lie in [0,24] for walsh combs");
        if (!delta.is_dyadic()) throw ParamError("walsh combs need a dyadic interval");
        label = "walsh-r" + std::to_string(r) + "-t" + std::to_string(t) + "-l" + std::to_string(l);
        return walsh_comb(delta, static_cast<unsigned>(r), static_cast<std::uint64_t>(t), static_cast<unsigned>(l));
    }
    throw ParamError("family must be trig, walsh or uniform for gen-comb");
}

int cmd_gen_comb(Run& run) {
    run.cfg.set_default("family", "trig");
    run.cfg.set_default("interval", "0,1");
    run.cfg.set_default("l", "1");
    if (run.str("family") == "walsh") {
        run.cfg.set_default("r", "3");
        run.cfg.set_default("t", "1");
    } else {
        run.cfg.set_default("eps", "1/8");
    }
    std::string label;
    IntervalSet g = make_comb(run, label);
    auto path = run.write_json("comb-" + label + ".json", to_json(g));
    std::cout << "comb " << label << ": " << g.size() << " intervals, measure " << to_string(g.measure()) << "\n"
              << "wrote " << path.string() << "\n";
    return ok;
}

void family_defaults(Run& run) {
    run.cfg.set_default("family", "trig");
    run.cfg.set_default("grid", "8192");
    run.cfg.set_default("level", "13");
    run.cfg.set_default("n-max", "1024");
}

int cmd_partial_sum(Run& run) {
    family_defaults(run);
    run.cfg.set_default("n", "16");
    StepFunction f = load_step(run.str("input"));
    auto fam = run.make_family();
    std::int64_t n = run.integer("n");
    if (n < 0) throw ParamError("n must be nonnegative");
    std::optional<GridFunction> sampled;
    try {
        sampled = fam->apply(n, f);
    } catch (const std::invalid_argument& e) {
        throw ParamError(e.what());
    }
    const GridFunction& s = *sampled;
    auto path = run.write_csv("partial-sum-" + fam->name() + "-n" + std::to_string(n) + ".csv", grid_csv(s));
    std::cout << "||S_" << n << " f||_1 = " << detail::fmt(s.l1_norm()) << " on " << s.grid.size() << " points\n"
              << "wrote " << path.string() << "\n";
    return ok;
}

MaximalScan scan_or_fail(const OperatorFamily& fam, const StepFunction& f, std::int64_t n_max) {
    try {
        return fam.maximal(f, n_max);
    } catch (const std::exception& e) {
        throw ScanError(std::string("maximal scan failed: ") + e.what());
    }
}

int cmd_maximal_scan(Run& run) {
    family_defaults(run);
    StepFunction f = load_step(run.str("input"));
    auto fam = run.make_family();
    MaximalScan scan = scan_or_fail(*fam, f, run.n_max());
    auto path = run.write_csv("maximal-" + fam->name() + "-n" + std::to_string(scan.n_max) + ".csv", scan_csv(scan));
    std::cout << "S* max " << detail::fmt(scan.values.max_abs()) << " over " << scan.values.grid.size() << " points, N_max "
              << scan.n_max << "\nwrote " << path.string() << "\n";
    return ok;
}

int cmd_weak_type(Run& run) {
    family_defaults(run);
    run.cfg.set_default("lambda-count", "64");
    auto fam = run.make_family();
    const std::int64_t n_max = run.n_max();
    const std::int64_t count = run.integer("lambda-count");
    if (count < 2) throw ParamError("lambda-count must be at least 2");

    if (run.cfg.has("set")) {
        IntervalSet g = load_set(run.str("set"));
        if (g.empty()) throw InputError("set is empty");
        MaximalScan scan = scan_or_fail(*fam, StepFunction::indicator(g), n_max);
        WeakTypeReport r = distribution_scan(scan, g.measure(),
                                             default_lambda_grid(to_double(g.measure()), n_max, scan.values.max_abs(),
                                                                 static_cast<std::size_t>(count)));
        r.set = {{"file", fs::path(run.str("set")).filename().string()}};
        std::string base = "weak-type-" + fam->name() + "-set-n" + std::to_string(n_max);
        run.write_json(base + ".json", to_json(r));
        run.write_csv(base + ".csv", weak_type_csv(r));
        std::cout << "c_emp = " << detail::fmt(r.c_emp) << "\nwrote " << (run.out / base).string() << ".{json,csv}\n";
        return ok;
    }

    CombSpec spec;
    spec.family = fam->kind();
    std::string params;
    if (spec.family == FamilyKind::trig) {
        run.cfg.set_default("eps", "1/8");
        run.cfg.set_default("l-list", "4,8,16,32");
        spec.eps = run.rational("eps");
        require_unit(spec.eps, "eps");
        params = "eps" + tag(to_string(spec.eps));
    } else {
        run.cfg.set_default("r", "3");
        run.cfg.set_default("t", "1");
        run.cfg.set_default("l-list", "3,4,5,6,7,8");
        std::int64_t r = run.integer("r"), t = run.integer("t");
        if (r < 1 || r > 24) throw ParamError("r must lie in [1,24]");
        if (t < 1 || t > (std::int64_t(1) << r)) throw ParamError("t must lie in [1, 2^r]");
        spec.r = static_cast<unsigned>(r);
        spec.t = static_cast<std::uint64_t>(t);
        params = "r" + std::to_string(r) + "-t" + std::to_string(t);
    }
    auto l_list = run.integer_list("l-list");
    for (std::size_t i = 0; i < l_list.size(); ++i) {
        if (l_list[i] < 1) throw ParamError("l-list entries must be positive");
        if (i > 0 && l_list[i] <= l_list[i - 1]) throw ParamError("l-list must be strictly ascending");
        if (spec.family == FamilyKind::walsh && static_cast<std::int64_t>(spec.r) + l_list[i] > run.integer("level"))
            throw ParamError("walsh comb with r + l above the grid level cannot be evaluated exactly");
    }
    StabilityStudy study;
    try {
        std::vector<WeakTypeReport> reports;
        for (auto l : l_list) {
            IntervalSet g = spec.make(l);
            if (g.empty()) throw ScanError("comb for l = " + std::to_string(l) + " is empty");
            MaximalScan scan = scan_or_fail(*fam, StepFunction::indicator(g), n_max);
            WeakTypeReport r = distribution_scan(scan, g.measure(),
                                                 default_lambda_grid(to_double(g.measure()), n_max, scan.values.max_abs(),
                                                                     static_cast<std::size_t>(count)));
            r.set = spec.describe(l);
            r.alpha_emp = to_double(g.measure() / spec.nominal_measure());
            reports.push_back(std::move(r));
        }
        study = summarize(l_list, std::move(reports));
    } catch (const ScanError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScanError(e.what());
    }
    const std::string base = "weak-type-" + fam->name() + "-" + params + "-n" + std::to_string(n_max);
    for (std::size_t i = 0; i < l_list.size(); ++i) {
        const std::string name = base + "-l" + std::to_string(l_list[i]);
        run.write_json(name + ".json", to_json(study.reports[i]));
        run.write_csv(name + ".csv", weak_type_csv(study.reports[i]));
        std::cout << "l = " << l_list[i] << ": c_emp = " << detail::fmt(study.reports[i].c_emp) << "\n";
    }
    run.write_json(base + "-summary.json", to_json(study));
    std::cout << "max/min c_emp = " << detail::fmt(study.ratio) << (study.monotone_growth ? ", growing in l" : "")
              << "\nwrote " << (run.out / base).string() << "-*\n";
    return ok;
}

int cmd_weak_gap(Run& run) {
    IntervalSet g;
    std::string label;
    if (run.cfg.has("set")) {
        g = load_set(run.str("set"));
        label = "set";
    } else {
        run.cfg.set_default("family", "uniform");
        run.cfg.set_default("eps", "1/4");
        run.cfg.set_default("l", "16");
        run.cfg.set_default("interval", "0,1");
        g = make_comb(run, label);
    }
    if (g.empty()) throw InputError("set has zero measure");
    Json body{{"set", to_json(g)}};
    std::string name = "weak-gap-" + label;
    if (run.cfg.has("frequency")) {
        std::int64_t k = run.integer("frequency");
        FrequencyGap gap = weak_convergence_gap(g, k);
        body["test"] = "exp(2 pi i " + std::to_string(k) + " x)";
        body["gap"] = gap.value;
        body["exactly_zero"] = gap.exactly_zero;
        name += "-k" + std::to_string(k);
        std::cout << "gap = " << (gap.exactly_zero ? "0 (exact)" : detail::fmt(gap.value)) << "\n";
    } else {
        run.cfg.set_default("test-interval", "0,1/3");
        Interval iv = run.interval("test-interval");
        Rational gap = weak_convergence_gap(g, StepFunction::indicator(iv));
        body["test"] = "indicator [" + to_string(iv.a()) + "," + to_string(iv.b()) + ")";
        body["gap"] = to_string(gap);
        body["gap_value"] = to_double(gap);
        name += "-test" + tag(to_string(iv.a()) + "," + to_string(iv.b()));
        std::cout << "gap = " << to_string(gap) << " (" << detail::fmt(to_double(gap)) << ")\n";
    }
    auto path = run.write_json(name + ".json", body);
    std::cout << "wrote " << path.string() << "\n";
    return ok;
}

CorrectionConfig correction_config(const Run& run) {
    CorrectionConfig c;
    c.eps = run.rational("eps");
    c.eta = run.rational("eta");
    require_unit(c.eps, "eps");
    require_unit(c.eta, "eta");
    if (run.cfg.has("xi")) {
        c.xi = run.real("xi");
        if (!(*c.xi > 0)) throw ParamError("xi must be positive");
    }
    if (run.cfg.has("delta")) {
        c.delta = run.rational("delta");
        if (*c.delta <= 0) throw ParamError("delta must be positive");
    }
    c.n_max = run.n_max();
    c.m_cap = run.integer("m-cap");
    if (c.m_cap < 1) throw ParamError("m-cap must be positive");
    return c;
}

int cmd_correct(Run& run) {
    family_defaults(run);
    run.cfg.set_default("eps", "1/8");
    run.cfg.set_default("eta", "1/16");
    run.cfg.set_default("m-cap", "4096");
    StepFunction f = load_step(run.str("input"));
    if (f.is_zero()) throw InputError("input step function is zero");
    auto fam = run.make_family();
    CorrectionConfig c = correction_config(run);
    std::string base = "correct-" + fam->name() + "-eps" + tag(to_string(c.eps)) + "-eta" + tag(to_string(c.eta)) + "-n" +
                       std::to_string(c.n_max);

    if (run.cfg.has("stages")) {
        std::int64_t k = run.integer("stages");
        if (k < 1 || k > 16) throw ParamError("stages must lie in [1,16]");
        std::vector<StepFunction> targets;
        try {
            targets = telescoping_targets(f, static_cast<std::size_t>(k));
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        StagedCorrection s = finite_stage_driver(targets, *fam, c);
        base += "-stages" + std::to_string(k);
        run.write_json(base + ".json", to_json(s));
        run.write_csv(base + "-residual.csv", series_csv("residual_l1", s.residual_l1));
        std::cout << "stages attempted: " << s.stages.size() << "/" << k
                  << ", |{g != f}| <= " << to_string(s.modified.measure()) << "\n";
        if (s.failed_stage) {
            std::cerr << "stage " << *s.failed_stage << ": " << s.failure << "\n";
            return schedule_error;
        }
        return ok;
    }

    std::optional<IntervalSet> u;
    if (run.cfg.has("inside-set")) {
        u = load_set(run.str("inside-set"));
        base += "-inset";
    }
    try {
        CorrectionResult r = u ? build_correction_in_set(f, *fam, *u, c) : build_correction(f, *fam, c);
        run.write_json(base + ".json", to_json(r));
        run.write_csv(base + "-sn.csv", series_csv("sn_l1", r.sn_l1));
        run.write_csv(base + "-weak.csv", curve_csv(r.t_grid, r.t_values));
        std::cout << "schedule found for " << r.schedule.l << " pieces\n"
                  << "|{g != f}| = " << to_string(r.modified.measure()) << "\n"
                  << "||g||_1 = " << to_string(r.g_l1) << ", ||f||_1 = " << to_string(r.f_l1) << "\n"
                  << "sup_n ||S_n g||_1 / ||f||_1 = " << detail::fmt(r.sup_sn_l1 / to_double(r.f_l1)) << "\n"
                  << "wrote " << (run.out / base).string() << "{.json,-sn.csv,-weak.csv}\n";
        return ok;
    } catch (const ScheduleFailure& e) {
        run.write_json(base + "-failure.json", to_json(e));
        std::cerr << e.what() << "\n";
        return schedule_error;
    }
}

int cmd_demo(Run& run) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(run.integer("seed")));
    fs::path root = run.out;

    Run comb{"gen-comb", RunConfig::parse("family = trig\neps = 1/8\nl = 16\ninterval = 0,1\n"), root};
    std::string label;
    IntervalSet g = make_comb(comb, label);
    comb.write_json("comb-" + label + ".json", to_json(g));
    std::cout << "trig comb G_16(1/8): measure " << to_string(g.measure()) << "\n";

    TrigFamily trig(2048);
    CombSpec spec;
    StabilityStudy study = stability_study(trig, spec, {4, 8, 16}, 256, false);
    Run wt{"weak-type", RunConfig::parse("family = trig\ngrid = 2048\nn-max = 256\neps = 1/8\nl-list = 4,8,16\n"), root};
    wt.write_json("weak-type-trig-demo-summary.json", to_json(study));
    std::cout << "trig stability over l = 4,8,16: max/min c_emp = " << detail::fmt(study.ratio) << "\n";

    // A random two-level dyadic step function, corrected in the Walsh system.
    std::uniform_int_distribution<int> coef(1, 4);
    StepFunction f({{Interval(0, Rational(1, 2)), coef(rng)}, {Interval(Rational(1, 2), 1), -coef(rng)}});
    WalshFamily walsh(14);
    CorrectionConfig c;
    c.delta = Rational(1);
    c.n_max = 1024;
    Run cr{"correct", RunConfig::parse("family = walsh\nlevel = 14\nn-max = 1024\ndelta = 1\neps = 1/8\neta = 1/16\n"), root};
    cr.cfg.set("seed", run.str("seed"));
    try {
        CorrectionResult r = build_correction(f, walsh, c);
        cr.write_json("correct-walsh-demo.json", to_json(r));
        std::cout << "walsh correction: m = ";
        for (auto m : r.schedule.m) std::cout << m << ' ';
        std::cout << "N = ";
        for (auto n : r.schedule.n) std::cout << n << ' ';
        std::cout << "|{g != f}| = " << to_string(r.modified.measure()) << "\n";
    } catch (const ScheduleFailure& e) {
        cr.write_json("correct-walsh-demo-failure.json", to_json(e));
        std::cerr << e.what() << "\n";
        return schedule_error;
    }
    std::cout << "wrote demo outputs under " << root.string() << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Comb sets, partial-sum scans, weak-type measurements and corrections of step functions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    RunConfig flags;
    std::string config_file;
    std::string out_dir = "hcorr-out";

    auto flag = [&](CLI::App* sub, const std::string& key, const std::string& help) {
        sub->add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags.set(key, v); }, help);
    };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "flat key = value config file; flags override it");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        flag(sub, "seed", "random seed");
    };
    auto family_flags = [&](CLI::App* sub) {
        flag(sub, "family", "trig or walsh");
        flag(sub, "grid", "trig grid size M (midpoint grid)");
        flag(sub, "level", "walsh dyadic grid level p");
        flag(sub, "n-max", "largest partial-sum index");
    };

    auto* gen = app.add_subcommand("gen-comb", "write a comb set as JSON");
    common(gen);
    flag(gen, "family", "trig, walsh or uniform");
    flag(gen, "eps", "tooth density p/q (trig, uniform)");
    flag(gen, "l", "number of teeth (trig, uniform) or dilation exponent (walsh)");
    flag(gen, "r", "walsh tooth generation");
    flag(gen, "t", "walsh tooth index in [1, 2^r]");
    flag(gen, "interval", "parent interval 'a,b'");

    auto* ps = app.add_subcommand("partial-sum", "sample S_n f on the grid");
    common(ps);
    family_flags(ps);
    flag(ps, "input", "step function JSON");
    flag(ps, "n", "partial-sum index");

    auto* ms = app.add_subcommand("maximal-scan", "truncated maximal function S* f on the grid");
    common(ms);
    family_flags(ms);
    flag(ms, "input", "step function JSON");

    auto* wt = app.add_subcommand("weak-type", "distribution scans of comb indicators over l");
    common(wt);
    family_flags(wt);
    flag(wt, "eps", "trig comb density");
    flag(wt, "r", "walsh tooth generation");
    flag(wt, "t", "walsh tooth index");
    flag(wt, "l-list", "comma-separated ascending l values");
    flag(wt, "lambda-count", "number of lambda grid points");
    flag(wt, "set", "scan the indicator of this interval-set JSON instead of combs");

    auto* wg = app.add_subcommand("weak-gap", "| |G|^-1 int_G h - int h | for a step or pure-frequency test");
    common(wg);
    flag(wg, "set", "interval-set JSON (default: a comb from --family/--eps/--l)");
    flag(wg, "family", "comb family when no --set is given (uniform, trig, walsh)");
    flag(wg, "eps", "comb density");
    flag(wg, "l", "comb teeth");
    flag(wg, "r", "walsh tooth generation");
    flag(wg, "t", "walsh tooth index");
    flag(wg, "interval", "comb parent interval");
    flag(wg, "test-interval", "test indicator 'a,b'");
    flag(wg, "frequency", "pure frequency k for the test e^{2 pi i k x}");

    auto* co = app.add_subcommand("correct", "modify a step function on a small set to tame its partial sums");
    common(co);
    family_flags(co);
    flag(co, "input", "step function JSON");
    flag(co, "eps", "measure budget of the modified set");
    flag(co, "eta", "threshold parameter");
    flag(co, "xi", "slack parameter (default ||f||_1/(2 l^2))");
    flag(co, "delta", "piece length bound (default from the L2 bound)");
    flag(co, "m-cap", "largest comb index searched");
    flag(co, "stages", "run the multi-stage driver with this many stages");
    flag(co, "inside-set", "draw every comb from inside this interval-set JSON");

    auto* demo = app.add_subcommand("demo", "small end-to-end run");
    common(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : param_error;
    }

    try {
        Run run;
        CLI::App* sub = app.get_subcommands().front();
        run.command = sub->get_name();
        if (!config_file.empty()) {
            try {
                run.cfg = RunConfig::parse(read_file(config_file));
            } catch (const std::invalid_argument& e) {
                throw ParamError(config_file + ": " + e.what());
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
        }
        run.cfg.merge(flags);
        if (run.cfg.has("out") && sub->count("--out") == 0) out_dir = run.cfg.get("out");
        run.cfg.set("out", out_dir);
        run.cfg.set_default("seed", "1");
        run.out = out_dir;

        if (run.command == "gen-comb") return cmd_gen_comb(run);
        if (run.command == "partial-sum") return cmd_partial_sum(run);
        if (run.command == "maximal-scan") return cmd_maximal_scan(run);
        if (run.command == "weak-type") return cmd_weak_type(run);
        if (run.command == "weak-gap") return cmd_weak_gap(run);
        if (run.command == "correct") return cmd_correct(run);
        if (run.command == "demo") return cmd_demo(run);
        return param_error;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return param_error;
    } catch (const ScanError& e) {
        std::cerr << "scan failure: " << e.what() << "\n";
        return scan_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return param_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return scan_error;
    }
}
