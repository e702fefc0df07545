#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace hcorr;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hcorr-test-io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Json, IntervalSetRoundTrip) {
    oracle::Rng rng(61);
    for (int rep = 0; rep < 50; ++rep) {
        IntervalSet s = trig_comb(Interval(q(1, 3), q(5, 7)), q(1, oracle::uniform_int(rng, 2, 9)), oracle::uniform_int(rng, 1, 12));
        Json j = to_json(s);
        EXPECT_EQ(interval_set_from_json(Json::parse(j.dump())), s);
        EXPECT_EQ(interval_set_from_json(j["intervals"]), s);
    }
}

TEST(Json, StepFunctionRoundTrip) {
    oracle::Rng rng(62);
    for (int rep = 0; rep < 50; ++rep) {
        StepFunction f = oracle::random_rational_step(rng, 8).scaled(Rational(1, oracle::uniform_int(rng, 1, 7)));
        StepFunction g = step_function_from_json(Json::parse(to_json(f).dump()));
        EXPECT_TRUE(same_function(f, g));
    }
}

TEST(Json, EndpointsMustBeFractions) {
    EXPECT_THROW(interval_set_from_json(Json::parse(R"([["0.5","1"]])")), std::invalid_argument);
    EXPECT_THROW(interval_set_from_json(Json::parse(R"([[0.5,1]])")), std::invalid_argument);
    EXPECT_THROW(step_function_from_json(Json::parse(R"({"pieces":[{"a":"0","b":"0.5","c":"1"}]})")), std::invalid_argument);
    // coefficients may be decimals
    StepFunction f = step_function_from_json(Json::parse(R"({"pieces":[{"a":"0","b":"1/2","c":"-0.25"}]})"));
    EXPECT_EQ(f.pieces()[0].coefficient, q(-1, 4));
    EXPECT_THROW(step_function_from_json(Json::parse(R"({"pieces":[{"a":"1/2","b":"1/4","c":"1"}]})")), std::invalid_argument);
    EXPECT_THROW(step_function_from_json(Json::parse(R"({"intervals":[]})")), std::invalid_argument);
}

TEST(Json, NonFiniteNumbersStayValid) {
    EXPECT_EQ(number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(number(std::nan("")), "nan");
    EXPECT_EQ(number(0.5), 0.5);
}

TEST(RunConfig, RoundTripsThroughItsTextForm) {
    RunConfig c = RunConfig::parse("# comment\nfamily = walsh\n  eps=1/8 \nl-list = 3,4,5\nout = some dir\n");
    EXPECT_EQ(c.get("family"), "walsh");
    EXPECT_EQ(c.get("eps"), "1/8");
    EXPECT_EQ(c.get("out"), "some dir");
    EXPECT_EQ(RunConfig::parse(c.serialize()), c);
}

TEST(RunConfig, RejectsUnknownKeysAndMalformedLines) {
    EXPECT_THROW(RunConfig::parse("colour = red\n"), std::invalid_argument);
    EXPECT_THROW(RunConfig::parse("family walsh\n"), std::invalid_argument);
    RunConfig c;
    EXPECT_THROW(c.set("bogus", "1"), std::invalid_argument);
}

TEST(RunConfig, MergeLetsTheOtherWin) {
    RunConfig file = RunConfig::parse("eps = 1/8\nfamily = trig\n");
    RunConfig flags = RunConfig::parse("eps = 1/4\n");
    file.merge(flags);
    EXPECT_EQ(file.get("eps"), "1/4");
    EXPECT_EQ(file.get("family"), "trig");
    file.set_default("family", "walsh");
    EXPECT_EQ(file.get("family"), "trig");
}

TEST(Files, AtomicWriteReplacesContent) {
    auto p = scratch("nested/out.json");
    write_atomic(p, "first");
    write_atomic(p, "second");
    EXPECT_EQ(read_file(p), "second");
    EXPECT_FALSE(std::filesystem::exists(p.string() + ".tmp"));
    write_atomic(scratch("bad.json"), "{ nope");
    EXPECT_THROW(read_json(scratch("bad.json")), std::invalid_argument);
}

TEST(Csv, ScanAndWeakTypeLayouts) {
    WalshFamily walsh(4);
    MaximalScan scan = walsh.maximal(StepFunction::indicator(Interval(0, q(1, 2))), 8);
    std::string csv = scan_csv(scan);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,S_star,argmax_n");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
    WeakTypeReport r = distribution_scan(scan, q(1, 2), {0.25, 0.5});
    std::string w = weak_type_csv(r);
    EXPECT_EQ(w, "lambda,value\n0.25,0.5\n0.5,0.5\n");
}

TEST(Json, ReportsAreDeterministic) {
    WalshFamily walsh(12);
    CorrectionConfig c;
    c.delta = q(1);
    c.n_max = 512;
    StepFunction f({{Interval(0, q(1, 2)), 1}, {Interval(q(1, 2), 1), 2}});
    std::string a = to_json(build_correction(f, walsh, c)).dump(2);
    std::string b = to_json(build_correction(f, walsh, c)).dump(2);
    EXPECT_EQ(a, b);
    Json j = Json::parse(a);
    EXPECT_EQ(j["family"], "walsh");
    EXPECT_TRUE(j["checks"]["locus_exact"].get<bool>());
}
