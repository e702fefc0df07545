#pragma once

#include "hcorr/corrector.hpp"
#include "hcorr/weak_type.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

namespace hcorr {

using Json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "0.1.0";

// ---- exact sets and step functions ----------------------------------------

Json to_json(const Interval& iv);
Json to_json(const IntervalSet& s);
Json to_json(const StepFunction& f);
Interval interval_from_json(const Json& j);
IntervalSet interval_set_from_json(const Json& j);
StepFunction step_function_from_json(const Json& j);

// ---- reports ----------------------------------------------------------------

/// Non-finite values are written as strings so the output stays valid JSON.
inline Json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

Json to_json(const WeakTypeReport& r);
Json to_json(const StabilityStudy& s);
Json to_json(const Certificate& c);
Json to_json(const CorrectionSchedule& s);
Json to_json(const CorrectionConfig& c);
Json to_json(const ScheduleFailure& e);
Json to_json(const CorrectionResult& r);
Json to_json(const StagedCorrection& s);

// ---- CSV ----------------------------------------------------------------------

namespace detail {

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

std::string scan_csv(const MaximalScan& s);
std::string weak_type_csv(const WeakTypeReport& r);
std::string series_csv(const std::string& column, const std::vector<double>& v);
std::string curve_csv(const std::vector<double>& t, const std::vector<double>& v);
std::string grid_csv(const GridFunction& g);

// ---- files --------------------------------------------------------------------

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace hcorr
