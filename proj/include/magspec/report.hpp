#pragma once

#include "magspec/config.hpp"
#include "magspec/landau.hpp"
#include "magspec/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace magspec {

/// Insertion-ordered so files come out with a stable key order.
using Json = nlohmann::ordered_json;

Json to_json(const Interval& iv);
Json to_json(const ExpFit& fit);
Json to_json(const CheckReport& r);
Json to_json(const LocalizationReport& r);
Json to_json(const SigmaApprox& sa);
/// Summary only; the mask itself goes to CSV.
Json to_json(const KSetMask& km);

/// Common header of every report: command, timestamp and the config echo.
Json report_header(const std::string& command, const ScenarioConfig& cfg);

/// RFC 4180 quoting when a cell needs it.
std::string csv_cell(const std::string& s);
std::string csv_cell(double x);

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);
void write_json(const std::string& path, const Json& j);

/// Current UTC time, ISO 8601.
std::string timestamp_utc();

}  // namespace magspec
