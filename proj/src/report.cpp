#include "magspec/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

namespace magspec {

namespace {

// NaN and infinities are not JSON numbers.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

Json to_json(const Interval& iv) { return Json::array({number(iv.lo), number(iv.hi)}); }

Json to_json(const ExpFit& fit) {
  Json j;
  j["rate"] = number(fit.rate);
  j["log_prefactor"] = number(fit.log_prefactor);
  j["rms_residual_log10"] = number(fit.rms_residual_log10);
  j["max_residual_log10"] = number(fit.max_residual_log10);
  return j;
}

Json to_json(const CheckReport& r) {
  Json j;
  j["check"] = r.check;
  j["claim"] = r.claim;
  j["pass"] = r.pass;
  j["verdict"] = r.verdict;
  j["notes"] = r.notes;
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = number(v);
  j["metrics"] = m;
  j["columns"] = r.columns;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(number(v));
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const LocalizationReport& r) {
  Json j = to_json(static_cast<const CheckReport&>(r));
  j["interval"] = to_json(r.interval);
  j["inner"] = to_json(r.inner);
  j["fit"] = r.fit ? to_json(*r.fit) : Json(nullptr);
  j["c"] = number(r.c);
  j["envelope_C"] = number(r.envelope_C);
  return j;
}

Json to_json(const SigmaApprox& sa) {
  Json j;
  Json iv = Json::array();
  for (const auto& i : sa.intervals) iv.push_back(to_json(i));
  j["intervals"] = iv;
  j["covering_radius"] = number(sa.covering_radius);
  j["lmax"] = number(sa.lmax);
  Json dom = Json::array();
  for (int k = 0; k < sa.domain.dim(); ++k) dom.push_back(Json::array({sa.domain.lo[k], sa.domain.hi[k]}));
  j["domain"] = dom;
  j["sample_step"] = number(sa.sample_step);
  j["lipschitz"] = number(sa.lipschitz);
  j["max_level_index"] = sa.max_level_index;
  return j;
}

Json to_json(const KSetMask& km) {
  Json j;
  j["interval"] = to_json(km.interval);
  j["nodes"] = km.grid.size();
  j["count"] = km.count();
  j["margin"] = number(km.margin);
  j["compact"] = km.compact_flag;
  j["grid_counts"] = km.grid.counts;
  return j;
}

Json report_header(const std::string& command, const ScenarioConfig& cfg) {
  Json j;
  j["command"] = command;
  j["scenario"] = cfg.name;
  j["timestamp"] = timestamp_utc();
  j["config"] = serialize_config(cfg);
  return j;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string csv_cell(double x) { return format_double(x); }

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::string> r;
    for (double v : row) r.push_back(csv_cell(v));
    cells.push_back(std::move(r));
  }
  write_csv(path, columns, cells);
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  auto out = open_out(path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << "\r\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
}

void write_json(const std::string& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

std::string timestamp_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace magspec
