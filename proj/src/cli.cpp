#include "magspec/cli.hpp"

#include "magspec/distance.hpp"
#include "magspec/report.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace magspec {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int precision = 4) {
  std::ostringstream o;
  o.precision(precision);
  o << v;
  return o.str();
}

class Runner {
 public:
  Runner(const ScenarioConfig& cfg, std::ostream& log)
      : cfg_(cfg),
        log_(log),
        dir_(cfg.output.dir),
        field_(make_field(cfg.field)),
        ex_(field_, cfg.rule(), cfg.solver_options()) {
    fs::create_directories(dir_);
  }

  bool all_pass() const { return all_pass_; }

  void dispatch(const std::string& cmd) {
    static const std::map<std::string, void (Runner::*)()> table{
        {"sigma", &Runner::sigma},       {"gaps", &Runner::gaps},
        {"kset", &Runner::kset},         {"assemble", &Runner::assemble},
        {"eigs", &Runner::eigs},         {"ldos", &Runner::ldos},
        {"localize", &Runner::localize}, {"spectrum-check", &Runner::spectrum_check},
        {"gap-check", &Runner::gap_check}, {"all", &Runner::all}};
    (this->*table.at(cmd))();
  }

 private:
  const auto& sc() const { return cfg_.semiclassical; }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void emit(const std::string& stem, const std::string& command, Json body, const std::vector<std::string>& columns,
            const std::vector<std::vector<double>>& rows) {
    if (cfg_.output.wants("json")) {
      Json j = report_header(command, cfg_);
      for (auto& [k, v] : body.items()) j[k] = v;
      write_json(path(stem + ".json"), j);
    }
    if (cfg_.output.wants("csv")) write_csv(path(stem + ".csv"), columns, rows);
  }

  void step(const std::string& name, const std::string& summary) { log_ << "[ OK ] " << name << ": " << summary << "\n"; }

  void check(const std::string& stem, const CheckReport& r, Json body) {
    emit(stem, stem, std::move(body), r.columns, r.rows);
    all_pass_ = all_pass_ && r.pass;
    log_ << (r.pass ? "[PASS] " : "[FAIL] ") << r.check << ": " << r.verdict << "\n";
  }

  template <class T>
  const T& need(const std::optional<T>& v, const char* key) const {
    if (!v) throw PreconditionError(std::string("config key ") + key + " is not set");
    return *v;
  }

  const SigmaApprox& region_sigma() {
    if (!region_sigma_) {
      const Box region = cfg_.domain.sigma_region ? *cfg_.domain.sigma_region : cfg_.field_domain();
      region_sigma_ = sample_sigma(field_, region, sc().lmax, cfg_.domain.sigma_step);
    }
    return *region_sigma_;
  }

  // Sampled over the largest lattice box, as the checks require.
  const SigmaApprox& lattice_sigma() {
    if (!lattice_sigma_) {
      const double hmax = *std::max_element(sc().ladder.begin(), sc().ladder.end());
      lattice_sigma_ = sample_sigma(field_, ex_.rule().box(hmax), sc().lmax, cfg_.domain.sigma_step);
    }
    return *lattice_sigma_;
  }

  void sigma() {
    const SigmaApprox& sa = region_sigma();
    std::vector<std::vector<double>> rows;
    std::string text;
    for (const auto& iv : sa.intervals) {
      rows.push_back({iv.lo, iv.hi});
      text += (text.empty() ? "" : " u ") + std::string("[") + fixed(iv.lo) + ", " + fixed(iv.hi) + "]";
    }
    emit("sigma", "sigma", Json{{"sigma", to_json(sa)}}, {"lo", "hi"}, rows);
    step("sigma", text + " (rho " + fixed(sa.covering_radius, 3) + ")");
  }

  void gaps() {
    const SigmaApprox& sa = region_sigma();
    const auto g = find_gaps(sa, 0.0);
    std::vector<std::vector<double>> rows;
    Json jg = Json::array();
    for (const auto& iv : g) {
      rows.push_back({iv.lo, iv.hi, iv.width()});
      jg.push_back(to_json(iv));
    }
    emit("gaps", "gaps", Json{{"gaps", jg}, {"sigma", to_json(sa)}}, {"lo", "hi", "width"}, rows);
    step("gaps", std::to_string(g.size()) + " certified gap(s) below " + fixed(sa.lmax));
  }

  void kset() {
    const Interval ab = need(sc().interval, "semiclassical.interval");
    const NodeGrid grid = NodeGrid::covering(cfg_.field_domain(), cfg_.domain.kset_step);
    const KSetMask km = magspec::kset(field_, ab, grid, grid.spacing.maxCoeff());
    std::vector<std::vector<double>> rows;
    std::vector<std::string> cols;
    for (int j = 0; j < grid.dim(); ++j) cols.push_back("x" + std::to_string(j + 1));
    cols.push_back("in_K");
    cols.push_back("distance");
    Eigen::VectorXd dist = Eigen::VectorXd::Constant(grid.size(), std::numeric_limits<double>::quiet_NaN());
    if (!km.empty()) dist = distance_transform(km).values;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const Point x = grid.node(i);
      std::vector<double> r(x.data(), x.data() + x.size());
      r.push_back(km.mask[i]);
      r.push_back(dist[i]);
      rows.push_back(std::move(r));
    }
    emit("kset", "kset", Json{{"kset", to_json(km)}}, cols, rows);
    step("kset", std::to_string(km.count()) + " of " + std::to_string(grid.size()) + " nodes, " +
                     (km.compact_flag ? "compact" : "touches the domain boundary"));
  }

  void assemble() {
    std::vector<std::vector<double>> rows;
    for (double h : sc().ladder) {
      const LatticeOperator& op = ex_.op(h);
      rows.push_back({h, op.grid.h.maxCoeff(), static_cast<double>(op.size()),
                      static_cast<double>(op.matrix.nonZeros()),
                      static_cast<double>(hermiticity_violations(op.matrix)), op.norm_bound(),
                      op.validity_ceiling()});
      if (cfg_.output.matrix) write_matrix_coo(op, path("matrix_hbar" + format_double(h) + ".coo"));
    }
    emit("assemble", "assemble", Json::object(),
         {"hbar", "spacing", "nodes", "nonzeros", "hermiticity_violations", "norm_bound", "validity_ceiling"}, rows);
    std::string text;
    for (const auto& r : rows) text += (text.empty() ? "" : ", ") + fixed(r[2], 8) + " nodes";
    step("assemble", text);
  }

  void eigs() {
    std::vector<std::vector<double>> rows;
    bool complete = true;
    std::string text;
    for (double h : sc().ladder) {
      EigenWindowResult ew;
      try {
        ew = ex_.eigs(h, sc().window);
      } catch (const ConvergenceError&) {
        ew = eigs_window(ex_.op(h), sc().window, cfg_.solver_options());
      }
      complete = complete && ew.complete_flag;
      const double maxres = ew.count() ? ew.residuals.maxCoeff() : 0.0;
      rows.push_back({h, static_cast<double>(ew.count()), static_cast<double>(ew.expected),
                      ew.complete_flag ? 1.0 : 0.0, maxres, ew.tol});
      if (cfg_.output.wants("csv")) write_eigenvalues_csv(ew, path("eigs_hbar" + format_double(h) + ".csv"));
      if (cfg_.output.eigenvectors) write_eigenvectors_binary(ew, path("eigvecs_hbar" + format_double(h) + ".bin"));
      text += (text.empty() ? "" : ", ") + std::to_string(ew.count()) + "/" + std::to_string(ew.expected);
    }
    emit("eigs", "eigs", Json{{"window", to_json(sc().window)}, {"complete", complete}},
         {"hbar", "count", "expected", "complete", "max_residual", "tol"}, rows);
    all_pass_ = all_pass_ && complete;
    log_ << (complete ? "[ OK ] " : "[FAIL] ") << "eigs: " << text << " eigenpairs found/expected\n";
  }

  void ldos() {
    bool any = false;
    if (sc().phi && !sc().points.empty()) {
      any = true;
      const auto r = check_ldos_leading(ex_, sc().phi->make(), cfg_.points(), sc().ladder, sc().ldos_tol);
      check("ldos-leading", r, to_json(r));
    }
    if (sc().gap_phi && !sc().points.empty()) {
      any = true;
      const auto r = check_ldos_gap(ex_, sc().gap_phi->make(), lattice_sigma(), cfg_.points(), sc().ladder,
                                    cfg_.solver.tol);
      check("ldos-gap", r, to_json(r));
    }
    if (sc().projector && sc().offdiag.size() == 2) {
      any = true;
      const auto& p = sc().offdiag;
      const auto r = check_offdiag_decay(ex_, *sc().projector, lattice_sigma(),
                                         Eigen::Map<const Eigen::VectorXd>(p[0].data(), p[0].size()),
                                         Eigen::Map<const Eigen::VectorXd>(p[1].data(), p[1].size()), sc().ladder);
      check("offdiag-decay", r, to_json(r));
    }
    if (!any) throw PreconditionError("ldos needs semiclassical.phi or gap_phi with points, or projector with offdiag");
  }

  void localize() {
    const auto r = check_localization(ex_, need(sc().interval, "semiclassical.interval"),
                                      need(sc().inner, "semiclassical.inner"), sc().ladder, sc().radii);
    check("localization", r, to_json(r));
  }

  void spectrum_check() {
    const auto r = check_spectrum_inclusion(ex_, lattice_sigma(), sc().ladder, need(sc().K, "semiclassical.K"));
    check("spectrum-inclusion", r, to_json(r));
  }

  void gap_check() {
    const auto r = check_gap_discreteness(ex_, need(sc().interval, "semiclassical.interval"),
                                          need(sc().inner, "semiclassical.inner"), sc().ladder,
                                          cfg_.probe_options());
    check("gap-discreteness", r, to_json(r));
  }

  void all() {
    sigma();
    gaps();
    if (sc().interval) kset();
    assemble();
    eigs();
    if ((sc().phi || sc().gap_phi) && !sc().points.empty()) ldos();
    else if (sc().projector && sc().offdiag.size() == 2) ldos();
    if (sc().interval) localize();
    if (sc().K) spectrum_check();
    if (sc().interval) gap_check();
  }

  const ScenarioConfig& cfg_;
  std::ostream& log_;
  fs::path dir_;
  FieldSpec field_;
  Experiment ex_;
  std::optional<SigmaApprox> region_sigma_;
  std::optional<SigmaApprox> lattice_sigma_;
  bool all_pass_ = true;
};

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const AmbiguousRankError*>(&e)) return "ambiguous-rank";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal";
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"sigma",    "kset",           "gaps",     "assemble", "eigs",
                                              "ldos",     "localize",       "spectrum-check",
                                              "gap-check", "all"};
  return names;
}

std::string write_failure(const std::string& dir, const std::string& command, const std::exception& e) {
  Json j;
  j["status"] = "error";
  j["command"] = command;
  j["type"] = error_type(e);
  j["message"] = e.what();
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) j["errors"] = ce->errors();
  j["timestamp"] = timestamp_utc();
  if (!dir.empty()) {
    try {
      fs::create_directories(dir);
      write_json((fs::path(dir) / "failure.json").string(), j);
    } catch (const std::exception&) {
    }
  }
  return j.dump();
}

int run(const std::string& subcommand, const ScenarioConfig& cfg, std::ostream& log) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) return kExitUsage;
  try {
    Runner r(cfg, log);
    r.dispatch(subcommand);
    return r.all_pass() ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    log << "[ERR ] " << subcommand << ": " << write_failure(cfg.output.dir, subcommand, e) << "\n";
    return kExitError;
  }
}

}  // namespace magspec
