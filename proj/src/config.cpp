#include "magspec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace magspec {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_int(const std::string& s) {
  Int v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

std::optional<std::vector<double>> to_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    auto v = to_double(item);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Parser {
 public:
  explicit Parser(const std::string& text) { scan(text); }

  void error(int line, const std::string& key, const std::string& msg) {
    errors_.push_back({line, key + ": " + msg});
  }

  Entry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void get(const std::string& key, double& out) {
    if (Entry* e = find(key)) {
      if (auto v = to_double(e->value))
        out = *v;
      else
        error(e->line, key, "expected a number, got '" + e->value + "'");
    }
  }

  void get(const std::string& key, std::optional<double>& out) {
    if (find(key)) {
      double v = 0.0;
      get(key, v);
      out = v;
    }
  }

  template <class Int>
    requires std::is_integral_v<Int>
  void get(const std::string& key, Int& out) {
    if (Entry* e = find(key)) {
      if (auto v = to_int<Int>(e->value))
        out = *v;
      else
        error(e->line, key, "expected an integer, got '" + e->value + "'");
    }
  }

  void get(const std::string& key, bool& out) {
    if (Entry* e = find(key)) {
      if (e->value == "true")
        out = true;
      else if (e->value == "false")
        out = false;
      else
        error(e->line, key, "expected true or false, got '" + e->value + "'");
    }
  }

  void get(const std::string& key, std::string& out) {
    if (Entry* e = find(key)) {
      if (e->value.empty())
        error(e->line, key, "empty value");
      else
        out = e->value;
    }
  }

  void get(const std::string& key, std::vector<double>& out) {
    if (Entry* e = find(key)) {
      if (auto v = to_list(e->value))
        out = *v;
      else
        error(e->line, key, "expected a comma-separated list of numbers, got '" + e->value + "'");
    }
  }

  void get(const std::string& key, std::vector<std::string>& out) {
    if (Entry* e = find(key)) out = split(e->value, ',');
  }

  void get(const std::string& key, Interval& out) {
    if (Entry* e = find(key)) {
      auto v = to_list(e->value);
      if (!v || v->size() != 2) {
        error(e->line, key, "expected 'lo, hi', got '" + e->value + "'");
        return;
      }
      out = {(*v)[0], (*v)[1]};
    }
  }

  void get(const std::string& key, std::optional<Interval>& out) {
    if (find(key)) {
      Interval iv;
      const std::size_t before = errors_.size();
      get(key, iv);
      if (errors_.size() == before) out = iv;
    }
  }

  void get(const std::string& key, std::vector<std::vector<double>>& out) {
    if (Entry* e = find(key)) {
      out.clear();
      for (const auto& item : split(e->value, ';')) {
        auto v = to_list(item);
        if (!v) {
          error(e->line, key, "expected points 'x1, x2; y1, y2', got '" + e->value + "'");
          out.clear();
          return;
        }
        out.push_back(*v);
      }
    }
  }

  // "lo, hi" for a cube or "lo1, hi1, lo2, hi2, ..." per axis.
  void get_box(const std::string& key, int dim, std::optional<Box>& out) {
    if (Entry* e = find(key)) {
      auto v = to_list(e->value);
      if (!v || (v->size() != 2 && v->size() != 2 * static_cast<std::size_t>(dim))) {
        error(e->line, key, "expected 'lo, hi' or one 'lo, hi' pair per axis, got '" + e->value + "'");
        return;
      }
      Eigen::VectorXd lo(dim), hi(dim);
      for (int j = 0; j < dim; ++j) {
        const std::size_t o = v->size() == 2 ? 0 : 2 * j;
        lo[j] = (*v)[o];
        hi[j] = (*v)[o + 1];
        if (!(lo[j] < hi[j])) {
          error(e->line, key, "upper end below lower end on axis " + std::to_string(j + 1));
          return;
        }
      }
      out = Box(lo, hi);
    }
  }

  void get_phi(const std::string& key, std::optional<PhiConfig>& out) {
    if (Entry* e = find(key)) {
      const auto w = words(e->value);
      if (w.size() != 3 && w.size() != 5) {
        error(e->line, key, "expected 'kind center width [support_lo support_hi]', got '" + e->value + "'");
        return;
      }
      PhiConfig p;
      p.kind = w[0];
      std::vector<double> nums;
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto v = to_double(w[i]);
        if (!v) {
          error(e->line, key, "expected a number, got '" + w[i] + "'");
          return;
        }
        nums.push_back(*v);
      }
      p.center = nums[0];
      p.width = nums[1];
      if (nums.size() == 4) p.support = Interval{nums[2], nums[3]};
      out = p;
    }
  }

  void field_entries(FieldConfig& f) {
    for (auto& [key, e] : entries_) {
      if (key.rfind("field.", 0) != 0) continue;
      const std::string name = key.substr(6);
      if (name.size() >= 2 && name[0] == 'B' && std::isdigit(static_cast<unsigned char>(name[1]))) {
        int j = 0, k = 0;
        const auto us = name.find('_');
        if (us != std::string::npos) {
          auto a = to_int<int>(name.substr(1, us - 1));
          auto b = to_int<int>(name.substr(us + 1));
          if (a && b) j = *a, k = *b;
        } else if (name.size() == 3 && std::isdigit(static_cast<unsigned char>(name[2]))) {
          j = name[1] - '0';
          k = name[2] - '0';
        }
        if (j < 1 || k < 1 || j >= k) {
          e.used = true;
          error(e.line, key, "field entries are written B<j><k> with 1 <= j < k");
          continue;
        }
        e.used = true;
        f.B_entries[{j, k}] = e.value;
      } else if (name.size() >= 2 && name[0] == 'A' && std::isdigit(static_cast<unsigned char>(name[1]))) {
        auto j = to_int<int>(name.substr(1));
        e.used = true;
        if (!j || *j < 1) {
          error(e.line, key, "potential entries are written A<j> with j >= 1");
          continue;
        }
        f.A_entries[*j] = e.value;
      }
    }
  }

  void unknown_keys() {
    for (const auto& [key, e] : entries_)
      if (!e.used) error(e.line, key, "unknown key");
  }

  std::vector<std::string> sorted_errors() {
    std::stable_sort(errors_.begin(), errors_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (const auto& [line, msg] : errors_)
      out.push_back(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    return out;
  }

 private:
  void scan(const std::string& text) {
    static const std::set<std::string> sections{"field", "domain", "semiclassical", "solver", "output"};
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') {
          errors_.push_back({line, "malformed section header '" + s + "'"});
          continue;
        }
        section = trim(s.substr(1, s.size() - 2));
        if (!sections.count(section)) {
          errors_.push_back({line, "unknown section [" + section + "]"});
          section = "?";
        }
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        errors_.push_back({line, "expected 'key = value', got '" + s + "'"});
        continue;
      }
      if (section.empty()) {
        errors_.push_back({line, "key outside of any section"});
        continue;
      }
      if (section == "?") continue;
      const std::string key = section + "." + trim(s.substr(0, eq));
      if (entries_.count(key)) {
        errors_.push_back({line, key + ": duplicate key (first on line " + std::to_string(entries_[key].line) + ")"});
        continue;
      }
      entries_[key] = {trim(s.substr(eq + 1)), line, false};
    }
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::pair<int, std::string>> errors_;
};

bool inside(const Interval& inner, const Interval& outer) { return inner.lo >= outer.lo && inner.hi <= outer.hi; }

std::string fmt_interval(const Interval& iv) { return format_double(iv.lo) + ", " + format_double(iv.hi); }

std::string fmt_list(const std::vector<double>& v, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + format_double(v[i]);
  return s;
}

std::string fmt_box(const Box& b) {
  std::vector<double> v;
  for (int j = 0; j < b.dim(); ++j) {
    v.push_back(b.lo[j]);
    v.push_back(b.hi[j]);
  }
  return fmt_list(v);
}

std::string fmt_phi(const PhiConfig& p) {
  std::string s = p.kind + " " + format_double(p.center) + " " + format_double(p.width);
  if (p.support) s += " " + format_double(p.support->lo) + " " + format_double(p.support->hi);
  return s;
}

std::string fmt_points(const std::vector<std::vector<double>>& pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? "; " : "") + fmt_list(pts[i]);
  return s;
}

void validate(Parser& P, ScenarioConfig& c) {
  auto err = [&](const std::string& key, const std::string& msg) { P.error(P.line_of(key), key, msg); };
  const int d = c.field.dim;

  std::optional<FieldSpec> fs;
  try {
    fs.emplace(make_field(c.field));
  } catch (const Error& e) {
    err("field.family", e.what());
  }

  auto& sc = c.semiclassical;
  if (sc.ladder.size() < 3) err("semiclassical.hbar", "a ladder needs at least three values");
  for (double h : sc.ladder)
    if (!(h > 0.0)) err("semiclassical.hbar", "values must be positive");
  {
    auto sorted = sc.ladder;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      err("semiclassical.hbar", "values must be distinct");
  }
  if (!(sc.window.lo < sc.window.hi)) err("semiclassical.window", "upper end below lower end");
  if (!(sc.lmax > 0.0)) err("semiclassical.lmax", "must be positive");
  if (sc.K && !(*sc.K > 0.0)) err("semiclassical.K", "must be positive");
  if (sc.interval && !(sc.interval->lo < sc.interval->hi)) err("semiclassical.interval", "b < a");
  if (sc.inner) {
    if (!(sc.inner->lo < sc.inner->hi)) err("semiclassical.inner", "b1 < a1");
    if (!sc.interval)
      err("semiclassical.inner", "needs semiclassical.interval");
    else if (!(sc.inner->lo > sc.interval->lo && sc.inner->hi < sc.interval->hi))
      err("semiclassical.inner", "must lie strictly inside semiclassical.interval");
  }
  if (sc.interval && !sc.inner) err("semiclassical.interval", "needs semiclassical.inner");
  for (const char* key : {"semiclassical.phi", "semiclassical.gap_phi"}) {
    const auto& p = std::string(key) == "semiclassical.phi" ? sc.phi : sc.gap_phi;
    if (!p) continue;
    try {
      const TestFunction tf = p->make();
      if (!inside(tf.support(), sc.window)) err(key, "support leaves semiclassical.window");
    } catch (const Error& e) {
      err(key, e.what());
    }
  }
  if (!(sc.ldos_tol > 0.0)) err("semiclassical.ldos_tol", "must be positive");
  for (const auto& p : sc.points)
    if (static_cast<int>(p.size()) != d) {
      err("semiclassical.points", "every point needs " + std::to_string(d) + " coordinates");
      break;
    }
  if (sc.radii.empty()) err("semiclassical.radii", "needs at least one radius");
  for (std::size_t i = 0; i < sc.radii.size(); ++i)
    if (!(sc.radii[i] >= 0.0) || (i && sc.radii[i] < sc.radii[i - 1])) {
      err("semiclassical.radii", "radii must be nonnegative and nondecreasing");
      break;
    }
  if (sc.projector) {
    if (!(sc.projector->lo < sc.projector->hi)) err("semiclassical.projector", "upper end below lower end");
    if (!inside(*sc.projector, sc.window)) err("semiclassical.projector", "leaves semiclassical.window");
  }
  if (!sc.offdiag.empty()) {
    bool ok = sc.offdiag.size() == 2;
    for (const auto& p : sc.offdiag) ok = ok && static_cast<int>(p.size()) == d;
    if (!ok) err("semiclassical.offdiag", "expects two points of dimension " + std::to_string(d));
    if (!sc.projector) err("semiclassical.offdiag", "needs semiclassical.projector");
  }

  auto& dm = c.domain;
  if (dm.core && dm.core->dim() != d) err("domain.core", "dimension mismatch");
  if (dm.sigma_region && !c.field_domain().contains(*dm.sigma_region, 1e-12))
    err("domain.sigma_region", "leaves field.domain");
  if (!(dm.margin_sqrt_hbar >= 0.0)) err("domain.margin_sqrt_hbar", "must be nonnegative");
  if (!(dm.margin_fraction >= 0.0)) err("domain.margin_fraction", "must be nonnegative");
  if (!(dm.h_coeff > 0.0)) err("domain.h_coeff", "must be positive");
  if (!(dm.sigma_step > 0.0)) err("domain.sigma_step", "must be positive");
  if (!(dm.kset_step > 0.0)) err("domain.kset_step", "must be positive");

  auto& so = c.solver;
  if (!(so.tol > 0.0 && so.tol < 1e-2)) err("solver.tol", "must lie in (0, 1e-2)");
  if (so.max_restarts < 1) err("solver.max_restarts", "must be at least 1");
  if (so.block < 1) err("solver.block", "must be at least 1");
  if (so.slice_max < 8) err("solver.slice_max", "must be at least 8");
  if (so.node_cap < 1) err("solver.node_cap", "must be positive");
  if (so.probes < 0) err("solver.probes", "must be nonnegative");
  if (!(so.probe_radius >= 2.0)) err("solver.probe_radius", "probe support diameter must be at least 4 sqrt(hbar)");

  for (const auto& f : c.output.formats)
    if (f != "json" && f != "csv") err("output.formats", "unknown format '" + f + "'");
  if (c.output.dir.empty()) err("output.dir", "empty");

  // The lattice must fit inside the field domain and under the node cap on
  // every rung.
  if (fs && (!dm.core || dm.core->dim() == d) && dm.h_coeff > 0.0 && !sc.ladder.empty()) {
    const LatticeRule rule = c.rule();
    for (double h : sc.ladder) {
      if (!(h > 0.0)) continue;
      const Box b = rule.box(h);
      if (!c.field_domain().contains(b, 1e-9)) {
        err("domain.core", "lattice box at hbar " + format_double(h) + " leaves field.domain");
        break;
      }
      try {
        (void)rule.grid(h);
      } catch (const Error& e) {
        err("solver.node_cap", "hbar " + format_double(h) + ": " + e.what());
        break;
      }
    }
    // points must sit inside the smallest lattice box
    const Box smallest = rule.box(*std::min_element(sc.ladder.begin(), sc.ladder.end()));
    auto check_pts = [&](const char* key, const std::vector<std::vector<double>>& pts) {
      for (const auto& p : pts)
        if (static_cast<int>(p.size()) == d && !smallest.contains(Eigen::Map<const Eigen::VectorXd>(p.data(), d))) {
          err(key, "point outside the lattice box");
          return;
        }
    };
    check_pts("semiclassical.points", sc.points);
    check_pts("semiclassical.offdiag", sc.offdiag);
  }
}

}  // namespace

TestFunction PhiConfig::make() const {
  const Interval sup = support ? *support : Interval{center - width, center + width};
  return TestFunction::make(kind, center, width, sup);
}

bool OutputConfig::wants(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

Box ScenarioConfig::field_domain() const { return field.domain ? *field.domain : Box::centered(field.dim, 1.0); }

Box ScenarioConfig::core() const { return domain.core ? *domain.core : field_domain(); }

LatticeRule ScenarioConfig::rule() const {
  LatticeRule r;
  r.core = core();
  r.margin_sqrt_hbar = domain.margin_sqrt_hbar;
  r.margin_fraction = domain.margin_fraction;
  r.h_coeff = domain.h_coeff;
  r.h_exponent = domain.h_exponent;
  r.node_cap = solver.node_cap;
  return r;
}

SolverOptions ScenarioConfig::solver_options() const {
  SolverOptions o;
  o.rel_tol = solver.tol;
  o.block_size = solver.block;
  o.max_restarts = solver.max_restarts;
  o.slice_max = solver.slice_max;
  o.seed = solver.seed;
  return o;
}

ProbeOptions ScenarioConfig::probe_options() const {
  ProbeOptions p;
  p.count = solver.probes;
  p.seed = solver.seed;
  p.radius_sqrt_hbar = solver.probe_radius;
  return p;
}

std::vector<Point> ScenarioConfig::points() const {
  std::vector<Point> out;
  for (const auto& p : semiclassical.points) out.push_back(Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()));
  return out;
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : Error([&] {
        std::string s = "invalid config";
        for (const auto& e : errors) s += "\n  " + e;
        return s;
      }()),
      errors_(std::move(errors)) {}

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

ScenarioConfig parse_config_text(const std::string& text) {
  Parser P(text);
  ScenarioConfig c;

  auto& f = c.field;
  P.get("field.family", f.family);
  P.get("field.dim", f.dim);
  P.get("field.strengths", f.strengths);
  P.get("field.gauge", f.gauge);
  P.get("field.b0", f.b0);
  P.get("field.kappa", f.kappa);
  P.get("field.b_left", f.b_left);
  P.get("field.b_right", f.b_right);
  P.get("field.width", f.width);
  P.get("field.V", f.V);
  P.get("field.B_sup", f.B_sup);
  P.get("field.dB_sup", f.dB_sup);
  P.get("field.V_sup", f.V_sup);
  P.get("field.dV_sup", f.dV_sup);
  if (f.dim < 1 || f.dim > 16) {
    P.error(P.line_of("field.dim"), "field.dim", "must lie in 2..16");
    f.dim = 2;
  }
  P.get_box("field.domain", f.dim, f.domain);
  P.field_entries(f);

  auto& dm = c.domain;
  P.get_box("domain.core", f.dim, dm.core);
  P.get_box("domain.sigma_region", f.dim, dm.sigma_region);
  P.get("domain.margin_sqrt_hbar", dm.margin_sqrt_hbar);
  P.get("domain.margin_fraction", dm.margin_fraction);
  P.get("domain.h_coeff", dm.h_coeff);
  P.get("domain.h_exponent", dm.h_exponent);
  P.get("domain.sigma_step", dm.sigma_step);
  P.get("domain.kset_step", dm.kset_step);

  auto& sc = c.semiclassical;
  P.get("semiclassical.hbar", sc.ladder);
  P.get("semiclassical.window", sc.window);
  P.get("semiclassical.lmax", sc.lmax);
  P.get("semiclassical.K", sc.K);
  P.get("semiclassical.interval", sc.interval);
  P.get("semiclassical.inner", sc.inner);
  P.get_phi("semiclassical.phi", sc.phi);
  P.get_phi("semiclassical.gap_phi", sc.gap_phi);
  P.get("semiclassical.ldos_tol", sc.ldos_tol);
  P.get("semiclassical.points", sc.points);
  P.get("semiclassical.radii", sc.radii);
  P.get("semiclassical.projector", sc.projector);
  P.get("semiclassical.offdiag", sc.offdiag);

  auto& so = c.solver;
  P.get("solver.tol", so.tol);
  P.get("solver.max_restarts", so.max_restarts);
  P.get("solver.block", so.block);
  P.get("solver.slice_max", so.slice_max);
  P.get("solver.node_cap", so.node_cap);
  P.get("solver.seed", so.seed);
  P.get("solver.probes", so.probes);
  P.get("solver.probe_radius", so.probe_radius);

  auto& out = c.output;
  P.get("output.name", c.name);
  P.get("output.dir", out.dir);
  P.get("output.formats", out.formats);
  P.get("output.matrix", out.matrix);
  P.get("output.eigenvectors", out.eigenvectors);

  P.unknown_keys();
  auto errors = P.sorted_errors();
  if (errors.empty()) {
    validate(P, c);
    errors = P.sorted_errors();
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  auto num = [&](const std::string& k, double v) { kv(k, format_double(v)); };

  const auto& f = c.field;
  o << "[field]\n";
  kv("family", f.family);
  kv("dim", std::to_string(f.dim));
  kv("strengths", fmt_list(f.strengths));
  kv("gauge", f.gauge);
  num("b0", f.b0);
  num("kappa", f.kappa);
  num("b_left", f.b_left);
  num("b_right", f.b_right);
  num("width", f.width);
  kv("V", f.V);
  for (const auto& [jk, text] : f.B_entries) {
    const auto [j, k] = jk;
    kv(j < 10 && k < 10 ? "B" + std::to_string(j) + std::to_string(k)
                        : "B" + std::to_string(j) + "_" + std::to_string(k),
       text);
  }
  for (const auto& [j, text] : f.A_entries) kv("A" + std::to_string(j), text);
  if (f.B_sup) num("B_sup", *f.B_sup);
  if (f.dB_sup) num("dB_sup", *f.dB_sup);
  if (f.V_sup) num("V_sup", *f.V_sup);
  if (f.dV_sup) num("dV_sup", *f.dV_sup);
  if (f.domain) kv("domain", fmt_box(*f.domain));

  const auto& dm = c.domain;
  o << "\n[domain]\n";
  if (dm.core) kv("core", fmt_box(*dm.core));
  if (dm.sigma_region) kv("sigma_region", fmt_box(*dm.sigma_region));
  num("margin_sqrt_hbar", dm.margin_sqrt_hbar);
  num("margin_fraction", dm.margin_fraction);
  num("h_coeff", dm.h_coeff);
  num("h_exponent", dm.h_exponent);
  num("sigma_step", dm.sigma_step);
  num("kset_step", dm.kset_step);

  const auto& sc = c.semiclassical;
  o << "\n[semiclassical]\n";
  kv("hbar", fmt_list(sc.ladder));
  kv("window", fmt_interval(sc.window));
  num("lmax", sc.lmax);
  if (sc.K) num("K", *sc.K);
  if (sc.interval) kv("interval", fmt_interval(*sc.interval));
  if (sc.inner) kv("inner", fmt_interval(*sc.inner));
  if (sc.phi) kv("phi", fmt_phi(*sc.phi));
  if (sc.gap_phi) kv("gap_phi", fmt_phi(*sc.gap_phi));
  num("ldos_tol", sc.ldos_tol);
  if (!sc.points.empty()) kv("points", fmt_points(sc.points));
  kv("radii", fmt_list(sc.radii));
  if (sc.projector) kv("projector", fmt_interval(*sc.projector));
  if (!sc.offdiag.empty()) kv("offdiag", fmt_points(sc.offdiag));

  const auto& so = c.solver;
  o << "\n[solver]\n";
  num("tol", so.tol);
  kv("max_restarts", std::to_string(so.max_restarts));
  kv("block", std::to_string(so.block));
  kv("slice_max", std::to_string(so.slice_max));
  kv("node_cap", std::to_string(so.node_cap));
  kv("seed", std::to_string(so.seed));
  kv("probes", std::to_string(so.probes));
  num("probe_radius", so.probe_radius);

  o << "\n[output]\n";
  kv("name", c.name);
  kv("dir", c.output.dir);
  {
    std::string s;
    for (std::size_t i = 0; i < c.output.formats.size(); ++i) s += (i ? ", " : "") + c.output.formats[i];
    kv("formats", s);
  }
  kv("matrix", c.output.matrix ? "true" : "false");
  kv("eigenvectors", c.output.eigenvectors ? "true" : "false");
  return o.str();
}

}  // namespace magspec
