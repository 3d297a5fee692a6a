#include "bqs/scenario_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bqs/errors.hpp"

namespace bqs {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawEntry {
  std::string value;
  int line;
};

std::map<std::string, RawEntry> tokenize(const std::string& text) {
  std::map<std::string, RawEntry> raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' on line " + std::to_string(lineno),
                        lineno);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("empty key on line " + std::to_string(lineno), lineno);
    for (char ch : key)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '_')
        throw ConfigError("invalid character in key '" + key + "' on line " +
                              std::to_string(lineno),
                          lineno, key);
    if (raw.count(key))
      throw ConfigError("duplicate key '" + key + "' on line " + std::to_string(lineno),
                        lineno, key);
    raw[key] = {value, lineno};
  }
  return raw;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, RawEntry> raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  Real real(const std::string& key, Real fallback) {
    if (!has(key)) return fallback;
    return parse_real(key, take(key));
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const RawEntry e = take(key);
    try {
      std::size_t pos = 0;
      const int v = std::stoi(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + e.value + "'",
                        e.line, key);
    }
  }

  std::string text(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    return take(key).value;
  }

  std::vector<Real> real_list(const std::string& key, std::vector<Real> fallback) {
    if (!has(key)) return fallback;
    const RawEntry e = take(key);
    std::vector<Real> out;
    std::istringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty())
        throw ConfigError("key '" + key + "': empty list element", e.line, key);
      out.push_back(parse_real(key, {item, e.line}));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list", e.line, key);
    return out;
  }

  std::vector<int> int_list(const std::string& key, std::vector<int> fallback) {
    if (!has(key)) return fallback;
    const RawEntry e = take(key);
    std::vector<int> out;
    std::istringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      try {
        std::size_t pos = 0;
        const int v = std::stoi(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("trailing");
        out.push_back(v);
      } catch (...) {
        throw ConfigError("key '" + key + "': expected integers, got '" + item + "'",
                          e.line, key);
      }
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list", e.line, key);
    return out;
  }

  void finish() const {
    for (const auto& [key, entry] : raw_)
      if (!consumed_.count(key))
        throw ConfigError("unknown key '" + key + "' on line " + std::to_string(entry.line),
                          entry.line, key);
  }

 private:
  RawEntry take(const std::string& key) {
    consumed_.insert(key);
    return raw_.at(key);
  }

  static Real parse_real(const std::string& key, const RawEntry& e) {
    try {
      std::size_t pos = 0;
      const Real v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      throw ConfigError("key '" + key + "': expected a number, got '" + e.value + "'",
                        e.line, key);
    }
  }

  std::map<std::string, RawEntry> raw_;
  std::set<std::string> consumed_;
};

InitialDataConfig read_initial(Reader& r, const std::string& prefix) {
  InitialDataConfig d;
  d.kind = r.text(prefix + ".kind", d.kind);
  d.amplitude = r.real(prefix + ".amplitude", d.amplitude);
  d.width = r.real(prefix + ".width", d.width);
  d.center = r.real_list(prefix + ".center", {});
  d.mode = r.int_list(prefix + ".mode", {});
  d.path = r.text(prefix + ".path", {});
  static const std::set<std::string> kinds{"zero", "gaussian", "mode", "file"};
  if (!kinds.count(d.kind))
    throw ConfigError("key '" + prefix + ".kind': unknown kind '" + d.kind + "'", -1,
                      prefix + ".kind");
  if (d.kind == "file" && d.path.empty())
    throw ConfigError("key '" + prefix + ".path': required for kind = file", -1,
                      prefix + ".path");
  if (d.kind == "gaussian" && !(d.width > 0.0))
    throw ConfigError("key '" + prefix + ".width': must be positive", -1,
                      prefix + ".width");
  return d;
}

void validate(ScenarioConfig& c) {
  if (c.n_dims < 1 || c.n_dims > 3)
    throw ConfigError("key 'grid.n_dims': must be 1, 2 or 3", -1, "grid.n_dims");
  if (static_cast<int>(c.points.size()) == 1 && c.n_dims > 1)
    c.points.assign(static_cast<std::size_t>(c.n_dims), c.points[0]);
  if (static_cast<int>(c.half_widths.size()) == 1 && c.n_dims > 1)
    c.half_widths.assign(static_cast<std::size_t>(c.n_dims), c.half_widths[0]);
  if (static_cast<int>(c.points.size()) != c.n_dims)
    throw ConfigError("key 'grid.points': need one entry (or one per axis)", -1,
                      "grid.points");
  if (static_cast<int>(c.half_widths.size()) != c.n_dims)
    throw ConfigError("key 'grid.half_width': need one entry (or one per axis)", -1,
                      "grid.half_width");
  for (int nPts : c.points)
    if (nPts < 4 || (nPts & (nPts - 1)) != 0)
      throw ConfigError("key 'grid.points': entries must be powers of two >= 4", -1,
                        "grid.points");
  for (Real w : c.half_widths)
    if (!(w > 0.0))
      throw ConfigError("key 'grid.half_width': entries must be positive", -1,
                        "grid.half_width");

  if (!c.elliptic_coeffs.empty() &&
      static_cast<int>(c.elliptic_coeffs.size()) != c.n_dims * c.n_dims)
    throw ConfigError("key 'elliptic.coeffs': need n_dims^2 row-major entries", -1,
                      "elliptic.coeffs");

  if (c.operator_kind != "scalar_symbol" && c.operator_kind != "matrix")
    throw ConfigError("key 'operator.kind': must be scalar_symbol or matrix", -1,
                      "operator.kind");
  if (c.operator_kind == "scalar_symbol" && c.operator_symbol != "minus_laplacian" &&
      c.operator_symbol != "constant")
    throw ConfigError("key 'operator.symbol': must be minus_laplacian or constant", -1,
                      "operator.symbol");
  if (c.operator_kind == "matrix") {
    if (c.operator_size < 1)
      throw ConfigError("key 'operator.size': must be >= 1", -1, "operator.size");
    if (!c.operator_g.empty() &&
        static_cast<int>(c.operator_g.size()) != c.operator_size)
      throw ConfigError("key 'operator.g': need one weight per component (" +
                            std::to_string(c.operator_size) + ")",
                        -1, "operator.g");
    if (!c.operator_matrix.empty() &&
        static_cast<int>(c.operator_matrix.size()) != c.operator_size * c.operator_size)
      throw ConfigError("key 'operator.matrix': need size^2 row-major entries", -1,
                        "operator.matrix");
  }

  static const std::set<std::string> nls{"zero", "quadratic", "cubic", "quadratic_cubic",
                                         "coupled_poly"};
  if (!nls.count(c.nonlinearity))
    throw ConfigError("key 'nonlinearity.name': unknown nonlinearity '" + c.nonlinearity +
                          "'",
                      -1, "nonlinearity.name");
  if (c.nonlinearity == "coupled_poly" && c.nl_coupling.empty())
    throw ConfigError("key 'nonlinearity.coupling': required for coupled_poly", -1,
                      "nonlinearity.coupling");
  if (c.nonlinearity == "coupled_poly" && c.operator_kind != "matrix")
    throw ConfigError("key 'nonlinearity.name': coupled_poly requires a matrix operator", -1,
                      "nonlinearity.name");

  if (!(c.p > 1.0))
    throw ConfigError("key 'exponents.p': must be > 1", -1, "exponents.p");
  if (!(c.q_inner >= 1.0))
    throw ConfigError("key 'exponents.q_inner': must be >= 1", -1, "exponents.q_inner");
  if (!(c.s_norm >= 0.0))
    throw ConfigError("key 'exponents.s_norm': must be >= 0", -1, "exponents.s_norm");
  if (c.s_norm <= static_cast<Real>(c.n_dims) / c.p)
    c.warnings.push_back("s_norm <= n/p: the sup norm is not controlled by the Sobolev "
                         "norm at these exponents");

  if (!(c.horizon > 0.0))
    throw ConfigError("key 'solver.horizon': must be positive", -1, "solver.horizon");
  if (c.steps_per_window < 2)
    throw ConfigError("key 'solver.steps_per_window': must be >= 2", -1,
                      "solver.steps_per_window");
  if (!(c.tol > 0.0))
    throw ConfigError("key 'solver.tol': must be positive", -1, "solver.tol");
  if (c.max_iters < 1)
    throw ConfigError("key 'solver.max_iters': must be >= 1", -1, "solver.max_iters");
  if (!(c.c0 > 0.0) || !(c.c1 > 0.0))
    throw ConfigError("key 'solver.c0'/'solver.c1': must be positive", -1, "solver.c0");
  if (c.snapshot_stride < 0)
    throw ConfigError("key 'output.snapshot_stride': must be >= 0", -1,
                      "output.snapshot_stride");
  if (c.snapshot_stride > 0 && c.snapshot_prefix.empty())
    throw ConfigError("key 'output.snapshot_prefix': required when snapshots are on", -1,
                      "output.snapshot_prefix");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  Reader r(tokenize(text));
  ScenarioConfig c;

  // scenario presets fill operator defaults; explicit keys override
  const std::string scenario = r.text("scenario", "");
  if (!scenario.empty()) {
    if (scenario == "imbq_scalar") {
      c.operator_kind = "scalar_symbol";
      c.operator_symbol = "minus_laplacian";
    } else if (scenario == "system") {
      c.operator_kind = "matrix";
    } else {
      throw ConfigError("key 'scenario': unknown scenario '" + scenario + "'", -1,
                        "scenario");
    }
  }

  c.n_dims = r.integer("grid.n_dims", c.n_dims);
  c.points = r.int_list("grid.points", c.points);
  c.half_widths = r.real_list("grid.half_width", c.half_widths);
  c.elliptic_coeffs = r.real_list("elliptic.coeffs", {});

  c.operator_kind = r.text("operator.kind", c.operator_kind);
  c.operator_symbol = r.text("operator.symbol", c.operator_symbol);
  c.operator_constant = r.real("operator.constant", c.operator_constant);
  c.operator_size = r.integer("operator.size", c.operator_size);
  c.operator_g = r.real_list("operator.g", {});
  c.operator_s_weight = r.real("operator.s_weight", c.operator_s_weight);
  c.operator_matrix = r.real_list("operator.matrix", {});

  c.nonlinearity = r.text("nonlinearity.name", c.nonlinearity);
  c.nl_sign = r.real("nonlinearity.sign", c.nl_sign);
  c.nl_c2 = r.real("nonlinearity.c2", c.nl_c2);
  c.nl_c3 = r.real("nonlinearity.c3", c.nl_c3);
  c.nl_coupling = r.text("nonlinearity.coupling", {});

  c.phi = read_initial(r, "initial.phi");
  c.psi = read_initial(r, "initial.psi");

  c.p = r.real("exponents.p", c.p);
  c.q_inner = r.real("exponents.q_inner", c.q_inner);
  c.s_norm = r.real("exponents.s_norm", c.s_norm);

  c.horizon = r.real("solver.horizon", c.horizon);
  c.dt = r.real("solver.dt", c.dt);
  c.steps_per_window = r.integer("solver.steps_per_window", c.steps_per_window);
  c.tol = r.real("solver.tol", c.tol);
  c.max_iters = r.integer("solver.max_iters", c.max_iters);
  c.blowup_threshold = r.real("solver.blowup_threshold", c.blowup_threshold);
  c.c0 = r.real("solver.c0", c.c0);
  c.c1 = r.real("solver.c1", c.c1);

  c.check_c0 = r.real("check.c0", c.check_c0);
  c.check_omega = r.real("check.omega", c.check_omega);
  c.check_samples = r.integer("check.samples", c.check_samples);

  c.csv_path = r.text("output.csv", {});
  c.report_path = r.text("output.report", {});
  c.snapshot_prefix = r.text("output.snapshot_prefix", {});
  c.snapshot_stride = r.integer("output.snapshot_stride", c.snapshot_stride);

  r.finish();
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bqs
