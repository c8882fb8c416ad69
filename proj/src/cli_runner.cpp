#include "rgqm/cli_runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "rgqm/coupling_flow.hpp"
#include "rgqm/errors.hpp"
#include "rgqm/generalized_flow.hpp"
#include "rgqm/kinetic_flow.hpp"
#include "rgqm/lpa_flow.hpp"
#include "rgqm/seed_check.hpp"
#include "rgqm/spectrum_oracle.hpp"

namespace rgqm {

namespace {

using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Field lookup with the dotted path kept for error messages.
class Reader {
public:
  Reader(const json& root, std::string path) : j_(root), path_(std::move(path)) {}

  bool has(const char* key) const { return j_.is_object() && j_.contains(key) && !j_[key].is_null(); }
  std::string at(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  Reader child(const char* key) const {
    static const json empty = json::object();
    if (!has(key)) return Reader(empty, at(key));
    if (!j_[key].is_object()) throw ConfigError(at(key), "expected an object");
    return Reader(j_[key], at(key));
  }

  double number(const char* key, std::optional<double> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      throw ConfigError(at(key), "required field is missing");
    }
    if (!j_[key].is_number()) throw ConfigError(at(key), "expected a number");
    const double v = j_[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError(at(key), "must be finite");
    return v;
  }

  int integer(const char* key, std::optional<int> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      throw ConfigError(at(key), "required field is missing");
    }
    if (!j_[key].is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return j_[key].get<int>();
  }

  std::string text(const char* key, std::optional<std::string> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      throw ConfigError(at(key), "required field is missing");
    }
    if (!j_[key].is_string()) throw ConfigError(at(key), "expected a string");
    return j_[key].get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    if (!has(key) || !j_[key].is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j_[key]) {
      if (!v.is_number()) throw ConfigError(at(key), "expected an array of numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ConfigError(at(key), "must not be empty");
    return out;
  }

private:
  const json& j_;
  std::string path_;
};

void positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
}

std::string conv_name(FreqConvention c) {
  return c == FreqConvention::Laplacian ? "laplacian" : "paper";
}

class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header) : out_(p) {
    if (!out_) throw std::runtime_error("cannot write " + p.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
    out_ << "\r\n";
  }

private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  std::ofstream out_;
};

struct Outcome {
  json digest = json::object();
  json trace = json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> files;
};

double lpa_gap(const PotentialGrid& v0, const FlowParams& p) {
  const auto it = std::min_element(v0.values.begin(), v0.values.end());
  const int i = static_cast<int>(it - v0.values.begin());
  const double v2 = second_derivative(v0, i);
  if (!(v2 > 0.0)) return std::nan("");
  return p.hbar * std::sqrt(v2 / p.mass);
}

PotentialGrid initial_grid(const RunConfig& cfg) {
  const auto a = cfg.potential;
  return PotentialGrid::sample(
      [a](double x) {
        double s = 0.0;
        for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
        return s;
      },
      cfg.x_min, cfg.x_max, cfg.n_points);
}

void write_trace(const std::filesystem::path& dir, const FlowTrace& tr, Outcome& o) {
  CsvWriter w(dir / "lpa_trace.csv", {"m", "omega_sq", "v_min", "v_at_zero", "v2_at_zero"});
  for (const auto& s : tr.steps)
    w.row({std::to_string(s.m), format_double(s.omega_sq), format_double(s.v_min),
           format_double(s.v_at_zero), format_double(s.v2_at_zero)});
  o.files.push_back("lpa_trace.csv");
  o.trace["steps"] = tr.steps.size();
  o.trace["completed"] = tr.completed;
  o.trace["halted"] = tr.halted;
  for (const auto& w2 : tr.warnings) o.warnings.push_back(w2);
}

struct LpaResult {
  PotentialGrid v0;
  double e0_literal = 0.0;
  double e0 = 0.0;
  double gap = 0.0;
};

LpaResult run_lpa(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  const FlowParams p = cfg.params();
  std::pair<PotentialGrid, FlowTrace> r;
  try {
    r = run_lpa_flow(initial_grid(cfg), p);
  } catch (const ConvexityError& e) {
    if (e.trace) write_trace(dir, *e.trace, o);
    throw;
  }
  write_trace(dir, r.second, o);
  LpaResult res;
  res.v0 = r.first;
  res.e0_literal = ground_state_energy(r.first).energy;
  res.e0 = zero_mode_free_energy(r.first, p);
  res.gap = lpa_gap(r.first, p);
  return res;
}

void task_lpa(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  const LpaResult r = run_lpa(cfg, dir, o);
  CsvWriter w(dir / "potential.csv", {"x", "V0"});
  for (int i = 0; i < r.v0.n_points(); ++i) w.row({format_double(r.v0.x(i)), format_double(r.v0.values[i])});
  o.files.push_back("potential.csv");
  o.digest["E0"] = r.e0;
  o.digest["E0_literal"] = r.e0_literal;
  o.digest["gap"] = r.gap;
  if (cfg.cutoff > 0.0) {
    const PotentialGrid c = run_continuum_lpa(initial_grid(cfg), cfg.mass, cfg.cutoff, cfg.delta_k, cfg.params());
    o.digest["E0_continuum"] = ground_state_energy(c).energy;
  }
}

void task_couplings(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  AnharmonicSpec spec{cfg.mass, cfg.omega, cfg.lambda};
  if (cfg.echo.value("potential_source", "physics") == "coefficients")
    o.warnings.push_back("couplings task uses physics.{M, Omega, lambda}; potential coefficients ignored");
  const FamilyFlowResult r = run_family_flow(spec, cfg.max_order, cfg.params());
  CsvWriter w(dir / "tower.csv", {"n", "g"});
  for (std::size_t n = 0; n < r.tower.size(); ++n) w.row({std::to_string(n), format_double(r.tower[n])});
  o.files.push_back("tower.csv");
  o.digest["E0"] = r.spectrum.e0;
  o.digest["E0_literal"] = r.spectrum.e0_constrained;
  o.digest["gap"] = r.spectrum.gap;
}

void task_generalized(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  const FlowParams p = cfg.params();
  if (p.n_slices > 16) throw ConfigError("discretization.N", "generalized task needs N <= 16");
  std::vector<double> derivs(cfg.max_order + 1, 0.0);
  double fact = 1.0;
  for (int n = 0; n <= cfg.max_order; ++n) {
    if (n > 0) fact *= n;
    if (n < static_cast<int>(cfg.potential.size())) derivs[n] = cfg.potential[n] * fact;
  }
  CouplingTable full = CouplingTable::from_taylor(derivs, p.top_mode(), cfg.max_order);
  CouplingTable disp = CouplingTable::from_taylor(derivs, p.top_mode(), std::min(cfg.max_order, 6));
  for (int m = p.top_mode(); m >= 1; --m) {
    full = full_table_step(full, m, p);
    disp = display_table_step(disp, m, p);
  }
  std::ofstream(dir / "couplings.json") << full.to_json() << "\n";
  o.files.push_back("couplings.json");
  const double g00 = full.get({0, 0});
  o.digest["E0_literal"] = full.get({});
  o.digest["E0"] = zero_mode_completion(full.get({}), g00, p);
  o.digest["gap"] = p.hbar * std::sqrt(g00 / p.mass);
  o.digest["E0_display_literal"] = disp.get({});
}

void task_kinetic(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  if (!(cfg.cutoff > 0.0)) throw ConfigError("continuum.Lambda", "kinetic task needs a continuum cutoff");
  const KineticFunction zf(cfg.kinetic);
  const PotentialGrid z0 = PotentialGrid::sample([&](double x) { return zf.at(x); }, cfg.x_min,
                                                 cfg.x_max, cfg.n_points);
  const auto [u, z] = run_continuum_coupled(initial_grid(cfg), z0, cfg.cutoff, cfg.delta_k, cfg.params());
  CsvWriter w(dir / "kinetic.csv", {"x", "U", "Z"});
  for (int i = 0; i < u.n_points(); ++i)
    w.row({format_double(u.x(i)), format_double(u.values[i]), format_double(z.values[i])});
  o.files.push_back("kinetic.csv");
  o.digest["E0"] = ground_state_energy(u).energy;
  o.warnings.push_back("kinetic flow: source-term contribution omitted; constant-background system only");
}

std::vector<SpectrumResult> oracle_rows(const RunConfig& cfg) {
  const FlowParams p = cfg.params();
  const auto a = cfg.potential;
  auto v = [a](double x) {
    double s = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
    return s;
  };
  return {diag_hermite(a, cfg.basis_size, cfg.omega, p),
          diag_grid(v, cfg.x_min, cfg.x_max, std::max(cfg.n_points, 200), p)};
}

void task_oracle(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  const auto rows = oracle_rows(cfg);
  CsvWriter w(dir / "oracle.csv", {"method", "E0", "E1", "gap", "convergence"});
  const char* names[] = {"hermite", "grid"};
  for (int i = 0; i < 2; ++i)
    w.row({names[i], format_double(rows[i].e0), format_double(rows[i].e1), format_double(rows[i].gap),
           format_double(rows[i].convergence_estimate)});
  o.files.push_back("oracle.csv");
  o.digest["E0"] = rows[0].e0;
  o.digest["gap"] = rows[0].gap;
}

void task_compare(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  const auto oracles = oracle_rows(cfg);
  const LpaResult lpa = run_lpa(cfg, dir, o);
  const FamilyFlowResult fam =
      run_family_flow(AnharmonicSpec{cfg.mass, cfg.omega, cfg.lambda}, cfg.max_order, cfg.params());
  const double ref = oracles[0].e0;
  CsvWriter w(dir / "compare.csv", {"method", "E0", "gap", "discrepancy"});
  auto row = [&](const char* name, double e0, double gap) {
    w.row({name, format_double(e0), format_double(gap), format_double(e0 - ref)});
  };
  row("lpa", lpa.e0, lpa.gap);
  row("family_flow", fam.spectrum.e0, fam.spectrum.gap);
  row("hermite", oracles[0].e0, oracles[0].gap);
  row("grid", oracles[1].e0, oracles[1].gap);
  o.files.push_back("compare.csv");
  o.digest["E0"] = ref;
  o.digest["gap"] = oracles[0].gap;
  o.warnings.push_back("flow E0 values include the zero-mode integral; discrepancy is E0 - E0(hermite)");
}

void task_fq(const RunConfig& cfg, const std::filesystem::path& dir, Outcome& o) {
  const FlowParams p = cfg.params();
  DiscreteProbe probe = cfg.probe;
  probe.n_slices = p.n_slices;
  probe.u2 = cfg.shell.u2;
  probe.u3 = cfg.shell.u3;
  probe.u4 = cfg.shell.u4;
  const auto rows = fq_table(cfg.shell, cfg.q_max, cfg.q_steps, probe, p);
  CsvWriter w(dir / "fq.csv", {"q", "F_analytic", "F_quadrature", "F_discrete"});
  for (const auto& r : rows)
    w.row({format_double(r.q), format_double(r.analytic), format_double(r.quadrature),
           format_double(r.discrete)});
  o.files.push_back("fq.csv");
  const KinkEstimate k = kink_at_delta_k(cfg.shell, cfg.shell.delta_k * 1e-2);
  o.digest["kink_jump"] = k.jump();
  o.digest["F_discrete"] = rows.front().discrete;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Task task_from_string(const std::string& s) {
  static const std::pair<const char*, Task> names[] = {
      {"lpa", Task::Lpa},         {"couplings", Task::Couplings}, {"generalized", Task::Generalized},
      {"kinetic", Task::Kinetic}, {"oracle", Task::Oracle},       {"fq_demo", Task::FqDemo},
      {"compare", Task::Compare}};
  for (const auto& [n, t] : names)
    if (s == n) return t;
  throw ConfigError("task", "unknown task '" + s + "'");
}

std::string to_string(Task t) {
  switch (t) {
    case Task::Lpa: return "lpa";
    case Task::Couplings: return "couplings";
    case Task::Generalized: return "generalized";
    case Task::Kinetic: return "kinetic";
    case Task::Oracle: return "oracle";
    case Task::FqDemo: return "fq_demo";
    case Task::Compare: return "compare";
  }
  return "?";
}

FlowParams RunConfig::params() const {
  return FlowParams::from_beta(n_slices, beta, hbar, mass, convention);
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  const Reader r(root, "");
  RunConfig c;
  c.task = task_from_string(r.text("task"));

  const Reader phys = r.child("physics");
  c.mass = phys.number("M", 1.0);
  c.hbar = phys.number("hbar", 1.0);
  c.omega = phys.number("Omega", 1.0);
  c.lambda = phys.number("lambda", 0.0);
  positive(c.mass, phys.at("M"));
  positive(c.hbar, phys.at("hbar"));
  positive(c.omega, phys.at("Omega"));
  if (c.lambda < 0.0) throw ConfigError(phys.at("lambda"), "must be >= 0");

  bool from_physics = true;
  if (r.has("potential")) {
    const Reader pot = r.child("potential");
    if (pot.text("kind", "polynomial") != "polynomial")
      throw ConfigError(pot.at("kind"), "only 'polynomial' is supported");
    c.potential = pot.numbers("coefficients");
    from_physics = false;
  } else {
    c.potential = AnharmonicSpec{c.mass, c.omega, c.lambda}.polynomial();
  }

  const Reader disc = r.child("discretization");
  c.n_slices = disc.integer("N");
  if (c.n_slices < 2 || c.n_slices % 2 != 0) throw ConfigError(disc.at("N"), "must be even and >= 2");
  const bool has_eps = disc.has("epsilon");
  const bool has_beta = disc.has("beta");
  if (!has_eps && !has_beta) throw ConfigError(disc.at("epsilon"), "give epsilon or beta");
  if (has_eps) {
    c.epsilon = disc.number("epsilon");
    positive(c.epsilon, disc.at("epsilon"));
  }
  if (has_beta) {
    c.beta = disc.number("beta");
    positive(c.beta, disc.at("beta"));
  }
  if (has_eps && has_beta) {
    const double lhs = c.hbar * c.beta;
    const double rhs = (c.n_slices + 1) * c.epsilon;
    if (std::abs(lhs - rhs) > 1e-12 * std::max(lhs, rhs))
      throw ConfigError(disc.at("beta"), "inconsistent with epsilon: need hbar*beta = (N+1)*epsilon");
  } else if (has_eps) {
    c.beta = (c.n_slices + 1) * c.epsilon / c.hbar;
  } else {
    c.epsilon = c.hbar * c.beta / (c.n_slices + 1);
  }
  const std::string conv = disc.text("freq_convention", "laplacian");
  if (conv == "laplacian")
    c.convention = FreqConvention::Laplacian;
  else if (conv == "paper")
    c.convention = FreqConvention::PaperLiteral;
  else
    throw ConfigError(disc.at("freq_convention"), "expected 'laplacian' or 'paper'");

  const Reader grid = r.child("grid");
  c.x_min = grid.number("x_min", c.x_min);
  c.x_max = grid.number("x_max", c.x_max);
  c.n_points = grid.integer("n_points", c.n_points);
  if (!(c.x_max > c.x_min)) throw ConfigError(grid.at("x_max"), "must exceed x_min");
  if (c.n_points < 7) throw ConfigError(grid.at("n_points"), "must be >= 7");

  const Reader trunc = r.child("truncation");
  c.max_order = trunc.integer("max_order", 8);
  if (c.max_order < 2 || c.max_order % 2 != 0)
    throw ConfigError(trunc.at("max_order"), "must be even and >= 2");

  const Reader cont = r.child("continuum");
  if (cont.has("Lambda")) {
    c.cutoff = cont.number("Lambda");
    positive(c.cutoff, cont.at("Lambda"));
    c.delta_k = cont.number("delta_k", c.cutoff / std::pow(2.0, 20));
    positive(c.delta_k, cont.at("delta_k"));
    if (c.delta_k > c.cutoff) throw ConfigError(cont.at("delta_k"), "must not exceed Lambda");
  }

  const Reader kin = r.child("kinetic");
  if (kin.has("coefficients")) c.kinetic = kin.numbers("coefficients");
  else c.kinetic = {c.mass};

  const Reader sh = r.child("shell");
  c.shell.k = sh.number("k", 1.0);
  c.shell.delta_k = sh.number("delta_k", 1e-3);
  c.shell.u2 = sh.number("U2", 1.0);
  c.shell.u3 = sh.number("U3", 1.0);
  c.shell.u4 = sh.number("U4", 0.0);
  c.shell.z = sh.number("Z", 1.0);
  c.shell.mass = c.mass;
  c.q_max = sh.number("q_max", 2.0 * c.shell.delta_k);
  c.q_steps = sh.integer("q_steps", 40);
  if (c.task == Task::FqDemo) {
    try {
      c.shell.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(sh.at("delta_k"), e.what());
    }
    if (c.q_steps < 1) throw ConfigError(sh.at("q_steps"), "must be >= 1");
  }
  const Reader pr = r.child("probe");
  c.probe.m = pr.integer("m", std::min(2, c.n_slices / 2));
  c.probe.q = pr.integer("q", 1);

  const Reader orc = r.child("oracle");
  c.basis_size = orc.integer("basis_size", 200);
  if (c.basis_size < 10) throw ConfigError(orc.at("basis_size"), "must be >= 10");

  const Reader out = r.child("output");
  c.output_path = out.text("path", ".");
  c.format = out.text("format", "csv");
  if (c.format != "csv" && c.format != "json") throw ConfigError(out.at("format"), "expected 'csv' or 'json'");

  try {
    (void)c.params();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("discretization", e.what());
  }

  json e;
  e["task"] = to_string(c.task);
  e["potential"] = {{"kind", "polynomial"}, {"coefficients", c.potential}};
  e["potential_source"] = from_physics ? "physics" : "coefficients";
  e["physics"] = {{"M", c.mass}, {"hbar", c.hbar}, {"Omega", c.omega}, {"lambda", c.lambda}};
  e["discretization"] = {{"N", c.n_slices}, {"epsilon", c.epsilon}, {"beta", c.beta},
                         {"freq_convention", conv_name(c.convention)}};
  e["grid"] = {{"x_min", c.x_min}, {"x_max", c.x_max}, {"n_points", c.n_points}};
  e["truncation"] = {{"max_order", c.max_order}};
  if (c.cutoff > 0.0) e["continuum"] = {{"Lambda", c.cutoff}, {"delta_k", c.delta_k}};
  e["kinetic"] = {{"coefficients", c.kinetic}};
  e["shell"] = {{"k", c.shell.k}, {"delta_k", c.shell.delta_k}, {"U2", c.shell.u2}, {"U3", c.shell.u3},
                {"U4", c.shell.u4}, {"Z", c.shell.z}, {"q_max", c.q_max}, {"q_steps", c.q_steps}};
  e["probe"] = {{"m", c.probe.m}, {"q", c.probe.q}};
  e["oracle"] = {{"basis_size", c.basis_size}};
  e["output"] = {{"path", c.output_path}, {"format", c.format}};
  c.echo = e;
  return c;
}

RunManifest dispatch(const RunConfig& cfg, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  RunManifest m;
  m.json["artifact_version"] = kVersion;
  m.json["config"] = cfg.echo;
  m.json["started"] = utc_now();
  Outcome o;
  std::exception_ptr failure;
  try {
    switch (cfg.task) {
      case Task::Lpa: task_lpa(cfg, dir, o); break;
      case Task::Couplings: task_couplings(cfg, dir, o); break;
      case Task::Generalized: task_generalized(cfg, dir, o); break;
      case Task::Kinetic: task_kinetic(cfg, dir, o); break;
      case Task::Oracle: task_oracle(cfg, dir, o); break;
      case Task::FqDemo: task_fq(cfg, dir, o); break;
      case Task::Compare: task_compare(cfg, dir, o); break;
    }
  } catch (...) {
    failure = std::current_exception();
  }
  m.json["finished"] = utc_now();
  m.json["trace"] = o.trace;
  o.digest["warnings"] = o.warnings;
  m.json["digest"] = o.digest;
  m.json["files"] = o.files;
  if (failure) {
    m.json["status"] = "error";
    m.json["exit_code"] = exit_code_for(failure);
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      m.json["error"] = e.what();
    } catch (...) {
      m.json["error"] = "unknown error";
    }
  } else {
    m.json["status"] = "ok";
    m.json["exit_code"] = 0;
  }
  std::ofstream(dir / "manifest.json") << m.json.dump(2) << "\n";
  m.files = o.files;
  if (cfg.format == "json" && !failure) {
    std::ofstream(dir / "result.json") << m.json["digest"].dump(2) << "\n";
    m.files.push_back("result.json");
  }
  if (failure) std::rethrow_exception(failure);
  return m;
}

int exit_code_for(std::exception_ptr e) {
  if (!e) return 0;
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return 2;
  } catch (const ConvexityError&) {
    return 3;
  } catch (const NonConvergence&) {
    return 4;
  } catch (const NegativeGapError&) {
    return 5;
  } catch (...) {
    return 1;
  }
}

bool write_seed_check(const std::string& out_dir, std::string* summary) {
  const SeedCheckReport rep = run_seed_check();
  std::ostringstream os;
  for (const auto& l : rep.lines)
    os << (l.informational ? "INFO " : (l.pass ? "PASS " : "FAIL ")) << l.name
       << " oracle=" << format_double(l.oracle) << " formula=" << format_double(l.formula) << "\n";
  os << "cubic loop weight per 3-pairing (oracle): " << format_double(rep.cubic_loop_weight) << "\n";
  os << "tree prefactor oracle/printed: " << format_double(rep.tree_prefactor) << "\n";
  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    CsvWriter w(dir / "seed_check.csv", {"name", "oracle", "formula", "pass", "informational"});
    for (const auto& l : rep.lines)
      w.row({l.name, format_double(l.oracle), format_double(l.formula), l.pass ? "1" : "0",
             l.informational ? "1" : "0"});
  }
  if (summary) *summary = os.str();
  return rep.all_pass();
}

}  // namespace rgqm
