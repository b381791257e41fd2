#include "rlfrac/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "rlfrac/errors.hpp"
#include "rlfrac/fractional_ops.hpp"
#include "rlfrac/kernels.hpp"
#include "rlfrac/mittag_leffler.hpp"
#include "rlfrac/random_data.hpp"
#include "rlfrac/rl_solver.hpp"
#include "rlfrac/spectral_domain.hpp"
#include "rlfrac/time_grid.hpp"
#include "rlfrac/trace_duality.hpp"

namespace rlfrac::cli {

namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ------------------------------------------------------------------- config

struct RunConfig {
  std::string command;
  double alpha = kNaN;
  double beta = 1.0;
  std::vector<double> z;
  double lambda = 1.0;
  double u1 = 1.0;
  double u2 = 0.0;
  double L = std::numbers::pi;
  double L1 = kNaN;
  double L2 = kNaN;
  int modes = 0;
  std::vector<double> c1;
  std::vector<double> c2;
  std::uint64_t seed = 0;
  std::string profile = "flat";
  double T = 1.0;
  int M = 0;
  std::string grading;
  double theta = kNaN;
  double mu = kNaN;
  std::string which = "both";
  int draws = 0;
  std::vector<double> times;
  int nx = 0;
  double t0 = 10.0;
  double t1 = 100.0;
  std::string xi_sweep;
  std::string out;
  std::string format;
  std::string config;

  std::set<std::string> given;
  bool has(const std::string& k) const { return given.count(k) > 0; }
};

// Options of one subcommand, with their JSON-config fallbacks.
class Binder {
 public:
  Binder(CLI::App* app, RunConfig& c) : app_(app), c_(c) {}

  template <class T>
  Binder& add(const std::string& name, T& var, const std::string& help) {
    CLI::Option* o = app_->add_option("--" + name, var, help);
    if constexpr (std::is_same_v<T, std::vector<double>>) o->expected(1, CLI::detail::expected_max_vector_size);
    bindings_.push_back({name, o, [&var](const json& j) { var = j.get<T>(); }});
    return *this;
  }

  // Marks options given on the command line, then fills the rest from the
  // config file (flags take precedence).
  void resolve(const json& cfg) {
    for (auto& b : bindings_) {
      if (b.opt->count() > 0) {
        c_.given.insert(b.name);
      } else if (cfg.is_object() && cfg.contains(b.name)) {
        try {
          b.set(cfg.at(b.name));
        } catch (const json::exception&) {
          throw InvalidArgument("config: bad value for '" + b.name + "'");
        }
        c_.given.insert(b.name);
      }
    }
  }

  CLI::App* app() const { return app_; }

 private:
  struct Binding {
    std::string name;
    CLI::Option* opt;
    std::function<void(const json&)> set;
  };
  CLI::App* app_;
  RunConfig& c_;
  std::vector<Binding> bindings_;
};

// ------------------------------------------------------------------- output

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

std::string render_csv(const Table& t) {
  std::string s;
  for (std::size_t k = 0; k < t.columns.size(); ++k) s += (k ? "," : "") + csv_cell(t.columns[k]);
  s += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) s += (k ? "," : "") + csv_cell(row[k]);
    s += "\r\n";
  }
  return s;
}

std::string render_json(const std::string& command, const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  json j = {{"command", command}, {"columns", t.columns}, {"rows", std::move(rows)}};
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------------ helpers

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

double need(const RunConfig& c, const std::string& key, double v) {
  require(c.has(key) && std::isfinite(v), "--" + key + " is required");
  return v;
}

DomainSpec make_domain(const RunConfig& c) {
  require(c.has("modes"), "--modes is required");
  require(c.modes >= 1, "--modes must be >= 1");
  if (c.has("L1") || c.has("L2")) {
    require(c.has("L1") && c.has("L2"), "rectangle domains need both --L1 and --L2");
    require(!c.has("L"), "give either --L or --L1/--L2");
    require(c.L1 > 0.0 && c.L2 > 0.0, "--L1 and --L2 must be positive");
    return DomainSpec::rectangle(c.L1, c.L2, c.modes);
  }
  require(c.L > 0.0 && std::isfinite(c.L), "--L must be positive");
  return DomainSpec::interval(c.L, c.modes);
}

bool random_data(const RunConfig& c) { return !c.has("c1") && !c.has("c2"); }

ModalData make_data(const RunConfig& c, const DomainSpec& d) {
  const auto n = static_cast<std::size_t>(d.n_modes());
  if (!random_data(c)) {
    require(!c.has("seed"), "give either explicit --c1/--c2 or --seed, not both");
    auto c1 = c.has("c1") ? c.c1 : std::vector<double>(n, 0.0);
    auto c2 = c.has("c2") ? c.c2 : std::vector<double>(n, 0.0);
    require(c1.size() == n, "--c1 needs " + std::to_string(n) + " values");
    require(c2.size() == n, "--c2 needs " + std::to_string(n) + " values");
    return {d, std::move(c1), std::move(c2)};
  }
  require(c.has("seed"), "modal data required: --c1/--c2 or --seed (with --profile)");
  return random_modal_data(d, c.seed, DataProfile::parse(c.profile));
}

TimeGrid make_grid(const RunConfig& c, const std::string& default_grading, int default_M) {
  const int M = c.has("M") ? c.M : default_M;
  return TimeGrid::parse(c.has("grading") ? c.grading : default_grading, c.T, M);
}

void check_T(const RunConfig& c) { require(c.T > 0.0 && std::isfinite(c.T), "--T must be positive"); }

// draws of unit-norm random data (seed + k), or the explicit data once
std::vector<ModalData> data_draws(const RunConfig& c, const DomainSpec& d, double mu, int default_draws) {
  std::vector<ModalData> out;
  if (!random_data(c)) {
    out.push_back(make_data(c, d));
    return out;
  }
  require(c.has("seed"), "modal data required: --c1/--c2 or --seed (with --profile)");
  const int k_max = c.has("draws") ? c.draws : default_draws;
  require(k_max >= 1, "--draws must be >= 1");
  const auto profile = DataProfile::parse(c.profile);
  for (int k = 0; k < k_max; ++k)
    out.push_back(normalize_unit(random_modal_data(d, c.seed + static_cast<std::uint64_t>(k), profile), mu));
  return out;
}

// ----------------------------------------------------------------- commands

Table cmd_ml(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  require(!c.z.empty(), "--z is required");
  Table t{{"z", "value", "est_abs_error", "branch"}, {}};
  for (double z : c.z) {
    const auto r = ml({a, c.beta}, z);
    t.rows.push_back({z, r.value, r.est_abs_error, std::string(to_string(r.branch))});
  }
  return t;
}

Table cmd_scalar(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  check_T(c);
  const auto grid = make_grid(c, "uniform", 256);
  require(grid.cells() >= kMinDerivativeCells, "--M must be >= " + std::to_string(kMinDerivativeCells));
  const double lam = c.lambda;
  const auto f = SampledFunction::sample(
      grid, [&](double t) { return scalar_solution(a, lam, c.u1, c.u2, t); }, c.u2 != 0.0);
  const double sigma = c.u2 != 0.0 ? a - 2.0 : a - 1.0;
  const auto d = rl_derivative(RLOrder::alpha, a, f, sigma);
  Table t{{"t", "u", "dalpha_u", "residual"}, {}};
  for (std::size_t k = kReliableFrom; k < grid.size(); ++k)
    t.rows.push_back({grid[k], f.values[k], d.values[k], std::abs(d.values[k] + lam * f.values[k])});
  return t;
}

Table cmd_solve(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  check_T(c);
  const auto d = make_domain(c);
  const SeriesSolution sol(FracOrder(a), make_data(c, d), c.T);
  const auto grid = make_grid(c, "uniform", 64);
  const std::vector<double> times(grid.points().begin() + 1, grid.points().end());
  const auto snaps = solve_series(sol, times);
  Table t;
  t.columns.push_back("t");
  for (int n = 1; n <= d.n_modes(); ++n) t.columns.push_back("mode_" + std::to_string(n));
  t.columns.push_back("norm_H10");
  t.columns.push_back("norm_H2");
  for (const auto& s : snaps) {
    std::vector<Cell> row{s.t};
    for (double v : s.modal_values) row.emplace_back(v);
    row.emplace_back(norm_h10(sol, s));
    row.emplace_back(norm_h2(sol, s));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::array<double, 3> parse_sweep(const std::string& s) {
  std::array<double, 3> v{};
  std::stringstream ss(s);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    require(k < 3, "--xi-sweep expects lo,hi,step");
    std::size_t used = 0;
    try {
      v[static_cast<std::size_t>(k)] = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used > 0 && used == item.size(), "--xi-sweep: cannot parse '" + item + "'");
    ++k;
  }
  require(k == 3, "--xi-sweep expects lo,hi,step");
  return v;
}

std::string cmd_intervals(const RunConfig& c, const std::string& format) {
  const double a = need(c, "alpha", c.alpha);
  if (c.has("xi-sweep")) {
    const auto [lo, hi, step] = parse_sweep(c.xi_sweep);
    Table t{{"xi", "mu", "nabla_lo", "nabla_hi", "dalpha_lo", "dalpha_hi", "theta_lo", "theta_hi", "empty"}, {}};
    for (const auto& s : xi_sweep(a, lo, hi, step))
      t.rows.push_back({s.xi, s.mu, s.nabla.lo, s.nabla.hi, s.dalpha.lo, s.dalpha.hi, s.window.theta_lo,
                        s.window.theta_hi, s.window.empty});
    return format == "json" ? render_json(c.command, t) : render_csv(t);
  }
  std::optional<double> mu;
  if (c.has("mu")) mu = c.mu;
  const auto r = admissible_intervals(a, mu);
  if (format == "csv") {
    Table t{{"mu_lo", "mu_hi", "mu", "theta_lo", "theta_hi", "empty"}, {}};
    if (r.window)
      t.rows.push_back({r.mu_lo, r.mu_hi, r.window->mu, r.window->theta_lo, r.window->theta_hi, r.window->empty});
    else
      t.rows.push_back({r.mu_lo, r.mu_hi, kNaN, kNaN, kNaN, std::string("")});
    return render_csv(t);
  }
  json j;
  j["alpha"] = a;
  j["mu_range"] = {r.mu_lo, r.mu_hi};
  if (r.window) {
    const auto& w = *r.window;
    j["mu"] = w.mu;
    j["theta_window"] = {w.theta_lo, w.theta_hi};
    j["empty"] = w.empty;
    j["nabla_range"] = {nabla_range(a, w.mu).lo, nabla_range(a, w.mu).hi};
    j["dalpha_range"] = {dalpha_range(a, w.mu).lo, dalpha_range(a, w.mu).hi};
    j["overlap_condition"] = w.overlap_condition;
    j["upper_condition"] = w.upper_condition;
  } else {
    j["mu"] = nullptr;
    j["theta_window"] = nullptr;
    j["empty"] = nullptr;
  }
  return j.dump(2) + "\n";
}

Table cmd_trace(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  check_T(c);
  const auto d = make_domain(c);
  const double mu = c.has("mu") ? c.mu : 0.0;
  const auto grid = make_grid(c, "geometric", 256);
  const auto lambdas = d.lambdas();
  Table t{{"draw", "energy", "discrepancy", "rhs_sq", "ratio"}, {}};
  long long k = 0;
  for (const auto& data : data_draws(c, d, mu, 50)) {
    const SeriesSolution sol(FracOrder(a), data, c.T);
    const auto e = trace_energy(sol, grid);
    const double r = graded_norm(data.c1, mu, lambdas) + graded_norm(data.c2, mu + 0.5, lambdas);
    t.rows.push_back({k++, e.value, e.discrepancy, r * r, r > 0.0 ? e.value / (r * r) : 0.0});
  }
  return t;
}

Table cmd_regularity(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  const double theta = need(c, "theta", c.theta);
  const double mu = need(c, "mu", c.mu);
  check_T(c);
  require(c.which == "nabla" || c.which == "dalpha" || c.which == "both", "--which: nabla, dalpha or both");
  FracOrder(a).require_trace_regime("regularity");
  const auto d = make_domain(c);
  const RegularityEvaluator ev(a, d, c.T);
  Table t{{"draw", "ratio_nabla", "ratio_dalpha", "zero_data"}, {}};
  long long k = 0;
  for (const auto& data : data_draws(c, d, mu, 50)) {
    double rn = kNaN;
    double rd = kNaN;
    bool zero = false;
    if (c.which != "dalpha") {
      const auto r = ev.ratio(RegularityKind::nabla, data, theta, mu);
      rn = r.ratio;
      zero = r.zero_data;
    }
    if (c.which != "nabla") {
      const auto r = ev.ratio(RegularityKind::dalpha, data, theta, mu);
      rd = r.ratio;
      zero = r.zero_data;
    }
    t.rows.push_back({k++, rn, rd, zero});
  }
  return t;
}

Table cmd_rellich(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  check_T(c);
  const auto d = make_domain(c);
  require(d.kind() == DomainKind::interval, "rellich: interval domain only");
  const SeriesSolution sol(FracOrder(a), make_data(c, d), c.T);
  std::vector<double> times = c.times;
  if (times.empty())
    for (int k = 1; k <= 5; ++k) times.push_back(c.T * k / 5.0);
  const int n = c.has("nx") ? c.nx : 513;
  const double theta = c.has("theta") ? c.theta : 0.3;
  const auto h = VectorFieldH::affine(d.L());
  Table t{{"t", "lhs", "rhs", "residual"}, {}};
  for (double tk : times) {
    const auto r = rellich_residual(sol, h, tk, theta, n);
    t.rows.push_back({tk, r.lhs, r.rhs, r.residual});
  }
  return t;
}

Table cmd_decay(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  const auto d = make_domain(c);
  const double T = c.has("T") ? c.T : c.t1;
  const SeriesSolution sol(FracOrder(a), make_data(c, d), T);
  const auto s = decay_slopes(sol, c.t0, c.t1);
  return {{"t0", "t1", "slope_u1", "slope_u2"}, {{c.t0, c.t1, s.slope_u1, s.slope_u2}}};
}

Table cmd_duality(const RunConfig& c) {
  const double a = need(c, "alpha", c.alpha);
  check_T(c);
  const auto d = make_domain(c);
  const int M = c.has("M") ? c.M : 512;
  const int nx = c.has("nx") ? c.nx : M / 2 + 1;
  const auto r = duality_check(make_data(c, d), a, c.T, M, nx);
  return {{"M", "nx", "lhs", "rhs", "rel_err"}, {{static_cast<long long>(M), static_cast<long long>(nx), r.lhs, r.rhs, r.rel_err}}};
}

// ---------------------------------------------------------------- dispatch

void add_common(Binder& b, RunConfig& c) {
  b.add("out", c.out, "output path (default: stdout)")
      .add("format", c.format, "csv or json")
      .add("config", c.config, "JSON file with default option values");
}

void add_domain(Binder& b, RunConfig& c) {
  b.add("L", c.L, "interval length")
      .add("L1", c.L1, "rectangle side 1")
      .add("L2", c.L2, "rectangle side 2")
      .add("modes", c.modes, "number of eigenmodes N")
      .add("c1", c.c1, "coefficients of u1")
      .add("c2", c.c2, "coefficients of u2")
      .add("seed", c.seed, "seed of the random data")
      .add("profile", c.profile, "flat or powerlaw(p)");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "config: cannot open '" + path + "'");
  try {
    json j = json::parse(in);
    require(j.is_object(), "config: top level must be an object");
    return j;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Riemann-Liouville diffusion-wave toolkit"};
  app.require_subcommand(1);
  std::map<std::string, std::unique_ptr<Binder>> binders;
  auto sub = [&](const std::string& name, const std::string& help) -> Binder& {
    auto* s = app.add_subcommand(name, help);
    auto& b = *(binders[name] = std::make_unique<Binder>(s, c));
    add_common(b, c);
    return b;
  };

  sub("ml", "evaluate E_{alpha,beta}(z)")
      .add("alpha", c.alpha, "alpha in (0, 2]")
      .add("beta", c.beta, "beta > 0")
      .add("z", c.z, "arguments");
  sub("scalar", "scalar solution and its numeric D^alpha residual")
      .add("alpha", c.alpha, "alpha in (1, 2)")
      .add("lambda", c.lambda, "eigenvalue")
      .add("u1", c.u1, "D^(a-1) u(0)")
      .add("u2", c.u2, "D^(a-2) u(0)")
      .add("T", c.T, "horizon")
      .add("M", c.M, "time cells")
      .add("grading", c.grading, "uniform or geometric:R");
  {
    auto& b = sub("solve", "modal solution on a time grid");
    b.add("alpha", c.alpha, "alpha in (1, 2)").add("T", c.T, "horizon").add("M", c.M, "time cells");
    b.add("grading", c.grading, "uniform or geometric:R");
    add_domain(b, c);
  }
  sub("intervals", "admissible exponent intervals")
      .add("alpha", c.alpha, "alpha in (3/2, 2)")
      .add("mu", c.mu, "mu")
      .add("xi-sweep", c.xi_sweep, "lo,hi,step of the mu(xi) curve");
  {
    auto& b = sub("trace", "boundary trace energy");
    b.add("alpha", c.alpha, "alpha in (3/2, 2)").add("T", c.T, "horizon").add("M", c.M, "time cells");
    b.add("grading", c.grading, "uniform or geometric:R").add("mu", c.mu, "data exponent");
    b.add("draws", c.draws, "number of random draws");
    add_domain(b, c);
  }
  {
    auto& b = sub("regularity", "regularity ratios");
    b.add("alpha", c.alpha, "alpha in (3/2, 2)").add("T", c.T, "horizon");
    b.add("theta", c.theta, "theta").add("mu", c.mu, "mu").add("which", c.which, "nabla, dalpha or both");
    b.add("draws", c.draws, "number of random draws");
    add_domain(b, c);
  }
  {
    auto& b = sub("rellich", "Rellich identity residual (interval)");
    b.add("alpha", c.alpha, "alpha in (1, 2)").add("T", c.T, "horizon").add("t", c.times, "sample times");
    b.add("theta", c.theta, "pairing exponent").add("nx", c.nx, "spatial points (odd)");
    add_domain(b, c);
  }
  {
    auto& b = sub("decay", "long-time decay slopes");
    b.add("alpha", c.alpha, "alpha in (1, 2)").add("T", c.T, "horizon");
    b.add("t0", c.t0, "window start").add("t1", c.t1, "window end");
    add_domain(b, c);
  }
  {
    auto& b = sub("duality", "adjoint duality identity (interval, w2 = 0)");
    b.add("alpha", c.alpha, "alpha in (3/2, 2)").add("T", c.T, "horizon").add("M", c.M, "time cells");
    b.add("nx", c.nx, "spatial points");
    add_domain(b, c);
  }
  sub("selftest", "deterministic invariant suite").add("seed", c.seed, "seed");

  std::vector<const char*> argv{"rlfrac"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    Binder* b = nullptr;
    for (auto& [name, bd] : binders)
      if (bd->app()->parsed()) {
        c.command = name;
        b = bd.get();
      }
    const bool cfg_flag = b->app()->get_option("--config")->count() > 0;
    b->resolve(cfg_flag ? load_config(c.config) : json::object());

    const bool json_default = c.command == "intervals" && !c.has("xi-sweep");
    const std::string format = c.has("format") ? c.format : (json_default ? "json" : "csv");
    require(format == "csv" || format == "json", "--format must be csv or json");

    std::string text;
    int code = kExitOk;
    if (c.command == "selftest") {
      const auto r = selftest(c.has("seed") ? c.seed : 42);
      text = r.text;
      if (r.failures > 0) code = kExitNumerical;
    } else if (c.command == "intervals") {
      text = cmd_intervals(c, format);
    } else {
      static const std::map<std::string, std::function<Table(const RunConfig&)>> table_cmds = {
          {"ml", cmd_ml},         {"scalar", cmd_scalar},         {"solve", cmd_solve},
          {"trace", cmd_trace},   {"regularity", cmd_regularity}, {"rellich", cmd_rellich},
          {"decay", cmd_decay},   {"duality", cmd_duality}};
      const Table t = table_cmds.at(c.command)(c);
      text = format == "json" ? render_json(c.command, t) : render_csv(t);
    }

    if (c.has("out")) {
      std::ofstream f(c.out, std::ios::binary);
      require(static_cast<bool>(f), "cannot write '" + c.out + "'");
      f << text;
    } else {
      out << text;
    }
    return code;
  } catch (const NumericalFailure& e) {
    err << "numerical failure in " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run(args, out, err);
}

int parse_and_run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rlfrac::cli
