#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "voter/continuum.hpp"
#include "voter/error.hpp"
#include "voter/montecarlo.hpp"
#include "voter/observables.hpp"
#include "voter/propagator.hpp"
#include "voter/spectral.hpp"
#include "voter/topology.hpp"
#include "voter/validation.hpp"

namespace voter::cli {
namespace {

// One output file: '#' provenance lines, a header row, then data rows.
struct Document {
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void note(std::string key, std::string value) { provenance.emplace_back(std::move(key), std::move(value)); }
};

void write_document(const Document& doc, const std::string& format, std::ostream& os) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["provenance"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : doc.provenance) j["provenance"][k] = v;
    j["columns"] = doc.columns;
    j["rows"] = doc.rows;
    os << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : doc.provenance) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < doc.columns.size(); ++i) os << (i ? "," : "") << doc.columns[i];
  os << '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void emit(const Document& doc, const std::string& format, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_document(doc, format, out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::invalid_argument, "cannot open output file '" + path + "'");
  write_document(doc, format, file);
  if (!file) fail(ErrorCode::invalid_argument, "failed writing '" + path + "'");
}

std::string value_str(const Rational& q, NumericMode mode) { return Scalar::in_mode(q, mode).str(); }

std::vector<double> as_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

std::pair<std::string, std::string> split_prefix(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) fail(ErrorCode::parse_error, what + ": '" + text + "' is not an integer");
  return v;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) fail(ErrorCode::parse_error, what + ": '" + text + "' is not a number");
  return v;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

std::vector<Rational> read_probability_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::parse_error, "cannot open init file '" + path + "'");
  std::vector<Rational> a;
  std::string token;
  while (in >> token) a.push_back(parse_rational(token));
  return a;
}

std::vector<Rational> delta_at(int n, int j) {
  if (j < 0 || j > n) {
    fail(ErrorCode::index_out_of_range, "delta:" + std::to_string(j) + " lies outside 0.." + std::to_string(n));
  }
  std::vector<Rational> a(static_cast<std::size_t>(n) + 1, Rational(0));
  a[j] = 1;
  return a;
}

DensitySpec parse_density(const std::string& text, int n) {
  const auto [kind, arg] = split_prefix(text);
  if (kind == "uniform") return uniform_density();
  if (kind == "density") return PointMass{parse_real(arg, "density")};
  if (kind == "delta") return PointMass{static_cast<double>(parse_int(arg, "delta")) / n};
  fail(ErrorCode::invalid_argument, "the greens method takes delta:<j>, density:<rho> or uniform, not '" + text + "'");
}

TopologySpec parse_topology(const std::string& text) {
  const auto [kind, arg] = split_prefix(text);
  if (kind == "complete") return CompleteSpec{parse_int(arg, "complete")};
  if (kind == "bipartite") {
    const auto parts = split_commas(arg);
    if (parts.size() != 2) fail(ErrorCode::parse_error, "bipartite topology needs N1,N2");
    return BipartiteSpec{parse_int(parts[0], "N1"), parse_int(parts[1], "N2")};
  }
  if (kind == "er") {
    const auto parts = split_commas(arg);
    if (parts.size() != 2) fail(ErrorCode::parse_error, "er topology needs N,p");
    return ErdosRenyiSpec{parse_int(parts[0], "N"), parse_real(parts[1], "p")};
  }
  if (kind == "file") return FixedGraph{std::make_shared<const Topology>(read_edge_list_file(arg))};
  fail(ErrorCode::parse_error, "topology must be complete:N, bipartite:N1,N2, er:N,p or file:path; got '" + text + "'");
}

InitialCondition parse_sim_init(const std::string& text, int n) {
  const auto [kind, arg] = split_prefix(text);
  if (kind == "delta") return CountInit{parse_int(arg, "delta")};
  if (kind == "density") return FractionInit{parse_real(arg, "density")};
  if (kind == "groups") {
    const auto parts = split_commas(arg);
    if (parts.size() != 2) fail(ErrorCode::parse_error, "groups init needs n1_A,n2_A");
    return GroupInit{parse_int(parts[0], "n1_A"), parse_int(parts[1], "n2_A")};
  }
  return MacrostateDraw{as_double(parse_init(text, n))};
}

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::numeric_overflow:
    case ErrorCode::generation_failure:
    case ErrorCode::all_runs_censored:
    case ErrorCode::internal:
      return false;
    default:
      return true;
  }
}

struct Common {
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output file (stdout when omitted)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void require_population(int n) {
  if (n < 2) fail(ErrorCode::invalid_population, "--n must be an integer >= 2 (population N >= 2), got " + std::to_string(n));
}

void base_provenance(Document& doc, const std::string& command, int n, NumericMode mode) {
  doc.note("command", command);
  doc.note("n", std::to_string(n));
  doc.note("mode", to_string(mode));
}

// --- spectrum --------------------------------------------------------------

struct SpectrumArgs {
  int n = 0;
  std::string mode = "exact";
  Common common;
};

void run_spectrum(const SpectrumArgs& a, std::ostream& out) {
  require_population(a.n);
  const NumericMode mode = parse_mode(a.mode);
  const auto decomp = build_decomposition(a.n, mode);
  Document doc;
  base_provenance(doc, "spectrum", a.n, mode);
  doc.columns = {"k", "lambda"};
  for (int j = 0; j <= a.n; ++j) doc.columns.push_back("c_" + std::to_string(j));
  for (const auto& ep : decomp.pairs()) {
    std::vector<std::string> row = {std::to_string(ep.k), value_str(ep.lambda, mode)};
    for (const auto& c : ep.c) row.push_back(value_str(c, mode));
    doc.rows.push_back(std::move(row));
  }
  emit(doc, a.common.format, a.common.out, out);
}

// --- propagate -------------------------------------------------------------

struct PropagateArgs {
  int n = 0;
  std::string init;
  std::int64_t steps = 0;
  std::string method = "spectral";
  std::string mode = "exact";
  Common common;
};

inline constexpr double kCrossCheckBudget = 2e8;  // N * m single-step updates

void run_propagate(const PropagateArgs& a, std::ostream& out) {
  require_population(a.n);
  const NumericMode mode = parse_mode(a.mode);
  if (a.steps < 0) fail(ErrorCode::invalid_argument, "--steps must be >= 0");
  const auto a0 = parse_init(a.init, a.n);
  const TransitionOperator op(a.n);
  const bool spectral = a.method == "spectral";
  const bool direct_feasible =
      a.n <= kDefaultOracleLimit && static_cast<double>(a.n) * static_cast<double>(a.steps) <= kCrossCheckBudget;

  std::optional<SpectralDecomposition> decomp;
  std::optional<EigenCoordinates> coords;
  auto spectral_setup = [&] {
    if (!decomp) {
      decomp.emplace(build_decomposition(a.n, mode));
      coords.emplace(to_coordinates(*decomp, a0));
    }
  };

  std::vector<std::string> values;
  std::vector<double> primary;
  if (spectral) {
    spectral_setup();
    if (mode == NumericMode::exact) {
      const auto dist = propagate_spectral_exact(*decomp, *coords, a.steps);
      for (const auto& x : dist.a) values.push_back(format_rational(x));
      primary = as_double(dist.a);
    } else {
      const auto dist = propagate_spectral_float(*decomp, *coords, a.steps);
      for (double x : dist.a) values.push_back(format_double(x));
      primary = dist.a;
    }
  } else if (mode == NumericMode::exact) {
    const auto dist = dense_oracle(op, ExactDistribution{a0, 0}, a.steps);
    for (const auto& x : dist.a) values.push_back(format_rational(x));
    primary = as_double(dist.a);
  } else {
    const auto dist = dense_oracle(op, FloatDistribution{as_double(a0), 0}, a.steps);
    for (double x : dist.a) values.push_back(format_double(x));
    primary = dist.a;
  }

  std::string cross = "skipped";
  std::vector<double> other;
  if (spectral && direct_feasible) {
    other = dense_oracle(op, FloatDistribution{as_double(a0), 0}, a.steps).a;
  } else if (!spectral) {
    spectral_setup();
    other = propagate_spectral_float(*decomp, *coords, a.steps).a;
  }
  if (!other.empty()) {
    double diff = 0;
    for (std::size_t j = 0; j < other.size(); ++j) diff = std::max(diff, std::abs(primary[j] - other[j]));
    cross = format_double(diff);
  }

  Document doc;
  base_provenance(doc, "propagate", a.n, mode);
  doc.note("init", a.init);
  doc.note("steps", std::to_string(a.steps));
  doc.note("method", a.method);
  doc.note("max_abs_diff_spectral_direct", cross);
  doc.columns = {"j", "a_j"};
  for (int j = 0; j <= a.n; ++j) doc.rows.push_back({std::to_string(j), values[j]});
  emit(doc, a.common.format, a.common.out, out);
}

// --- moments ---------------------------------------------------------------

struct MomentsArgs {
  int n = 0;
  std::string init;
  int p = 1;
  std::string method = "exact";
  std::string mode = "exact";
  Common common;
};

void run_moments(const MomentsArgs& a, std::ostream& out) {
  require_population(a.n);
  const NumericMode mode = parse_mode(a.mode);
  if (a.p < 1) fail(ErrorCode::invalid_argument, "--p must be >= 1");
  const auto a0 = parse_init(a.init, a.n);
  const TransitionOperator op(a.n);
  std::vector<std::string> values;
  std::string method_name;
  if (a.method == "exact" || a.method == "asymptotic") {
    const auto decomp = build_decomposition(a.n, mode);
    const auto coords = to_coordinates(decomp, a0);
    for (int p = 1; p <= a.p; ++p) {
      const auto m = a.method == "exact" ? moment_exact(decomp, coords, p) : moment_asymptotic(decomp, coords, p);
      values.push_back(m.value.str());
      method_name = to_string(m.method);
    }
  } else if (a.method == "oracle") {
    method_name = to_string(MomentMethod::fundamental_matrix_oracle);
    if (interior_mass<Rational>(a0) == 0) {
      fail(ErrorCode::undefined_moment, "initial distribution has no interior mass; consensus time moments are undefined");
    }
    if (mode == NumericMode::exact) {
      for (const auto& v : moments_oracle<Rational>(op, a0, a.p)) values.push_back(format_rational(v));
    } else {
      const auto start = as_double(a0);
      for (double v : moments_oracle<double>(op, start, a.p)) values.push_back(format_double(v));
    }
  } else {
    if (mode != NumericMode::floating) fail(ErrorCode::invalid_argument, "the series method needs --mode float");
    method_name = to_string(MomentMethod::truncated_series);
    const auto start = as_double(a0);
    for (int p = 1; p <= a.p; ++p) values.push_back(format_double(moment_truncated_series(op, start, p)));
  }
  Document doc;
  base_provenance(doc, "moments", a.n, mode);
  doc.note("init", a.init);
  doc.note("p_max", std::to_string(a.p));
  doc.note("method", method_name);
  doc.columns = {"p", "moment"};
  for (int p = 1; p <= a.p; ++p) doc.rows.push_back({std::to_string(p), values[p - 1]});
  emit(doc, a.common.format, a.common.out, out);
}

// --- local-times -----------------------------------------------------------

struct LocalTimesArgs {
  int n = 0;
  std::string init;
  std::string method = "exact";
  std::string mode = "exact";
  Common common;
};

void run_local_times(const LocalTimesArgs& a, std::ostream& out) {
  require_population(a.n);
  const NumericMode mode = parse_mode(a.mode);
  std::vector<std::string> values;
  if (a.method == "greens") {
    const auto density = parse_density(a.init, a.n);
    for (int j = 1; j < a.n; ++j) {
      values.push_back(format_double(greens_local_time(density, static_cast<double>(j) / a.n, a.n)));
    }
  } else {
    const auto a0 = parse_init(a.init, a.n);
    const TransitionOperator op(a.n);
    if (a.method == "exact") {
      const auto decomp = build_decomposition(a.n, mode);
      for (const auto& v : local_times_exact(decomp, to_coordinates(decomp, a0)).values) {
        values.push_back(value_str(v, mode));
      }
    } else if (mode == NumericMode::exact) {
      for (const auto& v : local_times_oracle<Rational>(op, a0).values) values.push_back(format_rational(v));
    } else {
      const auto start = as_double(a0);
      for (double v : local_times_oracle<double>(op, start).values) values.push_back(format_double(v));
    }
  }
  Document doc;
  base_provenance(doc, "local-times", a.n, a.method == "greens" ? NumericMode::floating : mode);
  doc.note("init", a.init);
  doc.note("method", a.method);
  doc.columns = {"j", "local_time"};
  for (int j = 1; j < a.n; ++j) doc.rows.push_back({std::to_string(j), values[j - 1]});
  emit(doc, a.common.format, a.common.out, out);
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string topology;
  std::string init = "density:0.5";
  int runs = 100;
  std::uint64_t seed = 1;
  int pmax = 10;
  bool normalize = false;
  int threads = 0;
  std::uint64_t max_steps = 0;
  Common common;
};

void run_simulate(const SimulateArgs& a, std::ostream& out) {
  SimulationConfig cfg;
  cfg.topology = parse_topology(a.topology);
  const int n = population(cfg.topology);
  cfg.init = parse_sim_init(a.init, n);
  cfg.runs = a.runs;
  cfg.master_seed = a.seed;
  cfg.max_steps = a.max_steps;
  cfg.threads = a.threads > 0 ? a.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const bool complete = std::holds_alternative<CompleteSpec>(cfg.topology);
  cfg.record_local_times = complete && !a.common.out.empty();
  const auto runs = simulate(cfg);
  const auto report = estimate_moments(runs, a.pmax, a.normalize);

  auto provenance = [&](Document& doc, const std::string& observable) {
    doc.note("command", "simulate");
    doc.note("observable", observable);
    doc.note("n", std::to_string(n));
    doc.note("mode", "float");
    doc.note("topology", a.topology);
    doc.note("topology_resolved", describe(cfg.topology));
    doc.note("init", a.init);
    doc.note("runs", std::to_string(a.runs));
    doc.note("seed", std::to_string(a.seed));
    doc.note("max_steps", std::to_string(a.max_steps));
  };

  Document moments;
  provenance(moments, "moments");
  moments.note("p_max", std::to_string(a.pmax));
  moments.note("normalize", a.normalize ? "true" : "false");
  moments.note("used_runs", std::to_string(report.used_runs));
  moments.note("censored_runs", std::to_string(report.censored_runs));
  moments.note("mean_normalization", format_double(report.mean_normalization));
  moments.note("fit_slope", format_double(report.fit.slope));
  moments.note("fit_intercept", format_double(report.fit.intercept));
  moments.note("fit_r_squared", format_double(report.fit.r_squared));
  for (const auto& w : report.warnings) moments.note("warning", w);
  moments.columns = {"p", "T_p", "std_error", "ln_T_p_over_p_factorial"};
  for (const auto& m : report.moments) {
    moments.rows.push_back(
        {std::to_string(m.p), format_double(m.value), format_double(m.std_error), format_double(m.log_scaled)});
  }
  emit(moments, a.common.format, a.common.out, out);
  if (a.common.out.empty()) return;

  const std::string ext = "." + a.common.format;
  Document per_run;
  provenance(per_run, "runs");
  per_run.columns = {"replica", "seed", "consensus_time", "censored", "initial_count", "final_count", "normalization"};
  for (const auto& r : runs) {
    per_run.rows.push_back({std::to_string(r.replica), std::to_string(r.seed), std::to_string(r.consensus_time),
                            r.censored ? "1" : "0", std::to_string(r.initial_count), std::to_string(r.final_count),
                            format_double(r.normalization)});
  }
  emit(per_run, a.common.format, a.common.out + ".runs" + ext, out);

  if (!complete) return;
  const auto hist = local_time_histogram(cfg.topology, runs);
  Document lt;
  provenance(lt, "local_times");
  lt.columns = {"j", "local_time", "std_error"};
  for (int j = 1; j < n; ++j) {
    lt.rows.push_back({std::to_string(j), format_double(hist.mean[j - 1]), format_double(hist.std_error[j - 1])});
  }
  emit(lt, a.common.format, a.common.out + ".local_times" + ext, out);
}

// --- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string suite = "core";
  std::vector<std::string> checks;
};

int run_validate(const ValidateArgs& a, std::ostream& out) {
  std::vector<validation::CheckResult> results;
  if (a.checks.empty()) {
    results = validation::run_suite(validation::parse_suite(a.suite), out);
  } else {
    for (const auto& id : a.checks) {
      results.push_back(validation::run_check(id));
      out << validation::format_result(results.back()) << '\n';
    }
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << passed << "/" << results.size() << " checks passed\n";
  return passed == static_cast<long>(results.size()) ? kExitOk : kExitFailure;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) fail(ErrorCode::parse_error, "bad rational '" + text + "'");
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, seen_digit = true) digits += text[i];
  if (i < text.size() && text[i] == '.') {
    for (++i; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, seen_digit = true) {
      digits += text[i];
      --exponent;
    }
  }
  if (seen_digit && i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    exponent += parse_int(text.substr(i + 1), "exponent");
    i = text.size();
  }
  if (!seen_digit || i != text.size()) fail(ErrorCode::parse_error, "bad number '" + text + "'");
  Integer num(digits, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::vector<Rational> parse_init(const std::string& text, int n) {
  const auto [kind, arg] = split_prefix(text);
  std::vector<Rational> a;
  if (kind == "delta") {
    a = delta_at(n, parse_int(arg, "delta"));
  } else if (kind == "uniform" && arg.empty()) {
    a.assign(static_cast<std::size_t>(n) + 1, Rational(1, n + 1));
  } else if (kind == "density") {
    const double rho = parse_real(arg, "density");
    if (!(rho >= 0 && rho <= 1)) fail(ErrorCode::density_out_of_range, "density must lie in [0, 1]");
    a = delta_at(n, static_cast<int>(std::lround(rho * n)));
  } else if (kind == "file") {
    a = read_probability_file(arg);
    if (static_cast<int>(a.size()) != n + 1) {
      fail(ErrorCode::length_mismatch, "init file holds " + std::to_string(a.size()) + " probabilities, need N+1 = " +
                                           std::to_string(n + 1));
    }
  } else {
    fail(ErrorCode::parse_error, "init must be delta:<j>, uniform, file:<path> or density:<rho>; got '" + text + "'");
  }
  check_distribution(a);
  return a;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact spectral solutions and simulation of the two-state voter model", "voter"};
  app.require_subcommand(1);

  SpectrumArgs spectrum;
  auto* sp = app.add_subcommand("spectrum", "eigenvalues and eigenvectors of the propagator");
  sp->add_option("--n", spectrum.n, "population N >= 2")->required();
  sp->add_option("--mode", spectrum.mode)->check(CLI::IsMember({"exact", "float"}));
  add_common(sp, spectrum.common);

  PropagateArgs propagate;
  auto* pr = app.add_subcommand("propagate", "distribution over n_A after m steps");
  pr->add_option("--n", propagate.n, "population N >= 2")->required();
  pr->add_option("--init", propagate.init, "delta:<j> | uniform | file:<path> | density:<rho>")->required();
  pr->add_option("--steps", propagate.steps, "m >= 0")->required();
  pr->add_option("--method", propagate.method)->check(CLI::IsMember({"spectral", "direct"}));
  pr->add_option("--mode", propagate.mode)->check(CLI::IsMember({"exact", "float"}));
  add_common(pr, propagate.common);

  MomentsArgs moments;
  auto* mo = app.add_subcommand("moments", "consensus-time moments E[T^p], p = 1..P");
  mo->add_option("--n", moments.n, "population N >= 2")->required();
  mo->add_option("--init", moments.init)->required();
  mo->add_option("--p", moments.p, "largest order P")->required();
  mo->add_option("--method", moments.method)->check(CLI::IsMember({"exact", "asymptotic", "oracle", "series"}));
  mo->add_option("--mode", moments.mode)->check(CLI::IsMember({"exact", "float"}));
  add_common(mo, moments.common);

  LocalTimesArgs local;
  auto* lt = app.add_subcommand("local-times", "expected visits to each interior macrostate");
  lt->add_option("--n", local.n, "population N >= 2")->required();
  lt->add_option("--init", local.init)->required();
  lt->add_option("--method", local.method)->check(CLI::IsMember({"exact", "oracle", "greens"}));
  lt->add_option("--mode", local.mode)->check(CLI::IsMember({"exact", "float"}));
  add_common(lt, local.common);

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Monte Carlo consensus times");
  si->add_option("--topology", sim.topology, "complete:N | bipartite:N1,N2 | er:N,p | file:path")->required();
  si->add_option("--init", sim.init, "delta:<n_A> | density:<rho> | uniform | file:<path> | groups:<n1_A>,<n2_A>");
  si->add_option("--runs", sim.runs);
  si->add_option("--seed", sim.seed);
  si->add_option("--pmax", sim.pmax);
  si->add_flag("--normalize", sim.normalize, "divide each T by its graph's mu1^2/mu2");
  si->add_option("--threads", sim.threads, "worker threads (default: all cores)");
  si->add_option("--max-steps", sim.max_steps, "censoring cap (default: 100x the consensus scale)");
  add_common(si, sim.common);

  ValidateArgs validate;
  auto* va = app.add_subcommand("validate", "run the built-in acceptance checks");
  va->add_option("--suite", validate.suite)->check(CLI::IsMember({"core", "figures", "all"}));
  va->add_option("--check", validate.checks, "run only the named checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sp->parsed()) run_spectrum(spectrum, out);
    if (pr->parsed()) run_propagate(propagate, out);
    if (mo->parsed()) run_moments(moments, out);
    if (lt->parsed()) run_local_times(local, out);
    if (si->parsed()) run_simulate(sim, out);
    if (va->parsed()) return run_validate(validate, out);
  } catch (const VoterError& e) {
    err << "voter: error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "voter: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace voter::cli
