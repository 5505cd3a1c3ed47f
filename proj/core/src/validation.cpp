#include "voter/validation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "voter/continuum.hpp"
#include "voter/error.hpp"
#include "voter/montecarlo.hpp"
#include "voter/observables.hpp"
#include "voter/propagator.hpp"
#include "voter/spectral.hpp"
#include "voter/stats.hpp"
#include "voter/topology.hpp"

namespace voter::validation {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string measured;
  std::string expected;
  std::string tolerance;
};

struct Check {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<Rational> delta(int n, int j) {
  std::vector<Rational> a(static_cast<std::size_t>(n) + 1, Rational(0));
  a[j] = 1;
  return a;
}

std::vector<Rational> uniform(int n) { return std::vector<Rational>(static_cast<std::size_t>(n) + 1, Rational(1, n + 1)); }

std::vector<double> as_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

Eigen::MatrixXd dense_operator(int n) {
  const TransitionOperator op(n);
  const auto& p = op.rates();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    m(j, j) = 1 - 2 * p[j];
    if (j > 0) m(j, j - 1) = p[j - 1];
    if (j < n) m(j, j + 1) = p[j + 1];
  }
  return m;
}

// --- criterion 1 -----------------------------------------------------------

Outcome check_spectrum() {
  double worst_eig = 0, worst_residual = 0, worst_imag = 0;
  bool exact_zero = true;
  for (int n = 2; n <= 32; ++n) {
    const auto decomp = build_decomposition(n);
    for (const auto& ep : decomp.pairs()) {
      for (const auto& r : eigen_residual(n, ep.lambda, ep.c)) exact_zero = exact_zero && sgn(r) == 0;
    }
    if (n > 12) continue;
    const Eigen::MatrixXd p = dense_operator(n);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(p, false);
    std::vector<double> dense, closed;
    for (int i = 0; i <= n; ++i) {
      dense.push_back(solver.eigenvalues()[i].real());
      worst_imag = std::max(worst_imag, std::abs(solver.eigenvalues()[i].imag()));
    }
    for (const auto& ep : decomp.pairs()) closed.push_back(to_double(ep.lambda));
    std::sort(dense.begin(), dense.end());
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i <= n; ++i) worst_eig = std::max(worst_eig, std::abs(dense[i] - closed[i]));
    for (const auto& ep : decomp.pairs()) {
      Eigen::VectorXd c(n + 1);
      for (int j = 0; j <= n; ++j) c[j] = to_double(ep.c[j]);
      const Eigen::VectorXd r = p * c - to_double(ep.lambda) * c;
      worst_residual = std::max(worst_residual, r.cwiseAbs().maxCoeff());
    }
  }
  const bool ok = worst_eig <= 1e-10 && worst_residual <= 1e-10 && worst_imag <= 1e-10 && exact_zero;
  return {ok,
          "max|eig diff|=" + num(worst_eig) + " max float residual=" + num(worst_residual) +
              " exact residual zero (N<=32)=" + (exact_zero ? "yes" : "no"),
          "dense eigenvalues N=2..12; residual 0 exact", "1e-10"};
}

// --- criterion 2 -----------------------------------------------------------

Outcome check_propagator() {
  double worst_diff = 0, worst_mass = 0, worst_mean = 0;
  for (int n : {4, 12, 64}) {
    const auto decomp = build_decomposition(n, NumericMode::floating);
    const TransitionOperator op(n);
    for (const auto& a0 : {delta(n, n / 2), delta(n, 1), uniform(n)}) {
      const auto coords = to_coordinates(decomp, a0);
      const auto start = as_double(a0);
      const double mean0 = mean_state<double>(start);
      FloatDistribution direct{start, 0};
      std::int64_t done = 0;
      for (std::int64_t m : {1, 10, 1000, 10000}) {
        direct = dense_oracle(op, direct, m - done);
        done = m;
        const auto spectral = propagate_spectral_float(decomp, coords, m);
        for (int j = 0; j <= n; ++j) worst_diff = std::max(worst_diff, std::abs(spectral.a[j] - direct.a[j]));
        const std::vector<double>* pair[] = {&spectral.a, &direct.a};
        for (const auto* a : pair) {
          worst_mass = std::max(worst_mass, std::abs(total_mass<double>(*a) - 1));
          worst_mean = std::max(worst_mean, std::abs(mean_state<double>(*a) - mean0));
        }
      }
    }
  }
  const bool ok = worst_diff <= 1e-10 && worst_mass <= 1e-10 && worst_mean <= 1e-10;
  return {ok,
          "max|spectral-direct|=" + num(worst_diff) + " mass drift=" + num(worst_mass) + " mean drift=" +
              num(worst_mean),
          "spectral == direct stepping, N in {4,12,64}, m up to 1e4", "1e-10"};
}

Outcome check_martingale() {
  // Exact: the mean is invariant under every step.
  const int n = 12;
  const TransitionOperator op(n);
  ExactDistribution exact{delta(n, 3), 0};
  bool exact_ok = true;
  for (int s = 0; s < 200 && exact_ok; ++s) {
    exact = single_step(op, exact);
    exact_ok = mean_state<Rational>(exact.a) == 3 && total_mass<Rational>(exact.a) == 1;
  }
  const int nf = 100;
  const TransitionOperator opf(nf);
  FloatDistribution f{std::vector<double>(nf + 1, 0.0), 0};
  f.a[30] = 1;
  f = dense_oracle(opf, f, 10000);
  const double drift = std::abs(mean_state<double>(f.a) - 30);
  return {exact_ok && drift <= 1e-10,
          std::string("exact mean conserved=") + (exact_ok ? "yes" : "no") + " float drift/1e4 steps=" + num(drift),
          "mean n_A constant", "0 exact, 1e-10 float"};
}

// --- criterion 3 -----------------------------------------------------------

Outcome check_uniform_local_time() {
  const int n = 100;
  const auto decomp = build_decomposition(n);
  const auto lt = local_times_exact(decomp, to_coordinates(decomp, uniform(n)));
  Rational expected(n * (n - 1), 2 * (n + 1));
  expected.canonicalize();
  const bool ok = std::all_of(lt.values.begin(), lt.values.end(), [&](const Rational& m) { return m == expected; });
  const auto [lo, hi] = std::minmax_element(lt.values.begin(), lt.values.end());
  return {ok, "min=" + format_rational(*lo) + " max=" + format_rational(*hi),
          format_rational(expected) + " = " + num(to_double(expected)), "exact"};
}

// --- criterion 4 -----------------------------------------------------------

Outcome check_oracle_observables() {
  bool exact_ok = true;
  for (int n : {2, 3, 4, 8, 16, 32}) {
    const auto decomp = build_decomposition(n);
    const TransitionOperator op(n);
    for (const auto& a0 : {delta(n, 1), delta(n, n / 2), delta(n, n - 1), uniform(n)}) {
      const auto coords = to_coordinates(decomp, a0);
      const auto oracle = moments_oracle<Rational>(op, a0, 4);
      for (int p = 1; p <= 4; ++p) exact_ok = exact_ok && moment_exact(decomp, coords, p).value.exact() == oracle[p - 1];
      exact_ok = exact_ok && local_times_exact(decomp, coords).values == local_times_oracle<Rational>(op, a0).values;
    }
  }
  double worst = 0;
  for (int n : {50, 64, 100}) {
    const auto decomp = build_decomposition(n, NumericMode::floating);
    const TransitionOperator op(n);
    for (const auto& a0 : {delta(n, n / 2), delta(n, n / 4), delta(n, 1), uniform(n)}) {
      const auto coords = to_coordinates(decomp, a0);
      const auto start = as_double(a0);
      const auto oracle = moments_oracle<double>(op, start, 4);
      for (int p = 1; p <= 4; ++p) {
        const double v = moment_exact(decomp, coords, p).value.to_double();
        worst = std::max(worst, std::abs(v - oracle[p - 1]) / std::abs(oracle[p - 1]));
      }
      const auto lt = local_times_exact(decomp, coords);
      const auto lo = local_times_oracle<double>(op, start);
      double scale = 0;
      for (double x : lo.values) scale = std::max(scale, std::abs(x));
      for (std::size_t j = 0; j < lo.values.size(); ++j) {
        worst = std::max(worst, std::abs(to_double(lt.values[j]) - lo.values[j]) / scale);
      }
    }
  }
  return {exact_ok && worst <= 1e-8,
          std::string("exact match N<=32=") + (exact_ok ? "yes" : "no") + " max float rel diff N<=100=" + num(worst),
          "spectral moments (p<=4) and local times == fundamental matrix", "exact; 1e-8 relative"};
}

// --- criterion 5 -----------------------------------------------------------

double exact_mean_time(int n, int start) {
  const auto decomp = build_decomposition(n);
  return moment_exact(decomp, to_coordinates(decomp, delta(n, start)), 1).value.to_double();
}

Outcome check_consensus_time_exact() {
  const int n = 100;
  const double exact = exact_mean_time(n, n / 2);
  const double continuum = n * n * std::log(2.0);
  const double rel = std::abs(exact / continuum - 1);
  return {rel <= 0.02, "E[T]=" + num(exact) + " rel dev=" + num(rel), "N^2 ln 2 = " + num(continuum), "2%"};
}

Outcome check_consensus_time_mc() {
  const int n = 100;
  const double exact = exact_mean_time(n, n / 2);
  SimulationConfig cfg;
  cfg.topology = CompleteSpec{n};
  cfg.init = CountInit{n / 2};
  cfg.runs = 500;
  cfg.master_seed = 5005;
  cfg.threads = worker_count();
  const auto runs = simulate(cfg);
  const auto report = estimate_moments(runs, 1, false);
  const double mean = report.moments[0].value;
  const double se = report.moments[0].std_error;
  const double z = std::abs(mean - exact) / se;
  return {z <= 3.0 && report.censored_runs == 0,
          "MC mean=" + num(mean) + " se=" + num(se) + " |z|=" + num(z), "exact E[T]=" + num(exact), "3 standard errors"};
}

// --- criterion 6 -----------------------------------------------------------

Outcome check_local_time_mc() {
  const int n = 100;
  const auto decomp = build_decomposition(n);
  struct Case {
    std::string name;
    std::vector<Rational> a0;
    InitialCondition init;
  };
  const std::vector<Case> cases = {
      {"delta50", delta(n, 50), CountInit{50}},
      {"delta25", delta(n, 25), CountInit{25}},
      {"uniform", uniform(n), MacrostateDraw{std::vector<double>(n + 1, 1.0 / (n + 1))}},
  };
  double worst_fraction = 1;
  std::string detail;
  std::uint64_t seed = 6006;
  for (const auto& c : cases) {
    const auto exact = local_times_exact(decomp, to_coordinates(decomp, c.a0));
    SimulationConfig cfg;
    cfg.topology = CompleteSpec{n};
    cfg.init = c.init;
    cfg.runs = 3000;
    cfg.master_seed = seed++;
    cfg.record_local_times = true;
    cfg.threads = worker_count();
    const auto runs = simulate(cfg);
    const auto hist = local_time_histogram(cfg.topology, runs);
    int inside = 0;
    for (int j = 1; j < n; ++j) {
      if (std::abs(hist.mean[j - 1] - to_double(exact.values[j - 1])) <= 3 * hist.std_error[j - 1]) ++inside;
    }
    const double fraction = static_cast<double>(inside) / (n - 1);
    worst_fraction = std::min(worst_fraction, fraction);
    detail += c.name + "=" + num(fraction) + " ";
  }
  return {worst_fraction >= 0.95, "bins within 3se: " + detail, ">= 0.95 of interior bins per init", "3 se"};
}

// --- criteria 7, 8, 10 -----------------------------------------------------

struct Family {
  std::string name;
  std::function<TopologySpec(int)> topology;
  bool normalize;
};

std::vector<Family> families() {
  return {
      {"complete", [](int n) { return TopologySpec{CompleteSpec{n}}; }, false},
      {"bipartite", [](int n) { return TopologySpec{BipartiteSpec{4 * n / 5, n / 5}}; }, false},
      {"er", [](int n) { return TopologySpec{ErdosRenyiSpec{n, 5.0 / n}}; }, true},
  };
}

SimulationReport family_moments(const Family& f, int n, int runs, int p_max, std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.topology = f.topology(n);
  cfg.init = FractionInit{0.5};
  cfg.runs = runs;
  cfg.master_seed = seed;
  cfg.threads = worker_count();
  const auto records = simulate(cfg);
  return estimate_moments(records, p_max, f.normalize);
}

Outcome check_moment_growth() {
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 7007;
  for (const auto& f : families()) {
    const auto report = family_moments(f, 100, 100, 10, seed++);
    ok = ok && report.fit.r_squared >= 0.98 && report.censored_runs == 0;
    detail += f.name + " R2=" + num(report.fit.r_squared) + " slope=" + num(report.fit.slope) + " ";
  }
  return {ok, detail, "ln(T_p/p!) linear in p, p=1..10, N=100", "R2 >= 0.98"};
}

Outcome check_moment_scaling() {
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 8008;
  for (const auto& f : families()) {
    std::vector<double> x, y;
    for (int n = 10; n <= 100; n += 10) {
      const auto report = family_moments(f, n, 100, 5, seed++);
      ok = ok && report.censored_runs == 0;
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(report.moments[4].log_scaled);
    }
    const auto fit = fit_line(x, y);
    ok = ok && fit.slope >= 9.0 && fit.slope <= 11.0;
    detail += f.name + " slope=" + num(fit.slope) + " ";
  }
  return {ok, detail, "ln(T_5/5!) vs ln N slope 2p = 10", "[9, 11]"};
}

Outcome check_gap_scaling() {
  const int runs = 400;
  std::vector<double> x, y;
  std::uint64_t seed = 10010;
  bool censored = false;
  for (int n2 : {5, 10, 20, 40}) {
    SimulationConfig cfg;
    cfg.topology = BipartiteSpec{4 * n2, n2};
    cfg.init = FractionInit{0.5};
    cfg.runs = runs;
    cfg.master_seed = seed++;
    cfg.threads = worker_count();
    const auto report = estimate_moments(simulate(cfg), 1, false);
    censored = censored || report.censored_runs > 0;
    x.push_back(std::log(static_cast<double>(n2)));
    y.push_back(std::log(report.moments[0].value));
  }
  const double bipartite_slope = fit_line(x, y).slope;
  x.clear();
  y.clear();
  for (int n : {25, 50, 100, 200}) {
    SimulationConfig cfg;
    cfg.topology = ErdosRenyiSpec{n, 5.0 / n};
    cfg.init = FractionInit{0.5};
    cfg.runs = runs;
    cfg.master_seed = seed++;
    cfg.threads = worker_count();
    const auto report = estimate_moments(simulate(cfg), 1, true);
    censored = censored || report.censored_runs > 0;
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(report.moments[0].value));
  }
  const double er_slope = fit_line(x, y).slope;
  const bool ok = !censored && std::abs(bipartite_slope - 2) <= 0.2 && std::abs(er_slope - 2) <= 0.2;
  return {ok, "bipartite slope vs N2=" + num(bipartite_slope) + " ER normalised slope vs N=" + num(er_slope),
          "2.0 (T ~ N1 N2, T ~ N^2 mu1^2/mu2)", "0.2"};
}

// --- criterion 9 -----------------------------------------------------------

Outcome check_continuum() {
  const int n = 100;
  const auto decomp = build_decomposition(n);
  const auto u = hypergeometric_eigenfunction(7);
  std::vector<double> discrete, continuum;
  for (int j = 1; j < n; ++j) {
    discrete.push_back(to_double(decomp.pair(7).c[j]));
    continuum.push_back(u(static_cast<double>(j) / n));
  }
  const double eig_err = relative_linf_after_fit(discrete, continuum);

  bool decreasing = true;
  std::string detail;
  for (double xi : {0.5, 0.2}) {
    double previous = INFINITY;
    for (int size : {50, 100, 200}) {
      const auto d = build_decomposition(size);
      const int start = static_cast<int>(std::lround(xi * size));
      const auto lt = local_times_exact(d, to_coordinates(d, delta(size, start)));
      double err = 0, scale = 0;
      for (int j = 1; j < size; ++j) {
        const double g = greens_local_time(PointMass{xi}, static_cast<double>(j) / size, size);
        err = std::max(err, std::abs(to_double(lt.values[j - 1]) - g));
        scale = std::max(scale, std::abs(g));
      }
      const double rel = err / scale;
      decreasing = decreasing && rel < previous;
      previous = rel;
      detail += " xi=" + num(xi) + ",N=" + std::to_string(size) + ":" + num(rel);
    }
  }
  return {eig_err <= 0.05 && decreasing, "k=7 rel Linf=" + num(eig_err) + ";" + detail,
          "2F1(8,-5,2,x) fit; Green's-function error decreasing in N", "5%; strictly decreasing"};
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"spectral", "closed-form spectrum vs dense eigensolver", 10, check_spectrum},
      {"propagator", "spectral propagation vs repeated single steps", 30, check_propagator},
      {"martingale", "mean macrostate conserved by the propagator", 10, check_martingale},
      {"uniform-local-time", "uniform start gives uniform local time N(N-1)/(2(N+1))", 5, check_uniform_local_time},
      {"oracle-observables", "moments and local times vs fundamental matrix", 60, check_oracle_observables},
      {"consensus-time-exact", "exact E[T] at N=100 vs continuum N^2 ln 2", 60, check_consensus_time_exact},
      {"continuum", "hypergeometric eigenfunction and Green's-function limits", 60, check_continuum},
      {"consensus-time-mc", "Monte Carlo E[T] vs exact at N=100", 120, check_consensus_time_mc},
      {"local-time-mc", "simulated local times vs exact, 3000 runs", 600, check_local_time_mc},
      {"moment-growth", "ln(T_p/p!) linear in p", 600, check_moment_growth},
      {"moment-scaling", "ln(T_5/5!) vs ln N slope", 900, check_moment_scaling},
      {"gap-scaling", "consensus time scaling on bipartite and ER graphs", 900, check_gap_scaling},
  };
  return checks;
}

bool in_core(const std::string& id) {
  return id == "spectral" || id == "propagator" || id == "martingale" || id == "uniform-local-time" ||
         id == "oracle-observables" || id == "consensus-time-exact" || id == "continuum";
}

}  // namespace

Suite parse_suite(const std::string& text) {
  if (text == "core") return Suite::core;
  if (text == "figures") return Suite::figures;
  if (text == "all") return Suite::all;
  fail(ErrorCode::parse_error, "suite must be core, figures or all; got '" + text + "'");
}

std::vector<std::string> suite_checks(Suite suite) {
  std::vector<std::string> ids;
  for (const auto& c : registry()) {
    const bool core = in_core(c.id);
    if (suite == Suite::all || (suite == Suite::core) == core) ids.push_back(c.id);
  }
  return ids;
}

CheckResult run_check(const std::string& id) {
  const auto& checks = registry();
  const auto it = std::find_if(checks.begin(), checks.end(), [&](const Check& c) { return c.id == id; });
  if (it == checks.end()) fail(ErrorCode::invalid_argument, "unknown check '" + id + "'");
  CheckResult result;
  result.id = it->id;
  result.title = it->title;
  const auto start = Clock::now();
  try {
    const Outcome o = it->run();
    result.passed = o.passed;
    result.measured = o.measured;
    result.expected = o.expected;
    result.tolerance = o.tolerance;
  } catch (const std::exception& e) {
    result.passed = false;
    result.measured = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (result.seconds > it->budget_seconds) {
    result.passed = false;
    result.measured += " [over runtime budget " + num(it->budget_seconds) + " s]";
  }
  return result;
}

std::string format_result(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << r.id << ": " << r.title << " | measured: " << r.measured
     << " | expected: " << r.expected << " | tolerance: " << r.tolerance << " | " << num(r.seconds) << " s";
  return os.str();
}

std::vector<CheckResult> run_suite(Suite suite, std::ostream& out) {
  std::vector<CheckResult> results;
  for (const auto& id : suite_checks(suite)) {
    results.push_back(run_check(id));
    out << format_result(results.back()) << '\n' << std::flush;
  }
  return results;
}

}  // namespace voter::validation
