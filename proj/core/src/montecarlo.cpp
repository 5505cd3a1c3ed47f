#include "voter/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "voter/error.hpp"

namespace voter {

MicroState::MicroState(const Topology& t, std::vector<std::uint8_t> states) : states_(std::move(states)) {
  if (static_cast<int>(states_.size()) != t.size()) fail(ErrorCode::length_mismatch, "state vector must cover every node");
  std::map<int, int> class_of;
  for (int k : t.degrees()) class_of.emplace(k, 0);
  int next = 0;
  for (auto& [degree, index] : class_of) {
    index = next++;
    class_degree_.push_back(degree);
  }
  class_count_a_.assign(class_degree_.size(), 0);
  node_class_.resize(states_.size());
  for (int i = 0; i < t.size(); ++i) {
    node_class_[i] = class_of.at(t.degree(i));
    if (states_[i] > 1) fail(ErrorCode::invalid_argument, "opinions must be 0 (B) or 1 (A)");
    if (states_[i]) {
      ++count_a_;
      ++class_count_a_[node_class_[i]];
    }
  }
}

void MicroState::set(int node, std::uint8_t opinion) {
  const std::uint8_t old = states_[node];
  if (old == opinion) return;
  states_[node] = opinion;
  const int delta = opinion ? 1 : -1;
  count_a_ += delta;
  class_count_a_[node_class_[node]] += delta;
}

bool MicroState::audit() const {
  int total = 0;
  std::vector<int> per_class(class_degree_.size(), 0);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i]) {
      ++total;
      ++per_class[node_class_[i]];
    }
  }
  return total == count_a_ && per_class == class_count_a_;
}

void step(MicroState& state, const Topology& t, Engine& rng) {
  const int node = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(t.size())));
  const int slot = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(t.degree(node))));
  state.set(node, state.states()[t.neighbor(node, slot)]);
}

std::string describe(const TopologySpec& spec) {
  std::ostringstream os;
  if (const auto* c = std::get_if<CompleteSpec>(&spec)) {
    os << "complete:" << c->n;
  } else if (const auto* b = std::get_if<BipartiteSpec>(&spec)) {
    os << "bipartite:" << b->n1 << ',' << b->n2;
  } else if (const auto* e = std::get_if<ErdosRenyiSpec>(&spec)) {
    os << "er:" << e->n << ',' << format_double(e->p_link);
  } else {
    const auto& g = std::get<FixedGraph>(spec).graph;
    os << "graph:" << g->size() << ',' << g->edge_count();
  }
  return os.str();
}

int population(const TopologySpec& spec) {
  if (const auto* c = std::get_if<CompleteSpec>(&spec)) return c->n;
  if (const auto* b = std::get_if<BipartiteSpec>(&spec)) return b->n1 + b->n2;
  if (const auto* e = std::get_if<ErdosRenyiSpec>(&spec)) return e->n;
  return std::get<FixedGraph>(spec).graph->size();
}

std::string describe(const InitialCondition& init) {
  std::ostringstream os;
  if (const auto* c = std::get_if<CountInit>(&init)) {
    os << "count:" << c->n_a;
  } else if (const auto* f = std::get_if<FractionInit>(&init)) {
    os << "fraction:" << format_double(f->rho);
  } else if (const auto* g = std::get_if<GroupInit>(&init)) {
    os << "groups:" << g->n1_a << ',' << g->n2_a;
  } else {
    os << "macrostate-draw:" << std::get<MacrostateDraw>(init).probabilities.size();
  }
  return os.str();
}

std::uint64_t replica_seed(std::uint64_t master_seed, int replica) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(replica));
}

namespace {

constexpr std::uint64_t kGraphStream = 0x6772617068ULL;  // "graph"
constexpr std::uint64_t kDynamicsStream = 0x64796eULL;   // "dyn"

std::shared_ptr<const Topology> fixed_topology(const TopologySpec& spec) {
  if (const auto* c = std::get_if<CompleteSpec>(&spec)) return std::make_shared<const Topology>(generate_complete(c->n));
  if (const auto* b = std::get_if<BipartiteSpec>(&spec)) {
    return std::make_shared<const Topology>(generate_bipartite(b->n1, b->n2));
  }
  if (const auto* g = std::get_if<FixedGraph>(&spec)) return g->graph;
  return nullptr;
}

// Marks `count` distinct nodes among `pool` as opinion A (partial Fisher-Yates).
void place(std::vector<std::uint8_t>& states, std::vector<int> pool, int count, Engine& rng) {
  if (count < 0 || count > static_cast<int>(pool.size())) {
    fail(ErrorCode::invalid_argument, "initial opinion count " + std::to_string(count) + " outside [0, " +
                                          std::to_string(pool.size()) + "]");
  }
  for (int i = 0; i < count; ++i) {
    const auto r = static_cast<std::size_t>(i) + uniform_below(rng, pool.size() - static_cast<std::size_t>(i));
    std::swap(pool[i], pool[r]);
    states[pool[i]] = 1;
  }
}

std::vector<int> node_range(int begin, int end) {
  std::vector<int> v;
  for (int i = begin; i < end; ++i) v.push_back(i);
  return v;
}

std::vector<std::uint8_t> initial_states(const InitialCondition& init, const Topology& t, Engine& rng) {
  const int n = t.size();
  std::vector<std::uint8_t> states(static_cast<std::size_t>(n), 0);
  const bool bipartite = t.kind() == TopologyKind::complete_bipartite;
  if (const auto* c = std::get_if<CountInit>(&init)) {
    place(states, node_range(0, n), c->n_a, rng);
  } else if (const auto* f = std::get_if<FractionInit>(&init)) {
    if (!(f->rho >= 0 && f->rho <= 1)) fail(ErrorCode::density_out_of_range, "initial fraction must lie in [0, 1]");
    if (bipartite) {
      place(states, node_range(0, t.group1()), static_cast<int>(std::lround(f->rho * t.group1())), rng);
      place(states, node_range(t.group1(), n), static_cast<int>(std::lround(f->rho * t.group2())), rng);
    } else {
      place(states, node_range(0, n), static_cast<int>(std::lround(f->rho * n)), rng);
    }
  } else if (const auto* g = std::get_if<GroupInit>(&init)) {
    if (!bipartite) fail(ErrorCode::invalid_argument, "per-group initial counts need a bipartite topology");
    place(states, node_range(0, t.group1()), g->n1_a, rng);
    place(states, node_range(t.group1(), n), g->n2_a, rng);
  } else {
    const auto& probs = std::get<MacrostateDraw>(init).probabilities;
    if (static_cast<int>(probs.size()) != n + 1) {
      fail(ErrorCode::length_mismatch, "macrostate distribution must have N+1 entries");
    }
    const double u = uniform01(rng);
    double cum = 0;
    int count = n;
    for (int j = 0; j <= n; ++j) {
      cum += probs[j];
      if (u < cum) {
        count = j;
        break;
      }
    }
    place(states, node_range(0, n), count, rng);
  }
  return states;
}

std::uint64_t censor_cap(const SimulationConfig& config, const Topology& t, const MicroState& state) {
  if (config.max_steps > 0) return config.max_steps;
  if (state.unanimous()) return 0;
  const double density = t.kind() == TopologyKind::complete_bipartite
                             ? degree_weighted_density(t, state.states())
                             : static_cast<double>(state.count_a()) / t.size();
  const double cap = kCensorScaleFactor * consensus_scale(t, density);
  return static_cast<std::uint64_t>(std::max(1000.0, std::ceil(cap)));
}

RunRecord run_replica(const SimulationConfig& config, const Topology* shared, int replica) {
  RunRecord rec;
  rec.replica = replica;
  rec.seed = replica_seed(config.master_seed, replica);

  std::optional<Topology> own;
  if (shared == nullptr) {
    const auto& er = std::get<ErdosRenyiSpec>(config.topology);
    own.emplace(generate_er(er.n, er.p_link, derive_seed(rec.seed, kGraphStream)));
  }
  const Topology& t = shared ? *shared : *own;
  const auto moments = degree_moments(t);
  rec.normalization = moments.mu1 * moments.mu1 / moments.mu2;

  Engine rng(derive_seed(rec.seed, kDynamicsStream));
  MicroState state(t, initial_states(config.init, t, rng));
  rec.initial_count = state.count_a();

  const bool tally = config.record_local_times && t.kind() == TopologyKind::complete;
  if (tally) rec.visits.assign(static_cast<std::size_t>(t.size()) + 1, 0);
  std::vector<std::uint64_t> checkpoints = config.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  rec.checkpoint_counts.reserve(checkpoints.size());
  std::size_t next_checkpoint = 0;

  const std::uint64_t cap = censor_cap(config, t, state);
  std::uint64_t m = 0;
  while (!state.unanimous()) {
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == m) {
      rec.checkpoint_counts.push_back(state.count_a());
      ++next_checkpoint;
    }
    if (m >= cap) {
      rec.censored = true;
      break;
    }
    if (tally) ++rec.visits[state.count_a()];
    step(state, t, rng);
    ++m;
  }
  for (; next_checkpoint < checkpoints.size(); ++next_checkpoint) rec.checkpoint_counts.push_back(state.count_a());
  rec.consensus_time = m;
  rec.final_count = state.count_a();
  return rec;
}

void require_config(const SimulationConfig& config) {
  if (config.runs < 1) fail(ErrorCode::invalid_argument, "runs must be >= 1");
  if (config.threads < 1) fail(ErrorCode::invalid_argument, "threads must be >= 1");
}

}  // namespace

RunRecord run_to_consensus(const SimulationConfig& config, int replica) {
  require_config(config);
  const auto shared = fixed_topology(config.topology);
  return run_replica(config, shared.get(), replica);
}

std::vector<RunRecord> simulate(const SimulationConfig& config) {
  require_config(config);
  const auto shared = fixed_topology(config.topology);
  std::vector<RunRecord> records(static_cast<std::size_t>(config.runs));
  const int workers = std::min(config.threads, config.runs);
  if (workers == 1) {
    for (int r = 0; r < config.runs; ++r) records[r] = run_replica(config, shared.get(), r);
    return records;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < config.runs; r = next++) {
        try {
          records[r] = run_replica(config, shared.get(), r);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return records;
}

SimulationReport estimate_moments(std::span<const RunRecord> runs, int p_max, bool normalize) {
  if (p_max < 1) fail(ErrorCode::invalid_argument, "p_max must be >= 1");
  SimulationReport report;
  report.normalized = normalize;
  std::vector<double> times;
  double factor_sum = 0;
  for (const auto& r : runs) {
    if (r.censored) {
      ++report.censored_runs;
      continue;
    }
    const double factor = normalize ? r.normalization : 1.0;
    factor_sum += factor;
    times.push_back(static_cast<double>(r.consensus_time) / factor);
  }
  if (times.empty()) fail(ErrorCode::all_runs_censored, "every run hit the step cap; no moments can be estimated");
  if (report.censored_runs > 0) {
    report.warnings.push_back(std::to_string(report.censored_runs) + " censored run(s) excluded from moments");
  }
  report.used_runs = static_cast<int>(times.size());
  report.mean_normalization = factor_sum / report.used_runs;

  const double count = report.used_runs;
  std::vector<double> ps, logs;
  for (int p = 1; p <= p_max; ++p) {
    double sum = 0, sum_sq = 0;
    for (double t : times) {
      const double v = std::pow(t, p);
      sum += v;
      sum_sq += v * v;
    }
    MomentEstimate est;
    est.p = p;
    est.value = sum / count;
    est.std_error = report.used_runs < 2 ? std::numeric_limits<double>::quiet_NaN()
                                         : std::sqrt(std::max(0.0, (sum_sq - sum * sum / count) / (count - 1)) / count);
    est.log_scaled = std::log(est.value) - std::lgamma(p + 1.0);
    report.moments.push_back(est);
    ps.push_back(p);
    logs.push_back(est.log_scaled);
  }
  if (p_max >= 2 && std::all_of(logs.begin(), logs.end(), [](double x) { return std::isfinite(x); })) {
    report.fit = fit_line(ps, logs);
  }
  return report;
}

LocalTimeHistogram local_time_histogram(const TopologySpec& spec, std::span<const RunRecord> runs) {
  int n = 0;
  if (const auto* c = std::get_if<CompleteSpec>(&spec)) {
    n = c->n;
  } else if (const auto* g = std::get_if<FixedGraph>(&spec); g && g->graph->kind() == TopologyKind::complete) {
    n = g->graph->size();
  } else {
    fail(ErrorCode::unsupported_observable, "macrostate local times are defined on the complete graph only");
  }
  std::vector<double> sum(static_cast<std::size_t>(n) + 1, 0.0), sum_sq(sum);
  int used = 0;
  for (const auto& r : runs) {
    if (r.censored) continue;
    if (static_cast<int>(r.visits.size()) != n + 1) {
      fail(ErrorCode::invalid_argument, "run " + std::to_string(r.replica) + " carries no visit tally");
    }
    ++used;
    for (int j = 1; j < n; ++j) {
      const double v = static_cast<double>(r.visits[j]);
      sum[j] += v;
      sum_sq[j] += v * v;
    }
  }
  if (used == 0) fail(ErrorCode::all_runs_censored, "no uncensored runs to average");
  LocalTimeHistogram h;
  for (int j = 1; j < n; ++j) {
    const double mean = sum[j] / used;
    h.mean.push_back(mean);
    const double var = used < 2 ? std::numeric_limits<double>::quiet_NaN()
                                : std::max(0.0, (sum_sq[j] - sum[j] * mean) / (used - 1));
    h.std_error.push_back(std::sqrt(var / used));
  }
  return h;
}

}  // namespace voter
