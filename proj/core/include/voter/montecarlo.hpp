#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "voter/random.hpp"
#include "voter/stats.hpp"
#include "voter/topology.hpp"

namespace voter {

/// Node opinions (A = 1, B = 0) with incrementally maintained totals: n_A and
/// the number of A nodes in each degree class.
class MicroState {
 public:
  MicroState(const Topology& t, std::vector<std::uint8_t> states);

  const std::vector<std::uint8_t>& states() const noexcept { return states_; }
  int count_a() const noexcept { return count_a_; }
  int size() const noexcept { return static_cast<int>(states_.size()); }
  bool unanimous() const noexcept { return count_a_ == 0 || count_a_ == size(); }

  const std::vector<int>& class_degrees() const noexcept { return class_degree_; }
  const std::vector<int>& class_counts() const noexcept { return class_count_a_; }

  void set(int node, std::uint8_t opinion);

  /// Recounts from scratch; false if the incremental totals drifted.
  bool audit() const;

 private:
  std::vector<std::uint8_t> states_;
  std::vector<int> node_class_;
  std::vector<int> class_degree_;
  std::vector<int> class_count_a_;
  int count_a_ = 0;
};

/// One iteration: a uniformly chosen node copies a uniformly chosen neighbour.
void step(MicroState& state, const Topology& t, Engine& rng);

struct CompleteSpec {
  int n;
};
struct BipartiteSpec {
  int n1;
  int n2;
};
struct ErdosRenyiSpec {
  int n;
  double p_link;
};
struct FixedGraph {
  std::shared_ptr<const Topology> graph;
};

/// ER specs draw a fresh connected graph per replica from the replica stream.
using TopologySpec = std::variant<CompleteSpec, BipartiteSpec, ErdosRenyiSpec, FixedGraph>;

std::string describe(const TopologySpec& spec);
int population(const TopologySpec& spec);

struct CountInit {
  int n_a;
};
struct FractionInit {
  double rho;  // n_A = round(rho N); per group on bipartite graphs
};
struct GroupInit {
  int n1_a;
  int n2_a;
};
struct MacrostateDraw {
  std::vector<double> probabilities;  // over n_A = 0..N, drawn per replica
};

using InitialCondition = std::variant<CountInit, FractionInit, GroupInit, MacrostateDraw>;

std::string describe(const InitialCondition& init);

struct SimulationConfig {
  TopologySpec topology = CompleteSpec{100};
  InitialCondition init = FractionInit{0.5};
  int runs = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t max_steps = 0;  // 0: 100x the analytic consensus scale
  bool record_local_times = false;
  std::vector<std::uint64_t> checkpoints;  // record n_A at these iterations
  int threads = 1;
};

struct RunRecord {
  int replica = 0;
  std::uint64_t seed = 0;
  std::uint64_t consensus_time = 0;
  bool censored = false;
  int initial_count = 0;
  int final_count = 0;
  double normalization = 1.0;  // mu1^2 / mu2 of the graph the run used
  std::vector<std::uint64_t> visits;        // per macrostate 0..N, complete graph only
  std::vector<int> checkpoint_counts;
};

inline constexpr double kCensorScaleFactor = 100.0;

std::uint64_t replica_seed(std::uint64_t master_seed, int replica);

RunRecord run_to_consensus(const SimulationConfig& config, int replica);

/// All replicas, in replica order; identical for any thread count.
std::vector<RunRecord> simulate(const SimulationConfig& config);

struct MomentEstimate {
  int p = 1;
  double value = 0.0;      // mean of (T / factor)^p
  double std_error = 0.0;  // NaN for a single run
  double log_scaled = 0.0;  // ln(T_p / p!)
};

struct SimulationReport {
  std::vector<MomentEstimate> moments;
  LinearFit fit;  // ln(T_p/p!) against p
  bool normalized = false;
  double mean_normalization = 1.0;
  int used_runs = 0;
  int censored_runs = 0;
  std::vector<std::string> warnings;
};

/// T_p for p = 1..p_max over uncensored runs; with `normalize` each T is
/// divided by its graph's mu1^2/mu2 first.
SimulationReport estimate_moments(std::span<const RunRecord> runs, int p_max, bool normalize);

struct LocalTimeHistogram {
  std::vector<double> mean;       // macrostates 1..N-1
  std::vector<double> std_error;
};

LocalTimeHistogram local_time_histogram(const TopologySpec& spec, std::span<const RunRecord> runs);

}  // namespace voter
