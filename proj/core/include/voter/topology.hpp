#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voter/rational.hpp"

namespace voter {

enum class TopologyKind { complete, complete_bipartite, explicit_graph };

const char* to_string(TopologyKind kind) noexcept;

/// Undirected simple graph in adjacency-array form. Bipartite graphs keep
/// nodes [0, N1) in group 1 and [N1, N1+N2) in group 2.
class Topology {
 public:
  Topology(TopologyKind kind, int n, std::vector<std::pair<int, int>> edges, int n1 = 0, int n2 = 0);

  TopologyKind kind() const noexcept { return kind_; }
  int size() const noexcept { return n_; }
  int group1() const noexcept { return n1_; }
  int group2() const noexcept { return n2_; }

  std::int64_t edge_count() const noexcept { return static_cast<std::int64_t>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

  int degree(int node) const { return offsets_[node + 1] - offsets_[node]; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  int neighbor(int node, int slot) const { return neighbors_[offsets_[node] + slot]; }

  bool connected() const;

 private:
  TopologyKind kind_;
  int n_;
  int n1_;
  int n2_;
  std::vector<std::pair<int, int>> edges_;  // i < j, sorted
  std::vector<int> offsets_;
  std::vector<int> neighbors_;
  std::vector<int> degrees_;
};

struct DegreeMoments {
  double mu1 = 0.0;  // mean degree
  double mu2 = 0.0;  // mean squared degree
};

struct GapEstimate {
  double gap = 0.0;
  std::string family;
  bool order_estimate = true;    // unit constant in front of the scaling law
  std::optional<Rational> exact;  // complete graph only
};

Topology generate_complete(int n);
Topology generate_bipartite(int n1, int n2);

inline constexpr int kDefaultErRetries = 1000;

/// G(N, p) conditioned on connectivity: attempt r uses a seed derived from
/// (seed, r) and the first connected draw wins.
Topology generate_er(int n, double p_link, std::uint64_t seed, int max_attempts = kDefaultErRetries);

/// Validates simple, symmetric, connected input.
Topology make_explicit(int n, std::vector<std::pair<int, int>> edges);

DegreeMoments degree_moments(const Topology& t);

GapEstimate gap_estimate(const Topology& t);

/// (1 - x) ln(1/(1 - x)) + x ln(1/x).
double mixing_entropy(double x);

/// Continuum consensus-time scale in iterations at density rho (complete,
/// explicit) or degree-weighted density omega (bipartite).
double consensus_scale(const Topology& t, double density);

/// Degree-weighted mean opinion sum k_i n_i / sum k_i.
double degree_weighted_density(const Topology& t, const std::vector<std::uint8_t>& states);

/// "N M" then M lines "i j", 0-based.
void write_edge_list(const Topology& t, std::ostream& out);
Topology read_edge_list(std::istream& in);
Topology read_edge_list_file(const std::string& path);

}  // namespace voter
