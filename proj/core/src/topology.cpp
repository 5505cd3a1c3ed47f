#include "voter/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "voter/error.hpp"
#include "voter/random.hpp"

namespace voter {

const char* to_string(TopologyKind kind) noexcept {
  switch (kind) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::complete_bipartite: return "complete-bipartite";
    case TopologyKind::explicit_graph: return "explicit";
  }
  return "unknown";
}

Topology::Topology(TopologyKind kind, int n, std::vector<std::pair<int, int>> edges, int n1, int n2)
    : kind_(kind), n_(n), n1_(n1), n2_(n2), edges_(std::move(edges)) {
  if (n < 2) fail(ErrorCode::invalid_population, "a graph needs at least 2 nodes");
  for (auto& [i, j] : edges_) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      fail(ErrorCode::index_out_of_range, "edge (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    }
    if (i == j) fail(ErrorCode::invalid_argument, "self-loop at node " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    fail(ErrorCode::invalid_argument, "duplicate edge in graph");
  }
  degrees_.assign(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : edges_) {
    ++degrees_[i];
    ++degrees_[j];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degrees_[v];
  neighbors_.resize(static_cast<std::size_t>(offsets_[n]));
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges_) {
    neighbors_[fill[i]++] = j;
    neighbors_[fill[j]++] = i;
  }
}

bool Topology::connected() const {
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int s = offsets_[v]; s < offsets_[v + 1]; ++s) {
      const int w = neighbors_[s];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

Topology generate_complete(int n) {
  if (n < 2) fail(ErrorCode::invalid_population, "complete graph needs N >= 2");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Topology(TopologyKind::complete, n, std::move(edges));
}

Topology generate_bipartite(int n1, int n2) {
  if (n1 < 1 || n2 < 1) fail(ErrorCode::invalid_population, "bipartite groups need N1, N2 >= 1");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) edges.emplace_back(i, n1 + j);
  return Topology(TopologyKind::complete_bipartite, n1 + n2, std::move(edges), n1, n2);
}

Topology generate_er(int n, double p_link, std::uint64_t seed, int max_attempts) {
  if (n < 2) fail(ErrorCode::invalid_population, "ER graph needs N >= 2");
  if (!(p_link > 0 && p_link <= 1)) fail(ErrorCode::invalid_argument, "link probability must lie in (0, 1]");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Engine rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (uniform01(rng) < p_link) edges.emplace_back(i, j);
    Topology t(TopologyKind::explicit_graph, n, std::move(edges));
    if (t.connected()) return t;
  }
  fail(ErrorCode::generation_failure,
       "no connected G(" + std::to_string(n) + ", p) sample after " + std::to_string(max_attempts) + " attempts");
}

Topology make_explicit(int n, std::vector<std::pair<int, int>> edges) {
  Topology t(TopologyKind::explicit_graph, n, std::move(edges));
  if (!t.connected()) fail(ErrorCode::invalid_argument, "graph is not connected");
  return t;
}

DegreeMoments degree_moments(const Topology& t) {
  double s1 = 0, s2 = 0;
  for (int k : t.degrees()) {
    s1 += k;
    s2 += static_cast<double>(k) * k;
  }
  return {s1 / t.size(), s2 / t.size()};
}

GapEstimate gap_estimate(const Topology& t) {
  GapEstimate g;
  switch (t.kind()) {
    case TopologyKind::complete: {
      const long n = t.size();
      g.exact = Rational(2, n * (n - 1));
      g.exact->canonicalize();
      g.gap = to_double(*g.exact);
      g.family = "complete (exact)";
      g.order_estimate = false;
      break;
    }
    case TopologyKind::complete_bipartite:
      g.gap = 1.0 / (static_cast<double>(t.group1()) * t.group2());
      g.family = "complete-bipartite (order estimate)";
      break;
    case TopologyKind::explicit_graph: {
      const auto m = degree_moments(t);
      const double n = t.size();
      g.gap = m.mu2 / (n * n * m.mu1 * m.mu1);
      g.family = "heterogeneous (order estimate)";
      break;
    }
  }
  return g;
}

double mixing_entropy(double x) {
  auto term = [](double y) { return y <= 0 ? 0.0 : -y * std::log(y); };
  return term(1 - x) + term(x);
}

double consensus_scale(const Topology& t, double density) {
  if (!(density > 0 && density < 1)) {
    fail(ErrorCode::density_out_of_range, "consensus scale needs a density in (0, 1); boundary densities are already at consensus");
  }
  const double n = t.size();
  switch (t.kind()) {
    case TopologyKind::complete: return n * n * mixing_entropy(density);
    case TopologyKind::complete_bipartite:
      return 4.0 * t.group1() * t.group2() * mixing_entropy(density);
    case TopologyKind::explicit_graph: {
      const auto m = degree_moments(t);
      return n * n * m.mu1 * m.mu1 / m.mu2 * mixing_entropy(density);
    }
  }
  return 0;
}

double degree_weighted_density(const Topology& t, const std::vector<std::uint8_t>& states) {
  if (static_cast<int>(states.size()) != t.size()) fail(ErrorCode::length_mismatch, "state vector must cover every node");
  double num = 0, den = 0;
  for (int i = 0; i < t.size(); ++i) {
    num += static_cast<double>(t.degree(i)) * states[i];
    den += t.degree(i);
  }
  return num / den;
}

void write_edge_list(const Topology& t, std::ostream& out) {
  out << t.size() << ' ' << t.edge_count() << '\n';
  for (const auto& [i, j] : t.edges()) out << i << ' ' << j << '\n';
}

Topology read_edge_list(std::istream& in) {
  long n = 0, m = 0;
  if (!(in >> n >> m) || n < 2 || m < 0) fail(ErrorCode::parse_error, "edge list must start with 'N M' (N >= 2)");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long e = 0; e < m; ++e) {
    long i = 0, j = 0;
    if (!(in >> i >> j)) fail(ErrorCode::parse_error, "edge list ended after " + std::to_string(e) + " of " + std::to_string(m) + " edges");
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  std::string extra;
  if (in >> extra) fail(ErrorCode::parse_error, "unexpected trailing content in edge list: '" + extra + "'");
  return make_explicit(static_cast<int>(n), std::move(edges));
}

Topology read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::parse_error, "cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

}  // namespace voter
