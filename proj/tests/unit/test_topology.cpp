#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "voter/topology.hpp"

using namespace voter;
using testing::q;

TEST_SUITE("topology") {
  TEST_CASE("complete graph") {
    const auto t = generate_complete(3);
    CHECK(t.edge_count() == 3);
    const auto big = generate_complete(100);
    for (int v = 0; v < 100; ++v) CHECK(big.degree(v) == 99);
    const auto m = degree_moments(big);
    CHECK(m.mu1 == 99);
    CHECK(m.mu2 == 9801);
    CHECK(big.connected());
    CHECK_VOTER_ERROR(generate_complete(1), ErrorCode::invalid_population);
  }

  TEST_CASE("complete bipartite graph") {
    const auto one = generate_bipartite(1, 1);
    CHECK(one.edge_count() == 1);
    const auto t = generate_bipartite(80, 20);
    CHECK(t.edge_count() == 1600);
    for (const auto& [i, j] : t.edges()) CHECK(((i < 80) != (j < 80)));
    const auto m = degree_moments(t);
    CHECK(m.mu1 == doctest::Approx(32));
    CHECK(m.mu2 == doctest::Approx(1600));
    CHECK_VOTER_ERROR(generate_bipartite(0, 3), ErrorCode::invalid_population);
  }

  TEST_CASE("Erdos-Renyi generation") {
    const auto a = generate_er(100, 0.05, 42);
    const auto b = generate_er(100, 0.05, 42);
    CHECK(a.edges() == b.edges());
    CHECK(a.connected());
    CHECK(generate_er(100, 0.05, 43).edges() != a.edges());
    CHECK(generate_er(12, 1.0, 5).edge_count() == 66);
    CHECK_VOTER_ERROR(generate_er(50, 0.001, 1, 5), ErrorCode::generation_failure);
    CHECK_VOTER_ERROR(generate_er(10, 0.0, 1), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(generate_er(10, 1.5, 1), ErrorCode::invalid_argument);
  }

  TEST_CASE("Erdos-Renyi edge counts follow the binomial law") {
    const int n = 100;
    const double p = 0.05;
    const double pairs = n * (n - 1) / 2.0;
    double sum = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(generate_er(n, p, 1000 + s).edge_count());
    const double mean = sum / seeds;
    const double sigma = std::sqrt(pairs * p * (1 - p) / seeds);
    CHECK(std::abs(mean - p * pairs) < 3 * sigma);
  }

  TEST_CASE("explicit graphs") {
    std::vector<std::pair<int, int>> ring;
    for (int i = 0; i < 10; ++i) ring.emplace_back(i, (i + 1) % 10);
    const auto t = make_explicit(10, ring);
    const auto m = degree_moments(t);
    CHECK(m.mu2 == doctest::Approx(m.mu1 * m.mu1));
    CHECK(gap_estimate(t).gap == doctest::Approx(1.0 / 100));
    CHECK_VOTER_ERROR(make_explicit(4, {{0, 1}, {2, 3}}), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(make_explicit(3, {{0, 0}, {1, 2}}), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(make_explicit(3, {{0, 1}, {1, 0}, {1, 2}}), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(make_explicit(3, {{0, 1}, {1, 3}}), ErrorCode::index_out_of_range);
  }

  TEST_CASE("gap estimates") {
    const auto c = gap_estimate(generate_complete(100));
    REQUIRE(c.exact.has_value());
    CHECK(*c.exact == q(2, 9900));
    CHECK_FALSE(c.order_estimate);
    const auto b = gap_estimate(generate_bipartite(80, 20));
    CHECK(b.gap == doctest::Approx(1.0 / 1600));
    CHECK(b.order_estimate);
    CHECK_FALSE(b.exact.has_value());
  }

  TEST_CASE("consensus scales") {
    CHECK(mixing_entropy(0.5) == doctest::Approx(std::log(2.0)));
    CHECK(consensus_scale(generate_complete(100), 0.5) == doctest::Approx(1e4 * std::log(2.0)));
    CHECK(consensus_scale(generate_bipartite(80, 20), 0.5) == doctest::Approx(4 * 1600 * std::log(2.0)));
    CHECK(consensus_scale(generate_complete(100), 1e-12) < 1e-4);
    CHECK_VOTER_ERROR(consensus_scale(generate_complete(10), 0.0), ErrorCode::density_out_of_range);
    CHECK_VOTER_ERROR(consensus_scale(generate_complete(10), 1.0), ErrorCode::density_out_of_range);
  }

  TEST_CASE("degree-weighted density") {
    const auto t = generate_bipartite(4, 1);
    std::vector<std::uint8_t> s = {0, 0, 0, 0, 1};
    CHECK(degree_weighted_density(t, s) == doctest::Approx(0.5));
    s = {1, 0, 0, 0, 0};
    CHECK(degree_weighted_density(t, s) == doctest::Approx(0.125));
  }

  TEST_CASE("edge list round trip") {
    const auto g = generate_er(30, 0.2, 9);
    std::stringstream io;
    write_edge_list(g, io);
    const auto back = read_edge_list(io);
    CHECK(back.size() == 30);
    CHECK(back.edges() == g.edges());
    std::istringstream truncated("4 3\n0 1\n1 2\n");
    CHECK_VOTER_ERROR(read_edge_list(truncated), ErrorCode::parse_error);
    std::istringstream junk("3 2\n0 1\n1 2\nextra\n");
    CHECK_VOTER_ERROR(read_edge_list(junk), ErrorCode::parse_error);
    std::istringstream header("x y\n");
    CHECK_VOTER_ERROR(read_edge_list(header), ErrorCode::parse_error);
    CHECK_VOTER_ERROR(read_edge_list_file("/nonexistent/graph.txt"), ErrorCode::parse_error);
  }
}
