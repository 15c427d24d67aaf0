#include "doctest.h"
#include "test_helpers.hpp"

using namespace hyperrc;
using namespace testutil;

TEST_CASE("factor graph shape") {
  auto g = Hypergraph::build(3, {}, {{{0, 1, 2}, 1, CutFunctionSpec::standard()}});
  FactorGraph fg = build_factor_graph(g);
  CHECK(fg.num_variables + fg.num_factors == 4);
  CHECK(fg.num_edges == 3);

  auto p4 = path_graph(4);
  FactorGraph sub = build_factor_graph(p4);
  CHECK(sub.num_variables == 4);
  CHECK(sub.num_factors == 3);  // the 1-subdivision of P4
  CHECK(sub.num_edges == p4.sparsity());
}

TEST_CASE("congestion of a rank-2 standard flow") {
  auto g = Hypergraph::build(2, {}, {{{0, 1}, 2, CutFunctionSpec::standard()}});
  HypergraphFlow y = HypergraphFlow::zero(g);
  y.y[0] = {1.0, -1.0};
  CongestionReport report = congestion(g, y);
  CHECK(report.per_edge[0] == doctest::Approx(1.0));
  CHECK(report.max == doctest::Approx(1.0));

  HypergraphFlow zero = HypergraphFlow::zero(g);
  CHECK(congestion(g, zero).max == doctest::Approx(0.0));

  // Scaling the flow scales every congestion.
  y.y[0] = {3.0, -3.0};
  CHECK(congestion(g, y).per_edge[0] == doctest::Approx(3.0));
}

TEST_CASE("flow conservation is validated") {
  auto g = Hypergraph::build(3, {}, {{{0, 1, 2}, 1, CutFunctionSpec::standard()}});
  HypergraphFlow y = HypergraphFlow::zero(g);
  y.y[0] = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(validate_flow(g, y), DomainError);
}

TEST_CASE("cut-improvement network has the documented capacities") {
  auto g = Hypergraph::build(3, {}, {{{0, 1, 2}, 5, CutFunctionSpec::standard()}});
  std::vector<double> s = {1.0, -0.5, -0.5};
  CiFlowNetwork ci = build_flow_network(g, s, 1.0);
  CHECK(ci.net.arc_cap(ci.terminal_arc[0]) == doctest::Approx(1.0));
  CHECK(ci.net.arc_cap(ci.terminal_arc[1]) == doctest::Approx(0.5));
  CHECK(ci.net.arc_cap(ci.terminal_arc[2]) == doctest::Approx(0.5));
  CHECK(ci.net.arc_cap(ci.split_arc[0]) == doctest::Approx(5.0));
  CHECK(ci.target == doctest::Approx(1.0));

  // The seed routes fully through the capacity-5 factor.
  MaxFlowResult mf = max_flow(ci.net, ci.source, ci.sink);
  CHECK(mf.value == doctest::Approx(1.0));

  // alpha = 0 admits no flow; doubling alpha doubles the terminal capacities.
  CiFlowNetwork zero = build_flow_network(g, s, 0.0);
  CHECK(max_flow(zero.net, zero.source, zero.sink).value == doctest::Approx(0.0));
  CiFlowNetwork twice = build_flow_network(g, s, 2.0);
  CHECK(twice.net.arc_cap(twice.terminal_arc[0]) == doctest::Approx(2.0));
  CHECK(twice.target == doctest::Approx(2.0));
}

TEST_CASE("invalid seeds are rejected by the network builder") {
  auto g = triangle_graph();
  CHECK_THROWS_AS(build_flow_network(g, std::vector<double>{1.0, 1.0, 1.0}, 1.0),
                  DomainError);
  CHECK_THROWS_AS(build_flow_network(g, std::vector<double>{2.0, -1.0, -1.0}, 1.0),
                  DomainError);
}

TEST_CASE("max flow on a two-arc path is the bottleneck") {
  FlowNetwork net;
  int s = net.add_node(), a = net.add_node(), t = net.add_node();
  net.add_arc(s, a, 3.0);
  net.add_arc(a, t, 2.0);
  MaxFlowResult mf = max_flow(net, s, t);
  CHECK(mf.value == doctest::Approx(2.0));
  CHECK(mf.source_side[s]);
  CHECK(mf.source_side[a]);
  CHECK(!mf.source_side[t]);
}

TEST_CASE("max flow equals the brute-force minimum cut on random networks") {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + static_cast<int>(rng.below(4));
    FlowNetwork net;
    for (int i = 0; i < n; ++i) net.add_node();
    std::vector<std::tuple<int, int, double>> arcs;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (u == v || rng.uniform() < 0.5) continue;
        double cap = 0.25 + 2.0 * rng.uniform();
        net.add_arc(u, v, cap);
        arcs.push_back({u, v, cap});
      }
    MaxFlowResult mf = max_flow(net, 0, n - 1);
    // Enumerate all s-t cuts.
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (!(mask & 1u) || (mask >> (n - 1)) & 1u) continue;
      double cap = 0.0;
      for (auto [u, v, c] : arcs)
        if (((mask >> u) & 1u) && !((mask >> v) & 1u)) cap += c;
      best = std::min(best, cap);
    }
    CHECK(mf.value == doctest::Approx(best).epsilon(1e-9));
    // The returned residual cut has capacity equal to the flow value.
    double cut_cap = 0.0;
    for (auto [u, v, c] : arcs)
      if (mf.source_side[u] && !mf.source_side[v]) cut_cap += c;
    CHECK(cut_cap == doctest::Approx(mf.value).epsilon(1e-9));
  }
}

TEST_CASE("decomposing a single rank-2 flow yields one demand edge") {
  auto g = Hypergraph::build(2, {}, {{{0, 1}, 1, CutFunctionSpec::standard()}});
  HypergraphFlow y = HypergraphFlow::zero(g);
  y.y[0] = {1.0, -1.0};
  DemandGraph dg = flow_path_decompose(g, y);
  REQUIRE(dg.graph.edges.size() == 1);
  CHECK(dg.graph.edges[0].u == 0);
  CHECK(dg.graph.edges[0].v == 1);
  CHECK(dg.graph.edges[0].w == doctest::Approx(1.0));

  DemandGraph empty = flow_path_decompose(g, HypergraphFlow::zero(g));
  CHECK(empty.graph.edges.empty());
}

TEST_CASE("path decomposition satisfies the demand-graph contract") {
  Rng rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 10;
    opt.standard_only = trial % 2 == 0;
    auto g = random_hypergraph(rng, opt);
    HypergraphFlow y = random_path_flow(g, rng, 6);
    auto dem = flow_demand(g, y);
    DemandGraph dg = flow_path_decompose(g, y);

    // Degree law: deg_H(i) = |dem_i|.
    std::vector<double> deg(g.num_vertices(), 0.0);
    for (const WeightedEdge& e : dg.graph.edges) {
      deg[e.u] += e.w;
      deg[e.v] += e.w;
      // Bipartite over demand signs.
      CHECK(dem[e.u] > -1e-9);
      CHECK(dem[e.v] < 1e-9);
    }
    for (int i = 0; i < g.num_vertices(); ++i)
      CHECK(deg[i] == doctest::Approx(std::fabs(dem[i])).epsilon(1e-7));

    // Sign preservation: every split flow follows the sign of y, entrywise
    // bounded by |y| (the decomposition is of the cycle-canceled flow), and
    // the split demands reproduce dem(Y) exactly.
    std::vector<std::vector<double>> sum(g.num_edges());
    std::vector<std::vector<double>> abs_sum(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
      sum[e].assign(g.edges()[e].vertices.size(), 0.0);
      abs_sum[e].assign(g.edges()[e].vertices.size(), 0.0);
    }
    for (const auto& per_edge : dg.flows)
      for (const auto& [e, ye] : per_edge)
        for (size_t j = 0; j < ye.size(); ++j) {
          CHECK(ye[j] * y.y[e][j] >= -1e-12);
          sum[e][j] += ye[j];
          abs_sum[e][j] += std::fabs(ye[j]);
        }
    std::vector<double> split_dem(g.num_vertices(), 0.0);
    for (int e = 0; e < g.num_edges(); ++e)
      for (size_t j = 0; j < sum[e].size(); ++j) {
        CHECK(std::fabs(sum[e][j]) == doctest::Approx(abs_sum[e][j]).epsilon(1e-9));
        CHECK(abs_sum[e][j] <= std::fabs(y.y[e][j]) + 1e-7);
        split_dem[g.edges()[e].vertices[j]] += sum[e][j];
      }
    for (int i = 0; i < g.num_vertices(); ++i)
      CHECK(split_dem[i] == doctest::Approx(dem[i]).epsilon(1e-7));

    // Aggregated congestion bound per hyperedge.
    CongestionReport cong = congestion(g, y);
    for (int e = 0; e < g.num_edges(); ++e) {
      const Hyperedge& h = g.edges()[e];
      double norm = dual_f_norm(h.spec, static_cast<int>(h.vertices.size()), abs_sum[e]);
      CHECK(norm <= cong.max * static_cast<double>(h.weight) + 1e-7);
    }

    // The demand graph embeds with congestion cong_G(Y): exhaustive check.
    EmbeddingReport report = verify_flow_embedding(g, dg.graph, cong.max);
    CHECK(report.valid);
    CHECK(report.violations == 0);
  }
}

TEST_CASE("decomposition is exact for hyperedge-disjoint path flows") {
  // With each hyperedge carrying at most one walk hop the aggregate flow is
  // cycle-free, so stripping must reproduce it exactly: sum_e Y^e = Y.
  Rng rng(97);
  for (int trial = 0; trial < 30; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 10;
    auto g = random_hypergraph(rng, opt);
    HypergraphFlow y = HypergraphFlow::zero(g);
    std::vector<char> used(g.num_edges(), 0);
    for (int p = 0; p < 4; ++p) {
      int u = static_cast<int>(rng.below(g.num_vertices()));
      for (int hop = 0; hop < 3; ++hop) {
        std::vector<std::tuple<int, int, int>> forward;
        for (int e = 0; e < g.num_edges(); ++e) {
          if (used[e]) continue;
          const auto& vs = g.edges()[e].vertices;
          for (int j = 0; j < static_cast<int>(vs.size()); ++j) {
            if (vs[j] != u) continue;
            for (int k = 0; k < static_cast<int>(vs.size()); ++k)
              if (vs[k] > u) forward.push_back({e, j, k});
          }
        }
        if (forward.empty()) break;
        auto [e, j, k] = forward[rng.below(forward.size())];
        double amount = 0.25 + rng.uniform();
        y.y[e][j] += amount;
        y.y[e][k] -= amount;
        used[e] = 1;
        u = g.edges()[e].vertices[k];
      }
    }
    DemandGraph dg = flow_path_decompose(g, y);
    std::vector<std::vector<double>> sum(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
      sum[e].assign(g.edges()[e].vertices.size(), 0.0);
    for (const auto& per_edge : dg.flows)
      for (const auto& [e, ye] : per_edge)
        for (size_t j = 0; j < ye.size(); ++j) sum[e][j] += ye[j];
    for (int e = 0; e < g.num_edges(); ++e)
      for (size_t j = 0; j < sum[e].size(); ++j)
        CHECK(sum[e][j] == doctest::Approx(y.y[e][j]).epsilon(1e-9));
  }
}

TEST_CASE("embedding verification accepts empty graphs and flags crafted violations") {
  auto g = Hypergraph::build(3, {}, {{{0, 1, 2}, 1, CutFunctionSpec::standard()}});
  WeightedGraph empty;
  empty.n = 3;
  CHECK(verify_flow_embedding(g, empty, 0.0).valid);

  // Clique expansion of the rank-3 edge: delta_K(S) hits 2 while the standard
  // cut is 1, so rho = 1 must fail.
  WeightedGraph clique;
  clique.n = 3;
  clique.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  EmbeddingReport bad = verify_flow_embedding(g, clique, 1.0);
  CHECK(!bad.valid);
  CHECK(bad.violations > 0);
  CHECK(bad.worst_ratio == doctest::Approx(2.0));
  EmbeddingReport good = verify_flow_embedding(g, clique, 2.0);
  CHECK(good.valid);
}
