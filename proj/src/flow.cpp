#include "hyperrc/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace hyperrc {

namespace {
constexpr double kFlowEps = 1e-11;
}

FactorGraph build_factor_graph(const Hypergraph& g) {
  FactorGraph fg;
  fg.num_variables = g.num_vertices();
  fg.num_factors = g.num_edges();
  fg.num_edges = g.sparsity();
  return fg;
}

HypergraphFlow HypergraphFlow::zero(const Hypergraph& g) {
  HypergraphFlow Y;
  Y.y.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    Y.y[e].assign(g.edges()[e].vertices.size(), 0.0);
  return Y;
}

std::vector<double> flow_demand(const Hypergraph& g, const HypergraphFlow& Y) {
  if (static_cast<int>(Y.y.size()) != g.num_edges())
    throw DomainError("flow shape does not match hypergraph");
  std::vector<double> dem(g.num_vertices(), 0.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& vs = g.edges()[e].vertices;
    if (Y.y[e].size() != vs.size()) throw DomainError("flow shape does not match hypergraph");
    for (size_t j = 0; j < vs.size(); ++j) dem[vs[j]] += Y.y[e][j];
  }
  return dem;
}

void validate_flow(const Hypergraph& g, const HypergraphFlow& Y, double tol) {
  if (static_cast<int>(Y.y.size()) != g.num_edges())
    throw DomainError("flow shape does not match hypergraph");
  for (int e = 0; e < g.num_edges(); ++e) {
    double sum = 0.0, scale = 1.0;
    for (double v : Y.y[e]) {
      sum += v;
      scale = std::max(scale, std::fabs(v));
    }
    if (std::fabs(sum) > tol * scale)
      throw DomainError("hyperedge flow is not orthogonal to 1");
  }
}

CongestionReport congestion(const Hypergraph& g, const HypergraphFlow& Y) {
  validate_flow(g, Y);
  CongestionReport report;
  report.per_edge.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Hyperedge& h = g.edges()[e];
    double norm = dual_f_norm(h.spec, static_cast<int>(h.vertices.size()), Y.y[e]);
    report.per_edge[e] = norm / static_cast<double>(h.weight);
    report.max = std::max(report.max, report.per_edge[e]);
  }
  return report;
}

int FlowNetwork::add_node() {
  head_.emplace_back();
  return static_cast<int>(head_.size()) - 1;
}

int FlowNetwork::add_arc(int from, int to, double cap) {
  if (cap < 0) throw DomainError("arc capacities must be non-negative");
  int id = num_arcs();
  head_[from].push_back(2 * id);
  head_[to].push_back(2 * id + 1);
  arcs_.push_back({to, cap});
  arcs_.push_back({from, 0.0});
  return id;
}

namespace {

struct DinicState {
  std::vector<FlowNetwork::Arc>* arcs;  // residual capacities, mutated
  const std::vector<std::vector<int>>* head;
  std::vector<int> level, it;

  bool bfs(int s, int t, double delta) {
    level.assign(head->size(), -1);
    std::queue<int> q;
    q.push(s);
    level[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int a : (*head)[u]) {
        const auto& arc = (*arcs)[a];
        if ((*arcs)[a ^ 1].to != u) continue;  // arc must leave u
        if (arc.cap > delta && level[arc.to] < 0) {
          level[arc.to] = level[u] + 1;
          q.push(arc.to);
        }
      }
    }
    return level[t] >= 0;
  }

  double dfs(int u, int t, double pushed, double delta) {
    if (u == t) return pushed;
    for (int& i = it[u]; i < static_cast<int>((*head)[u].size()); ++i) {
      int a = (*head)[u][i];
      if ((*arcs)[a ^ 1].to != u) continue;
      auto& arc = (*arcs)[a];
      if (arc.cap > delta && level[arc.to] == level[u] + 1) {
        double got = dfs(arc.to, t, std::min(pushed, arc.cap), delta);
        if (got > 0) {
          arc.cap -= got;
          (*arcs)[a ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0.0;
  }
};

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net, int s, int t) {
  if (s == t) throw DomainError("source equals sink");
  auto arcs = net.arcs_;  // residual copy
  double cap_max = 0.0;
  for (const auto& a : arcs) cap_max = std::max(cap_max, a.cap);
  double eps = std::max(cap_max, 1.0) * kFlowEps;

  DinicState st{&arcs, &net.head_, {}, {}};
  double value = 0.0;
  // Capacity scaling: only push along arcs with residual > delta.
  double delta = cap_max / 2.0;
  while (true) {
    double floor = delta > eps ? delta : eps;
    while (st.bfs(s, t, floor)) {
      st.it.assign(net.head_.size(), 0);
      while (double pushed = st.dfs(s, t, std::numeric_limits<double>::infinity(), floor))
        value += pushed;
    }
    if (delta <= eps) break;
    delta /= 2.0;
  }

  MaxFlowResult result;
  result.value = value;
  result.arc_flow.resize(net.num_arcs());
  for (int id = 0; id < net.num_arcs(); ++id) {
    double f = net.arcs_[2 * id].cap - arcs[2 * id].cap;
    result.arc_flow[id] = f > eps ? f : 0.0;
  }
  // Residual reachability gives the min cut.
  result.source_side.assign(net.num_nodes(), 0);
  std::queue<int> q;
  q.push(s);
  result.source_side[s] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int a : net.head_[u]) {
      if (arcs[a ^ 1].to != u) continue;
      int v = arcs[a].to;
      if (!result.source_side[v] && arcs[a].cap > eps) {
        result.source_side[v] = 1;
        q.push(v);
      }
    }
  }
  // Flow/cut equality certifies optimality of the blocking-flow phases.
  double cut_cap = 0.0;
  for (int id = 0; id < net.num_arcs(); ++id) {
    int from = net.arcs_[2 * id + 1].to;
    int to = net.arcs_[2 * id].to;
    if (result.source_side[from] && !result.source_side[to])
      cut_cap += net.arcs_[2 * id].cap;
  }
  if (std::fabs(cut_cap - value) > 1e-6 * std::max(1.0, cap_max))
    throw Error("max-flow/min-cut mismatch");
  return result;
}

CiFlowNetwork build_flow_network(const Hypergraph& g, std::span<const double> seed,
                                 double alpha) {
  int n = g.num_vertices();
  if (static_cast<int>(seed.size()) != n) throw DomainError("seed length != vertex count");
  if (alpha < 0) throw DomainError("alpha must be non-negative");
  double dot = 0.0, linf = 0.0, l1mu = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(seed[i])) throw DomainError("invalid seed: non-finite entry");
    dot += static_cast<double>(g.mu_of(i)) * seed[i];
    linf = std::max(linf, std::fabs(seed[i]));
    l1mu += static_cast<double>(g.mu_of(i)) * std::fabs(seed[i]);
  }
  if (std::fabs(dot) > 1e-7 * std::max(1.0, l1mu))
    throw DomainError("invalid seed: <s, 1>_mu != 0");
  if (linf > 1.0 + 1e-9) throw DomainError("invalid seed: ||s||_inf > 1");

  CiFlowNetwork ci;
  ci.source = ci.net.add_node();
  ci.sink = ci.net.add_node();
  ci.var_node.resize(n);
  for (int i = 0; i < n; ++i) ci.var_node[i] = ci.net.add_node();

  double source_total = alpha * l1mu / 2.0;
  double big = source_total + 1.0;

  ci.terminal_arc.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    double cap = alpha * static_cast<double>(g.mu_of(i)) * std::fabs(seed[i]);
    if (seed[i] > 0.0)
      ci.terminal_arc[i] = ci.net.add_arc(ci.source, ci.var_node[i], cap);
    else if (seed[i] < 0.0)
      ci.terminal_arc[i] = ci.net.add_arc(ci.var_node[i], ci.sink, cap);
  }

  for (int e = 0; e < g.num_edges(); ++e) {
    const Hyperedge& h = g.edges()[e];
    int in = ci.net.add_node();
    int out = ci.net.add_node();
    ci.factor_node.push_back({in, out});
    ci.split_arc.push_back(ci.net.add_arc(in, out, static_cast<double>(h.weight)));
    for (size_t j = 0; j < h.vertices.size(); ++j) {
      int v = ci.var_node[h.vertices[j]];
      // Undirected factor edge: traffic may enter the factor from v or leave
      // toward v, in both cases passing the capacity-w_h split.
      ci.edge_arcs_in.push_back({e, ci.net.add_arc(v, in, big)});
      ci.edge_arcs_out.push_back({e, ci.net.add_arc(out, v, big)});
    }
  }
  ci.target = source_total;
  return ci;
}

double graph_cut_value(const WeightedGraph& h, const std::vector<char>& in_set) {
  double total = 0.0;
  for (const WeightedEdge& e : h.edges)
    if (in_set[e.u] != in_set[e.v]) total += e.w;
  return total;
}

namespace {

// Arc-level view of a hypergraph flow over the factor graph: positive entries
// are variable->factor arcs, negative entries factor->variable arcs.
struct FlowArcs {
  // residual[e][j] = remaining |y_e[j]|
  std::vector<std::vector<double>> residual;
  std::vector<std::vector<char>> positive;
};

FlowArcs make_arcs(const Hypergraph& g, const HypergraphFlow& Y) {
  FlowArcs fa;
  fa.residual.resize(g.num_edges());
  fa.positive.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& y = Y.y[e];
    fa.residual[e].resize(y.size());
    fa.positive[e].resize(y.size());
    for (size_t j = 0; j < y.size(); ++j) {
      fa.residual[e][j] = std::fabs(y[j]);
      fa.positive[e][j] = y[j] > 0.0 ? 1 : 0;
    }
  }
  return fa;
}

}  // namespace

DemandGraph flow_path_decompose(const Hypergraph& g, const HypergraphFlow& Y) {
  validate_flow(g, Y);
  int n = g.num_vertices();
  FlowArcs fa = make_arcs(g, Y);

  double scale = 1.0;
  for (const auto& row : fa.residual)
    for (double v : row) scale = std::max(scale, v);
  const double tol = kFlowEps * scale;

  // Adjacency: vertex -> (edge, local index) with cursors for O(sparsity)
  // amortized scanning.
  std::vector<std::vector<std::pair<int, int>>> incident(n);
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& vs = g.edges()[e].vertices;
    for (int j = 0; j < static_cast<int>(vs.size()); ++j)
      incident[vs[j]].push_back({e, j});
  }

  // Outgoing arc from vertex u: an incident (e, j) with positive sign and
  // residual left. From a factor entered via (e, jin): an exit (e, jout) with
  // negative sign and residual left.
  auto out_of_vertex = [&](int u) -> std::pair<int, int> {
    for (auto [e, j] : incident[u])
      if (fa.positive[e][j] && fa.residual[e][j] > tol) return {e, j};
    return {-1, -1};
  };
  auto out_of_factor = [&](int e) -> int {
    const auto& vs = g.edges()[e].vertices;
    for (int j = 0; j < static_cast<int>(vs.size()); ++j)
      if (!fa.positive[e][j] && fa.residual[e][j] > tol) return j;
    return -1;
  };

  std::vector<double> excess = flow_demand(g, Y);

  // Depth-first residual walks with an explicit stack. A walk from an excess
  // vertex either reaches a deficit vertex (strip a path, emit a demand edge)
  // or revisits a vertex (cancel the circulation, emit nothing). Circulations
  // left over once all excess is consumed are canceled the same way, starting
  // from any vertex that still has outgoing residual.
  std::vector<std::vector<std::pair<int, std::vector<double>>>> edge_flows;
  std::vector<WeightedEdge> raw_edges;
  std::vector<int> on_path_pos(n, -1);

  auto run_walks = [&](int start, bool want_paths) {
    for (int guard = 0; guard < 4 * g.num_vertices() * std::max<long long>(1, g.sparsity());
         ++guard) {
      if (want_paths && excess[start] <= tol) return;
      std::vector<std::pair<int, int>> path_arcs;  // (edge, entry local idx)
      std::vector<int> path_exit;                  // exit local idx per step
      std::vector<int> path_vertices;
      int u = start;
      int cycle_from = -1;
      int deficit_vertex = -1;
      while (true) {
        if (on_path_pos[u] >= 0) {
          cycle_from = on_path_pos[u];
          break;
        }
        if (want_paths && u != start && excess[u] < -tol) {
          deficit_vertex = u;
          break;
        }
        auto [e, jin] = out_of_vertex(u);
        if (e < 0) break;
        int jout = out_of_factor(e);
        if (jout < 0) break;
        on_path_pos[u] = static_cast<int>(path_vertices.size());
        path_vertices.push_back(u);
        path_arcs.push_back({e, jin});
        path_exit.push_back(jout);
        u = g.edges()[e].vertices[jout];
      }
      for (int v : path_vertices) on_path_pos[v] = -1;

      if (cycle_from >= 0) {
        double bottleneck = std::numeric_limits<double>::infinity();
        for (int k = cycle_from; k < static_cast<int>(path_arcs.size()); ++k) {
          auto [e, jin] = path_arcs[k];
          bottleneck = std::min({bottleneck, fa.residual[e][jin], fa.residual[e][path_exit[k]]});
        }
        for (int k = cycle_from; k < static_cast<int>(path_arcs.size()); ++k) {
          auto [e, jin] = path_arcs[k];
          fa.residual[e][jin] -= bottleneck;
          fa.residual[e][path_exit[k]] -= bottleneck;
        }
        continue;
      }
      if (deficit_vertex < 0 || path_arcs.empty()) return;  // stuck: residual dust

      double bottleneck = std::min(excess[start], -excess[deficit_vertex]);
      for (int k = 0; k < static_cast<int>(path_arcs.size()); ++k) {
        auto [e, jin] = path_arcs[k];
        bottleneck = std::min({bottleneck, fa.residual[e][jin], fa.residual[e][path_exit[k]]});
      }
      std::vector<std::pair<int, std::vector<double>>> contribution;
      for (int k = 0; k < static_cast<int>(path_arcs.size()); ++k) {
        auto [e, jin] = path_arcs[k];
        int jout = path_exit[k];
        fa.residual[e][jin] -= bottleneck;
        fa.residual[e][jout] -= bottleneck;
        std::vector<double> ye(g.edges()[e].vertices.size(), 0.0);
        ye[jin] = bottleneck;
        ye[jout] = -bottleneck;
        contribution.push_back({e, std::move(ye)});
      }
      excess[start] -= bottleneck;
      excess[deficit_vertex] += bottleneck;
      raw_edges.push_back({start, deficit_vertex, bottleneck});
      edge_flows.push_back(std::move(contribution));
    }
    throw Error("flow decomposition did not converge");
  };

  for (int start = 0; start < n; ++start) run_walks(start, true);
  for (int start = 0; start < n; ++start) run_walks(start, false);

  // Merge parallel demand edges and their supporting flows.
  DemandGraph dg;
  dg.graph.n = n;
  std::vector<int> slot;
  std::vector<std::pair<int, int>> keys;
  for (size_t k = 0; k < raw_edges.size(); ++k) {
    std::pair<int, int> key{raw_edges[k].u, raw_edges[k].v};
    int found = -1;
    for (size_t q = 0; q < keys.size(); ++q)
      if (keys[q] == key) {
        found = static_cast<int>(q);
        break;
      }
    if (found < 0) {
      keys.push_back(key);
      dg.graph.edges.push_back(raw_edges[k]);
      dg.flows.push_back(std::move(edge_flows[k]));
    } else {
      dg.graph.edges[found].w += raw_edges[k].w;
      for (auto& [e, ye] : edge_flows[k]) {
        bool merged = false;
        for (auto& [e2, ye2] : dg.flows[found])
          if (e2 == e) {
            for (size_t j = 0; j < ye.size(); ++j) ye2[j] += ye[j];
            merged = true;
            break;
          }
        if (!merged) dg.flows[found].push_back({e, std::move(ye)});
      }
    }
  }
  return dg;
}

EmbeddingReport verify_flow_embedding(const Hypergraph& g, const WeightedGraph& h,
                                      double rho, int samples,
                                      std::optional<std::uint64_t> sample_seed) {
  if (h.n != g.num_vertices()) throw DomainError("graph/hypergraph size mismatch");
  int n = g.num_vertices();
  EmbeddingReport report;
  report.exhaustive = n <= kMaxExhaustiveRank && samples == 0;

  double cut_scale = 1.0;
  for (const WeightedEdge& e : h.edges) cut_scale += e.w;
  const double tol = 1e-9 * cut_scale;

  // worst_ratio tracks max_S delta_H(S) / delta_G(S); the embedding is valid
  // iff that never exceeds rho (within fp slack).
  auto check = [&](const std::vector<char>& in_set) {
    double dh = graph_cut_value(h, in_set);
    double dgv = g.cut_value(in_set);
    ++report.checked;
    double ratio;
    if (dh <= tol)
      ratio = 0.0;
    else if (dgv <= tol / std::max(rho, 1.0))
      ratio = std::numeric_limits<double>::infinity();
    else
      ratio = dh / dgv;
    bool bad = dh > rho * dgv + tol;
    if (bad) ++report.violations;
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_cut.clear();
      for (int i = 0; i < n; ++i)
        if (in_set[i]) report.worst_cut.push_back(i);
    }
  };

  if (report.exhaustive) {
    std::vector<char> in_set(n, 0);
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      for (int i = 0; i < n; ++i) in_set[i] = (mask >> i) & 1u;
      check(in_set);
    }
  } else {
    Rng rng(sample_seed.value_or(0xC3D2E1F0ull));
    int want = samples > 0 ? samples : 4096;
    std::vector<char> in_set(n, 0);
    for (int trial = 0; trial < want; ++trial) {
      bool any = false, all = true;
      for (int i = 0; i < n; ++i) {
        in_set[i] = rng.bits() & 1u;
        any |= in_set[i];
        all &= in_set[i] != 0;
      }
      if (!any || all) continue;
      check(in_set);
    }
  }
  report.valid = report.violations == 0;
  return report;
}

}  // namespace hyperrc
