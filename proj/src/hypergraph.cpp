#include "hyperrc/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace hyperrc {

Hypergraph Hypergraph::build(int n, std::vector<long long> mu, std::vector<Hyperedge> edges) {
  if (n < 1) throw DomainError("hypergraph needs at least one vertex");
  if (mu.empty()) mu.assign(n, 1);
  if (static_cast<int>(mu.size()) != n) throw DomainError("mu length != vertex count");
  for (long long m : mu)
    if (m < 1) throw DomainError("vertex measures must be positive integers");

  Hypergraph g;
  g.n_ = n;
  g.mu_ = std::move(mu);
  g.mu_total_ = std::accumulate(g.mu_.begin(), g.mu_.end(), 0LL);

  for (Hyperedge& e : edges) {
    std::sort(e.vertices.begin(), e.vertices.end());
    if (std::adjacent_find(e.vertices.begin(), e.vertices.end()) != e.vertices.end())
      throw DomainError("hyperedge contains a repeated vertex");
    if (e.vertices.size() < 2) throw DomainError("hyperedges need rank >= 2");
    if (e.vertices.front() < 0 || e.vertices.back() >= n)
      throw DomainError("hyperedge vertex id out of range");
    if (e.weight < 1) throw DomainError("hyperedge weights must be positive integers");
    int rank = static_cast<int>(e.vertices.size());
    validate_spec(e.spec, rank);
    if (e.spec.kind == CutKind::Clique) {
      // delta(S) = |S|*|h\S| is the cut function of the complete graph on h.
      for (int a = 0; a < rank; ++a)
        for (int b = a + 1; b < rank; ++b)
          g.edges_.push_back({{e.vertices[a], e.vertices[b]}, e.weight,
                              CutFunctionSpec::standard()});
    } else {
      g.edges_.push_back(std::move(e));
    }
  }

  for (const Hyperedge& e : g.edges_) {
    g.sparsity_ += static_cast<long long>(e.vertices.size());
    g.weight_total_ += e.weight;
    if (e.spec.kind != CutKind::Standard) g.all_standard_ = false;
  }
  return g;
}

long long Hypergraph::measure(const std::vector<char>& in_set) const {
  long long m = 0;
  for (int i = 0; i < n_; ++i)
    if (in_set[i]) m += mu_[i];
  return m;
}

double Hypergraph::cut_value(const std::vector<char>& in_set) const {
  double total = 0.0;
  for (const Hyperedge& e : edges_) {
    int rank = static_cast<int>(e.vertices.size());
    if (e.spec.kind == CutKind::Oracle) {
      SubsetMask mask = 0;
      for (int j = 0; j < rank; ++j)
        if (in_set[e.vertices[j]]) mask |= SubsetMask{1} << j;
      total += static_cast<double>(e.weight) * evaluate_cut_fn(e.spec, rank, mask);
    } else {
      int k = 0;
      for (int v : e.vertices) k += in_set[v] ? 1 : 0;
      if (k != 0 && k != rank)
        total += static_cast<double>(e.weight) * evaluate_cut_fn_count(e.spec, rank, k);
    }
  }
  return total;
}

std::vector<char> Hypergraph::indicator(std::span<const int> vertex_set) const {
  std::vector<char> in_set(n_, 0);
  for (int v : vertex_set) {
    if (v < 0 || v >= n_) throw DomainError("vertex id out of range");
    in_set[v] = 1;
  }
  return in_set;
}

double ratio_cut(const Hypergraph& g, const std::vector<char>& in_set) {
  long long m = g.measure(in_set);
  if (m == 0 || m == g.total_measure()) throw DomainError("degenerate cut");
  return g.cut_value(in_set) / static_cast<double>(std::min(m, g.total_measure() - m));
}

double ratio_cut(const Hypergraph& g, std::span<const int> cut) {
  return ratio_cut(g, g.indicator(cut));
}

double hypergraph_lovasz(const Hypergraph& g, std::span<const double> x) {
  if (static_cast<int>(x.size()) != g.num_vertices())
    throw DomainError("vector length != vertex count");
  double total = 0.0;
  std::vector<double> local;
  for (const Hyperedge& e : g.edges()) {
    local.clear();
    for (int v : e.vertices) local.push_back(x[v]);
    total += static_cast<double>(e.weight) *
             lovasz_extension(e.spec, static_cast<int>(local.size()), local);
  }
  return total;
}

double min_shift_l1_mu(std::span<const double> x, std::span<const long long> mu) {
  // The minimizer is a mu-weighted median of x.
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return x[a] != x[b] ? x[a] < x[b] : a < b;
  });
  long long total = 0;
  for (long long m : mu) total += m;
  long long acc = 0;
  double gamma = x[order.back()];
  for (int idx : order) {
    acc += mu[idx];
    if (2 * acc >= total) {
      gamma = x[idx];
      break;
    }
  }
  double val = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    val += static_cast<double>(mu[i]) * std::fabs(x[i] - gamma);
  return val;
}

SweepResult sweep_cut_round(const Hypergraph& g, std::span<const double> x) {
  int n = g.num_vertices();
  if (static_cast<int>(x.size()) != n) throw DomainError("vector length != vertex count");
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mn == *mx) throw DomainError("sweep rounding needs a non-constant vector");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return x[a] != x[b] ? x[a] > x[b] : a < b;
  });

  // Per-edge incremental state: count of members already swept in (and the
  // member mask for oracle kinds).
  int m = g.num_edges();
  std::vector<int> count(m, 0);
  std::vector<SubsetMask> mask(m, 0);
  std::vector<std::vector<std::pair<int, int>>> incident(n);  // vertex -> (edge, local idx)
  for (int e = 0; e < m; ++e) {
    const auto& vs = g.edges()[e].vertices;
    for (int j = 0; j < static_cast<int>(vs.size()); ++j)
      incident[vs[j]].push_back({e, j});
  }

  auto edge_delta = [&](int e) {
    const Hyperedge& h = g.edges()[e];
    int rank = static_cast<int>(h.vertices.size());
    if (count[e] == 0 || count[e] == rank) return 0.0;
    if (h.spec.kind == CutKind::Oracle)
      return evaluate_cut_fn(h.spec, rank, mask[e]);
    return evaluate_cut_fn_count(h.spec, rank, count[e]);
  };

  double delta = 0.0;
  long long mu_in = 0;
  double best_psi = 0.0;
  int best_k = -1;
  for (int k = 0; k < n - 1; ++k) {
    int v = order[k];
    for (auto [e, j] : incident[v]) {
      delta -= static_cast<double>(g.edges()[e].weight) * edge_delta(e);
      ++count[e];
      mask[e] |= SubsetMask{1} << j;
      delta += static_cast<double>(g.edges()[e].weight) * edge_delta(e);
    }
    mu_in += g.mu_of(v);
    double denom = static_cast<double>(std::min(mu_in, g.total_measure() - mu_in));
    double psi = std::max(delta, 0.0) / denom;
    if (best_k < 0 || psi < best_psi) {
      best_psi = psi;
      best_k = k;
    }
  }

  SweepResult result;
  result.cut.assign(order.begin(), order.begin() + best_k + 1);
  std::sort(result.cut.begin(), result.cut.end());
  result.psi = best_psi;
  return result;
}

std::vector<std::vector<int>> connected_components(const Hypergraph& g) {
  int n = g.num_vertices();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const Hyperedge& e : g.edges())
    for (size_t j = 1; j < e.vertices.size(); ++j)
      parent[find(e.vertices[j])] = find(e.vertices[0]);
  std::vector<std::vector<int>> comps;
  std::vector<int> comp_id(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (comp_id[r] < 0) {
      comp_id[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[comp_id[r]].push_back(i);
  }
  return comps;
}

}  // namespace hyperrc
