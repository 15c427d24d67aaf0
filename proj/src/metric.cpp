#include "hyperrc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperrc {

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    double diff = a[k] - b[k];
    d += diff * diff;
  }
  return d;
}

}  // namespace

double metric_objective(const Hypergraph& g, const MetricSolution& sol) {
  if (static_cast<int>(sol.lengths.size()) != g.num_edges())
    throw DomainError("length vectors do not match hyperedges");
  double total = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Hyperedge& h = g.edges()[e];
    total += static_cast<double>(h.weight) *
             f_norm(h.spec, static_cast<int>(h.vertices.size()), sol.lengths[e]);
  }
  return total;
}

MetricSolution feasible_from_cut(const Hypergraph& g, std::span<const int> cut) {
  std::vector<char> in_set = g.indicator(cut);
  long long mu_s = g.measure(in_set);
  if (mu_s == 0 || mu_s == g.total_measure()) throw DomainError("degenerate cut");
  if (2 * mu_s > g.total_measure()) {
    for (auto& b : in_set) b = !b;
    mu_s = g.total_measure() - mu_s;
  }
  double scale = static_cast<double>(g.total_measure()) /
                 (static_cast<double>(mu_s) * static_cast<double>(g.total_measure() - mu_s));

  MetricSolution sol;
  int n = g.num_vertices();
  sol.vectors.assign(n, std::vector<double>(n, 0.0));
  double coord = std::sqrt(scale);
  for (int i = 0; i < n; ++i)
    if (in_set[i]) sol.vectors[i][0] = coord;

  sol.lengths.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Hyperedge& h = g.edges()[e];
    int rank = static_cast<int>(h.vertices.size());
    SubsetMask inside = 0;
    for (int j = 0; j < rank; ++j)
      if (in_set[h.vertices[j]]) inside |= SubsetMask{1} << j;
    SubsetMask full = (SubsetMask{1} << rank) - 1;
    bool use_inside = cut_fn_F(h.spec, rank, inside) <= cut_fn_F(h.spec, rank, full & ~inside);
    SubsetMask chosen = use_inside ? inside : (full & ~inside);
    sol.lengths[e].assign(rank, 0.0);
    for (int j = 0; j < rank; ++j)
      if (chosen & (SubsetMask{1} << j)) sol.lengths[e][j] = scale;
  }
  return sol;
}

MetricReport check_metric_feasibility(const Hypergraph& g, const MetricSolution& sol,
                                      double tol) {
  int n = g.num_vertices();
  if (static_cast<int>(sol.vectors.size()) != n)
    throw DomainError("vector rows do not match vertex count");
  if (static_cast<int>(sol.lengths.size()) != g.num_edges())
    throw DomainError("length vectors do not match hyperedges");

  MetricReport report;
  // Spread constraint.
  double spread = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      spread += static_cast<double>(g.mu_of(i)) * static_cast<double>(g.mu_of(j)) *
                dist2(sol.vectors[i], sol.vectors[j]);
  spread /= static_cast<double>(g.total_measure());
  report.spread = spread;
  report.spread_violation = std::max(0.0, 1.0 - spread);

  // Per-hyperedge pair constraints.
  for (int e = 0; e < g.num_edges(); ++e) {
    const Hyperedge& h = g.edges()[e];
    int rank = static_cast<int>(h.vertices.size());
    if (static_cast<int>(sol.lengths[e].size()) != rank)
      throw DomainError("length vector rank mismatch");
    for (int a = 0; a < rank; ++a)
      for (int b = a + 1; b < rank; ++b) {
        double lhs = dist2(sol.vectors[h.vertices[a]], sol.vectors[h.vertices[b]]);
        report.worst_pair =
            std::max(report.worst_pair, lhs - sol.lengths[e][a] - sol.lengths[e][b]);
      }
  }

  // l2^2 triangle inequalities.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double dij = dist2(sol.vectors[i], sol.vectors[j]);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        double slack = dij - dist2(sol.vectors[i], sol.vectors[k]) -
                       dist2(sol.vectors[k], sol.vectors[j]);
        report.worst_triangle = std::max(report.worst_triangle, slack);
      }
    }

  report.feasible = report.spread_violation <= tol && report.worst_pair <= tol &&
                    report.worst_triangle <= tol;
  return report;
}

double optimal_shift(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw DomainError("shift inputs must match");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] < 0.0) throw DomainError("interval radii must be non-negative");
    lo = std::max(lo, x[i] - y[i]);
    hi = std::min(hi, x[i] + y[i]);
    scale = std::max({scale, std::fabs(x[i]), y[i]});
  }
  if (lo > hi + 1e-9 * scale)
    throw DomainError("no shift exists: interval intersection is empty");
  return 0.5 * (lo + hi);
}

LineRoundResult round_line_embedding(const Hypergraph& g, std::span<const double> x) {
  if (static_cast<int>(x.size()) != g.num_vertices())
    throw DomainError("vector length != vertex count");
  double numerator = 0.0;
  std::vector<double> local;
  for (const Hyperedge& h : g.edges()) {
    local.clear();
    for (int v : h.vertices) local.push_back(x[v]);
    numerator += static_cast<double>(h.weight) *
                 min_shift_f_norm(h.spec, static_cast<int>(local.size()), local);
  }
  double denominator = min_shift_l1_mu(x, g.mu());
  if (!(denominator > 0.0)) throw DomainError("sweep rounding needs a non-constant vector");

  SweepResult sweep = sweep_cut_round(g, x);
  LineRoundResult result;
  result.cut = std::move(sweep.cut);
  result.psi = sweep.psi;
  result.surrogate = numerator / denominator;
  return result;
}

}  // namespace hyperrc
