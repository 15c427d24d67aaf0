#pragma once

#include <span>
#include <vector>

#include "hyperrc/hypergraph.hpp"

namespace hyperrc {

// Feasible point of the l2^2-metric relaxation: per-vertex embedding vectors
// and per-hyperedge length vectors.
struct MetricSolution {
  std::vector<std::vector<double>> vectors;  // n rows, common dimension
  std::vector<std::vector<double>> lengths;  // per hyperedge, length = rank
};

// Objective sum_h w_h * ||l^h||_{F_h}.
double metric_objective(const Hypergraph& g, const MetricSolution& sol);

// The cut -> feasible-solution construction: scaled e_1 on the smaller side,
// zero elsewhere; lengths are the scaled indicator of the hyperedge side with
// smaller F_h. Objective is at most 2 * Psi_G(S).
MetricSolution feasible_from_cut(const Hypergraph& g, std::span<const int> cut);

struct MetricReport {
  bool feasible = true;
  double spread = 0.0;             // sum of mu_i mu_j / mu(V) * d2(i,j)
  double spread_violation = 0.0;   // max(0, 1 - spread)
  double worst_pair = 0.0;         // max d2(i,j) - (l_i + l_j) over in-edge pairs
  double worst_triangle = 0.0;     // max d2(i,j) - d2(i,k) - d2(k,j)
};

// Checks the spread constraint, per-hyperedge pair constraints, and all n^3
// l2^2 triangle inequalities at tolerance tol.
MetricReport check_metric_feasibility(const Hypergraph& g, const MetricSolution& sol,
                                      double tol = 1e-7);

// Midpoint of the interval intersection of [x_i - y_i, x_i + y_i]; requires
// y >= 0 and |x_i - x_j| <= y_i + y_j (throws DomainError otherwise).
double optimal_shift(std::span<const double> x, std::span<const double> y);

struct LineRoundResult {
  std::vector<int> cut;
  double psi = 0.0;
  double surrogate = 0.0;  // sum_h w_h min_nu ||x_h - nu 1||_{F_h} / min_g ||x - g 1||_{mu,1}
};

// Rounds any 1-D vertex embedding: evaluates the surrogate ratio, then sweep
// rounds x. The returned cut satisfies Psi_G(S) <= 2 * surrogate.
LineRoundResult round_line_embedding(const Hypergraph& g, std::span<const double> x);

}  // namespace hyperrc
