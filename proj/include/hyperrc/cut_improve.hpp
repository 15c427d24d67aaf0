#pragma once

#include <array>
#include <span>
#include <vector>

#include "hyperrc/flow.hpp"
#include "hyperrc/hypergraph.hpp"

namespace hyperrc {

// Seed vectors satisfy <s, 1>_mu = 0 (1e-7) and ||s||_inf <= 1.
struct Seed {
  std::vector<double> s;
};

// 1^{A,Abar} = 1^A - (mu(A)/mu(Abar)) * 1^{Abar}, with mu(A) <= mu(Abar)
// enforced by swapping sides.
Seed seed_from_cut(const Hypergraph& g, std::span<const int> cut);

void validate_seed(const Hypergraph& g, std::span<const double> s);

// <s, 1^S>_mu.
double seed_correlation(const Hypergraph& g, std::span<const double> s,
                        const std::vector<char>& in_set);

// Psi_{G,s}(S) = delta_G(S) / |<s, 1^S>_mu|. Throws DomainError when the
// correlation vanishes.
double ci_objective(const Hypergraph& g, std::span<const double> s,
                    std::span<const int> cut);
double ci_objective(const Hypergraph& g, std::span<const double> s,
                    const std::vector<char>& in_set);

struct PrimalDualSolution {
  std::vector<int> cut;   // A, sorted ascending
  HypergraphFlow flow;    // Y with y_h in w_h * B(delta_h)
  double alpha = 0.0;     // certified dual value (lower bracket end)
  double bracket_hi = 0.0;
  double objective = 0.0; // Psi_{G,s}(A)
  double eps = 0.0;
  bool flow_path = false; // max-flow dispatch (all-standard cut functions)
};

// eps-approximate primal-dual solver. Standard-cut hypergraphs run a binary
// search over alpha with an exact max-flow feasibility test; general MSCFs
// use the brute-force decomposable minimizer (n <= 20) with the dual
// recovered by exchange-capacity augmentation inside the base polytopes.
// Multiplicative bracket: terminates once hi/lo <= 1 + eps/8.
PrimalDualSolution solve_ci(const Hypergraph& g, const Seed& seed, double eps);

struct PrimalDualValidation {
  struct Item {
    bool pass = true;
    double residual = 0.0;
  };
  std::array<Item, 5> items;
  bool all_pass = true;
};

// Numerically checks the five primal-dual conditions against sol.alpha:
// 1. y_h in w_h * B(delta_h) for all h;
// 2. ||dem(Y) - alpha*(mu o s)||_1 <= (eps/8) * alpha * ||mu o s||_1;
// 3. dem_i <= alpha*mu_i*s_i where s_i >= 0, dem_i >= alpha*mu_i*s_i where s_i < 0;
// 4. Psi_{G,s}(A) <= 2*alpha;
// 5. dem_i(Y) * s_i >= 0.
PrimalDualValidation validate_primal_dual(const Hypergraph& g, std::span<const double> s,
                                          const PrimalDualSolution& sol, double eps);

}  // namespace hyperrc
