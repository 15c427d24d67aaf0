#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperrc/cut_improve.hpp"
#include "hyperrc/flow.hpp"
#include "hyperrc/hypergraph.hpp"
#include "hyperrc/rng.hpp"

namespace hyperrc {

enum class VerifyLevel : int { None, Sampled, Exhaustive };

struct RunConfig {
  double eps = 0.1;               // cut-improvement accuracy, in (0, 1)
  std::uint64_t rng_seed = 1;
  int max_rounds = 64;            // cap on the log^2(n) round schedule
  double c_const = 0.05;          // regret constant C in the eta/T schedule
  double r_const = 0.01;          // balanced-branch projection-gap threshold
  double jl_delta = 0.5;          // in [1/10, 1)
  VerifyLevel verify_level = VerifyLevel::Sampled;

  void validate() const;
};

// Vertex embedding after projection and 1/sqrt(mu) rescaling, mu-centered.
struct Embedding {
  std::vector<std::vector<double>> v;  // n rows of dimension d
  std::vector<long long> mu;
  long long mu_total = 0;
  int dim = 0;

  // E_{i~mu} ||v_i||^2; equals Var_mu since the embedding is centered.
  double variance() const;
  double distance2(int i, int j) const;
};

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g, std::span<const long long> mu);

// Matrix-multiplicative-weights state: accumulates normalized Laplacians of
// the matching actions and exposes the density X_t = exp(-eta * sum L) / tr
// via dense symmetric eigendecomposition.
class MirrorDescent {
public:
  MirrorDescent(std::vector<long long> mu, double eta);

  void add_action(const WeightedGraph& d);
  int rounds_absorbed() const { return rounds_; }

  const Eigen::MatrixXd& density();

  // <L_mu(D), X_t> evaluated in full dimension.
  double action_inner(const WeightedGraph& d);

  // JL embedding: d random unit vectors u_j, rows (v_i)_j = sqrt(n/d) *
  // <X^{1/2} u_j, e_i>, rescaled by 1/sqrt(mu_i) and mu-centered.
  Embedding embed(int dim, Rng& rng);

  // The exact embedding (rows of X^{1/2}), same rescaling and centering.
  Embedding embed_full();

private:
  void refresh();

  std::vector<long long> mu_;
  double eta_;
  int n_;
  int rounds_ = 0;
  Eigen::MatrixXd lap_sum_;
  Eigen::MatrixXd density_;
  Eigen::MatrixXd half_;  // X^{1/2}
  bool dirty_ = true;
};

// (t, b)-balance test via the average-vector identity. Throws DomainError on
// zero-variance embeddings.
bool is_balanced(const Embedding& emb, double t, double b);

struct RobustWitness {
  std::vector<int> t_set;  // T, sorted
  double sigma = 0.0;
  bool balanced_branch = false;
};

struct RoundCutResult {
  std::vector<int> cut;  // S, sorted, nonempty, mu(S) <= mu(V)/2
  RobustWitness witness;
};

// Rounds a robustly separated set from the embedding. Balanced branch: up to
// ceil(4 log2 n) random directions, sweep for a prefix/suffix pair with
// measures >= mu(V)/3 and projection gap^2 >= r_const * Var. Unbalanced
// branch: sweep over long-vector suffixes against T = R_{3/2}, maximizing
// (norm gap)^2 * mu(S).
RoundCutResult round_cut(const Embedding& emb, double r_const, Rng& rng);

// Checks the witness conditions verbatim: T inside the complement,
// mu(T) >= mu(V)/3, and ||v_i - v_j||^2 >= sigma/mu(S) for all i in S, j in T.
bool check_robust_witness(const Embedding& emb, std::span<const int> cut,
                          const RobustWitness& witness);

struct MatchingCheck {
  bool bipartite = true;
  bool degree_l1 = true;
  bool degree_cap = true;
  double l1_residual = 0.0;
  double cap_residual = 0.0;
  bool ok() const { return bipartite && degree_l1 && degree_cap; }
};

// Matching-action conformance for D against cut S at accuracy eps: bipartite
// across (S, Sbar), degrees entrywise below mu o |s| and l1-close to it.
MatchingCheck verify_matching_action(const WeightedGraph& d, std::span<const int> cut,
                                     std::span<const long long> mu, double eps);

struct MatchingAction {
  WeightedGraph demand;   // D_t = H_t / alpha
  DemandGraph support;    // H_t with its per-edge flows
  double alpha = 0.0;
  std::vector<int> cut;   // filled by the game loop
};

// D_t = flow_path_decompose(sol.Y) / sol.alpha.
MatchingAction matching_action_from_solution(const Hypergraph& g,
                                             const PrimalDualSolution& sol);

struct CertificateRound {
  std::vector<int> cut;        // S_t
  std::vector<int> improved;   // A_t
  double alpha = 0.0;          // solver-certified alpha_t
  double objective = 0.0;      // Psi_{G,s_t}(A_t)
  WeightedGraph demand;        // D_t
  double action_inner = 0.0;   // <L_mu(D_t), X_t>
  double separation = 0.0;     // sum_{ij in D_t} w_ij ||v_i - v_j||^2, post-JL
  bool matching_ok = true;
  RobustWitness witness;
  bool witness_ok = true;
};

struct Certificate {
  int rounds = 0;
  double eps = 0.0;
  std::vector<CertificateRound> round_info;
  WeightedGraph h;          // sum_t D_t
  double rho = 0.0;         // sum_t 2/alpha_t
  double lambda2 = 0.0;     // of L_mu(H)
  double lower_bound = 0.0; // lambda2 / (2 rho), 0 when rho == 0
  double eta = 0.0;
  int jl_dim = 0;
};

struct ApproxRcResult {
  std::vector<int> cut;
  double psi = 0.0;
  int best_round = 0;  // 1-based round index of the returned cut
  Certificate certificate;
  EmbeddingReport embedding_check;  // populated per cfg.verify_level
};

// The generalized cut-matching game: per round, embed, round a cut, improve
// it, decompose the dual flow into a matching action, and feed the action
// back to mirror descent. Returns the best improved cut and the accumulated
// certificate. Disconnected hypergraphs short-circuit to a zero-cost cut.
ApproxRcResult approx_rc(const Hypergraph& g, const RunConfig& cfg);

struct SpectralBound {
  double lambda2 = 0.0;
  double cheeger_lower = 0.0;  // lambda2 / 2 <= Psi_H
};

SpectralBound certificate_quality(const WeightedGraph& h, std::span<const long long> mu);

}  // namespace hyperrc
