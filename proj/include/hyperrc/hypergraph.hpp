#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperrc/cut_function.hpp"

namespace hyperrc {

struct Hyperedge {
  std::vector<int> vertices;  // distinct, sorted ascending
  long long weight = 1;       // integral, > 0
  CutFunctionSpec spec;
};

// Weighted submodular hypergraph: positive integer vertex measures mu and
// integral positive hyperedge weights, each hyperedge carrying a cut-function
// spec. Clique-kind edges are expanded into rank-2 standard edges at build
// time, so stored edges are always MSCFs.
class Hypergraph {
public:
  static Hypergraph build(int n, std::vector<long long> mu, std::vector<Hyperedge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<long long>& mu() const { return mu_; }
  long long mu_of(int i) const { return mu_[i]; }
  long long total_measure() const { return mu_total_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  long long sparsity() const { return sparsity_; }
  long long total_weight() const { return weight_total_; }
  bool all_standard() const { return all_standard_; }

  // mu(S) for an indicator over V.
  long long measure(const std::vector<char>& in_set) const;

  // delta_G(S) = sum_h w_h * delta_h(S cap h).
  double cut_value(const std::vector<char>& in_set) const;

  std::vector<char> indicator(std::span<const int> vertex_set) const;

private:
  int n_ = 0;
  std::vector<long long> mu_;
  std::vector<Hyperedge> edges_;
  long long mu_total_ = 0;
  long long sparsity_ = 0;
  long long weight_total_ = 0;
  bool all_standard_ = true;
};

// Psi_G(S) = delta_G(S) / min{mu(S), mu(V\S)}. Throws DomainError for S in
// {empty, V}.
double ratio_cut(const Hypergraph& g, std::span<const int> cut);
double ratio_cut(const Hypergraph& g, const std::vector<char>& in_set);

// Threshold rounding of a vertex vector: evaluates every sweep prefix of the
// descending order (ties by ascending id) and returns the cut minimizing
// Psi_G. Guarantees Psi_G(S) <= deltabar_G(x) / min_u ||x - u*1||_{mu,1}.
struct SweepResult {
  std::vector<int> cut;  // sorted ascending
  double psi = 0.0;
};
SweepResult sweep_cut_round(const Hypergraph& g, std::span<const double> x);

// Lovasz extension of delta_G at x: sum_h w_h * lovasz(delta_h, x|_h).
double hypergraph_lovasz(const Hypergraph& g, std::span<const double> x);

// min_u ||x - u*1||_{mu,1}; attained at a mu-weighted median (ties to the
// lower value).
double min_shift_l1_mu(std::span<const double> x, std::span<const long long> mu);

// Connected components of the hyperedge-incidence structure, each sorted.
std::vector<std::vector<int>> connected_components(const Hypergraph& g);

}  // namespace hyperrc
