#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hyperrc/hypergraph.hpp"
#include "hyperrc/rng.hpp"

namespace hyperrc {

struct FactorGraph {
  int num_variables = 0;
  int num_factors = 0;
  long long num_edges = 0;  // equals sparsity(G)
  // adjacency of factor j is edges()[j].vertices of the source hypergraph
};

FactorGraph build_factor_graph(const Hypergraph& g);

// Per-hyperedge vectors y_h orthogonal to 1_h.
struct HypergraphFlow {
  std::vector<std::vector<double>> y;  // y[e][j], j indexing edges()[e].vertices

  static HypergraphFlow zero(const Hypergraph& g);
};

// dem_i(Y) = sum_{h ni i} y_h(i).
std::vector<double> flow_demand(const Hypergraph& g, const HypergraphFlow& Y);

// Throws DomainError unless every <y_h, 1> vanishes within tol * scale.
void validate_flow(const Hypergraph& g, const HypergraphFlow& Y, double tol = 1e-7);

struct CongestionReport {
  std::vector<double> per_edge;  // ||y_h||_{*,F_h} / w_h
  double max = 0.0;
};

// Congestion per hyperedge; the hypergraph congestion is the max
// over hyperedges (every downstream bound needs an upper bound over h).
CongestionReport congestion(const Hypergraph& g, const HypergraphFlow& Y);

class FlowNetwork;
struct MaxFlowResult;
MaxFlowResult max_flow(const FlowNetwork& net, int s, int t);

// Directed flow network with antiparallel arc pairs for undirected edges.
class FlowNetwork {
public:
  int add_node();
  int num_nodes() const { return static_cast<int>(head_.size()); }
  // Returns an arc id; creates the reverse residual arc internally.
  int add_arc(int from, int to, double cap);
  int num_arcs() const { return static_cast<int>(arcs_.size()) / 2; }
  double arc_cap(int id) const { return arcs_[2 * id].cap; }

  struct Arc {
    int to;
    double cap;
  };

private:
  friend MaxFlowResult max_flow(const FlowNetwork& net, int s, int t);
  std::vector<Arc> arcs_;                  // 2k = forward, 2k+1 = reverse
  std::vector<std::vector<int>> head_;     // node -> arc indices
};

struct MaxFlowResult {
  double value = 0.0;
  std::vector<double> arc_flow;    // by arc id, >= 0
  std::vector<char> source_side;   // residual-reachable nodes (the min cut)
};

// Exact max-flow by Dinic blocking flows with capacity scaling. The returned
// source_side certifies value = cut capacity (checked internally).
MaxFlowResult max_flow(const FlowNetwork& net, int s, int t);

// The cut-improvement flow network of a (G, seed, alpha) triple: source arcs
// to vertices with s_i >= 0 at capacity alpha*mu_i*s_i, sink arcs from the
// negative side, factor vertices split with internal capacity w_h, factor
// edges effectively uncapacitated.
struct CiFlowNetwork {
  FlowNetwork net;
  int source = 0;
  int sink = 0;
  std::vector<int> var_node;                      // vertex -> node id
  std::vector<std::pair<int, int>> factor_node;   // edge -> (in, out)
  std::vector<int> split_arc;                     // edge -> internal arc id
  std::vector<int> terminal_arc;                  // vertex -> arc id (source or sink side), -1 if s_i == 0
  std::vector<std::pair<int, int>> edge_arcs_in;  // per (edge, local j): variable->factor arc id
  std::vector<std::pair<int, int>> edge_arcs_out; // per (edge, local j): factor->variable arc id
  double target = 0.0;                            // alpha * ||s||_{1,mu} / 2
};

CiFlowNetwork build_flow_network(const Hypergraph& g, std::span<const double> seed,
                                 double alpha);

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

struct WeightedGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;
};

double graph_cut_value(const WeightedGraph& h, const std::vector<char>& in_set);

// Path decomposition of a hypergraph flow into a demand graph: bipartite over
// demand signs, degrees |dem_i|, per-hyperedge sign-preserving flow split.
struct DemandGraph {
  WeightedGraph graph;
  // Supporting flows: per graph edge, sparse list of (hyperedge index, y^e_h).
  std::vector<std::vector<std::pair<int, std::vector<double>>>> flows;
};

DemandGraph flow_path_decompose(const Hypergraph& g, const HypergraphFlow& Y);

struct EmbeddingReport {
  bool valid = true;
  double worst_ratio = 0.0;      // max delta_H / delta_G over checked cuts
  long long checked = 0;
  long long violations = 0;
  std::vector<int> worst_cut;    // cut achieving worst_ratio (or a violation)
  bool exhaustive = true;
};

// Checks delta_H(S) <= rho * delta_G(S); exhaustive for n <= 20, otherwise
// over `samples` random subsets.
EmbeddingReport verify_flow_embedding(const Hypergraph& g, const WeightedGraph& h,
                                      double rho, int samples = 0,
                                      std::optional<std::uint64_t> sample_seed = {});

}  // namespace hyperrc
