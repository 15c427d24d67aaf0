#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hyperrc/errors.hpp"

namespace hyperrc {

// Subsets of a hyperedge are bitmasks over local indices 0..rank-1.
using SubsetMask = std::uint32_t;

// Exhaustive subset enumeration (dual norms for oracle specs, base-polytope
// membership checks) is capped at this rank.
inline constexpr int kMaxExhaustiveRank = 20;

enum class CutKind : int {
  Standard,     // F(S) = min(1, |S|)
  Star,         // F(S) = |S|
  Cardinality,  // F(S) = g(|S|), g concave non-decreasing, g(0) = 0
  Clique,       // delta(S) = |S| * |h\S|; expanded to rank-2 edges at build time
  Oracle,       // F supplied as a callback
};

const char* cut_kind_name(CutKind kind);

// Defines F_h and the derived cut function delta_h(S) = min{F(S), F(h\S)}.
// Clique is the one non-MSCF kind: it has no F and no associated norm.
struct CutFunctionSpec {
  CutKind kind = CutKind::Standard;
  double card_p = 1.0;             // Cardinality: F(S) = |S|^p unless a table is given
  std::vector<double> card_table;  // Cardinality: g(0..rank) when non-empty
  std::function<double(SubsetMask, int)> oracle;  // Oracle: F(mask, rank)

  static CutFunctionSpec standard() { return {CutKind::Standard, 1.0, {}, nullptr}; }
  static CutFunctionSpec star() { return {CutKind::Star, 1.0, {}, nullptr}; }
  static CutFunctionSpec cardinality_power(double p);
  static CutFunctionSpec cardinality_table(std::vector<double> g);
  static CutFunctionSpec clique() { return {CutKind::Clique, 1.0, {}, nullptr}; }
  static CutFunctionSpec oracle_fn(std::function<double(SubsetMask, int)> f) {
    return {CutKind::Oracle, 1.0, {}, std::move(f)};
  }

  bool is_mscf() const { return kind != CutKind::Clique; }
};

// F_h on a subset of size k (builtin kinds) or mask (any kind but clique).
double cut_fn_F(const CutFunctionSpec& spec, int rank, SubsetMask mask);

// F_h by subset size; only valid for the cardinality-determined kinds
// (standard, star, cardinality) where F(S) depends on |S| alone.
double cut_fn_F_count(const CutFunctionSpec& spec, int rank, int k);

// delta_h(S) = min{F(S), F(h\S)}; clique uses |S|*|h\S| directly.
double evaluate_cut_fn(const CutFunctionSpec& spec, int rank, SubsetMask subset);

// delta_h by subset size, for kinds where that is well defined (all builtins;
// not oracle).
double evaluate_cut_fn_count(const CutFunctionSpec& spec, int rank, int k);

// Convenience over explicit local-index subsets; validates subset \subseteq h.
double evaluate_cut_fn(const CutFunctionSpec& spec, int rank, std::span<const int> subset);

// Lovasz extension of delta_h by the sorted-prefix formula; ties broken by
// ascending local index.
double lovasz_extension(const CutFunctionSpec& spec, int rank, std::span<const double> x);

// Greedy vertex of B(delta_h) maximizing <y, x>; satisfies <y,x> equal to the
// Lovasz extension and <y, 1> = 0.
std::vector<double> base_polytope_argmax(const CutFunctionSpec& spec, int rank,
                                         std::span<const double> x);

// ||x||_F = Fbar(|x|). Undefined for clique.
double f_norm(const CutFunctionSpec& spec, int rank, std::span<const double> x);

// Dual norm: max over nonempty S of sum_{i in S} |y_i| / F(S). Closed-form
// sorted-prefix maximization for standard/star/cardinality; exhaustive for
// oracle specs up to rank 20.
double dual_f_norm(const CutFunctionSpec& spec, int rank, std::span<const double> y);

// min_u ||x - u*1||_F, solved by ternary search on u over [min x, max x].
double min_shift_f_norm(const CutFunctionSpec& spec, int rank, std::span<const double> x);

// Checks F(empty) = 0, F({i}) > 0, monotonicity (exhaustive for rank <= 12,
// sampled chains otherwise), and concavity/ordering of cardinality tables.
// Throws DomainError on violation.
void validate_spec(const CutFunctionSpec& spec, int rank);

}  // namespace hyperrc
