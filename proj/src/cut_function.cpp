#include "hyperrc/cut_function.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace hyperrc {

namespace {

int popcount(SubsetMask m) { return std::popcount(m); }

SubsetMask full_mask(int rank) {
  return rank >= 32 ? ~SubsetMask{0} : ((SubsetMask{1} << rank) - 1);
}

void require_rank(const CutFunctionSpec& spec, int rank) {
  if (rank < 1) throw DomainError("hyperedge rank must be positive");
  if (spec.kind == CutKind::Oracle && rank > 31)
    throw UnsupportedError("oracle cut functions support rank <= 31");
  if (spec.kind == CutKind::Cardinality && !spec.card_table.empty() &&
      static_cast<int>(spec.card_table.size()) != rank + 1)
    throw DomainError("cardinality table must have rank+1 entries");
}

// F on a subset of known size, for the cardinality-determined kinds.
double F_count(const CutFunctionSpec& spec, int k) {
  switch (spec.kind) {
    case CutKind::Standard:
      return k > 0 ? 1.0 : 0.0;
    case CutKind::Star:
      return static_cast<double>(k);
    case CutKind::Cardinality:
      if (!spec.card_table.empty()) return spec.card_table[k];
      return std::pow(static_cast<double>(k), spec.card_p);
    default:
      throw DomainError("F undefined for this cut-function kind");
  }
}

bool is_count_based(const CutFunctionSpec& spec) {
  return spec.kind == CutKind::Standard || spec.kind == CutKind::Star ||
         spec.kind == CutKind::Cardinality;
}

// Indices of x sorted by descending value, ties by ascending index.
std::vector<int> sorted_order(std::span<const double> x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x[a] > x[b]; });
  return order;
}

}  // namespace

const char* cut_kind_name(CutKind kind) {
  switch (kind) {
    case CutKind::Standard: return "standard";
    case CutKind::Star: return "star";
    case CutKind::Cardinality: return "cardinality";
    case CutKind::Clique: return "clique";
    case CutKind::Oracle: return "oracle";
  }
  return "unknown";
}

CutFunctionSpec CutFunctionSpec::cardinality_power(double p) {
  if (!(p > 0.0) || p > 1.0)
    throw DomainError("cardinality exponent must lie in (0, 1]");
  return {CutKind::Cardinality, p, {}, nullptr};
}

CutFunctionSpec CutFunctionSpec::cardinality_table(std::vector<double> g) {
  return {CutKind::Cardinality, 1.0, std::move(g), nullptr};
}

double cut_fn_F(const CutFunctionSpec& spec, int rank, SubsetMask mask) {
  require_rank(spec, rank);
  if (spec.kind == CutKind::Oracle) {
    if (!spec.oracle) throw DomainError("oracle spec has no callback");
    if (mask == 0) return 0.0;
    return spec.oracle(mask, rank);
  }
  return F_count(spec, popcount(mask & full_mask(rank)));
}

double cut_fn_F_count(const CutFunctionSpec& spec, int rank, int k) {
  require_rank(spec, rank);
  if (k < 0 || k > rank) throw DomainError("subset size out of range");
  return F_count(spec, k);
}

double evaluate_cut_fn_count(const CutFunctionSpec& spec, int rank, int k) {
  require_rank(spec, rank);
  if (k < 0 || k > rank) throw DomainError("subset size out of range");
  if (spec.kind == CutKind::Clique)
    return static_cast<double>(k) * static_cast<double>(rank - k);
  if (!is_count_based(spec))
    throw DomainError("cut value by size undefined for oracle kind");
  return std::min(F_count(spec, k), F_count(spec, rank - k));
}

double evaluate_cut_fn(const CutFunctionSpec& spec, int rank, SubsetMask subset) {
  require_rank(spec, rank);
  SubsetMask full = full_mask(rank);
  if (subset & ~full) throw DomainError("subset is not contained in the hyperedge");
  int k = popcount(subset);
  if (spec.kind == CutKind::Clique)
    return static_cast<double>(k) * static_cast<double>(rank - k);
  if (is_count_based(spec))
    return std::min(F_count(spec, k), F_count(spec, rank - k));
  return std::min(cut_fn_F(spec, rank, subset), cut_fn_F(spec, rank, full & ~subset));
}

double evaluate_cut_fn(const CutFunctionSpec& spec, int rank, std::span<const int> subset) {
  SubsetMask mask = 0;
  for (int i : subset) {
    if (i < 0 || i >= rank) throw DomainError("subset is not contained in the hyperedge");
    mask |= SubsetMask{1} << i;
  }
  return evaluate_cut_fn(spec, rank, mask);
}

double lovasz_extension(const CutFunctionSpec& spec, int rank, std::span<const double> x) {
  require_rank(spec, rank);
  if (static_cast<int>(x.size()) != rank) throw DomainError("vector length != rank");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("non-finite entry");
  auto order = sorted_order(x);
  double result = 0.0;
  double prev = 0.0;
  SubsetMask prefix = 0;
  for (int i = 0; i < rank; ++i) {
    prefix |= SubsetMask{1} << order[i];
    double cur = evaluate_cut_fn(spec, rank, prefix);
    result += x[order[i]] * (cur - prev);
    prev = cur;
  }
  return result;
}

std::vector<double> base_polytope_argmax(const CutFunctionSpec& spec, int rank,
                                         std::span<const double> x) {
  require_rank(spec, rank);
  if (static_cast<int>(x.size()) != rank) throw DomainError("vector length != rank");
  auto order = sorted_order(x);
  std::vector<double> y(rank, 0.0);
  double prev = 0.0;
  SubsetMask prefix = 0;
  for (int i = 0; i < rank; ++i) {
    prefix |= SubsetMask{1} << order[i];
    double cur = evaluate_cut_fn(spec, rank, prefix);
    y[order[i]] = cur - prev;
    prev = cur;
  }
  return y;
}

double f_norm(const CutFunctionSpec& spec, int rank, std::span<const double> x) {
  require_rank(spec, rank);
  if (!spec.is_mscf()) throw DomainError("clique kind has no F-norm");
  if (static_cast<int>(x.size()) != rank) throw DomainError("vector length != rank");
  std::vector<double> a(x.begin(), x.end());
  for (double& v : a) {
    if (!std::isfinite(v)) throw DomainError("non-finite entry");
    v = std::fabs(v);
  }
  // Lovasz extension of the monotone F at |x|.
  auto order = sorted_order(a);
  double result = 0.0;
  double prev = 0.0;
  SubsetMask prefix = 0;
  for (int i = 0; i < rank; ++i) {
    prefix |= SubsetMask{1} << order[i];
    double cur = cut_fn_F(spec, rank, prefix);
    result += a[order[i]] * (cur - prev);
    prev = cur;
  }
  return result;
}

double dual_f_norm(const CutFunctionSpec& spec, int rank, std::span<const double> y) {
  require_rank(spec, rank);
  if (!spec.is_mscf()) throw DomainError("clique kind has no F-norm");
  if (static_cast<int>(y.size()) != rank) throw DomainError("vector length != rank");
  std::vector<double> a(y.begin(), y.end());
  for (double& v : a) v = std::fabs(v);

  if (is_count_based(spec)) {
    // Best size-k subset is the k largest entries; maximize prefix/g(k).
    std::sort(a.begin(), a.end(), std::greater<>());
    double best = 0.0, prefix = 0.0;
    for (int k = 1; k <= rank; ++k) {
      prefix += a[k - 1];
      best = std::max(best, prefix / F_count(spec, k));
    }
    return best;
  }

  if (rank > kMaxExhaustiveRank)
    throw UnsupportedError("dual norm for oracle specs requires rank <= 20");
  double best = 0.0;
  SubsetMask full = full_mask(rank);
  for (SubsetMask m = 1; m <= full; ++m) {
    double num = 0.0;
    for (int i = 0; i < rank; ++i)
      if (m & (SubsetMask{1} << i)) num += a[i];
    best = std::max(best, num / cut_fn_F(spec, rank, m));
  }
  return best;
}

double min_shift_f_norm(const CutFunctionSpec& spec, int rank, std::span<const double> x) {
  require_rank(spec, rank);
  double lo = *std::min_element(x.begin(), x.end());
  double hi = *std::max_element(x.begin(), x.end());
  std::vector<double> shifted(x.size());
  auto eval = [&](double u) {
    for (int i = 0; i < rank; ++i) shifted[i] = x[i] - u;
    return f_norm(spec, rank, shifted);
  };
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (eval(m1) <= eval(m2))
      hi = m2;
    else
      lo = m1;
  }
  return eval(0.5 * (lo + hi));
}

void validate_spec(const CutFunctionSpec& spec, int rank) {
  require_rank(spec, rank);
  if (spec.kind == CutKind::Clique) return;
  if (spec.kind == CutKind::Cardinality) {
    if (!spec.card_table.empty()) {
      const auto& g = spec.card_table;
      if (g[0] != 0.0) throw DomainError("cardinality table must have g(0) = 0");
      if (!(g[1] > 0.0)) throw DomainError("cardinality table must have g(1) > 0");
      for (int k = 1; k <= rank; ++k)
        if (g[k] + 1e-12 < g[k - 1])
          throw DomainError("cardinality table must be non-decreasing");
      for (int k = 2; k <= rank; ++k)
        if (g[k] - g[k - 1] > g[k - 1] - g[k - 2] + 1e-12)
          throw DomainError("cardinality table must be concave");
    } else if (!(spec.card_p > 0.0) || spec.card_p > 1.0) {
      throw DomainError("cardinality exponent must lie in (0, 1]");
    }
    return;
  }
  if (spec.kind == CutKind::Oracle) {
    if (!spec.oracle) throw DomainError("oracle spec has no callback");
    SubsetMask full = full_mask(rank);
    if (std::fabs(spec.oracle(0, rank)) > 1e-12)
      throw DomainError("oracle F(empty) must be 0");
    for (int i = 0; i < rank; ++i)
      if (!(cut_fn_F(spec, rank, SubsetMask{1} << i) > 0.0))
        throw DomainError("oracle F({i}) must be positive");
    if (rank <= 12) {
      for (SubsetMask m = 0; m < full; ++m) {
        for (int i = 0; i < rank; ++i) {
          SubsetMask bit = SubsetMask{1} << i;
          if (m & bit) continue;
          if (cut_fn_F(spec, rank, m | bit) + 1e-9 < cut_fn_F(spec, rank, m))
            throw DomainError("oracle F must be non-decreasing");
        }
      }
    } else {
      // Spot-check random chains.
      std::mt19937_64 gen(0x9E3779B97F4A7C15ull);
      for (int trial = 0; trial < 64; ++trial) {
        SubsetMask m = 0;
        double prev = 0.0;
        for (int step = 0; step < rank; ++step) {
          int i = static_cast<int>(gen() % rank);
          m |= SubsetMask{1} << i;
          double cur = cut_fn_F(spec, rank, m);
          if (cur + 1e-9 < prev) throw DomainError("oracle F must be non-decreasing");
          prev = cur;
        }
      }
    }
  }
}

}  // namespace hyperrc
