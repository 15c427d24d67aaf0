#include "hyperrc/cut_matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hyperrc {

void RunConfig::validate() const {
  if (!(eps > 0.0) || eps >= 1.0) throw DomainError("eps must lie in (0, 1)");
  if (max_rounds < 1) throw DomainError("max_rounds must be positive");
  if (!(c_const > 0.0)) throw DomainError("c_const must be positive");
  if (!(r_const > 0.0)) throw DomainError("r_const must be positive");
  if (jl_delta < 0.1 || jl_delta >= 1.0) throw DomainError("jl_delta must lie in [1/10, 1)");
}

double Embedding::variance() const {
  double e = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    double norm2 = 0.0;
    for (double x : v[i]) norm2 += x * x;
    e += static_cast<double>(mu[i]) * norm2;
  }
  return e / static_cast<double>(mu_total);
}

double Embedding::distance2(int i, int j) const {
  double d2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    double diff = v[i][k] - v[j][k];
    d2 += diff * diff;
  }
  return d2;
}

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g, std::span<const long long> mu) {
  int n = g.n;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const WeightedEdge& e : g.edges) {
    lap(e.u, e.u) += e.w;
    lap(e.v, e.v) += e.w;
    lap(e.u, e.v) -= e.w;
    lap(e.v, e.u) -= e.w;
  }
  for (int i = 0; i < n; ++i) {
    double si = 1.0 / std::sqrt(static_cast<double>(mu[i]));
    for (int j = 0; j < n; ++j) {
      double sj = 1.0 / std::sqrt(static_cast<double>(mu[j]));
      lap(i, j) *= si * sj;
    }
  }
  return lap;
}

MirrorDescent::MirrorDescent(std::vector<long long> mu, double eta)
    : mu_(std::move(mu)), eta_(eta), n_(static_cast<int>(mu_.size())) {
  lap_sum_ = Eigen::MatrixXd::Zero(n_, n_);
}

void MirrorDescent::add_action(const WeightedGraph& d) {
  if (d.n != n_) throw DomainError("matching action size mismatch");
  // Feedback must be at most mu-regular so that 0 <= L_mu(D) <= 2I.
  std::vector<double> deg(n_, 0.0);
  for (const WeightedEdge& e : d.edges) {
    deg[e.u] += e.w;
    deg[e.v] += e.w;
  }
  for (int i = 0; i < n_; ++i)
    if (deg[i] > static_cast<double>(mu_[i]) * (1.0 + 1e-6))
      throw DomainError("matching action exceeds the vertex measure");
  lap_sum_ += normalized_laplacian(d, mu_);
  ++rounds_;
  dirty_ = true;
}

void MirrorDescent::refresh() {
  if (!dirty_) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-eta_ * lap_sum_);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  // Shift so the largest exponent is 0; the normalization cancels the shift.
  double top = lam.maxCoeff();
  Eigen::VectorXd w = (lam.array() - top).exp();
  double z = w.sum();
  Eigen::VectorXd scaled = w / z;
  density_ = es.eigenvectors() * scaled.asDiagonal() * es.eigenvectors().transpose();
  Eigen::VectorXd half = scaled.array().sqrt();
  half_ = es.eigenvectors() * half.asDiagonal() * es.eigenvectors().transpose();
  dirty_ = false;
}

const Eigen::MatrixXd& MirrorDescent::density() {
  refresh();
  return density_;
}

double MirrorDescent::action_inner(const WeightedGraph& d) {
  refresh();
  double total = 0.0;
  for (const WeightedEdge& e : d.edges) {
    double mi = std::sqrt(static_cast<double>(mu_[e.u]));
    double mj = std::sqrt(static_cast<double>(mu_[e.v]));
    total += e.w * (density_(e.u, e.u) / (mi * mi) + density_(e.v, e.v) / (mj * mj) -
                    2.0 * density_(e.u, e.v) / (mi * mj));
  }
  return total;
}

namespace {

Embedding finalize_embedding(const std::vector<long long>& mu, Eigen::MatrixXd rows) {
  int n = static_cast<int>(mu.size());
  int d = static_cast<int>(rows.cols());
  long long mu_total = std::accumulate(mu.begin(), mu.end(), 0LL);
  for (int i = 0; i < n; ++i)
    rows.row(i) /= std::sqrt(static_cast<double>(mu[i]));
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
  for (int i = 0; i < n; ++i) mean += static_cast<double>(mu[i]) * rows.row(i);
  mean /= static_cast<double>(mu_total);
  Embedding emb;
  emb.mu = mu;
  emb.mu_total = mu_total;
  emb.dim = d;
  emb.v.resize(n);
  for (int i = 0; i < n; ++i) {
    emb.v[i].resize(d);
    for (int k = 0; k < d; ++k) emb.v[i][k] = rows(i, k) - mean(k);
  }
  return emb;
}

}  // namespace

Embedding MirrorDescent::embed(int dim, Rng& rng) {
  refresh();
  Eigen::MatrixXd rows(n_, dim);
  double scale = std::sqrt(static_cast<double>(n_) / static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    std::vector<double> u = rng.unit_sphere(n_);
    Eigen::Map<Eigen::VectorXd> uv(u.data(), n_);
    rows.col(j) = scale * (half_ * uv);
  }
  return finalize_embedding(mu_, std::move(rows));
}

Embedding MirrorDescent::embed_full() {
  refresh();
  return finalize_embedding(mu_, half_);
}

bool is_balanced(const Embedding& emb, double t, double b) {
  int n = static_cast<int>(emb.v.size());
  double var = emb.variance();
  if (!(var > 0.0)) throw DomainError("degenerate embedding: zero variance");
  double mu_total = static_cast<double>(emb.mu_total);
  // R_t = short vectors; pair term via mu(R)*sum mu||v||^2 - ||sum mu v||^2.
  double mu_r = 0.0, len_r = 0.0;
  std::vector<double> sum_v(emb.dim, 0.0);
  for (int i = 0; i < n; ++i) {
    double norm2 = 0.0;
    for (double x : emb.v[i]) norm2 += x * x;
    if (norm2 <= t * var) {
      double m = static_cast<double>(emb.mu[i]);
      mu_r += m;
      len_r += m * norm2;
      for (int k = 0; k < emb.dim; ++k) sum_v[k] += m * emb.v[i][k];
    }
  }
  double center2 = 0.0;
  for (double x : sum_v) center2 += x * x;
  double pair_term = (mu_r * len_r - center2) / (mu_total * mu_total);
  return pair_term >= b * var;
}

bool check_robust_witness(const Embedding& emb, std::span<const int> cut,
                          const RobustWitness& witness) {
  if (cut.empty() || witness.t_set.empty()) return false;
  int n = static_cast<int>(emb.v.size());
  std::vector<char> in_s(n, 0), in_t(n, 0);
  long long mu_s = 0, mu_t = 0;
  for (int i : cut) {
    in_s[i] = 1;
    mu_s += emb.mu[i];
  }
  for (int j : witness.t_set) {
    if (in_s[j]) return false;  // T must avoid S
    in_t[j] = 1;
    mu_t += emb.mu[j];
  }
  if (3 * mu_t < emb.mu_total) return false;
  double bound = witness.sigma / static_cast<double>(mu_s);
  for (int i : cut)
    for (int j : witness.t_set)
      if (emb.distance2(i, j) < bound * (1.0 - 1e-9) - 1e-15) return false;
  return true;
}

RoundCutResult round_cut(const Embedding& emb, double r_const, Rng& rng) {
  int n = static_cast<int>(emb.v.size());
  if (n < 2) throw DomainError("embedding too small to cut");
  double var = emb.variance();
  if (!(var > 0.0)) throw DomainError("degenerate embedding: zero variance");
  double mu_total = static_cast<double>(emb.mu_total);

  auto norm2 = [&](int i) {
    double s = 0.0;
    for (double x : emb.v[i]) s += x * x;
    return s;
  };

  if (is_balanced(emb, 3.0, 0.1)) {
    int tries = std::max(1, static_cast<int>(std::ceil(4.0 * std::log2(std::max(2, n)))));
    for (int trial = 0; trial < tries; ++trial) {
      std::vector<double> g = rng.unit_sphere(emb.dim);
      std::vector<double> r(n, 0.0);
      double sqrt_d = std::sqrt(static_cast<double>(emb.dim));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < emb.dim; ++k) r[i] += sqrt_d * g[k] * emb.v[i][k];

      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return r[a] != r[b] ? r[a] > r[b] : a < b;
      });
      // Threshold prefix with mu >= mu(V)/3 (ties enter together).
      double acc = 0.0;
      int a_end = -1;  // last index of the chosen prefix in sorted order
      for (int k = 0; k < n; ++k) {
        acc += static_cast<double>(emb.mu[order[k]]);
        if (3.0 * acc >= mu_total) {
          a_end = k;
          while (a_end + 1 < n && r[order[a_end + 1]] == r[order[a_end]]) ++a_end;
          break;
        }
      }
      // Threshold suffix with mu >= mu(V)/3.
      acc = 0.0;
      int b_start = -1;
      for (int k = n - 1; k >= 0; --k) {
        acc += static_cast<double>(emb.mu[order[k]]);
        if (3.0 * acc >= mu_total) {
          b_start = k;
          while (b_start - 1 >= 0 && r[order[b_start - 1]] == r[order[b_start]]) --b_start;
          break;
        }
      }
      if (a_end < 0 || b_start < 0 || a_end >= b_start) continue;
      double gap = r[order[a_end]] - r[order[b_start]];
      if (!(gap > 0.0) || gap * gap < r_const * var) continue;

      std::vector<int> prefix(order.begin(), order.begin() + a_end + 1);
      std::vector<int> suffix(order.begin() + b_start, order.end());
      long long mu_p = 0, mu_q = 0;
      for (int i : prefix) mu_p += emb.mu[i];
      for (int i : suffix) mu_q += emb.mu[i];

      RoundCutResult result;
      bool prefix_side = mu_p <= mu_q;
      result.cut = prefix_side ? prefix : suffix;
      result.witness.t_set = prefix_side ? suffix : prefix;
      std::sort(result.cut.begin(), result.cut.end());
      std::sort(result.witness.t_set.begin(), result.witness.t_set.end());
      double mu_s = static_cast<double>(prefix_side ? mu_p : mu_q);
      result.witness.sigma = mu_s * gap * gap / static_cast<double>(emb.dim);
      result.witness.balanced_branch = true;
      return result;
    }
  }

  // Unbalanced branch: T = R_{3/2}, sweep suffixes of long vectors.
  std::vector<double> len(n);
  for (int i = 0; i < n; ++i) len[i] = norm2(i);
  std::vector<int> t_set;
  double t_max_len = 0.0;
  for (int i = 0; i < n; ++i)
    if (len[i] <= 1.5 * var) {
      t_set.push_back(i);
      t_max_len = std::max(t_max_len, len[i]);
    }
  std::vector<int> longs;
  for (int i = 0; i < n; ++i)
    if (len[i] > 3.0 * var) longs.push_back(i);

  if (!longs.empty() && !t_set.empty()) {
    std::sort(longs.begin(), longs.end(), [&](int a, int b) {
      return len[a] != len[b] ? len[a] > len[b] : a < b;
    });
    double t_max = std::sqrt(t_max_len);
    double best_sigma = -1.0;
    int best_k = 0;
    double mu_s = 0.0;
    for (int k = 0; k < static_cast<int>(longs.size()); ++k) {
      mu_s += static_cast<double>(emb.mu[longs[k]]);
      if (k + 1 < static_cast<int>(longs.size()) && len[longs[k + 1]] == len[longs[k]])
        continue;  // thresholds include ties
      double gap = std::sqrt(len[longs[k]]) - t_max;
      if (!(gap > 0.0)) continue;
      double sigma = gap * gap * mu_s;
      if (sigma > best_sigma) {
        best_sigma = sigma;
        best_k = k;
      }
    }
    if (best_sigma > 0.0) {
      RoundCutResult result;
      result.cut.assign(longs.begin(), longs.begin() + best_k + 1);
      std::sort(result.cut.begin(), result.cut.end());
      result.witness.t_set = std::move(t_set);
      result.witness.sigma = best_sigma;
      result.witness.balanced_branch = false;
      return result;
    }
  }

  // Last resort (skewed measures can starve both branches, e.g. a single
  // vertex heavier than the two side windows allow): cut out the lightest
  // group of coincident points. With positive variance there are at least two
  // groups, the lightest has measure <= mu(V)/2, and its distance to every
  // other group is positive, so the witness is valid by construction.
  std::vector<char> grouped(n, 0);
  std::vector<int> best_group;
  long long best_mu = -1;
  for (int i = 0; i < n; ++i) {
    if (grouped[i]) continue;
    std::vector<int> group;
    long long mu_g = 0;
    for (int j = i; j < n; ++j) {
      if (grouped[j]) continue;
      if (emb.distance2(i, j) == 0.0) {
        group.push_back(j);
        grouped[j] = 1;
        mu_g += emb.mu[j];
      }
    }
    if (best_mu < 0 || mu_g < best_mu) {
      best_mu = mu_g;
      best_group = std::move(group);
    }
  }
  if (best_mu < 0 || 2 * best_mu > emb.mu_total)
    throw DomainError("embedding admits no separated sweep cut");
  RoundCutResult result;
  result.cut = std::move(best_group);
  double min_d2 = std::numeric_limits<double>::infinity();
  std::vector<char> in_s(n, 0);
  for (int i : result.cut) in_s[i] = 1;
  for (int j = 0; j < n; ++j)
    if (!in_s[j]) {
      result.witness.t_set.push_back(j);
      min_d2 = std::min(min_d2, emb.distance2(result.cut.front(), j));
    }
  result.witness.sigma = static_cast<double>(best_mu) * min_d2;
  result.witness.balanced_branch = false;
  return result;
}

MatchingCheck verify_matching_action(const WeightedGraph& d, std::span<const int> cut,
                                     std::span<const long long> mu, double eps) {
  int n = d.n;
  std::vector<char> in_s(n, 0);
  long long mu_s = 0, mu_total = 0;
  for (long long m : mu) mu_total += m;
  for (int i : cut) {
    in_s[i] = 1;
    mu_s += mu[i];
  }
  if (mu_s == 0 || mu_s == mu_total) throw DomainError("degenerate matching cut");

  MatchingCheck check;
  std::vector<double> deg(n, 0.0);
  for (const WeightedEdge& e : d.edges) {
    if (in_s[e.u] == in_s[e.v]) check.bipartite = false;
    deg[e.u] += e.w;
    deg[e.v] += e.w;
  }
  double ratio = static_cast<double>(mu_s) / static_cast<double>(mu_total - mu_s);
  double l1 = 0.0, mass = 0.0, cap_worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double target = static_cast<double>(mu[i]) * (in_s[i] ? 1.0 : ratio);
    l1 += std::fabs(deg[i] - target);
    mass += target;
    cap_worst = std::max(cap_worst, deg[i] - target);
  }
  const double tol = 1e-7 * std::max(1.0, mass);
  check.l1_residual = l1 - eps * mass;
  check.degree_l1 = l1 <= eps * mass + tol;
  check.cap_residual = cap_worst;
  check.degree_cap = cap_worst <= tol;
  return check;
}

MatchingAction matching_action_from_solution(const Hypergraph& g,
                                             const PrimalDualSolution& sol) {
  if (!(sol.alpha > 0.0)) throw DomainError("degenerate primal-dual solution: alpha = 0");
  MatchingAction action;
  action.support = flow_path_decompose(g, sol.flow);
  action.alpha = sol.alpha;
  action.demand.n = g.num_vertices();
  for (const WeightedEdge& e : action.support.graph.edges)
    action.demand.edges.push_back({e.u, e.v, e.w / sol.alpha});
  return action;
}

SpectralBound certificate_quality(const WeightedGraph& h, std::span<const long long> mu) {
  if (h.n < 2) throw DomainError("graph too small");
  std::vector<long long> mu_vec(mu.begin(), mu.end());
  Eigen::MatrixXd lap = normalized_laplacian(h, mu_vec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  SpectralBound bound;
  bound.lambda2 = es.eigenvalues()(1);
  if (std::fabs(bound.lambda2) < 1e-12) bound.lambda2 = std::max(0.0, bound.lambda2);
  bound.cheeger_lower = bound.lambda2 / 2.0;
  return bound;
}

ApproxRcResult approx_rc(const Hypergraph& g, const RunConfig& cfg) {
  cfg.validate();
  int n = g.num_vertices();
  if (n < 2) throw DomainError("partitioning needs at least two vertices");

  ApproxRcResult result;
  result.certificate.eps = cfg.eps;
  result.certificate.h.n = n;

  // Disconnected hypergraphs admit a zero-cost cut outright.
  auto comps = connected_components(g);
  if (comps.size() > 1) {
    std::vector<int> cut = comps[0];
    std::vector<char> in_set = g.indicator(cut);
    if (2 * g.measure(in_set) > g.total_measure()) {
      cut.clear();
      for (size_t c = 1; c < comps.size(); ++c)
        cut.insert(cut.end(), comps[c].begin(), comps[c].end());
      std::sort(cut.begin(), cut.end());
    }
    result.cut = std::move(cut);
    result.psi = ratio_cut(g, result.cut);
    result.best_round = 0;
    return result;
  }

  double log_n = std::log(static_cast<double>(n));
  double schedule = std::ceil((32.0 / cfg.c_const) * log_n * log_n / (1.0 - cfg.eps));
  int rounds = static_cast<int>(std::min<double>(cfg.max_rounds, std::max(1.0, schedule)));
  double eta = std::sqrt(log_n * log_n / (2.0 * cfg.c_const * rounds * (1.0 - cfg.eps)));
  int dim = std::max(8, static_cast<int>(std::ceil(16.0 / (cfg.jl_delta * cfg.jl_delta) * log_n)));

  result.certificate.eta = eta;
  result.certificate.jl_dim = dim;

  Rng rng(cfg.rng_seed);
  MirrorDescent md(g.mu(), eta);

  double best_obj = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= rounds; ++t) {
    Embedding emb;
    RoundCutResult rc;
    try {
      emb = md.embed(dim, rng);
      rc = round_cut(emb, cfg.r_const, rng);
    } catch (const DomainError&) {
      break;  // degenerate embedding: the certificate is already saturated
    }

    Seed seed = seed_from_cut(g, rc.cut);
    PrimalDualSolution sol = solve_ci(g, seed, cfg.eps);

    CertificateRound round;
    round.cut = rc.cut;
    round.improved = sol.cut;
    round.alpha = sol.alpha;
    round.objective = sol.objective;
    round.witness = rc.witness;
    round.witness_ok = check_robust_witness(emb, rc.cut, rc.witness);

    if (sol.objective < best_obj) {
      best_obj = sol.objective;
      result.cut = sol.cut;
      result.best_round = t;
    }
    if (!(sol.alpha > 0.0)) {
      // A zero-cost correlated cut ends the game; it is ratio-cut optimal.
      result.certificate.round_info.push_back(std::move(round));
      break;
    }

    MatchingAction action = matching_action_from_solution(g, sol);
    action.cut = rc.cut;
    round.demand = action.demand;
    round.action_inner = md.action_inner(action.demand);
    for (const WeightedEdge& e : action.demand.edges)
      round.separation += e.w * emb.distance2(e.u, e.v);
    round.matching_ok = verify_matching_action(action.demand, rc.cut, g.mu(), cfg.eps).ok();

    for (const WeightedEdge& e : action.demand.edges)
      result.certificate.h.edges.push_back(e);
    result.certificate.rho += 2.0 / sol.alpha;
    md.add_action(action.demand);
    result.certificate.round_info.push_back(std::move(round));
  }

  result.certificate.rounds = static_cast<int>(result.certificate.round_info.size());
  if (!result.certificate.h.edges.empty()) {
    SpectralBound sb = certificate_quality(result.certificate.h, g.mu());
    result.certificate.lambda2 = sb.lambda2;
    if (result.certificate.rho > 0.0)
      result.certificate.lower_bound = sb.cheeger_lower / result.certificate.rho;
  }
  if (result.cut.empty()) throw Error("cut-matching game produced no cut");
  result.psi = ratio_cut(g, result.cut);

  if (cfg.verify_level != VerifyLevel::None && !result.certificate.h.edges.empty()) {
    int samples = cfg.verify_level == VerifyLevel::Exhaustive ? 0 : 2048;
    if (cfg.verify_level == VerifyLevel::Exhaustive && n > kMaxExhaustiveRank)
      samples = 4096;
    result.embedding_check = verify_flow_embedding(g, result.certificate.h,
                                                   result.certificate.rho, samples,
                                                   cfg.rng_seed ^ 0xA5A5A5A5ull);
  }
  return result;
}

}  // namespace hyperrc
