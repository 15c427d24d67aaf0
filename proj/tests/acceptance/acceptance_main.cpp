// Acceptance suite: one check per shipped guarantee, each printing a single
// [PASS]/[FAIL] line. Exits non-zero if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hyperrc.h"
#include "hyperrc/io.hpp"
#include "../test_helpers.hpp"

using namespace hyperrc;
using namespace testutil;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int id, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %2d: %s (%.2fs)\n", pass ? "PASS" : "FAIL", id,
              detail.c_str(), seconds);
  if (!pass) ++g_failures;
}

std::vector<CutFunctionSpec> sandwich_specs(int rank) {
  std::vector<double> table(rank + 1, 0.0);
  for (int k = 1; k <= rank; ++k) table[k] = table[k - 1] + 1.0 / std::sqrt(k);
  return {CutFunctionSpec::standard(), CutFunctionSpec::star(),
          CutFunctionSpec::cardinality_power(0.5),
          CutFunctionSpec::cardinality_table(table)};
}

// --- 1: polytope sandwich ---------------------------------------------------
void criterion_sandwich() {
  Timer timer;
  Rng rng(0xC1);
  long long bad = 0;
  int done = 0;
  while (done < 1000) {
    int rank = 2 + static_cast<int>(rng.below(7));
    for (const auto& spec : sandwich_specs(rank)) {
      if (done >= 1000) break;
      std::vector<double> x(rank);
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      double inner = min_shift_f_norm(spec, rank, x);
      double ext = lovasz_extension(spec, rank, x);
      if (!(inner <= ext + 1e-6) || !(ext <= 2.0 * inner + 1e-6)) ++bad;
      ++done;
    }
  }
  double sec = timer.seconds();
  report(1, bad == 0 && sec < 10.0,
         "polytope sandwich on 1000 random (spec, x) pairs, violations = " +
             std::to_string(bad),
         sec);
}

// --- 2: greedy = Lovasz duality ----------------------------------------------
void criterion_greedy_duality() {
  Timer timer;
  Rng rng(0xC2);
  long long bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int rank = 2 + static_cast<int>(rng.below(7));
    auto specs = sandwich_specs(rank);
    const auto& spec = specs[rng.below(specs.size())];
    std::vector<double> x(rank);
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    auto y = base_polytope_argmax(spec, rank, x);
    double inner = 0.0;
    for (int i = 0; i < rank; ++i) inner += y[i] * x[i];
    if (std::fabs(inner - lovasz_extension(spec, rank, x)) > 1e-9) ++bad;
    if (rank <= 6 && std::fabs(inner - perm_max_base(spec, rank, x)) > 1e-9) ++bad;
  }
  report(2, bad == 0,
         "greedy base vector matches the extension and the exhaustive LP max, "
         "violations = " + std::to_string(bad),
         timer.seconds());
}

// --- 3: flow decomposition contract ------------------------------------------
void criterion_flow_decomposition() {
  Timer timer;
  Rng rng(0xC3);
  long long bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 10;
    opt.standard_only = trial % 2 == 0;
    auto g = random_hypergraph(rng, opt);
    HypergraphFlow y = random_path_flow(g, rng, 6);
    auto dem = flow_demand(g, y);
    DemandGraph dg = flow_path_decompose(g, y);

    std::vector<double> deg(g.num_vertices(), 0.0);
    for (const WeightedEdge& e : dg.graph.edges) {
      deg[e.u] += e.w;
      deg[e.v] += e.w;
      if (!(dem[e.u] > -1e-9) || !(dem[e.v] < 1e-9)) ++bad;  // bipartite over signs
    }
    for (int i = 0; i < g.num_vertices(); ++i)
      if (std::fabs(deg[i] - std::fabs(dem[i])) > 1e-7) ++bad;

    std::vector<std::vector<double>> abs_sum(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
      abs_sum[e].assign(g.edges()[e].vertices.size(), 0.0);
    for (const auto& per_edge : dg.flows)
      for (const auto& [e, ye] : per_edge)
        for (size_t j = 0; j < ye.size(); ++j) {
          if (ye[j] * y.y[e][j] < -1e-12) ++bad;  // sign preservation
          abs_sum[e][j] += std::fabs(ye[j]);
        }
    CongestionReport cong = congestion(g, y);
    for (int e = 0; e < g.num_edges(); ++e) {
      const Hyperedge& h = g.edges()[e];
      double norm = dual_f_norm(h.spec, static_cast<int>(h.vertices.size()), abs_sum[e]);
      if (norm > cong.max * static_cast<double>(h.weight) + 1e-7) ++bad;
    }
    EmbeddingReport rep = verify_flow_embedding(g, dg.graph, cong.max);
    if (!rep.valid) ++bad;
  }
  report(3, bad == 0,
         "200 random flows: degree law, signs, congestion, exhaustive embedding, "
         "violations = " + std::to_string(bad),
         timer.seconds());
}

// --- 4: cut-improvement optimality at desk scale ------------------------------
void criterion_ci_optimality() {
  Timer timer;
  Rng rng(0xC4);
  long long bad = 0;
  const double eps = 0.1;
  for (int trial = 0; trial < 100; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 10;
    auto g = random_hypergraph(rng, opt);
    int n = g.num_vertices();
    std::uint32_t mask = 1 + static_cast<std::uint32_t>(rng.below((1u << n) - 2));
    std::vector<int> cut;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) cut.push_back(i);
    Seed s = seed_from_cut(g, cut);
    PrimalDualSolution sol = solve_ci(g, s, eps);
    double star = brute_force_ci_star(g, s.s);
    if (star > 0.0) {
      if (sol.alpha > star * (1.0 + eps / 4.0) + 1e-9 ||
          sol.alpha < star / (1.0 + eps / 4.0) - 1e-9)
        ++bad;
    } else if (sol.alpha != 0.0) {
      ++bad;
    }
    if (!validate_primal_dual(g, s.s, sol, eps).all_pass) ++bad;
  }
  double sec = timer.seconds();
  report(4, bad == 0 && sec < 60.0,
         "100 random improvement solves bracket the brute-force optimum and "
         "validate, violations = " + std::to_string(bad),
         sec);
}

// --- 5: lower-bound certification ---------------------------------------------
void criterion_certification() {
  Timer timer;
  Rng rng(0xC5);
  long long violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 12;
    opt.standard_only = trial % 2 == 0;
    auto g = random_hypergraph(rng, opt);
    RunConfig cfg;
    cfg.rng_seed = 500 + trial;
    cfg.verify_level = VerifyLevel::None;
    ApproxRcResult result = approx_rc(g, cfg);
    const Certificate& cert = result.certificate;
    if (cert.h.edges.empty()) {
      ++violations;  // connected instances must accumulate demand graphs
      continue;
    }
    int n = g.num_vertices();
    double worst = 0.0;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      auto in_set = mask_to_indicator(mask, n);
      double dh = graph_cut_value(cert.h, in_set);
      double dgv = g.cut_value(in_set);
      if (dh > cert.rho * dgv + 1e-7 * std::max(1.0, cert.rho)) ++violations;
      if (dgv > 0) worst = std::max(worst, dh / dgv);
    }
    double psi_h = brute_force_graph_psi_star(cert.h, g.mu());
    double psi_g = brute_force_psi_star(g);
    if (psi_g < psi_h / cert.rho - 1e-9) ++violations;
    (void)worst;
  }
  report(5, violations == 0,
         "50 certificates: delta_H <= rho*delta_G on all cuts and "
         "Psi*_G >= Psi*_H/rho, violations = " + std::to_string(violations),
         timer.seconds());
}

// --- 6/7/8: end-to-end quality + per-round conformance ------------------------
struct SweepStats {
  long long runs = 0;
  long long quality_ok = 0;
  long long finite_certified = 0;
  long long matching_rounds = 0;
  long long matching_bad = 0;
  long long witness_calls = 0;
  long long witness_bad = 0;
  bool lower_bound_ok = true;
  bool per_instance_ok = true;
};

void run_sweep_instance(const Hypergraph& g, double psi_star, int seeds, SweepStats& stats) {
  int n = g.num_vertices();
  double budget = 10.0 * std::log2(static_cast<double>(n));
  int instance_ok = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    RunConfig cfg;
    cfg.rng_seed = static_cast<std::uint64_t>(seed) * 7919;
    cfg.verify_level = VerifyLevel::None;
    ApproxRcResult result = approx_rc(g, cfg);
    ++stats.runs;
    if (result.psi <= budget * psi_star + 1e-9) {
      ++stats.quality_ok;
      ++instance_ok;
    }
    const Certificate& cert = result.certificate;
    // Certified ratio Psi(A) / (Psi*_H / rho) is finite: requires a connected
    // accumulated demand graph (lambda2 > 0 forces Psi*_H > 0).
    if (cert.rho > 0.0 && cert.lambda2 > 1e-12) ++stats.finite_certified;
    double lower = cert.rho > 0 ? cert.lambda2 / (2.0 * cert.rho) : 0.0;
    if (lower > psi_star + 1e-9) stats.lower_bound_ok = false;
    for (const CertificateRound& round : cert.round_info) {
      ++stats.witness_calls;
      if (!round.witness_ok) ++stats.witness_bad;
      if (round.alpha > 0.0 && !round.demand.edges.empty()) {
        ++stats.matching_rounds;
        if (!round.matching_ok) ++stats.matching_bad;
      }
    }
  }
  if (instance_ok * 100 < seeds * 95) stats.per_instance_ok = false;
}

void criterion_end_to_end() {
  Timer timer;
  SweepStats stats;

  auto q3 = hypercube_q3();
  double q3_star = brute_force_psi_star(q3);
  bool q3_known = std::fabs(q3_star - 1.0) < 1e-12;
  run_sweep_instance(q3, q3_star, 20, stats);

  for (int n = 8; n <= 16; n += 2) {
    auto c = cycle_graph(n);
    run_sweep_instance(c, brute_force_psi_star(c), 20, stats);
  }

  Rng rng(0xC6);
  for (int trial = 0; trial < 50; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 12;
    opt.standard_only = trial % 2 == 0;
    auto g = random_hypergraph(rng, opt);
    run_sweep_instance(g, brute_force_psi_star(g), 20, stats);
  }

  double sec = timer.seconds();
  bool quality = stats.quality_ok * 100 >= stats.runs * 95 && stats.per_instance_ok;
  bool certified = stats.finite_certified == stats.runs && stats.lower_bound_ok;
  report(6, quality && certified && q3_known && sec < 600.0,
         "end-to-end sweep: " + std::to_string(stats.quality_ok) + "/" +
             std::to_string(stats.runs) + " runs within 10*log2(n) of optimum "
             "(per instance >= 95%), certified lower bounds finite and never "
             "above Psi*",
         sec);
  report(7, stats.matching_bad == 0 && stats.matching_rounds > 0,
         "matching-action conformance on " + std::to_string(stats.matching_rounds) +
             " rounds, failures = " + std::to_string(stats.matching_bad),
         sec);
  report(8, stats.witness_bad == 0 && stats.witness_calls >= 2000,
         "robust-separation witnesses verified on " +
             std::to_string(stats.witness_calls) +
             " cuts, failures = " + std::to_string(stats.witness_bad),
         sec);
}

// --- 9: projection fidelity ----------------------------------------------------
void criterion_jl() {
  Timer timer;
  const double delta = 0.5;
  long long ok = 0, total = 0;
  for (int n : {16, 32, 64}) {
    std::vector<long long> mu(n, 1);
    for (int seed = 1; seed <= 20; ++seed) {
      MirrorDescent md(mu, 0.4);
      Rng graph_rng(900 + seed);
      for (int round = 0; round < 3; ++round) {
        WeightedGraph d;
        d.n = n;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
          std::swap(perm[i], perm[graph_rng.below(i + 1)]);
        for (int i = 0; i + 1 < n; i += 2)
          d.edges.push_back({perm[i], perm[i + 1], 1.0});
        md.add_action(d);
      }
      Embedding full = md.embed_full();
      Rng rng(1234 + seed);
      int dim = std::max(8, static_cast<int>(std::ceil(16.0 / (delta * delta) *
                                                       std::log(static_cast<double>(n)))));
      Embedding proj = md.embed(dim, rng);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double ref = full.distance2(i, j);
          double got = proj.distance2(i, j);
          ++total;
          if (got >= (1.0 - delta) * ref - 1e-12 && got <= (1.0 + delta) * ref + 1e-12)
            ++ok;
        }
    }
  }
  bool pass = ok * 100 >= total * 99;
  report(9, pass,
         "projected pairwise distances within (1 +- 0.5) of full dimension for " +
             std::to_string(ok) + "/" + std::to_string(total) + " pairs",
         timer.seconds());
}

// --- 10: metric module -----------------------------------------------------------
void criterion_metric() {
  Timer timer;
  Rng rng(0xCA);
  long long bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 10;
    opt.standard_only = trial % 2 == 0;
    auto g = random_hypergraph(rng, opt);
    int n = g.num_vertices();
    std::uint32_t mask = 1 + static_cast<std::uint32_t>(rng.below((1u << n) - 2));
    std::vector<int> cut;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) cut.push_back(i);
    MetricSolution sol = feasible_from_cut(g, cut);
    if (!check_metric_feasibility(g, sol).feasible) ++bad;
    if (metric_objective(g, sol) > 2.0 * ratio_cut(g, cut) + 1e-9) ++bad;
  }
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 8;
    std::vector<double> x(n), y(n);
    double center = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) {
      y[i] = 0.05 + 2.0 * rng.uniform();
      x[i] = center + (2.0 * rng.uniform() - 1.0) * y[i];
    }
    double nu = optimal_shift(x, y);
    for (int i = 0; i < n; ++i)
      if (std::fabs(x[i] - nu) > y[i] + 1e-12) ++bad;
  }
  report(10, bad == 0,
         "metric construction feasible and 2-competitive; interval shifts cover "
         "every coordinate, violations = " + std::to_string(bad),
         timer.seconds());
}

// --- 11: determinism ---------------------------------------------------------------
void criterion_determinism() {
  Timer timer;
  Rng rng(0xCB);
  long long mismatches = 0;
  int docs = 0;
  for (int trial = 0; trial < 6; ++trial) {
    GeneratorOptions opt;
    opt.n_max = 10;
    opt.standard_only = trial % 2 == 0;
    Hypergraph g = random_hypergraph(rng, opt);
    std::string text = write_hypergraph_text(g);

    hrc_hypergraph* handle = nullptr;
    if (hrc_hypergraph_load_string(text.c_str(), &handle, nullptr) != HRC_OK) {
      ++mismatches;
      continue;
    }
    const char* cfg = "{\"rng_seed\": 17, \"verify_level\": \"sampled\"}";
    auto run = [&](hrc_status (*fn)(const hrc_hypergraph*, const char*, char**, char**)) {
      char* a = nullptr;
      char* b = nullptr;
      std::string sa, sb;
      if (fn(handle, cfg, &a, nullptr) == HRC_OK) sa = a;
      if (fn(handle, cfg, &b, nullptr) == HRC_OK) sb = b;
      hrc_string_free(a);
      hrc_string_free(b);
      ++docs;
      if (sa.empty() || sa != sb) ++mismatches;
    };
    run(hrc_partition);

    // improve + eval double runs through the same surface
    std::vector<int32_t> seed_cut = {0};
    char* i1 = nullptr;
    char* i2 = nullptr;
    hrc_improve(handle, seed_cut.data(), 1, cfg, &i1, nullptr);
    hrc_improve(handle, seed_cut.data(), 1, cfg, &i2, nullptr);
    ++docs;
    if (!i1 || !i2 || std::string(i1) != i2) ++mismatches;
    hrc_string_free(i1);
    hrc_string_free(i2);

    std::vector<double> x(g.num_vertices());
    for (size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 3) - 1.0;
    char* e1 = nullptr;
    char* e2 = nullptr;
    hrc_eval_vector(handle, x.data(), x.size(), &e1, nullptr);
    hrc_eval_vector(handle, x.data(), x.size(), &e2, nullptr);
    ++docs;
    if (!e1 || !e2 || std::string(e1) != e2) ++mismatches;
    hrc_string_free(e1);
    hrc_string_free(e2);

    hrc_hypergraph_free(handle);
  }
  report(11, mismatches == 0,
         "double runs over " + std::to_string(docs) +
             " corpus documents are byte-identical, mismatches = " +
             std::to_string(mismatches),
         timer.seconds());
}

}  // namespace

int main() {
  Timer total;
  criterion_sandwich();
  criterion_greedy_duality();
  criterion_flow_decomposition();
  criterion_ci_optimality();
  criterion_certification();
  criterion_end_to_end();
  criterion_jl();
  criterion_metric();
  criterion_determinism();
  std::printf("%s: %d criterion failure(s), total %.1fs\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures,
              total.seconds());
  return g_failures == 0 ? 0 : 1;
}
