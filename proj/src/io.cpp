#include "hyperrc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace hyperrc {

using ordered_json = nlohmann::ordered_json;

namespace {

CutFunctionSpec spec_from_token(const std::string& token, int line) {
  if (token == "standard") return CutFunctionSpec::standard();
  if (token == "star") return CutFunctionSpec::star();
  if (token == "clique") return CutFunctionSpec::clique();
  if (token.rfind("card:p=", 0) == 0) {
    try {
      return CutFunctionSpec::cardinality_power(std::stod(token.substr(7)));
    } catch (const DomainError&) {
      throw ParseError("cardinality exponent must lie in (0, 1]", line);
    } catch (const std::exception&) {
      throw ParseError("malformed cardinality exponent in '" + token + "'", line);
    }
  }
  throw ParseError("unknown cut-function kind '" + token + "'", line);
}

std::string spec_to_token(const CutFunctionSpec& spec) {
  switch (spec.kind) {
    case CutKind::Standard: return "standard";
    case CutKind::Star: return "star";
    case CutKind::Clique: return "clique";
    case CutKind::Cardinality: {
      std::ostringstream os;
      os << "card:p=" << spec.card_p;
      return os.str();
    }
    case CutKind::Oracle: break;
  }
  throw DomainError("oracle cut functions have no file representation");
}

}  // namespace

Hypergraph parse_hypergraph_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  long long n = 0, m = 0;
  CutFunctionSpec default_spec = CutFunctionSpec::standard();
  bool header_done = false;
  bool mu_done = false;
  std::vector<long long> mu;
  std::vector<Hyperedge> edges;

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;

    if (!header_done) {
      if (tokens.size() < 2 || tokens.size() > 3)
        throw ParseError("header must be `n m [fn=<kind>]`", line_no);
      try {
        n = std::stoll(tokens[0]);
        m = std::stoll(tokens[1]);
      } catch (const std::exception&) {
        throw ParseError("header must start with two integers", line_no);
      }
      if (n < 1) throw ParseError("vertex count must be positive", line_no);
      if (m < 0) throw ParseError("edge count must be non-negative", line_no);
      if (tokens.size() == 3) {
        if (tokens[2].rfind("fn=", 0) != 0)
          throw ParseError("third header token must be fn=<kind>", line_no);
        default_spec = spec_from_token(tokens[2].substr(3), line_no);
      }
      header_done = true;
      continue;
    }

    if (!mu_done && tokens[0] == "mu:") {
      if (static_cast<long long>(tokens.size()) != n + 1)
        throw ParseError("mu line must list one measure per vertex", line_no);
      for (long long i = 0; i < n; ++i) {
        long long v;
        try {
          v = std::stoll(tokens[i + 1]);
        } catch (const std::exception&) {
          throw ParseError("vertex measures must be integers", line_no);
        }
        if (v < 1) throw ParseError("vertex measures must be positive", line_no);
        mu.push_back(v);
      }
      mu_done = true;
      continue;
    }
    mu_done = true;

    // Edge line: w [fn=kind] v1 ... vk
    Hyperedge edge;
    edge.spec = default_spec;
    size_t pos = 0;
    try {
      edge.weight = std::stoll(tokens[pos++]);
    } catch (const std::exception&) {
      throw ParseError("edge line must start with an integer weight", line_no);
    }
    if (edge.weight < 1) throw ParseError("edge weights must be positive", line_no);
    if (pos < tokens.size() && tokens[pos].rfind("fn=", 0) == 0)
      edge.spec = spec_from_token(tokens[pos++].substr(3), line_no);
    for (; pos < tokens.size(); ++pos) {
      long long v;
      try {
        v = std::stoll(tokens[pos]);
      } catch (const std::exception&) {
        throw ParseError("vertex ids must be integers", line_no);
      }
      if (v < 0 || v >= n)
        throw ParseError("vertex id " + std::to_string(v) + " out of range [0, " +
                             std::to_string(n) + ")",
                         line_no);
      edge.vertices.push_back(static_cast<int>(v));
    }
    if (edge.vertices.size() < 2)
      throw ParseError("hyperedges need at least two vertices", line_no);
    edges.push_back(std::move(edge));
  }

  if (!header_done) throw ParseError("empty hypergraph file", line_no);
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError("expected " + std::to_string(m) + " edge lines, found " +
                         std::to_string(edges.size()),
                     line_no);
  try {
    return Hypergraph::build(static_cast<int>(n), std::move(mu), std::move(edges));
  } catch (const DomainError& err) {
    throw ParseError(err.what(), 0);
  }
}

Hypergraph parse_hypergraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_hypergraph_text(buffer.str());
}

std::string write_hypergraph_text(const Hypergraph& g) {
  std::ostringstream os;
  os << g.num_vertices() << ' ' << g.num_edges() << '\n';
  bool unit_mu = true;
  for (long long m : g.mu()) unit_mu &= m == 1;
  if (!unit_mu) {
    os << "mu:";
    for (long long m : g.mu()) os << ' ' << m;
    os << '\n';
  }
  for (const Hyperedge& e : g.edges()) {
    os << e.weight;
    if (e.spec.kind != CutKind::Standard) os << " fn=" << spec_to_token(e.spec);
    for (int v : e.vertices) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

RunConfig config_from_json(const std::string& json_text) {
  RunConfig cfg;
  if (!json_text.empty()) {
    try {
      ordered_json j = ordered_json::parse(json_text);
      if (!j.is_object()) throw ParseError("config must be a JSON object");
      if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
      if (j.contains("rng_seed")) cfg.rng_seed = j["rng_seed"].get<std::uint64_t>();
      if (j.contains("max_rounds")) cfg.max_rounds = j["max_rounds"].get<int>();
      if (j.contains("c_const")) cfg.c_const = j["c_const"].get<double>();
      if (j.contains("r_const")) cfg.r_const = j["r_const"].get<double>();
      if (j.contains("jl_delta")) cfg.jl_delta = j["jl_delta"].get<double>();
      if (j.contains("verify_level")) {
        std::string level = j["verify_level"].get<std::string>();
        if (level == "none")
          cfg.verify_level = VerifyLevel::None;
        else if (level == "sampled")
          cfg.verify_level = VerifyLevel::Sampled;
        else if (level == "exhaustive")
          cfg.verify_level = VerifyLevel::Exhaustive;
        else
          throw ParseError("verify_level must be none|sampled|exhaustive");
      }
    } catch (const nlohmann::json::exception& err) {
      throw ParseError(std::string("config: ") + err.what());
    }
  }
  if (const char* env = std::getenv("HPRC_RNG_SEED")) {
    try {
      cfg.rng_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("HPRC_RNG_SEED must be an unsigned integer");
    }
  }
  cfg.validate();
  return cfg;
}

namespace {

const char* verify_level_name(VerifyLevel level) {
  switch (level) {
    case VerifyLevel::None: return "none";
    case VerifyLevel::Sampled: return "sampled";
    case VerifyLevel::Exhaustive: return "exhaustive";
  }
  return "sampled";
}

ordered_json edges_to_json(const WeightedGraph& g) {
  ordered_json arr = ordered_json::array();
  for (const WeightedEdge& e : g.edges) arr.push_back({e.u, e.v, e.w});
  return arr;
}

WeightedGraph edges_from_json(const ordered_json& arr, int n) {
  WeightedGraph g;
  g.n = n;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 3) throw ParseError("edge triples must be [u, v, w]");
    WeightedEdge e{item[0].get<int>(), item[1].get<int>(), item[2].get<double>()};
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw ParseError("edge endpoint out of range");
    g.edges.push_back(e);
  }
  return g;
}

ordered_json witness_to_json(const RobustWitness& w) {
  ordered_json j;
  j["sigma"] = w.sigma;
  j["balanced_branch"] = w.balanced_branch;
  j["t_set"] = w.t_set;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["eps"] = cfg.eps;
  j["rng_seed"] = cfg.rng_seed;
  j["max_rounds"] = cfg.max_rounds;
  j["c_const"] = cfg.c_const;
  j["r_const"] = cfg.r_const;
  j["jl_delta"] = cfg.jl_delta;
  j["verify_level"] = verify_level_name(cfg.verify_level);
  return j.dump();
}

std::string certificate_to_json(const Certificate& cert) {
  ordered_json j;
  j["rounds"] = cert.rounds;
  j["eps"] = cert.eps;
  j["rho"] = cert.rho;
  j["lambda2"] = cert.lambda2;
  j["lower_bound"] = cert.lower_bound;
  j["eta"] = cert.eta;
  j["jl_dim"] = cert.jl_dim;
  ordered_json rounds = ordered_json::array();
  for (const CertificateRound& r : cert.round_info) {
    ordered_json jr;
    jr["cut"] = r.cut;
    jr["improved"] = r.improved;
    jr["alpha"] = r.alpha;
    jr["objective"] = r.objective;
    jr["edges"] = edges_to_json(r.demand);
    jr["action_inner"] = r.action_inner;
    jr["separation"] = r.separation;
    jr["matching_ok"] = r.matching_ok;
    jr["witness"] = witness_to_json(r.witness);
    jr["witness_ok"] = r.witness_ok;
    rounds.push_back(std::move(jr));
  }
  j["round_data"] = std::move(rounds);
  j["h_edges"] = edges_to_json(cert.h);
  return j.dump();
}

namespace {
Certificate certificate_from_json_impl(const std::string& json_text, int num_vertices);
MetricSolution metric_solution_from_json_impl(const std::string& json_text,
                                              const Hypergraph& g);
}

Certificate certificate_from_json(const std::string& json_text, int num_vertices) {
  try {
    return certificate_from_json_impl(json_text, num_vertices);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("certificate: ") + err.what());
  }
}

namespace {
Certificate certificate_from_json_impl(const std::string& json_text, int num_vertices) {
  ordered_json j = ordered_json::parse(json_text);
  // Accept either a bare certificate or a full partition result.
  if (j.contains("certificate")) j = j["certificate"];
  Certificate cert;
  cert.rounds = j.at("rounds").get<int>();
  cert.eps = j.at("eps").get<double>();
  cert.rho = j.at("rho").get<double>();
  cert.lambda2 = j.value("lambda2", 0.0);
  cert.lower_bound = j.value("lower_bound", 0.0);
  cert.eta = j.value("eta", 0.0);
  cert.jl_dim = j.value("jl_dim", 0);
  cert.h.n = num_vertices;
  if (j.contains("h_edges")) cert.h = edges_from_json(j["h_edges"], num_vertices);
  for (const auto& jr : j.at("round_data")) {
    CertificateRound r;
    r.cut = jr.at("cut").get<std::vector<int>>();
    if (jr.contains("improved")) r.improved = jr["improved"].get<std::vector<int>>();
    r.alpha = jr.at("alpha").get<double>();
    r.objective = jr.value("objective", 0.0);
    r.demand = edges_from_json(jr.at("edges"), num_vertices);
    r.action_inner = jr.value("action_inner", 0.0);
    r.separation = jr.value("separation", 0.0);
    r.matching_ok = jr.value("matching_ok", true);
    if (jr.contains("witness")) {
      r.witness.sigma = jr["witness"].value("sigma", 0.0);
      r.witness.balanced_branch = jr["witness"].value("balanced_branch", false);
      if (jr["witness"].contains("t_set"))
        r.witness.t_set = jr["witness"]["t_set"].get<std::vector<int>>();
    }
    r.witness_ok = jr.value("witness_ok", true);
    cert.round_info.push_back(std::move(r));
  }
  return cert;
}

MetricSolution metric_solution_from_json_impl(const std::string& json_text,
                                              const Hypergraph& g) {
  ordered_json j = ordered_json::parse(json_text);
  MetricSolution sol;
  int n = g.num_vertices();
  const auto& vecs = j.at("vectors");
  if (!vecs.is_array()) throw ParseError("vectors must be an array");
  if (!vecs.empty() && vecs[0].is_array()) {
    if (static_cast<int>(vecs.size()) != n) throw ParseError("vectors must have n rows");
    size_t dim = vecs[0].size();
    for (const auto& row : vecs) {
      if (row.size() != dim) throw ParseError("vector rows must share a dimension");
      sol.vectors.push_back(row.get<std::vector<double>>());
    }
  } else {
    // Flat row-major n x n.
    if (static_cast<int>(vecs.size()) != n * n)
      throw ParseError("flat vectors must hold n*n entries row-major");
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(n);
      for (int k = 0; k < n; ++k) row[k] = vecs[i * n + k].get<double>();
      sol.vectors.push_back(std::move(row));
    }
  }
  const auto& lengths = j.at("lengths");
  sol.lengths.resize(g.num_edges());
  std::vector<char> seen(g.num_edges(), 0);
  for (auto it = lengths.begin(); it != lengths.end(); ++it) {
    int e;
    try {
      e = std::stoi(it.key());
    } catch (const std::exception&) {
      throw ParseError("length keys must be hyperedge indices");
    }
    if (e < 0 || e >= g.num_edges()) throw ParseError("length key out of range");
    sol.lengths[e] = it.value().get<std::vector<double>>();
    if (sol.lengths[e].size() != g.edges()[e].vertices.size())
      throw ParseError("length vector rank mismatch at edge " + std::to_string(e));
    seen[e] = 1;
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (!seen[e]) throw ParseError("missing lengths for edge " + std::to_string(e));
  return sol;
}
}  // namespace

MetricSolution metric_solution_from_json(const std::string& json_text, const Hypergraph& g) {
  try {
    return metric_solution_from_json_impl(json_text, g);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("metric solution: ") + err.what());
  }
}

CertificateVerification verify_certificate(const Hypergraph& g, const Certificate& cert,
                                           VerifyLevel level, std::uint64_t sample_seed) {
  CertificateVerification v;
  double rho_sum = 0.0;
  WeightedGraph h_sum;
  h_sum.n = g.num_vertices();
  for (const CertificateRound& r : cert.round_info) {
    if (r.alpha > 0.0) {
      rho_sum += 2.0 / r.alpha;
      MatchingCheck check = verify_matching_action(r.demand, r.cut, g.mu(), cert.eps);
      v.rounds_ok &= check.ok();
      for (const WeightedEdge& e : r.demand.edges) h_sum.edges.push_back(e);
    }
  }
  double rho_scale = std::max(1.0, cert.rho);
  v.rho_ok = std::fabs(rho_sum - cert.rho) <= 1e-7 * rho_scale;

  // H must match the per-round sum (compare dense adjacency).
  int n = g.num_vertices();
  std::vector<double> dense_a(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> dense_b(static_cast<size_t>(n) * n, 0.0);
  double h_scale = 1.0;
  for (const WeightedEdge& e : h_sum.edges) {
    dense_a[static_cast<size_t>(std::min(e.u, e.v)) * n + std::max(e.u, e.v)] += e.w;
    h_scale = std::max(h_scale, std::fabs(e.w));
  }
  for (const WeightedEdge& e : cert.h.edges)
    dense_b[static_cast<size_t>(std::min(e.u, e.v)) * n + std::max(e.u, e.v)] += e.w;
  for (size_t k = 0; k < dense_a.size(); ++k)
    if (std::fabs(dense_a[k] - dense_b[k]) > 1e-7 * h_scale) {
      v.h_ok = false;
      break;
    }

  if (!cert.h.edges.empty()) {
    SpectralBound sb = certificate_quality(cert.h, g.mu());
    v.lambda2 = sb.lambda2;
    v.lower_bound = cert.rho > 0.0 ? sb.cheeger_lower / cert.rho : 0.0;
  }

  int samples = 0;
  if (level == VerifyLevel::Sampled || g.num_vertices() > kMaxExhaustiveRank) samples = 4096;
  if (level == VerifyLevel::None) samples = 64;
  v.embedding = verify_flow_embedding(g, cert.h, cert.rho, samples, sample_seed);
  v.valid = v.rounds_ok && v.rho_ok && v.h_ok && v.embedding.valid;
  return v;
}

std::string emit_partition_result(const Hypergraph& g, const ApproxRcResult& result,
                                  const RunConfig& cfg) {
  ordered_json j;
  j["command"] = "partition";
  j["n"] = g.num_vertices();
  j["m"] = g.num_edges();
  j["cut"] = result.cut;
  j["psi"] = result.psi;
  j["best_round"] = result.best_round;
  j["config"] = ordered_json::parse(config_to_json(cfg));
  j["certificate"] = ordered_json::parse(certificate_to_json(result.certificate));
  ordered_json check;
  check["mode"] = cfg.verify_level == VerifyLevel::None
                      ? "skipped"
                      : (result.embedding_check.exhaustive ? "exhaustive" : "sampled");
  if (cfg.verify_level != VerifyLevel::None) {
    check["valid"] = result.embedding_check.valid;
    check["worst_ratio"] = result.embedding_check.worst_ratio;
    check["checked"] = result.embedding_check.checked;
    check["violations"] = result.embedding_check.violations;
  }
  j["certificate_check"] = std::move(check);
  return j.dump(2);
}

std::string emit_improve_result(const Hypergraph& g, const PrimalDualSolution& sol,
                                const PrimalDualValidation& validation) {
  ordered_json j;
  j["command"] = "improve";
  j["n"] = g.num_vertices();
  j["m"] = g.num_edges();
  j["cut"] = sol.cut;
  j["alpha"] = sol.alpha;
  j["bracket_hi"] = sol.bracket_hi;
  j["objective"] = sol.objective;
  j["flow_path"] = sol.flow_path;
  ordered_json items = ordered_json::array();
  for (const auto& item : validation.items) {
    ordered_json ji;
    ji["pass"] = item.pass;
    ji["residual"] = item.residual;
    items.push_back(std::move(ji));
  }
  j["validation"] = ordered_json{{"items", std::move(items)}, {"all_pass", validation.all_pass}};
  return j.dump(2);
}

std::string emit_verify_result(const CertificateVerification& verification) {
  ordered_json j;
  j["command"] = "verify";
  j["valid"] = verification.valid;
  j["rounds_ok"] = verification.rounds_ok;
  j["rho_ok"] = verification.rho_ok;
  j["h_ok"] = verification.h_ok;
  j["mode"] = verification.embedding.exhaustive ? "exhaustive" : "sampled";
  j["checked"] = verification.embedding.checked;
  j["violations"] = verification.embedding.violations;
  j["worst_ratio"] = verification.embedding.worst_ratio == std::numeric_limits<double>::infinity()
                         ? ordered_json("inf")
                         : ordered_json(verification.embedding.worst_ratio);
  j["lambda2"] = verification.lambda2;
  j["lower_bound"] = verification.lower_bound;
  return j.dump(2);
}

std::string emit_eval_result(const Hypergraph& g, std::span<const double> x) {
  double lovasz = hypergraph_lovasz(g, x);
  double denom = min_shift_l1_mu(x, g.mu());
  SweepResult sweep = sweep_cut_round(g, x);
  ordered_json j;
  j["command"] = "eval";
  j["n"] = g.num_vertices();
  j["m"] = g.num_edges();
  j["lovasz"] = lovasz;
  j["denominator"] = denom;
  j["psi_bar"] = denom > 0 ? lovasz / denom : 0.0;
  j["cut"] = sweep.cut;
  j["psi"] = sweep.psi;
  return j.dump(2);
}

std::string emit_check_metric_result(const Hypergraph& g, const MetricSolution& sol,
                                     const MetricReport& report) {
  ordered_json j;
  j["command"] = "check-metric";
  j["feasible"] = report.feasible;
  j["objective"] = metric_objective(g, sol);
  j["spread"] = report.spread;
  j["spread_violation"] = report.spread_violation;
  j["worst_pair"] = report.worst_pair;
  j["worst_triangle"] = report.worst_triangle;
  return j.dump(2);
}

}  // namespace hyperrc
