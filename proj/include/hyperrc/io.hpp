#pragma once

#include <string>

#include "hyperrc/cut_matching.hpp"
#include "hyperrc/metric.hpp"

namespace hyperrc {

// Hypergraph text format (hMETIS extension):
//   line 1: `n m [fn=<kind>]`
//   line 2 (optional): `mu: mu_1 ... mu_n` (omitted => all 1)
//   then m lines: `w_h [fn=<kind>] v1 v2 ... vk` with 0-based vertex ids
// `#` starts a comment; kinds: standard | star | clique | card:p=<real>.
// A per-edge fn overrides the header default.
Hypergraph parse_hypergraph_text(const std::string& text);
Hypergraph parse_hypergraph_file(const std::string& path);
std::string write_hypergraph_text(const Hypergraph& g);

// RunConfig from a JSON object; missing keys keep defaults. The environment
// variable HPRC_RNG_SEED overrides rng_seed when set.
RunConfig config_from_json(const std::string& json_text);

std::string config_to_json(const RunConfig& cfg);

// Certificate round-trip for the verify command.
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& json_text, int num_vertices);

MetricSolution metric_solution_from_json(const std::string& json_text, const Hypergraph& g);

struct CertificateVerification {
  bool valid = false;
  bool rounds_ok = true;   // matching actions conform at the stored eps
  bool rho_ok = true;      // rho equals sum_t 2/alpha_t
  bool h_ok = true;        // H equals sum_t D_t
  EmbeddingReport embedding;
  double lambda2 = 0.0;
  double lower_bound = 0.0;
};

CertificateVerification verify_certificate(const Hypergraph& g, const Certificate& cert,
                                           VerifyLevel level, std::uint64_t sample_seed);

// JSON result documents (deterministic key order, cut ids ascending).
std::string emit_partition_result(const Hypergraph& g, const ApproxRcResult& result,
                                  const RunConfig& cfg);
std::string emit_improve_result(const Hypergraph& g, const PrimalDualSolution& sol,
                                const PrimalDualValidation& validation);
std::string emit_verify_result(const CertificateVerification& verification);
std::string emit_eval_result(const Hypergraph& g, std::span<const double> x);
std::string emit_check_metric_result(const Hypergraph& g, const MetricSolution& sol,
                                     const MetricReport& report);

}  // namespace hyperrc
