#include "hyperrc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "hyperrc/io.hpp"

using namespace hyperrc;

struct hrc_hypergraph {
  Hypergraph g;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_err(char** err_msg, const std::string& msg) {
  if (err_msg) *err_msg = dup_string(msg);
}

template <typename Fn>
hrc_status guarded(char** err_msg, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    set_err(err_msg, e.what());
    return HRC_ERROR_PARSE;
  } catch (const UnsupportedError& e) {
    set_err(err_msg, e.what());
    return HRC_ERROR_UNSUPPORTED;
  } catch (const DomainError& e) {
    set_err(err_msg, e.what());
    return HRC_ERROR_DEGENERATE;
  } catch (const std::exception& e) {
    set_err(err_msg, e.what());
    return HRC_ERROR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* hrc_version(void) { return "0.1.0"; }

hrc_status hrc_hypergraph_load_file(const char* path, hrc_hypergraph** out, char** err_msg) {
  if (!path || !out) return HRC_ERROR_USAGE;
  *out = nullptr;
  return guarded(err_msg, [&] {
    auto* handle = new hrc_hypergraph{parse_hypergraph_file(path)};
    *out = handle;
    return HRC_OK;
  });
}

hrc_status hrc_hypergraph_load_string(const char* text, hrc_hypergraph** out, char** err_msg) {
  if (!text || !out) return HRC_ERROR_USAGE;
  *out = nullptr;
  return guarded(err_msg, [&] {
    auto* handle = new hrc_hypergraph{parse_hypergraph_text(text)};
    *out = handle;
    return HRC_OK;
  });
}

void hrc_hypergraph_free(hrc_hypergraph* g) { delete g; }

int64_t hrc_hypergraph_num_vertices(const hrc_hypergraph* g) {
  return g ? g->g.num_vertices() : -1;
}

int64_t hrc_hypergraph_num_edges(const hrc_hypergraph* g) {
  return g ? g->g.num_edges() : -1;
}

int64_t hrc_hypergraph_sparsity(const hrc_hypergraph* g) {
  return g ? g->g.sparsity() : -1;
}

int64_t hrc_hypergraph_total_measure(const hrc_hypergraph* g) {
  return g ? g->g.total_measure() : -1;
}

hrc_status hrc_partition(const hrc_hypergraph* g, const char* config_json,
                         char** result_json, char** err_msg) {
  if (!g || !result_json) return HRC_ERROR_USAGE;
  *result_json = nullptr;
  return guarded(err_msg, [&] {
    RunConfig cfg = config_from_json(config_json ? config_json : "");
    ApproxRcResult result = approx_rc(g->g, cfg);
    *result_json = dup_string(emit_partition_result(g->g, result, cfg));
    return HRC_OK;
  });
}

hrc_status hrc_improve(const hrc_hypergraph* g, const int32_t* seed_cut, size_t seed_len,
                       const char* config_json, char** result_json, char** err_msg) {
  if (!g || !result_json || (!seed_cut && seed_len > 0)) return HRC_ERROR_USAGE;
  *result_json = nullptr;
  return guarded(err_msg, [&] {
    RunConfig cfg = config_from_json(config_json ? config_json : "");
    std::vector<int> cut(seed_cut, seed_cut + seed_len);
    Seed seed = seed_from_cut(g->g, cut);
    PrimalDualSolution sol = solve_ci(g->g, seed, cfg.eps);
    PrimalDualValidation validation = validate_primal_dual(g->g, seed.s, sol, cfg.eps);
    *result_json = dup_string(emit_improve_result(g->g, sol, validation));
    return HRC_OK;
  });
}

hrc_status hrc_verify(const hrc_hypergraph* g, const char* certificate_json,
                      const char* config_json, char** result_json, int* valid,
                      char** err_msg) {
  if (!g || !certificate_json || !result_json) return HRC_ERROR_USAGE;
  *result_json = nullptr;
  return guarded(err_msg, [&] {
    RunConfig cfg = config_from_json(config_json ? config_json : "");
    Certificate cert = certificate_from_json(certificate_json, g->g.num_vertices());
    CertificateVerification v =
        verify_certificate(g->g, cert, cfg.verify_level, cfg.rng_seed);
    if (valid) *valid = v.valid ? 1 : 0;
    *result_json = dup_string(emit_verify_result(v));
    return HRC_OK;
  });
}

hrc_status hrc_eval_vector(const hrc_hypergraph* g, const double* x, size_t len,
                           char** result_json, char** err_msg) {
  if (!g || !x || !result_json) return HRC_ERROR_USAGE;
  *result_json = nullptr;
  return guarded(err_msg, [&] {
    std::span<const double> vec(x, len);
    *result_json = dup_string(emit_eval_result(g->g, vec));
    return HRC_OK;
  });
}

hrc_status hrc_check_metric(const hrc_hypergraph* g, const char* solution_json,
                            char** result_json, int* feasible, char** err_msg) {
  if (!g || !solution_json || !result_json) return HRC_ERROR_USAGE;
  *result_json = nullptr;
  return guarded(err_msg, [&] {
    MetricSolution sol = metric_solution_from_json(solution_json, g->g);
    MetricReport report = check_metric_feasibility(g->g, sol);
    if (feasible) *feasible = report.feasible ? 1 : 0;
    *result_json = dup_string(emit_check_metric_result(g->g, sol, report));
    return HRC_OK;
  });
}

void hrc_string_free(char* s) { std::free(s); }

}  // extern "C"
