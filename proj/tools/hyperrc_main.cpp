// hyperrc command-line driver. Talks to the solver library exclusively
// through the C API in hyperrc.h.

#include <cctype>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hyperrc.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitCertificateInvalid = 4;

struct CommonOpts {
  double eps = -1.0;
  long long rng_seed = -1;
  int max_rounds = -1;
  double c_const = -1.0;
  double r_const = -1.0;
  double jl_delta = -1.0;
  std::string verify_level;
  std::string cut_fn;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--eps", opts.eps, "cut-improvement accuracy in (0,1)");
  cmd->add_option("--rng-seed", opts.rng_seed, "64-bit RNG seed");
  cmd->add_option("--max-rounds", opts.max_rounds, "round cap for the game loop");
  cmd->add_option("--c-const", opts.c_const, "regret constant C");
  cmd->add_option("--r-const", opts.r_const, "balanced-branch gap threshold");
  cmd->add_option("--jl-delta", opts.jl_delta, "projection distortion in [0.1,1)");
  cmd->add_option("--verify-level", opts.verify_level, "none|sampled|exhaustive");
  cmd->add_option("--cut-fn", opts.cut_fn,
                  "override every hyperedge cut function (standard|star|clique|card:p=<x>)");
  cmd->add_option("--jobs", opts.jobs, "parallelism across independent input files");
}

std::string config_json(const CommonOpts& opts) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  auto emit = [&](const std::string& key, const std::string& value, bool quote) {
    if (!first) os << ',';
    first = false;
    os << '"' << key << "\":";
    if (quote) os << '"' << value << '"';
    else os << value;
  };
  auto num = [&](const std::string& key, double v) {
    std::ostringstream tmp;
    tmp.precision(17);
    tmp << v;
    emit(key, tmp.str(), false);
  };
  if (opts.eps >= 0) num("eps", opts.eps);
  if (opts.rng_seed >= 0) emit("rng_seed", std::to_string(opts.rng_seed), false);
  if (opts.max_rounds >= 0) emit("max_rounds", std::to_string(opts.max_rounds), false);
  if (opts.c_const >= 0) num("c_const", opts.c_const);
  if (opts.r_const >= 0) num("r_const", opts.r_const);
  if (opts.jl_delta >= 0) num("jl_delta", opts.jl_delta);
  if (!opts.verify_level.empty()) emit("verify_level", opts.verify_level, true);
  os << '}';
  return os.str();
}

int status_to_exit(hrc_status status) {
  switch (status) {
    case HRC_OK: return 0;
    case HRC_ERROR_USAGE: return kExitUsage;
    case HRC_ERROR_PARSE: return kExitParse;
    default: return kExitDegenerate;
  }
}

std::string take_message(char* msg) {
  std::string out = msg ? msg : "unknown error";
  hrc_string_free(msg);
  return out;
}

bool read_file(const std::string& path, std::string& out, std::string& err) {
  std::ifstream in(path);
  if (!in) {
    err = "cannot open '" + path + "'";
    return false;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

// Rewrites the header's fn= token and strips per-edge fn= tokens so the
// override applies to every hyperedge.
std::string apply_cut_fn_override(const std::string& text, const std::string& kind) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    std::string body = line;
    std::string comment;
    if (auto hash = body.find('#'); hash != std::string::npos) {
      comment = body.substr(hash);
      body.erase(hash);
    }
    std::istringstream ls(body);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) {
      out << line << '\n';
      continue;
    }
    if (!header_done) {
      header_done = true;
      std::ostringstream rebuilt;
      for (size_t i = 0; i < tokens.size() && i < 2; ++i)
        rebuilt << (i ? " " : "") << tokens[i];
      rebuilt << " fn=" << kind;
      out << rebuilt.str() << (comment.empty() ? "" : " " + comment) << '\n';
      continue;
    }
    std::ostringstream rebuilt;
    bool first = true;
    for (const std::string& tok : tokens) {
      if (tok.rfind("fn=", 0) == 0) continue;
      rebuilt << (first ? "" : " ") << tok;
      first = false;
    }
    out << rebuilt.str() << (comment.empty() ? "" : " " + comment) << '\n';
  }
  return out.str();
}

int load_hypergraph(const std::string& path, const CommonOpts& opts, hrc_hypergraph** g,
                    std::string& err) {
  hrc_status status;
  char* msg = nullptr;
  if (opts.cut_fn.empty()) {
    status = hrc_hypergraph_load_file(path.c_str(), g, &msg);
  } else {
    std::string text;
    if (!read_file(path, text, err)) return kExitParse;
    text = apply_cut_fn_override(text, opts.cut_fn);
    status = hrc_hypergraph_load_string(text.c_str(), g, &msg);
  }
  if (status != HRC_OK) {
    err = path + ": " + take_message(msg);
    return status_to_exit(status);
  }
  return 0;
}

bool parse_id_list(const std::string& arg, std::vector<int32_t>& ids, std::string& err) {
  bool numeric = !arg.empty();
  for (char c : arg)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != ',' && c != ' ') numeric = false;
  std::string data = arg;
  if (!numeric) {
    if (!read_file(arg, data, err)) return false;
  }
  for (char& c : data)
    if (c == ',') c = ' ';
  std::istringstream is(data);
  long long v;
  while (is >> v) ids.push_back(static_cast<int32_t>(v));
  if (ids.empty()) {
    err = "seed cut '" + arg + "' contains no vertex ids";
    return false;
  }
  return true;
}

struct FileOutcome {
  int exit_code = 0;
  std::string output;
  std::string error;
};

template <typename RunFn>
int run_over_files(const std::vector<std::string>& files, int jobs, RunFn&& run) {
  std::vector<FileOutcome> outcomes(files.size());
  if (jobs <= 1 || files.size() <= 1) {
    for (size_t i = 0; i < files.size(); ++i) outcomes[i] = run(files[i]);
  } else {
    std::vector<std::thread> pool;
    std::mutex index_mutex;
    size_t next = 0;
    int workers = std::min<int>(jobs, static_cast<int>(files.size()));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          size_t mine;
          {
            std::lock_guard<std::mutex> lock(index_mutex);
            if (next >= files.size()) return;
            mine = next++;
          }
          outcomes[mine] = run(files[mine]);
        }
      });
    for (auto& t : pool) t.join();
  }

  int exit_code = 0;
  bool multi = files.size() > 1;
  if (multi) std::cout << "[\n";
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].error.empty()) std::cerr << outcomes[i].error << '\n';
    if (!outcomes[i].output.empty()) {
      std::cout << outcomes[i].output;
      if (multi && i + 1 < outcomes.size()) std::cout << ',';
      std::cout << '\n';
    }
    if (outcomes[i].exit_code != 0 && exit_code == 0) exit_code = outcomes[i].exit_code;
  }
  if (multi) std::cout << "]\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperrc: ratio cuts on submodular hypergraphs with flow-based certificates"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> files;
  std::string seed_cut_arg, certificate_path, vector_path, solution_path;

  CLI::App* partition = app.add_subcommand("partition", "approximate minimum ratio-cut");
  partition->add_option("files", files, "hypergraph files")->required()->expected(-1);
  add_common(partition, opts);

  CLI::App* improve = app.add_subcommand("improve", "ratio-cut improvement from a seed cut");
  improve->add_option("files", files, "hypergraph files")->required()->expected(-1);
  improve->add_option("--seed-cut", seed_cut_arg, "comma-separated vertex ids or a file")
      ->required();
  add_common(improve, opts);

  CLI::App* verify = app.add_subcommand("verify", "re-check a partition certificate");
  verify->add_option("files", files, "hypergraph files")->required()->expected(-1);
  verify->add_option("--certificate", certificate_path, "certificate JSON file")->required();
  add_common(verify, opts);

  CLI::App* eval = app.add_subcommand("eval", "Lovasz/ratio evaluation + sweep rounding");
  eval->add_option("files", files, "hypergraph files")->required()->expected(-1);
  eval->add_option("--vector", vector_path, "file with one real per vertex")->required();
  add_common(eval, opts);

  CLI::App* check_metric = app.add_subcommand("check-metric", "metric-solution feasibility");
  check_metric->add_option("files", files, "hypergraph files")->required()->expected(-1);
  check_metric->add_option("--solution", solution_path, "metric solution JSON file")
      ->required();
  add_common(check_metric, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::string cfg = config_json(opts);

  auto with_hypergraph = [&](const std::string& path,
                             auto&& body) -> FileOutcome {
    FileOutcome outcome;
    hrc_hypergraph* g = nullptr;
    int code = load_hypergraph(path, opts, &g, outcome.error);
    if (code != 0) {
      outcome.exit_code = code;
      return outcome;
    }
    body(g, outcome);
    hrc_hypergraph_free(g);
    return outcome;
  };

  if (*partition) {
    return run_over_files(files, opts.jobs, [&](const std::string& path) {
      return with_hypergraph(path, [&](hrc_hypergraph* g, FileOutcome& outcome) {
        char* result = nullptr;
        char* msg = nullptr;
        hrc_status status = hrc_partition(g, cfg.c_str(), &result, &msg);
        if (status != HRC_OK) {
          outcome.error = path + ": " + take_message(msg);
          outcome.exit_code = status_to_exit(status);
          return;
        }
        outcome.output = result;
        hrc_string_free(result);
      });
    });
  }

  if (*improve) {
    std::vector<int32_t> ids;
    std::string err;
    if (!parse_id_list(seed_cut_arg, ids, err)) {
      std::cerr << err << '\n';
      return kExitUsage;
    }
    return run_over_files(files, opts.jobs, [&](const std::string& path) {
      return with_hypergraph(path, [&](hrc_hypergraph* g, FileOutcome& outcome) {
        char* result = nullptr;
        char* msg = nullptr;
        hrc_status status =
            hrc_improve(g, ids.data(), ids.size(), cfg.c_str(), &result, &msg);
        if (status != HRC_OK) {
          outcome.error = path + ": " + take_message(msg);
          outcome.exit_code = status_to_exit(status);
          return;
        }
        outcome.output = result;
        hrc_string_free(result);
      });
    });
  }

  if (*verify) {
    std::string cert_text, err;
    if (!read_file(certificate_path, cert_text, err)) {
      std::cerr << err << '\n';
      return kExitParse;
    }
    return run_over_files(files, opts.jobs, [&](const std::string& path) {
      return with_hypergraph(path, [&](hrc_hypergraph* g, FileOutcome& outcome) {
        char* result = nullptr;
        char* msg = nullptr;
        int valid = 0;
        hrc_status status =
            hrc_verify(g, cert_text.c_str(), cfg.c_str(), &result, &valid, &msg);
        if (status != HRC_OK) {
          outcome.error = path + ": " + take_message(msg);
          outcome.exit_code = status_to_exit(status);
          return;
        }
        outcome.output = result;
        if (!valid) outcome.exit_code = kExitCertificateInvalid;
        hrc_string_free(result);
      });
    });
  }

  if (*eval) {
    std::string vec_text, err;
    if (!read_file(vector_path, vec_text, err)) {
      std::cerr << err << '\n';
      return kExitParse;
    }
    std::vector<double> x;
    {
      std::istringstream is(vec_text);
      double v;
      while (is >> v) x.push_back(v);
    }
    return run_over_files(files, opts.jobs, [&](const std::string& path) {
      return with_hypergraph(path, [&](hrc_hypergraph* g, FileOutcome& outcome) {
        char* result = nullptr;
        char* msg = nullptr;
        hrc_status status = hrc_eval_vector(g, x.data(), x.size(), &result, &msg);
        if (status != HRC_OK) {
          outcome.error = path + ": " + take_message(msg);
          outcome.exit_code = status_to_exit(status);
          return;
        }
        outcome.output = result;
        hrc_string_free(result);
      });
    });
  }

  if (*check_metric) {
    std::string sol_text, err;
    if (!read_file(solution_path, sol_text, err)) {
      std::cerr << err << '\n';
      return kExitParse;
    }
    return run_over_files(files, opts.jobs, [&](const std::string& path) {
      return with_hypergraph(path, [&](hrc_hypergraph* g, FileOutcome& outcome) {
        char* result = nullptr;
        char* msg = nullptr;
        int feasible = 0;
        hrc_status status =
            hrc_check_metric(g, sol_text.c_str(), &result, &feasible, &msg);
        if (status != HRC_OK) {
          outcome.error = path + ": " + take_message(msg);
          outcome.exit_code = status_to_exit(status);
          return;
        }
        outcome.output = result;
        if (!feasible) outcome.exit_code = kExitDegenerate;
        hrc_string_free(result);
      });
    });
  }

  return kExitUsage;
}
