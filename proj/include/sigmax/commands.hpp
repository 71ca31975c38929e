#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/seeding.hpp"

namespace sigmax {

// Flags shared by every subcommand. `out` empty means stdout. Reports echo
// path flags by basename so the bytes do not depend on where inputs live.
struct CommonArgs {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  bool timings = false;
  std::string exec = "parallel";  // parallel | serial

  Exec exec_policy() const;
};

struct LearnArgs {
  CommonArgs common;
  std::string log_path;    // required
  std::string graph_path;  // optional social TSV
  std::string model_out;   // required
  int mu = 2;
  int mu_guard = 4;
  std::int64_t item_window = 1;
  std::int64_t social_window = 1;
  int pool_cap = 12;
  double bandwidth = 0.0;
  double theta = 0.0;
  double init_p = 0.1;
  double tol = 1e-4;
  int max_iters = 200;
  int embed_dim = 8;
  bool item_copurchase = false;
  bool allow_empty = false;  // write the model even if pruning kept nothing
};
int cmd_learn(const LearnArgs& args);

struct SelectArgs {
  CommonArgs common;
  std::string model_path;  // required
  std::string algo = "hag";  // hag | sns | ran | soc | opt
  int k = 1;
  std::string engine = "sigindex";
  std::string score = "mc";  // mc | exact
  std::uint64_t runs = 300;
  int repetitions = 10;  // ran only
  std::uint64_t opt_cap = kDefaultOptCap;
  int exact_cap = kDefaultExactCap;
  std::optional<double> prune_threshold;
  std::vector<std::string> restrict_items;
  bool ioc_eval = false;
  bool pad = false;  // top up with best singletons after an early stop
  bool allow_empty = false;
};
int cmd_select(const SelectArgs& args);

struct SimulateArgs {
  CommonArgs common;
  std::string model_path;  // required
  std::string seeds_path;  // required
  std::string engine = "sigindex";
  std::uint64_t runs = 300;
  bool allow_empty = false;
};
int cmd_simulate(const SimulateArgs& args);

struct EvalArgs {
  CommonArgs common;
  std::string log_path;    // required
  std::string graph_path;  // optional
  std::string model_path;  // optional: evaluate a fixed model instead of re-learning
  int folds = 5;
  std::int64_t horizon = -1;
  double threshold = 0.5;
  int draws = 0;
  // learning settings for the per-fold models
  int mu = 2;
  int mu_guard = 4;
  std::int64_t item_window = 1;
  std::int64_t social_window = 1;
  int pool_cap = 12;
  double bandwidth = 0.0;
  double theta = 0.0;
  double init_p = 0.1;
  double tol = 1e-4;
  int max_iters = 200;
  int embed_dim = 8;
  bool item_copurchase = false;
};
int cmd_eval(const EvalArgs& args);

struct BenchArgs {
  CommonArgs common;
  std::string model_path;  // optional; otherwise a synthetic instance
  int nodes = 400;
  int hyperedges = 0;
  double avg_in_degree = 40.0;
  int min_sources = 1;
  int max_sources = 3;
  double min_prob = 0.05;
  double max_prob = 0.9;
  std::string seeds_path;  // optional; default k random nodes
  int k = 10;
  std::uint64_t runs = 300;
  std::vector<std::string> engines = {"naive", "sorting", "sigindex"};
};
int cmd_bench(const BenchArgs& args);

}  // namespace sigmax
