#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/embedding.hpp"

namespace sigmax {

struct ActionRecord {
  PurchaseNode node;
  std::int64_t t = 0;
};

// Timestamped purchase actions, sorted by timestamp (stable).
struct ActionLog {
  std::vector<ActionRecord> records;

  std::vector<std::string> distinct_users() const;
  std::vector<std::string> distinct_items() const;
  std::vector<PurchaseNode> distinct_nodes() const;
};

// Item pairs bought by one user, deduplicated; feeds the co-purchase embedding.
std::vector<std::pair<std::string, std::string>> copurchase_pairs(const ActionLog& log);

struct EmsConfig {
  int mu = 2;            // max candidate source-set size
  int mu_guard = 4;      // blow-up guard; raise deliberately to go higher
  std::int64_t item_window = 1;    // same-user lookback
  std::int64_t social_window = 1;  // in-neighbor lookback
  int pool_cap = 12;     // per-action trigger pool, most recent kept
  double bandwidth = 0.0;  // kernel h; 0 disables smoothing (plain EM)
  double theta = 0.0;      // model pruning threshold (strictly greater kept)
  double init_p = 0.1;
  double tol = 1e-4;       // convergence on max |delta p|
  int max_iters = 200;
  int embed_dim = kDefaultEmbedDim;
  bool item_copurchase = false;  // item embedding from co-purchase hops
};

// Candidate hyperedges harvested from an action log, with trial counts.
struct CandidateSet {
  std::vector<PurchaseNode> nodes;  // sorted; all ids below index this
  std::vector<std::vector<std::int32_t>> source_sets;  // each sorted ascending
  std::vector<std::int64_t> trials;  // per source set: distinct co-occurrences

  struct Skeleton {
    std::int32_t source_set = -1;
    std::int32_t dest = -1;
  };
  std::vector<Skeleton> hyperedges;

  std::vector<std::vector<std::int32_t>> per_action;       // E_a per log slot
  std::vector<std::vector<std::int32_t>> actions_of_edge;  // inverse of per_action

  Hyperedge edge_as_public(int e) const;
};

// Scans the log once per action slot: same-user purchases within item_window
// and in-neighbor purchases within social_window (strictly earlier; simultaneous
// actions never trigger) form the pool; subsets up to size mu become candidate
// hyperedges into the acting node.
CandidateSet generate_candidates(const ActionLog& log, const SocialGraph& social,
                                 const EmsConfig& cfg);

// One expectation/maximization sweep: actions split their explanation mass
// among candidate edges in proportion to current probabilities, and each
// edge's expected success count is re-normalized by its trial count.
std::vector<double> em_iterate(const CandidateSet& cand, const std::vector<double>& p,
                               Exec exec = Exec::serial);

// Expected success counts under `p` (the E-step accumulator).
std::vector<double> expected_successes(const CandidateSet& cand,
                                       const std::vector<double>& p,
                                       Exec exec = Exec::serial);

// Feature vectors for smoothing: per edge (sources + dest blocks) and per
// source set (source blocks only).
struct EdgeVectors {
  Matrix edge_f;
  Matrix source_set_f;
};
EdgeVectors edge_vectors(const CandidateSet& cand, const Embedding& emb);

// Kernel smoothing within size classes; weights normalized to sum 1 per
// target. h == 0 returns the inputs untouched.
struct Smoothed {
  std::vector<double> lambda_a;  // per edge
  std::vector<double> lambda_t;  // per source set
};
Smoothed s_step(const CandidateSet& cand, std::span<const double> lambda_a,
                std::span<const double> lambda_t, const EdgeVectors& vecs, double h,
                Exec exec = Exec::serial);

struct EmsResult {
  std::vector<double> probs;
  bool converged = false;
  int iterations = 0;
};

// Alternates E/M (and the smoothing step when cfg.bandwidth > 0) until the
// largest probability change drops below cfg.tol. Non-convergence within
// cfg.max_iters is flagged, not fatal. `vecs` may be null when bandwidth == 0.
EmsResult ems_fit(const CandidateSet& cand, const EmsConfig& cfg,
                  const EdgeVectors* vecs, Exec exec = Exec::serial);

// Keeps candidate edges with probability strictly above theta and assembles
// the learned graph over the candidate node set.
SocialItemGraph prune_and_build(const CandidateSet& cand, std::span<const double> probs,
                                double theta);

}  // namespace sigmax
