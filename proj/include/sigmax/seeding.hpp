#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/diffusion.hpp"

namespace sigmax {

enum class CandidateOrigin { source_of_hyperedge, singleton };

struct CandidateCombination {
  std::vector<NodeId> nodes;  // sorted ascending
  CandidateOrigin origin = CandidateOrigin::source_of_hyperedge;
};

// Distinct hyperedge source sets of size <= remaining_budget (in edge order)
// plus singletons of every node that appears as a source somewhere (ascending,
// skipping duplicates).
std::vector<CandidateCombination> enumerate_combinations(const SocialItemGraph& g,
                                                         int remaining_budget);

// How selection loops score a candidate seed set.
struct AdoptionEval {
  enum class Kind { exact, monte_carlo };
  Kind kind = Kind::exact;
  std::uint64_t runs = 300;
  EngineKind engine = EngineKind::sig_index;
  std::uint64_t seed = 1;
  int exact_cap = kDefaultExactCap;
  Exec exec = Exec::serial;

  // `ctx` may be null for Kind::exact; `salt` separates per-iteration streams.
  double evaluate(const SocialItemGraph& g, const EngineContext* ctx,
                  std::span<const NodeId> seeds, std::uint64_t salt) const;
};

struct SelectOptions {
  // Candidates whose gain fell to <= prune_threshold stop being re-evaluated.
  std::optional<double> prune_threshold;
  // When set, only nodes whose item is listed may enter the seed set.
  std::optional<std::vector<std::string>> restrict_items;
  Exec exec = Exec::parallel;
};

// Greedy hyperedge-aware selection: each round picks the candidate set
// maximizing marginal gain per new node; ties prefer fewer new nodes, then
// lexicographic order. Stops early once no candidate has positive gain, so
// the result may be shorter than k.
std::vector<NodeId> hag_select(const SocialItemGraph& g, int k, const AdoptionEval& eval,
                               const SelectOptions& opts = {});

// Plain single-node greedy with the same scoring and tie-breaks.
std::vector<NodeId> sns_select(const SocialItemGraph& g, int k, const AdoptionEval& eval,
                               const SelectOptions& opts = {});

// Uniform sampling without replacement; one independent set per repetition.
std::vector<std::vector<NodeId>> ran_select(const SocialItemGraph& g, int k,
                                            std::uint64_t seed, int repetitions,
                                            const SelectOptions& opts = {});

// Runs hag_select on the social-only restriction of the graph. Callers
// evaluate the returned seeds on whatever graph they care about.
std::vector<NodeId> soc_select(const SocialItemGraph& g, int k, const AdoptionEval& eval,
                               const SelectOptions& opts = {});

// Expected adoption of `seeds` on the item-only restriction.
double ioc_evaluate(const SocialItemGraph& g, std::span<const NodeId> seeds,
                    const AdoptionEval& eval);

inline constexpr std::uint64_t kDefaultOptCap = 1000000;

// Exhaustive optimum over all k-subsets, scored with the exact oracle.
// Throws CapExceeded when C(|V|, k) exceeds `cap`.
std::vector<NodeId> opt_select(const SocialItemGraph& g, int k,
                               int exact_cap = kDefaultExactCap,
                               std::uint64_t cap = kDefaultOptCap,
                               Exec exec = Exec::parallel,
                               const SelectOptions& opts = {});

}  // namespace sigmax
