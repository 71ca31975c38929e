#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/rng.hpp"
#include "sigmax/sig_index.hpp"

namespace sigmax {

enum class EngineKind { naive, sorting, sig_index };

EngineKind engine_from_string(const std::string& s);
const char* engine_name(EngineKind k);

// Snapshot of a diffusion between iterations: `active` holds everything
// activated through iteration-1, `newly_prev` exactly iteration-1's batch,
// `newly_prev2` iteration-2's. The next batch of draws happens at `iteration`.
struct DiffusionState {
  std::vector<std::uint8_t> active, newly_prev, newly_prev2;
  int iteration = 1;

  static DiffusionState initial(const SocialItemGraph& g, std::span<const NodeId> seeds);
  void advance(std::span<const NodeId> newly);
};

// Probability that `v` activates at `state.iteration`: one minus the product
// of (1 - p) over hyperedges into v whose sources are all active and include
// at least one node from the latest batch. Returns 0 for an active `v`.
double activation_probability(const SocialItemGraph& g, NodeId v,
                              const DiffusionState& state);

// Per-run random stream; draws are pure functions of (seed, run, iter, node).
struct RunRng {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  double unit(std::uint64_t iteration, std::uint64_t node) const {
    return rng::to_unit(rng::hash4(seed, run, iteration, node));
  }
};

// Optional instrumentation filled by the naive engine.
struct DiffusionStats {
  std::vector<std::uint32_t> edge_contributions;  // per hyperedge, per simulation
};

// Immutable per-(graph, engine) preparation shared by all runs.
class EngineContext {
 public:
  EngineContext(const SocialItemGraph& g, EngineKind kind);
  const SocialItemGraph& graph() const { return *g_; }
  EngineKind kind() const { return kind_; }

 private:
  friend class EngineScratch;
  const SocialItemGraph* g_;
  EngineKind kind_;
  // sorting: per-destination edge indices ordered by descending probability
  std::vector<std::vector<std::int32_t>> sorted_incoming_;
  // sig_index: one master tree per destination with incoming edges
  std::vector<SigIndex> indexes_;
  std::vector<std::int32_t> index_of_;  // dest -> slot in indexes_, -1 if none
  // flattened per-source collapse targets: runs of (dest slot, vertex ids)
  struct SourceRun {
    std::int32_t index_slot;
    std::int32_t begin, end;  // into run_verts_
  };
  std::vector<std::int32_t> run_offsets_;  // per node id, into source_runs_
  std::vector<SourceRun> source_runs_;
  std::vector<std::int32_t> run_verts_;
};

// Mutable per-thread state reused across runs.
class EngineScratch {
 public:
  explicit EngineScratch(const EngineContext& ctx);

  // One full simulation to quiescence; returns activated (node, iteration)
  // pairs sorted by node id, seeds at iteration 0.
  std::vector<std::pair<NodeId, int>> simulate(std::span<const NodeId> seeds,
                                               const RunRng& rng,
                                               DiffusionStats* stats = nullptr);

  std::uint64_t index_collapse_visits() const { return collapse_visits_; }

 private:
  const EngineContext* ctx_;
  std::vector<std::uint8_t> active_;
  std::vector<std::int32_t> activated_at_;
  std::vector<NodeId> frontier_, newly_;
  std::vector<std::pair<NodeId, int>> trace_;
  // sig_index state
  std::vector<SigIndex> forked_;
  UndoJournal journal_;
  std::vector<std::int32_t> touched_;      // index slots touched this iteration
  std::vector<std::uint8_t> touched_flag_;  // per index slot
  std::uint64_t collapse_visits_ = 0;

  void simulate_scan(const RunRng& rng, DiffusionStats* stats);
  void simulate_indexed(const RunRng& rng);
};

// Convenience wrapper: single simulation with a fresh scratch.
std::vector<PurchaseNode> simulate_once(const SocialItemGraph& g,
                                        const std::vector<PurchaseNode>& seeds,
                                        const RunRng& rng, EngineKind kind);
std::vector<std::pair<NodeId, int>> simulate_once_trace(const SocialItemGraph& g,
                                                        std::span<const NodeId> seeds,
                                                        const RunRng& rng,
                                                        EngineKind kind);

struct EstimateResult {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t runs = 0;
};

// Monte Carlo estimate of expected adoption. Per-run counts are integers, so
// the result is identical for any scheduling and for serial vs parallel.
EstimateResult estimate_adoption(const EngineContext& ctx, std::span<const NodeId> seeds,
                                 std::uint64_t runs, std::uint64_t seed, Exec exec);
EstimateResult estimate_adoption(const SocialItemGraph& g,
                                 const std::vector<PurchaseNode>& seeds,
                                 std::uint64_t runs, EngineKind kind,
                                 std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace sigmax
