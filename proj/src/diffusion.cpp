#include "sigmax/diffusion.hpp"

#include <algorithm>
#include <cmath>

namespace sigmax {

EngineKind engine_from_string(const std::string& s) {
  if (s == "naive") return EngineKind::naive;
  if (s == "sorting") return EngineKind::sorting;
  if (s == "sigindex") return EngineKind::sig_index;
  throw ValidationError("unknown engine '" + s + "' (naive|sorting|sigindex)");
}

const char* engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::naive: return "naive";
    case EngineKind::sorting: return "sorting";
    case EngineKind::sig_index: return "sigindex";
  }
  return "?";
}

DiffusionState DiffusionState::initial(const SocialItemGraph& g,
                                       std::span<const NodeId> seeds) {
  DiffusionState st;
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  st.active.assign(n, 0);
  st.newly_prev.assign(n, 0);
  st.newly_prev2.assign(n, 0);
  for (NodeId s : sorted_unique_ids(g, seeds)) {
    st.active[s] = 1;
    st.newly_prev[s] = 1;
  }
  st.iteration = 1;
  return st;
}

void DiffusionState::advance(std::span<const NodeId> newly) {
  newly_prev2 = newly_prev;
  std::fill(newly_prev.begin(), newly_prev.end(), 0);
  for (NodeId v : newly) {
    newly_prev[v] = 1;
    active[v] = 1;
  }
  ++iteration;
}

double activation_probability(const SocialItemGraph& g, NodeId v,
                              const DiffusionState& state) {
  if (state.active[v]) return 0.0;
  double q = 1.0;
  for (std::int32_t ei : g.incoming(v)) {
    const EdgeRec& e = g.edges()[ei];
    bool all = true, fresh = false;
    for (NodeId s : e.sources) {
      if (!state.active[s]) {
        all = false;
        break;
      }
      fresh = fresh || state.newly_prev[s];
    }
    if (all && fresh) q *= 1.0 - e.prob;
  }
  return 1.0 - q;
}

EngineContext::EngineContext(const SocialItemGraph& g, EngineKind kind)
    : g_(&g), kind_(kind) {
  const int n = g.node_count();
  if (kind == EngineKind::sorting) {
    sorted_incoming_.assign(n, {});
    for (NodeId v = 0; v < n; ++v) {
      sorted_incoming_[v] = g.incoming(v);
      std::stable_sort(sorted_incoming_[v].begin(), sorted_incoming_[v].end(),
                       [&](std::int32_t a, std::int32_t b) {
                         return g.edges()[a].prob > g.edges()[b].prob;
                       });
    }
  } else if (kind == EngineKind::sig_index) {
    index_of_.assign(n, -1);
    for (NodeId v = 0; v < n; ++v) {
      if (g.incoming(v).empty()) continue;
      index_of_[v] = static_cast<std::int32_t>(indexes_.size());
      indexes_.push_back(SigIndex::build(g, v));
    }
    run_offsets_.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u) {
      run_offsets_[u] = static_cast<std::int32_t>(source_runs_.size());
      std::vector<NodeId> dests;
      for (std::int32_t ei : g.source_slots(u)) dests.push_back(g.edges()[ei].dest);
      std::sort(dests.begin(), dests.end());
      dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
      for (NodeId d : dests) {
        const std::int32_t slot = index_of_[d];
        auto verts = indexes_[slot].vertices_with_label(u);
        SourceRun run;
        run.index_slot = slot;
        run.begin = static_cast<std::int32_t>(run_verts_.size());
        run_verts_.insert(run_verts_.end(), verts.begin(), verts.end());
        run.end = static_cast<std::int32_t>(run_verts_.size());
        source_runs_.push_back(run);
      }
    }
    run_offsets_[n] = static_cast<std::int32_t>(source_runs_.size());
  }
}

EngineScratch::EngineScratch(const EngineContext& ctx) : ctx_(&ctx) {
  const int n = ctx.graph().node_count();
  active_.assign(n, 0);
  activated_at_.assign(n, -1);
  if (ctx.kind_ == EngineKind::sig_index) {
    forked_ = ctx.indexes_;  // one deep copy per thread, rolled back per run
    touched_flag_.assign(forked_.size(), 0);
  }
}

void EngineScratch::simulate_scan(const RunRng& rng, DiffusionStats* stats) {
  const SocialItemGraph& g = ctx_->graph();
  const int n = g.node_count();
  const bool sorted = ctx_->kind_ == EngineKind::sorting;
  int iteration = 1;
  while (!frontier_.empty()) {
    newly_.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (active_[v]) continue;
      const auto& edge_list = sorted ? ctx_->sorted_incoming_[v] : g.incoming(v);
      double q = 1.0;
      bool any = false;
      for (std::int32_t ei : edge_list) {
        const EdgeRec& e = g.edges()[ei];
        bool all = true, fresh = false;
        for (NodeId s : e.sources) {
          if (!active_[s]) {
            all = false;
            break;
          }
          fresh = fresh || activated_at_[s] == iteration - 1;
        }
        if (all && fresh) {
          any = true;
          q *= 1.0 - e.prob;
          if (stats) ++stats->edge_contributions[ei];
          if (sorted && q == 0.0) break;  // certain activation, rest cannot matter
        }
      }
      if (!any) continue;
      const double ap = 1.0 - q;
      if (ap > 0.0 &&
          rng.unit(static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(v)) < ap)
        newly_.push_back(v);
    }
    for (NodeId v : newly_) {
      active_[v] = 1;
      activated_at_[v] = iteration;
      trace_.emplace_back(v, iteration);
    }
    frontier_ = newly_;
    ++iteration;
  }
}

void EngineScratch::simulate_indexed(const RunRng& rng) {
  journal_.clear();
  int iteration = 1;
  while (!frontier_.empty()) {
    // fold the previous batch into every index still awaiting its destination
    for (NodeId u : frontier_) {
      for (std::int32_t ri = ctx_->run_offsets_[u]; ri < ctx_->run_offsets_[u + 1]; ++ri) {
        const EngineContext::SourceRun& run = ctx_->source_runs_[ri];
        SigIndex& idx = forked_[run.index_slot];
        if (active_[idx.dest()]) continue;
        journal_.current_owner = run.index_slot;
        for (std::int32_t k = run.begin; k < run.end; ++k)
          idx.collapse_vertex(ctx_->run_verts_[k], &journal_);
        if (!touched_flag_[run.index_slot]) {
          touched_flag_[run.index_slot] = 1;
          touched_.push_back(run.index_slot);
        }
      }
    }
    newly_.clear();
    std::sort(touched_.begin(), touched_.end());
    for (std::int32_t slot : touched_) {
      touched_flag_[slot] = 0;
      SigIndex& idx = forked_[slot];
      const NodeId dest = idx.dest();
      if (active_[dest]) continue;
      journal_.current_owner = slot;
      const double ap = idx.take_root_probability(&journal_);
      if (ap > 0.0 && rng.unit(static_cast<std::uint64_t>(iteration),
                               static_cast<std::uint64_t>(dest)) < ap)
        newly_.push_back(dest);
    }
    touched_.clear();
    for (NodeId v : newly_) {
      active_[v] = 1;
      activated_at_[v] = iteration;
      trace_.emplace_back(v, iteration);
    }
    frontier_ = newly_;
    ++iteration;
  }
  for (auto it = journal_.entries.rbegin(); it != journal_.entries.rend(); ++it)
    forked_[it->owner].apply_undo(*it);
  journal_.clear();
  collapse_visits_ = 0;
  for (const SigIndex& idx : forked_) collapse_visits_ += idx.collapse_visits();
}

std::vector<std::pair<NodeId, int>> EngineScratch::simulate(
    std::span<const NodeId> seeds, const RunRng& rng, DiffusionStats* stats) {
  const SocialItemGraph& g = ctx_->graph();
  std::fill(active_.begin(), active_.end(), 0);
  std::fill(activated_at_.begin(), activated_at_.end(), -1);
  trace_.clear();
  frontier_.assign(seeds.begin(), seeds.end());
  std::sort(frontier_.begin(), frontier_.end());
  frontier_.erase(std::unique(frontier_.begin(), frontier_.end()), frontier_.end());
  for (NodeId s : frontier_) {
    active_[s] = 1;
    activated_at_[s] = 0;
    trace_.emplace_back(s, 0);
  }
  if (stats) stats->edge_contributions.assign(g.edge_count(), 0);

  if (ctx_->kind_ == EngineKind::sig_index)
    simulate_indexed(rng);
  else
    simulate_scan(rng, stats);

  std::sort(trace_.begin(), trace_.end());
  return trace_;
}

std::vector<std::pair<NodeId, int>> simulate_once_trace(const SocialItemGraph& g,
                                                        std::span<const NodeId> seeds,
                                                        const RunRng& rng,
                                                        EngineKind kind) {
  EngineContext ctx(g, kind);
  EngineScratch scratch(ctx);
  return scratch.simulate(sorted_unique_ids(g, seeds), rng);
}

std::vector<PurchaseNode> simulate_once(const SocialItemGraph& g,
                                        const std::vector<PurchaseNode>& seeds,
                                        const RunRng& rng, EngineKind kind) {
  std::vector<NodeId> ids = node_ids_of(g, seeds);
  std::vector<PurchaseNode> out;
  for (const auto& [node, iter] : simulate_once_trace(g, ids, rng, kind))
    out.push_back(g.node(node));
  return out;
}

EstimateResult estimate_adoption(const EngineContext& ctx, std::span<const NodeId> seeds,
                                 std::uint64_t runs, std::uint64_t seed, Exec exec) {
  if (runs == 0) throw ValidationError("estimate_adoption: runs must be positive");
  std::vector<NodeId> seed_ids = sorted_unique_ids(ctx.graph(), seeds);
  std::uint64_t total = 0, total_sq = 0;

  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      EngineScratch scratch(ctx);
#pragma omp for schedule(static) reduction(+ : total, total_sq)
      for (std::int64_t r = 0; r < static_cast<std::int64_t>(runs); ++r) {
        const std::uint64_t c =
            scratch.simulate(seed_ids, RunRng{seed, static_cast<std::uint64_t>(r)}).size();
        total += c;
        total_sq += c * c;
      }
    }
  } else {
    EngineScratch scratch(ctx);
    for (std::uint64_t r = 0; r < runs; ++r) {
      const std::uint64_t c = scratch.simulate(seed_ids, RunRng{seed, r}).size();
      total += c;
      total_sq += c * c;
    }
  }

  EstimateResult res;
  res.runs = runs;
  res.mean = static_cast<double>(total) / static_cast<double>(runs);
  if (runs > 1) {
    const double nruns = static_cast<double>(runs);
    double var = (static_cast<double>(total_sq) - nruns * res.mean * res.mean) / (nruns - 1.0);
    if (var < 0.0) var = 0.0;
    res.std_err = std::sqrt(var / nruns);
  }
  return res;
}

EstimateResult estimate_adoption(const SocialItemGraph& g,
                                 const std::vector<PurchaseNode>& seeds,
                                 std::uint64_t runs, EngineKind kind, std::uint64_t seed,
                                 Exec exec) {
  EngineContext ctx(g, kind);
  return estimate_adoption(ctx, node_ids_of(g, seeds), runs, seed, exec);
}

}  // namespace sigmax
