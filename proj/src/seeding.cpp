#include "sigmax/seeding.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sigmax/rng.hpp"

namespace sigmax {

double AdoptionEval::evaluate(const SocialItemGraph& g, const EngineContext* ctx,
                              std::span<const NodeId> seeds, std::uint64_t salt) const {
  if (kind == Kind::exact) return exact_adoption_ids(g, seeds, exact_cap, exec);
  return estimate_adoption(*ctx, seeds, runs, rng::hash2(seed, salt), exec).mean;
}

std::vector<CandidateCombination> enumerate_combinations(const SocialItemGraph& g,
                                                         int remaining_budget) {
  std::vector<CandidateCombination> out;
  if (remaining_budget <= 0) return out;
  std::set<std::vector<NodeId>> seen;
  for (const EdgeRec& e : g.edges()) {
    if (static_cast<int>(e.sources.size()) > remaining_budget) continue;
    if (seen.insert(e.sources).second)
      out.push_back({e.sources, CandidateOrigin::source_of_hyperedge});
  }
  std::set<NodeId> source_nodes;
  for (const EdgeRec& e : g.edges()) source_nodes.insert(e.sources.begin(), e.sources.end());
  for (NodeId u : source_nodes) {
    std::vector<NodeId> single{u};
    if (seen.insert(single).second)
      out.push_back({std::move(single), CandidateOrigin::singleton});
  }
  return out;
}

namespace {

std::vector<std::uint8_t> allowed_mask(const SocialItemGraph& g,
                                       const SelectOptions& opts) {
  std::vector<std::uint8_t> ok(g.node_count(), 1);
  if (opts.restrict_items) {
    const std::set<std::string> items(opts.restrict_items->begin(),
                                      opts.restrict_items->end());
    for (NodeId v = 0; v < g.node_count(); ++v)
      ok[v] = items.count(g.node(v).item) ? 1 : 0;
  }
  return ok;
}

std::vector<NodeId> sorted_union(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::vector<NodeId> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Shared greedy loop: hag feeds it combinations + all singletons, sns just
// singletons. Candidate scoring uses marginal gain per newly added node.
std::vector<NodeId> greedy_select(const SocialItemGraph& g, int k,
                                  const AdoptionEval& eval, const SelectOptions& opts,
                                  bool combination_aware) {
  if (k < 1 || k > g.node_count())
    throw ValidationError("seed budget must satisfy 1 <= k <= node count");
  const std::vector<std::uint8_t> ok = allowed_mask(g, opts);

  std::vector<CandidateCombination> pool;
  if (combination_aware) pool = enumerate_combinations(g, k);
  std::set<std::vector<NodeId>> seen;
  for (const auto& c : pool) seen.insert(c.nodes);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    std::vector<NodeId> single{v};
    if (seen.insert(single).second)
      pool.push_back({std::move(single), CandidateOrigin::singleton});
  }
  // drop candidates touching restricted nodes up front
  std::erase_if(pool, [&](const CandidateCombination& c) {
    return std::any_of(c.nodes.begin(), c.nodes.end(), [&](NodeId v) { return !ok[v]; });
  });

  AdoptionEval scorer = eval;
  scorer.exec = Exec::serial;  // parallelism lives in the candidate loop

  std::unique_ptr<EngineContext> ctx;
  if (scorer.kind == AdoptionEval::Kind::monte_carlo)
    ctx = std::make_unique<EngineContext>(g, scorer.engine);

  std::vector<NodeId> selected;          // in selection order
  std::vector<NodeId> selected_sorted;
  std::vector<std::uint8_t> pruned(pool.size(), 0);
  int remaining = k;
  std::uint64_t salt = 0;

  while (remaining > 0) {
    const double base = scorer.evaluate(g, ctx.get(), selected_sorted, salt);
    const int m_count = static_cast<int>(pool.size());
    std::vector<double> ratio(m_count), gain(m_count);
    std::vector<int> fresh_count(m_count, 0);
    std::vector<std::vector<NodeId>> fresh(m_count);

    auto score_one = [&](int ci) {
      if (pruned[ci]) return;
      std::vector<NodeId> f;
      for (NodeId v : pool[ci].nodes)
        if (!std::binary_search(selected_sorted.begin(), selected_sorted.end(), v))
          f.push_back(v);
      const int m = static_cast<int>(f.size());
      if (m == 0 || m > remaining) return;
      const std::vector<NodeId> trial = sorted_union(selected_sorted, pool[ci].nodes);
      const double val = scorer.evaluate(g, ctx.get(), trial, salt);
      gain[ci] = val - base;
      ratio[ci] = gain[ci] / static_cast<double>(m);
      fresh_count[ci] = m;
      fresh[ci] = std::move(f);
    };

    if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int ci = 0; ci < m_count; ++ci) score_one(ci);
    } else {
      for (int ci = 0; ci < m_count; ++ci) score_one(ci);
    }

    int best = -1;
    for (int ci = 0; ci < m_count; ++ci) {
      if (fresh_count[ci] == 0) continue;
      if (best == -1 || ratio[ci] > ratio[best] ||
          (ratio[ci] == ratio[best] &&
           (fresh_count[ci] < fresh_count[best] ||
            (fresh_count[ci] == fresh_count[best] && fresh[ci] < fresh[best]))))
        best = ci;
      if (opts.prune_threshold && gain[ci] <= *opts.prune_threshold) pruned[ci] = 1;
    }
    if (best == -1 || gain[best] <= 0.0) break;

    for (NodeId v : fresh[best]) selected.push_back(v);
    selected_sorted = sorted_union(selected_sorted, fresh[best]);
    remaining -= fresh_count[best];
    ++salt;
  }
  return selected;
}

}  // namespace

std::vector<NodeId> hag_select(const SocialItemGraph& g, int k, const AdoptionEval& eval,
                               const SelectOptions& opts) {
  return greedy_select(g, k, eval, opts, /*combination_aware=*/true);
}

std::vector<NodeId> sns_select(const SocialItemGraph& g, int k, const AdoptionEval& eval,
                               const SelectOptions& opts) {
  return greedy_select(g, k, eval, opts, /*combination_aware=*/false);
}

std::vector<std::vector<NodeId>> ran_select(const SocialItemGraph& g, int k,
                                            std::uint64_t seed, int repetitions,
                                            const SelectOptions& opts) {
  const std::vector<std::uint8_t> ok = allowed_mask(g, opts);
  std::vector<NodeId> universe;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (ok[v]) universe.push_back(v);
  if (k < 1 || k > static_cast<int>(universe.size()))
    throw ValidationError("seed budget must satisfy 1 <= k <= eligible node count");

  std::vector<std::vector<NodeId>> out;
  out.reserve(repetitions);
  for (int rep = 0; rep < repetitions; ++rep) {
    rng::SplitMix gen(rng::hash2(seed, static_cast<std::uint64_t>(rep)));
    std::vector<NodeId> ids = universe;
    for (int i = 0; i < k; ++i) {
      const std::size_t j = i + gen.bounded(ids.size() - i);
      std::swap(ids[i], ids[j]);
    }
    std::vector<NodeId> pick(ids.begin(), ids.begin() + k);
    std::sort(pick.begin(), pick.end());
    out.push_back(std::move(pick));
  }
  return out;
}

std::vector<NodeId> soc_select(const SocialItemGraph& g, int k, const AdoptionEval& eval,
                               const SelectOptions& opts) {
  const SocialItemGraph social = filter_social_only(g);
  return hag_select(social, k, eval, opts);  // node ids coincide: filters keep nodes
}

double ioc_evaluate(const SocialItemGraph& g, std::span<const NodeId> seeds,
                    const AdoptionEval& eval) {
  const SocialItemGraph item = filter_item_only(g);
  std::unique_ptr<EngineContext> ctx;
  if (eval.kind == AdoptionEval::Kind::monte_carlo)
    ctx = std::make_unique<EngineContext>(item, eval.engine);
  return eval.evaluate(item, ctx.get(), seeds, 0);
}

std::vector<NodeId> opt_select(const SocialItemGraph& g, int k, int exact_cap,
                               std::uint64_t cap, Exec exec, const SelectOptions& opts) {
  const std::vector<std::uint8_t> ok = allowed_mask(g, opts);
  std::vector<NodeId> universe;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (ok[v]) universe.push_back(v);
  const int n = static_cast<int>(universe.size());
  if (k < 1 || k > n)
    throw ValidationError("seed budget must satisfy 1 <= k <= eligible node count");

  // C(n, k) with an early bail-out against the cap
  std::uint64_t count = 1;
  for (int i = 0; i < k; ++i) {
    count = count * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    if (count > cap * 64) break;  // no overflow risk at these magnitudes
  }
  if (count > cap)
    throw CapExceeded("opt_select: C(" + std::to_string(n) + ", " + std::to_string(k) +
                      ") exceeds cap " + std::to_string(cap));

  // materialize subsets in lexicographic order
  std::vector<std::int32_t> subsets;
  subsets.reserve(count * k);
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    for (int i = 0; i < k; ++i) subsets.push_back(universe[idx[i]]);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  const std::int64_t total = static_cast<std::int64_t>(subsets.size()) / k;

  std::vector<double> value(total);
  auto score = [&](std::int64_t s) {
    std::span<const NodeId> seeds(subsets.data() + s * k, static_cast<std::size_t>(k));
    value[s] = exact_adoption_ids(g, seeds, exact_cap, Exec::serial);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t s = 0; s < total; ++s) score(s);
  } else {
    for (std::int64_t s = 0; s < total; ++s) score(s);
  }

  std::int64_t best = 0;
  for (std::int64_t s = 1; s < total; ++s)
    if (value[s] > value[best]) best = s;  // first max = lexicographically smallest
  return {subsets.begin() + best * k, subsets.begin() + (best + 1) * k};
}

}  // namespace sigmax
