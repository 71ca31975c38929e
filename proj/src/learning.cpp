#include "sigmax/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace sigmax {
namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<std::string> ActionLog::distinct_users() const {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const ActionRecord& r : records) out.push_back(r.node.user);
  return sorted_unique(std::move(out));
}

std::vector<std::string> ActionLog::distinct_items() const {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const ActionRecord& r : records) out.push_back(r.node.item);
  return sorted_unique(std::move(out));
}

std::vector<PurchaseNode> ActionLog::distinct_nodes() const {
  std::vector<PurchaseNode> out;
  out.reserve(records.size());
  for (const ActionRecord& r : records) out.push_back(r.node);
  return sorted_unique(std::move(out));
}

std::vector<std::pair<std::string, std::string>> copurchase_pairs(const ActionLog& log) {
  std::map<std::string, std::set<std::string>> by_user;
  for (const ActionRecord& r : log.records) by_user[r.node.user].insert(r.node.item);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& [user, items] : by_user) {
    for (auto a = items.begin(); a != items.end(); ++a) {
      for (auto b = std::next(a); b != items.end(); ++b) pairs.emplace(*a, *b);
    }
  }
  return {pairs.begin(), pairs.end()};
}

Hyperedge CandidateSet::edge_as_public(int e) const {
  const Skeleton& sk = hyperedges[e];
  Hyperedge out;
  for (NodeId s : source_sets[sk.source_set]) out.sources.push_back(nodes[s]);
  out.dest = nodes[sk.dest];
  return out;
}

CandidateSet generate_candidates(const ActionLog& log, const SocialGraph& social,
                                 const EmsConfig& cfg) {
  if (cfg.mu < 1) throw ValidationError("mu must be at least 1");
  if (cfg.mu > cfg.mu_guard) {
    throw ValidationError("mu=" + std::to_string(cfg.mu) +
                          " exceeds mu_guard=" + std::to_string(cfg.mu_guard) +
                          "; candidate count grows combinatorially, raise the guard "
                          "deliberately if you mean it");
  }
  if (cfg.item_window < 0 || cfg.social_window < 0)
    throw ValidationError("windows must be non-negative");
  if (cfg.pool_cap < 1) throw ValidationError("pool_cap must be at least 1");
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    if (log.records[i].t < log.records[i - 1].t)
      throw ValidationError("action log is not sorted by timestamp");
  }

  CandidateSet out;
  out.nodes = log.distinct_nodes();
  auto node_of = [&](const PurchaseNode& n) -> NodeId {
    auto it = std::lower_bound(out.nodes.begin(), out.nodes.end(), n);
    return static_cast<NodeId>(it - out.nodes.begin());
  };

  // Social-graph user index per candidate node, -1 when the user is unknown
  // to the graph (such nodes can still trigger via the same-user window).
  std::vector<int> social_uid(out.nodes.size(), -1);
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    social_uid[i] = social.user_id(out.nodes[i].user).value_or(-1);

  const std::int64_t wmax = std::max(cfg.item_window, cfg.social_window);
  const int n = static_cast<int>(log.records.size());

  std::map<std::vector<NodeId>, std::int32_t> ss_ids;
  std::map<std::pair<std::int32_t, NodeId>, std::int32_t> edge_ids;
  // Distinct (source set, triggering records) pairs; this is what N counts.
  std::set<std::vector<std::int32_t>> seen_trials;

  out.per_action.resize(n);
  std::vector<std::pair<NodeId, std::int32_t>> pool;  // (node, record index)

  for (int ai = 0; ai < n; ++ai) {
    const ActionRecord& act = log.records[ai];
    const NodeId dest = node_of(act.node);
    const int dest_uid = social_uid[dest];

    // Most-recent-first backward scan; each node keeps only its latest
    // qualifying occurrence, and the pool stops at pool_cap entries.
    pool.clear();
    for (int j = ai - 1; j >= 0; --j) {
      if (log.records[j].t < act.t - wmax) break;
      if (log.records[j].t == act.t) continue;  // simultaneous actions never trigger
      const PurchaseNode& pn = log.records[j].node;
      if (pn == act.node) continue;
      const NodeId cid = node_of(pn);
      bool qualifies = pn.user == act.node.user && log.records[j].t >= act.t - cfg.item_window;
      if (!qualifies && dest_uid >= 0 && social_uid[cid] >= 0 &&
          log.records[j].t >= act.t - cfg.social_window) {
        const auto& inn = social.in_neighbors(dest_uid);
        qualifies = std::binary_search(inn.begin(), inn.end(), social_uid[cid]);
      }
      if (!qualifies) continue;
      bool present = false;
      for (const auto& [pid, prec] : pool) present = present || pid == cid;
      if (present) continue;
      pool.emplace_back(cid, j);
      if (static_cast<int>(pool.size()) == cfg.pool_cap) break;
    }
    if (pool.empty()) continue;
    std::sort(pool.begin(), pool.end());

    const int m = static_cast<int>(pool.size());
    const int smax = std::min(cfg.mu, m);
    std::vector<int> idx;
    std::vector<NodeId> srcs;
    std::vector<std::int32_t> trial_key;
    for (int s = 1; s <= smax; ++s) {
      idx.resize(s);
      for (int q = 0; q < s; ++q) idx[q] = q;
      while (true) {
        srcs.clear();
        for (int q : idx) srcs.push_back(pool[q].first);

        auto [ss_it, ss_new] = ss_ids.try_emplace(srcs, static_cast<std::int32_t>(out.source_sets.size()));
        if (ss_new) {
          out.source_sets.push_back(srcs);
          out.trials.push_back(0);
        }
        const std::int32_t ss = ss_it->second;

        trial_key.clear();
        trial_key.push_back(ss);
        for (int q : idx) trial_key.push_back(pool[q].second);
        std::sort(trial_key.begin() + 1, trial_key.end());
        if (seen_trials.insert(trial_key).second) ++out.trials[ss];

        auto [e_it, e_new] = edge_ids.try_emplace({ss, dest}, static_cast<std::int32_t>(out.hyperedges.size()));
        if (e_new) out.hyperedges.push_back({ss, dest});
        out.per_action[ai].push_back(e_it->second);

        int pos = s - 1;
        while (pos >= 0 && idx[pos] == m - s + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int q = pos + 1; q < s; ++q) idx[q] = idx[q - 1] + 1;
      }
    }
  }

  out.actions_of_edge.resize(out.hyperedges.size());
  for (int a = 0; a < n; ++a) {
    for (std::int32_t e : out.per_action[a]) out.actions_of_edge[e].push_back(a);
  }
  return out;
}

std::vector<double> expected_successes(const CandidateSet& cand,
                                       const std::vector<double>& p, Exec exec) {
  if (p.size() != cand.hyperedges.size())
    throw ValidationError("probability vector does not match candidate edge count");
  const int na = static_cast<int>(cand.per_action.size());
  const int ne = static_cast<int>(cand.hyperedges.size());

  // Pass 1: per action, the probability that at least one candidate fired.
  std::vector<double> denom(na, 0.0);
  auto fill_denom = [&](int a) {
    double q = 1.0;
    for (std::int32_t e : cand.per_action[a]) q *= 1.0 - p[e];
    denom[a] = 1.0 - q;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int a = 0; a < na; ++a) fill_denom(a);
  } else {
    for (int a = 0; a < na; ++a) fill_denom(a);
  }

  // Pass 2: per edge, responsibility summed over its actions in slot order.
  // Actions whose denominator is zero contribute nothing.
  std::vector<double> ek(ne, 0.0);
  auto fill_ek = [&](int e) {
    double s = 0.0;
    for (std::int32_t a : cand.actions_of_edge[e]) {
      if (denom[a] > 0.0) s += p[e] / denom[a];
    }
    ek[e] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < ne; ++e) fill_ek(e);
  } else {
    for (int e = 0; e < ne; ++e) fill_ek(e);
  }
  return ek;
}

std::vector<double> em_iterate(const CandidateSet& cand, const std::vector<double>& p,
                               Exec exec) {
  std::vector<double> ek = expected_successes(cand, p, exec);
  std::vector<double> next(ek.size(), 0.0);
  for (std::size_t e = 0; e < ek.size(); ++e) {
    const std::int64_t trials = cand.trials[cand.hyperedges[e].source_set];
    if (trials > 0) next[e] = std::clamp(ek[e] / static_cast<double>(trials), 0.0, 1.0);
  }
  return next;
}

EdgeVectors edge_vectors(const CandidateSet& cand, const Embedding& emb) {
  EdgeVectors out;
  out.edge_f.reserve(cand.hyperedges.size());
  for (std::size_t e = 0; e < cand.hyperedges.size(); ++e)
    out.edge_f.push_back(hyperedge_vector(cand.edge_as_public(static_cast<int>(e)), emb));
  out.source_set_f.reserve(cand.source_sets.size());
  for (const auto& ss : cand.source_sets) {
    std::vector<double> v;
    for (NodeId s : ss) {
      std::vector<double> block = emb.node_vector(cand.nodes[s]);
      v.insert(v.end(), block.begin(), block.end());
    }
    out.source_set_f.push_back(std::move(v));
  }
  return out;
}

namespace {

// Kernel-weighted average of `values` within each class, normalized per
// target. Feature rows within one class all have equal length.
std::vector<double> smooth_class(const std::vector<std::vector<int>>& classes,
                                 const Matrix& feats, std::span<const double> values,
                                 double h, Exec exec) {
  std::vector<double> out(values.begin(), values.end());
  for (const std::vector<int>& members : classes) {
    auto smooth_one = [&](int ti) {
      const int target = members[ti];
      const std::vector<double>& ft = feats[target];
      std::vector<double> diff(ft.size());
      double wsum = 0.0, acc = 0.0;
      for (int j : members) {
        const std::vector<double>& fj = feats[j];
        for (std::size_t d = 0; d < ft.size(); ++d) diff[d] = ft[d] - fj[d];
        const double w = gaussian_kernel(diff, h);
        wsum += w;
        acc += w * values[j];
      }
      // wsum >= 1 from the self term; the guard is belt and suspenders.
      if (wsum > 0.0) out[target] = acc / wsum;
    };
    const int nm = static_cast<int>(members.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
      for (int ti = 0; ti < nm; ++ti) smooth_one(ti);
    } else {
      for (int ti = 0; ti < nm; ++ti) smooth_one(ti);
    }
  }
  return out;
}

std::vector<std::vector<int>> group_by_size(const std::vector<std::size_t>& sizes) {
  std::map<std::size_t, std::vector<int>> by_size;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    by_size[sizes[i]].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  out.reserve(by_size.size());
  for (auto& [sz, members] : by_size) out.push_back(std::move(members));
  return out;
}

}  // namespace

Smoothed s_step(const CandidateSet& cand, std::span<const double> lambda_a,
                std::span<const double> lambda_t, const EdgeVectors& vecs, double h,
                Exec exec) {
  if (lambda_a.size() != cand.hyperedges.size() ||
      lambda_t.size() != cand.source_sets.size())
    throw ValidationError("smoothing inputs do not match candidate set");
  Smoothed out;
  if (h == 0.0) {  // no smoothing: pass through untouched
    out.lambda_a.assign(lambda_a.begin(), lambda_a.end());
    out.lambda_t.assign(lambda_t.begin(), lambda_t.end());
    return out;
  }
  if (vecs.edge_f.size() != cand.hyperedges.size() ||
      vecs.source_set_f.size() != cand.source_sets.size())
    throw ValidationError("feature vectors do not match candidate set");

  std::vector<std::size_t> edge_sizes(cand.hyperedges.size());
  for (std::size_t e = 0; e < cand.hyperedges.size(); ++e)
    edge_sizes[e] = cand.source_sets[cand.hyperedges[e].source_set].size();
  std::vector<std::size_t> ss_sizes(cand.source_sets.size());
  for (std::size_t t = 0; t < cand.source_sets.size(); ++t)
    ss_sizes[t] = cand.source_sets[t].size();

  out.lambda_a = smooth_class(group_by_size(edge_sizes), vecs.edge_f, lambda_a, h, exec);
  out.lambda_t = smooth_class(group_by_size(ss_sizes), vecs.source_set_f, lambda_t, h, exec);
  return out;
}

EmsResult ems_fit(const CandidateSet& cand, const EmsConfig& cfg, const EdgeVectors* vecs,
                  Exec exec) {
  if (cfg.init_p <= 0.0 || cfg.init_p > 1.0)
    throw ValidationError("init_p must be in (0, 1]");
  if (cfg.bandwidth < 0.0) throw ValidationError("bandwidth must be non-negative");
  if (cfg.bandwidth > 0.0 && vecs == nullptr)
    throw ValidationError("smoothing requires feature vectors");

  EmsResult res;
  res.probs.assign(cand.hyperedges.size(), cfg.init_p);
  if (cand.hyperedges.empty()) {
    res.converged = true;
    return res;
  }

  std::vector<double> raw_trials(cand.trials.begin(), cand.trials.end());
  for (int it = 1; it <= cfg.max_iters; ++it) {
    std::vector<double> next;
    if (cfg.bandwidth == 0.0) {
      next = em_iterate(cand, res.probs, exec);
    } else {
      const std::vector<double> ek = expected_successes(cand, res.probs, exec);
      const Smoothed sm = s_step(cand, ek, raw_trials, *vecs, cfg.bandwidth, exec);
      next.assign(res.probs.size(), 0.0);
      for (std::size_t e = 0; e < next.size(); ++e) {
        const double t = sm.lambda_t[cand.hyperedges[e].source_set];
        if (t > 0.0) next[e] = std::clamp(sm.lambda_a[e] / t, 0.0, 1.0);
      }
    }
    double delta = 0.0;
    for (std::size_t e = 0; e < next.size(); ++e)
      delta = std::max(delta, std::abs(next[e] - res.probs[e]));
    res.probs = std::move(next);
    res.iterations = it;
    if (delta < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

SocialItemGraph prune_and_build(const CandidateSet& cand, std::span<const double> probs,
                                double theta) {
  if (probs.size() != cand.hyperedges.size())
    throw ValidationError("probability vector does not match candidate edge count");
  std::vector<Hyperedge> kept;
  for (std::size_t e = 0; e < probs.size(); ++e) {
    if (probs[e] > theta) {
      Hyperedge h = cand.edge_as_public(static_cast<int>(e));
      h.prob = probs[e];
      kept.push_back(std::move(h));
    }
  }
  return build_graph(cand.nodes, kept);
}

}  // namespace sigmax
