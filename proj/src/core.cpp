#include "sigmax/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace sigmax {

SocialGraph SocialGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  return from_edges(edges, {});
}

SocialGraph SocialGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::vector<std::string>& extra_users) {
  SocialGraph g;
  for (const auto& [u, v] : edges) {
    g.users_.push_back(u);
    g.users_.push_back(v);
  }
  g.users_.insert(g.users_.end(), extra_users.begin(), extra_users.end());
  std::sort(g.users_.begin(), g.users_.end());
  g.users_.erase(std::unique(g.users_.begin(), g.users_.end()), g.users_.end());

  g.out_.assign(g.users_.size(), {});
  g.in_.assign(g.users_.size(), {});
  for (const auto& [u, v] : edges) {
    const int ui = static_cast<int>(*g.user_id(u));
    const int vi = static_cast<int>(*g.user_id(v));
    g.out_[ui].push_back(vi);
    g.in_[vi].push_back(ui);
  }
  for (auto* adj : {&g.out_, &g.in_}) {
    for (auto& lst : *adj) {
      std::sort(lst.begin(), lst.end());
      lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    }
  }
  return g;
}

std::optional<int> SocialGraph::user_id(const std::string& name) const {
  auto it = std::lower_bound(users_.begin(), users_.end(), name);
  if (it == users_.end() || *it != name) return std::nullopt;
  return static_cast<int>(it - users_.begin());
}

std::vector<std::vector<std::int32_t>> SocialGraph::undirected_adjacency() const {
  std::vector<std::vector<std::int32_t>> adj(users_.size());
  for (int u = 0; u < user_count(); ++u) {
    adj[u] = out_[u];
    adj[u].insert(adj[u].end(), in_[u].begin(), in_[u].end());
    std::sort(adj[u].begin(), adj[u].end());
    adj[u].erase(std::unique(adj[u].begin(), adj[u].end()), adj[u].end());
    // drop self-loops; hop distance to oneself is 0 regardless
    adj[u].erase(std::remove(adj[u].begin(), adj[u].end(), u), adj[u].end());
  }
  return adj;
}

std::optional<NodeId> SocialItemGraph::node_id(const PurchaseNode& n) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.begin());
}

NodeId SocialItemGraph::require_node_id(const PurchaseNode& n) const {
  auto id = node_id(n);
  if (!id) throw ValidationError("unknown node (" + n.user + ", " + n.item + ")");
  return *id;
}

Hyperedge SocialItemGraph::edge_as_public(int idx) const {
  const EdgeRec& e = edges_[idx];
  Hyperedge out;
  out.sources.reserve(e.sources.size());
  for (NodeId s : e.sources) out.sources.push_back(nodes_[s]);
  out.dest = nodes_[e.dest];
  out.prob = e.prob;
  return out;
}

SocialItemGraph build_graph(std::vector<PurchaseNode> nodes,
                            const std::vector<Hyperedge>& edges) {
  SocialItemGraph g;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  g.nodes_ = std::move(nodes);

  std::map<std::pair<std::vector<NodeId>, NodeId>, int> seen;
  for (const Hyperedge& e : edges) {
    if (e.sources.empty()) throw ValidationError("hyperedge with empty source set");
    if (!(e.prob >= 0.0 && e.prob <= 1.0))
      throw ValidationError("hyperedge probability outside [0, 1]");
    EdgeRec rec;
    rec.sources.reserve(e.sources.size());
    for (const PurchaseNode& s : e.sources) rec.sources.push_back(g.require_node_id(s));
    std::sort(rec.sources.begin(), rec.sources.end());
    rec.sources.erase(std::unique(rec.sources.begin(), rec.sources.end()),
                      rec.sources.end());
    rec.dest = g.require_node_id(e.dest);
    if (std::binary_search(rec.sources.begin(), rec.sources.end(), rec.dest))
      throw ValidationError("hyperedge destination appears among its sources");
    rec.prob = e.prob;
    auto key = std::make_pair(rec.sources, rec.dest);
    auto [it, inserted] = seen.try_emplace(key, static_cast<int>(g.edges_.size()));
    if (inserted) {
      g.edges_.push_back(std::move(rec));
    } else {
      g.edges_[it->second].prob = rec.prob;  // duplicate: last occurrence wins
    }
  }

  g.incoming_.assign(g.nodes_.size(), {});
  g.slots_.assign(g.nodes_.size(), {});
  for (int i = 0; i < g.edge_count(); ++i) {
    g.incoming_[g.edges_[i].dest].push_back(i);
    for (NodeId s : g.edges_[i].sources) g.slots_[s].push_back(i);
  }
  return g;
}

namespace {

SocialItemGraph filter_edges(const SocialItemGraph& g, bool same_item) {
  std::vector<Hyperedge> kept;
  for (int i = 0; i < g.edge_count(); ++i) {
    const EdgeRec& e = g.edges()[i];
    const PurchaseNode& dest = g.node(e.dest);
    bool ok = true;
    for (NodeId s : e.sources) {
      const PurchaseNode& src = g.node(s);
      if (same_item ? (src.item != dest.item) : (src.user != dest.user)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(g.edge_as_public(i));
  }
  return build_graph(g.nodes(), kept);
}

}  // namespace

SocialItemGraph filter_social_only(const SocialItemGraph& g) {
  return filter_edges(g, /*same_item=*/true);
}

SocialItemGraph filter_item_only(const SocialItemGraph& g) {
  return filter_edges(g, /*same_item=*/false);
}

std::vector<NodeId> node_ids_of(const SocialItemGraph& g,
                                const std::vector<PurchaseNode>& nodes) {
  std::vector<NodeId> ids;
  ids.reserve(nodes.size());
  for (const PurchaseNode& n : nodes) ids.push_back(g.require_node_id(n));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<NodeId> sorted_unique_ids(const SocialItemGraph& g,
                                      std::span<const NodeId> ids) {
  std::vector<NodeId> out(ids.begin(), ids.end());
  for (NodeId id : out)
    if (id < 0 || id >= g.node_count()) throw ValidationError("node id out of range");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Exact adoption by world enumeration.

namespace {

struct MaskEdge {
  std::vector<std::uint64_t> src;  // bitmask over nodes
  int dest_word = 0;
  std::uint64_t dest_bit = 0;
};

MaskEdge make_mask_edge(const EdgeRec& e, int words) {
  MaskEdge m;
  m.src.assign(words, 0);
  for (NodeId s : e.sources) m.src[s >> 6] |= 1ULL << (s & 63);
  m.dest_word = e.dest >> 6;
  m.dest_bit = 1ULL << (e.dest & 63);
  return m;
}

// Least fixed point: repeatedly fire live edges whose sources are all active.
// Returns the number of nodes activated beyond the seeds.
int closure_extra(const std::vector<MaskEdge>& live, std::vector<std::uint64_t>& act,
                  int words) {
  int extra = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const MaskEdge& e : live) {
      if (act[e.dest_word] & e.dest_bit) continue;
      bool all = true;
      for (int w = 0; w < words; ++w) {
        if (e.src[w] & ~act[w]) {
          all = false;
          break;
        }
      }
      if (all) {
        act[e.dest_word] |= e.dest_bit;
        ++extra;
        changed = true;
      }
    }
  }
  return extra;
}

}  // namespace

AdoptionBreakdown exact_adoption_detail(const SocialItemGraph& g,
                                        std::span<const NodeId> seeds, int cap,
                                        Exec exec) {
  const int n = g.node_count();
  const int words = (n + 63) >> 6;
  std::vector<NodeId> seed_ids = sorted_unique_ids(g, seeds);

  std::vector<std::uint64_t> seed_mask(std::max(words, 1), 0);
  for (NodeId s : seed_ids) seed_mask[s >> 6] |= 1ULL << (s & 63);

  std::vector<MaskEdge> certain;
  std::vector<MaskEdge> random;
  std::vector<double> probs;
  for (const EdgeRec& e : g.edges()) {
    if (e.prob <= 0.0) continue;
    if (e.prob >= 1.0) {
      certain.push_back(make_mask_edge(e, words));
    } else {
      random.push_back(make_mask_edge(e, words));
      probs.push_back(e.prob);
    }
  }
  const int r = static_cast<int>(random.size());
  if (r > cap)
    throw CapExceeded("exact adoption: " + std::to_string(r) +
                      " enumerable hyperedges exceed cap " + std::to_string(cap));

  const std::uint64_t worlds = 1ULL << r;
  const std::uint64_t block_size = 4096;
  const std::uint64_t blocks = (worlds + block_size - 1) / block_size;
  std::vector<double> block_adoption(blocks, 0.0), block_mass(blocks, 0.0);
  const double seed_count = static_cast<double>(seed_ids.size());

  // The serial path runs the same per-block kernel in the same order, so both
  // policies accumulate identical bits for any thread count.
  auto run_block = [&](std::uint64_t b) {
    std::vector<std::uint64_t> act(words);
    std::vector<MaskEdge> live;
    live.reserve(certain.size() + random.size());
    double a_sum = 0.0, m_sum = 0.0;
    const std::uint64_t lo = b * block_size;
    const std::uint64_t hi = std::min(worlds, lo + block_size);
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      double w = 1.0;
      live.assign(certain.begin(), certain.end());
      for (int i = 0; i < r; ++i) {
        if (mask & (1ULL << i)) {
          w *= probs[i];
          live.push_back(random[i]);
        } else {
          w *= 1.0 - probs[i];
        }
      }
      act = seed_mask;
      const int extra = closure_extra(live, act, words);
      a_sum += w * (seed_count + extra);
      m_sum += w;
    }
    block_adoption[b] = a_sum;
    block_mass[b] = m_sum;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b)
      run_block(static_cast<std::uint64_t>(b));
  } else {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  }

  AdoptionBreakdown out;
  out.worlds = worlds;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    out.adoption += block_adoption[b];
    out.world_mass += block_mass[b];
  }
  return out;
}

double exact_adoption_ids(const SocialItemGraph& g, std::span<const NodeId> seeds,
                          int cap, Exec exec) {
  return exact_adoption_detail(g, seeds, cap, exec).adoption;
}

double exact_adoption(const SocialItemGraph& g, const std::vector<PurchaseNode>& seeds,
                      int cap, Exec exec) {
  std::vector<NodeId> ids = node_ids_of(g, seeds);
  return exact_adoption_detail(g, ids, cap, exec).adoption;
}

}  // namespace sigmax
