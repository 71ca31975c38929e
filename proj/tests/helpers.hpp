#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/rng.hpp"

namespace testutil {

using sigmax::Hyperedge;
using sigmax::NodeId;
using sigmax::PurchaseNode;
using sigmax::SocialItemGraph;

inline PurchaseNode pn(const std::string& user, const std::string& item) {
  return {user, item};
}

inline Hyperedge he(std::vector<PurchaseNode> sources, PurchaseNode dest, double p) {
  return {std::move(sources), std::move(dest), p};
}

// Five users sharing one item; ascending user order matches the v1..v5
// subscripts. Nine hyperedges all point at v5.
inline std::vector<PurchaseNode> nine_edge_nodes() {
  return {pn("u1", "x"), pn("u2", "x"), pn("u3", "x"), pn("u4", "x"), pn("u5", "x")};
}

inline SocialItemGraph nine_edge_graph() {
  const std::vector<PurchaseNode> v = nine_edge_nodes();
  const PurchaseNode d = v[4];
  std::vector<Hyperedge> edges = {
      he({v[0]}, d, 0.5),
      he({v[0], v[1]}, d, 0.4),
      he({v[0], v[1], v[2]}, d, 0.2),
      he({v[0], v[1], v[2], v[3]}, d, 0.1),
      he({v[0], v[2]}, d, 0.3),
      he({v[0], v[2], v[3]}, d, 0.2),
      he({v[1]}, d, 0.2),
      he({v[1], v[2], v[3]}, d, 0.1),
      he({v[1], v[3]}, d, 0.1),
  };
  return sigmax::build_graph(v, edges);
}

// Gap instance: k source users jointly certain to convert each of M sinks,
// plus k decoy pairs at probability eps. Greedy singletons fall for the
// decoys while the full source combination wins M + k.
inline SocialItemGraph gap_graph(int M, int k, double eps) {
  std::vector<PurchaseNode> nodes;
  std::vector<PurchaseNode> sources;
  for (int i = 1; i <= k; ++i) sources.push_back(pn("s" + std::to_string(i), "x"));
  nodes.insert(nodes.end(), sources.begin(), sources.end());
  std::vector<Hyperedge> edges;
  for (int j = 1; j <= M; ++j) {
    const PurchaseNode sink = pn("w" + std::to_string(j), "x");
    nodes.push_back(sink);
    edges.push_back(he(sources, sink, 1.0));
  }
  for (int i = 1; i <= k; ++i) {
    const PurchaseNode dsrc = pn("d" + std::to_string(i), "x");
    const PurchaseNode ddst = pn("z" + std::to_string(i), "x");
    nodes.push_back(dsrc);
    nodes.push_back(ddst);
    edges.push_back(he({dsrc}, ddst, eps));
  }
  return sigmax::build_graph(nodes, edges);
}

// Random instance on a small user x item grid. Probabilities mix certain,
// impossible, and uniform edges; `max_uncertain` keeps exact enumeration
// feasible by forcing later edges to 0 or 1.
inline SocialItemGraph random_graph(std::uint64_t seed, int max_nodes = 12,
                                    int max_edges = 30, int max_uncertain = 20) {
  sigmax::rng::SplitMix gen(seed);
  const int n = 2 + static_cast<int>(gen.bounded(static_cast<std::uint64_t>(max_nodes - 1)));
  const int users = 1 + static_cast<int>(gen.bounded(3));
  std::vector<PurchaseNode> nodes;
  for (int j = 0; j < n; ++j)
    nodes.push_back(pn("u" + std::to_string(j % users), "i" + std::to_string(10 + j / users)));

  const int m = static_cast<int>(gen.bounded(static_cast<std::uint64_t>(max_edges + 1)));
  std::vector<Hyperedge> edges;
  int uncertain = 0;
  for (int t = 0; t < m; ++t) {
    const int dest = static_cast<int>(gen.bounded(static_cast<std::uint64_t>(n)));
    const int size =
        1 + static_cast<int>(gen.bounded(static_cast<std::uint64_t>(std::min(3, n - 1))));
    std::vector<int> srcs;
    while (static_cast<int>(srcs.size()) < size) {
      const int s = static_cast<int>(gen.bounded(static_cast<std::uint64_t>(n)));
      if (s == dest || std::find(srcs.begin(), srcs.end(), s) != srcs.end()) continue;
      srcs.push_back(s);
    }
    double p;
    const double roll = gen.unit();
    if (roll < 0.15) {
      p = 1.0;
    } else if (roll < 0.25) {
      p = 0.0;
    } else if (uncertain < max_uncertain) {
      p = gen.unit();
      ++uncertain;
    } else {
      p = gen.bounded(2) ? 1.0 : 0.0;
    }
    Hyperedge e;
    for (int s : srcs) e.sources.push_back(nodes[s]);
    e.dest = nodes[dest];
    e.prob = p;
    edges.push_back(std::move(e));
  }
  return sigmax::build_graph(nodes, edges);
}

inline std::vector<NodeId> ids_of(const SocialItemGraph& g,
                                  const std::vector<PurchaseNode>& nodes) {
  std::vector<NodeId> out;
  for (const PurchaseNode& n : nodes) out.push_back(g.require_node_id(n));
  return out;
}

inline std::vector<NodeId> sorted_ids(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace testutil
