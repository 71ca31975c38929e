#include "sigmax/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "sigmax/rng.hpp"

namespace sigmax {
namespace {

std::string padded(const std::string& prefix, int value, int width) {
  std::string digits = std::to_string(value);
  return prefix + std::string(std::max(0, width - static_cast<int>(digits.size())), '0') + digits;
}

// C(n, k) saturating well below overflow; only used for a feasibility check.
std::uint64_t choose_saturating(std::uint64_t n, std::uint64_t k) {
  constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
  if (k > n) return 0;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (c > kCap / (n - k + i)) return kCap;
    c = c * (n - k + i) / i;
  }
  return std::min(c, kCap);
}

}  // namespace

SocialItemGraph generate_synthetic(const SyntheticSpec& spec) {
  if (spec.nodes < 1) throw ValidationError("need at least one node");
  if (spec.min_sources < 1) throw ValidationError("min_sources must be at least 1");
  if (spec.max_sources < spec.min_sources)
    throw ValidationError("max_sources below min_sources");
  if (spec.max_sources > spec.nodes - 1)
    throw ValidationError("source sets cannot exclude the destination: max_sources too large");
  if (spec.min_prob < 0.0 || spec.max_prob > 1.0 || spec.min_prob > spec.max_prob)
    throw ValidationError("probability range must satisfy 0 <= min <= max <= 1");

  std::int64_t want = spec.hyperedges;
  if (spec.avg_in_degree > 0.0)
    want = std::llround(spec.avg_in_degree * spec.nodes);
  if (want < 0) throw ValidationError("negative hyperedge count");

  constexpr std::uint64_t kSaturated = std::uint64_t{1} << 62;
  const std::uint64_t n = static_cast<std::uint64_t>(spec.nodes);
  std::uint64_t possible = 0;
  for (int k = spec.min_sources; k <= spec.max_sources; ++k) {
    const std::uint64_t per_dest = choose_saturating(n - 1, static_cast<std::uint64_t>(k));
    if (per_dest >= kSaturated / n) {
      possible = kSaturated;
      break;
    }
    possible = std::min(possible + n * per_dest, kSaturated);
  }
  if (static_cast<std::uint64_t>(want) > possible)
    throw ValidationError("requested " + std::to_string(want) +
                          " distinct hyperedges but only " + std::to_string(possible) +
                          " exist for this node count");

  // Grid labels: zero-padding keeps lexicographic order equal to index order.
  const int users = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.nodes))));
  const int items = (spec.nodes + users - 1) / users;
  const int uw = static_cast<int>(std::to_string(std::max(1, users - 1)).size());
  const int iw = static_cast<int>(std::to_string(std::max(1, items - 1)).size());
  std::vector<PurchaseNode> nodes;
  nodes.reserve(spec.nodes);
  for (int j = 0; j < spec.nodes; ++j)
    nodes.push_back({padded("u", j / items, uw), padded("i", j % items, iw)});

  rng::SplitMix gen(spec.seed);
  std::set<std::pair<std::vector<NodeId>, NodeId>> skeletons;
  std::vector<Hyperedge> edges;
  edges.reserve(static_cast<std::size_t>(want));
  const std::int64_t max_attempts = 1000 * want + 100000;
  std::int64_t attempts = 0;
  std::vector<NodeId> srcs;
  while (static_cast<std::int64_t>(edges.size()) < want) {
    if (++attempts > max_attempts)
      throw ValidationError("spec too dense: could not place " + std::to_string(want) +
                            " distinct hyperedges");
    const NodeId dest = static_cast<NodeId>(gen.bounded(n));
    const int k = spec.min_sources +
                  static_cast<int>(gen.bounded(
                      static_cast<std::uint64_t>(spec.max_sources - spec.min_sources + 1)));
    srcs.clear();
    while (static_cast<int>(srcs.size()) < k) {
      const NodeId s = static_cast<NodeId>(gen.bounded(n));
      if (s == dest || std::find(srcs.begin(), srcs.end(), s) != srcs.end()) continue;
      srcs.push_back(s);
    }
    std::sort(srcs.begin(), srcs.end());
    if (!skeletons.emplace(srcs, dest).second) continue;
    Hyperedge e;
    for (NodeId s : srcs) e.sources.push_back(nodes[s]);
    e.dest = nodes[dest];
    e.prob = spec.min_prob + gen.unit() * (spec.max_prob - spec.min_prob);
    edges.push_back(std::move(e));
  }
  return build_graph(std::move(nodes), edges);
}

}  // namespace sigmax
