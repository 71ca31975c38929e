#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sigmax {

using NodeId = std::int32_t;

// Malformed input (files, parameters, graph construction). CLI exit code 2.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A desk-scale enumeration cap was exceeded. CLI exit code 3.
class CapExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Execution policy for the parallel kernels. `serial` is the reference
// implementation; `parallel` uses OpenMP and must produce identical bits.
enum class Exec { serial, parallel };

// A purchase action: user adopting an item. The vertex type of the graph.
// Ordering is lexicographic (user, item) and fixes the global node order.
struct PurchaseNode {
  std::string user;
  std::string item;
  auto operator<=>(const PurchaseNode&) const = default;
};

// sources -> dest with activation probability prob. Fires only once all
// sources are active. `sources` is treated as a set.
struct Hyperedge {
  std::vector<PurchaseNode> sources;
  PurchaseNode dest;
  double prob = 0.0;
};

// Directed social graph over user ids.
class SocialGraph {
 public:
  SocialGraph() = default;
  static SocialGraph from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges);
  static SocialGraph from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges,
      const std::vector<std::string>& extra_users);

  int user_count() const { return static_cast<int>(users_.size()); }
  const std::vector<std::string>& users() const { return users_; }
  const std::string& user(int id) const { return users_[id]; }
  std::optional<int> user_id(const std::string& name) const;
  const std::vector<std::int32_t>& out_neighbors(int id) const { return out_[id]; }
  const std::vector<std::int32_t>& in_neighbors(int id) const { return in_[id]; }
  // Undirected adjacency, used for hop distances.
  std::vector<std::vector<std::int32_t>> undirected_adjacency() const;

 private:
  std::vector<std::string> users_;  // sorted ascending
  std::vector<std::vector<std::int32_t>> out_, in_;
};

// Internal hyperedge record over dense node ids; sources sorted ascending.
struct EdgeRec {
  std::vector<NodeId> sources;
  NodeId dest = -1;
  double prob = 0.0;
};

class SocialItemGraph {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<PurchaseNode>& nodes() const { return nodes_; }
  const PurchaseNode& node(NodeId id) const { return nodes_[id]; }
  std::optional<NodeId> node_id(const PurchaseNode& n) const;
  NodeId require_node_id(const PurchaseNode& n) const;

  const std::vector<EdgeRec>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  // Hyperedge indices whose destination is `dest`.
  const std::vector<std::int32_t>& incoming(NodeId dest) const { return incoming_[dest]; }
  // Hyperedge indices that list `src` among their sources.
  const std::vector<std::int32_t>& source_slots(NodeId src) const { return slots_[src]; }

  Hyperedge edge_as_public(int idx) const;

 private:
  friend SocialItemGraph build_graph(std::vector<PurchaseNode>,
                                     const std::vector<Hyperedge>&);
  std::vector<PurchaseNode> nodes_;  // sorted ascending; index == NodeId
  std::vector<EdgeRec> edges_;
  std::vector<std::vector<std::int32_t>> incoming_, slots_;
};

// Validates and assembles a graph. Node list is deduplicated; identical
// (sources, dest) hyperedges collapse to the last occurrence. Throws
// ValidationError on dangling endpoints, dest among sources, empty sources,
// or probabilities outside [0, 1].
SocialItemGraph build_graph(std::vector<PurchaseNode> nodes,
                            const std::vector<Hyperedge>& edges);

// Keeps hyperedges whose endpoints all share one item (pure social influence).
SocialItemGraph filter_social_only(const SocialItemGraph& g);
// Keeps hyperedges whose endpoints all share one user (pure item-to-item).
SocialItemGraph filter_item_only(const SocialItemGraph& g);

inline constexpr int kDefaultExactCap = 22;

struct AdoptionBreakdown {
  double adoption = 0.0;
  double world_mass = 0.0;  // total probability over enumerated worlds
  std::uint64_t worlds = 0;
};

// Ground-truth expected adoption by enumerating live-hyperedge worlds.
// Only edges with 0 < p < 1 are enumerated (p == 1 is always live, p == 0
// never), and their count must stay within `cap`, else CapExceeded.
AdoptionBreakdown exact_adoption_detail(const SocialItemGraph& g,
                                        std::span<const NodeId> seeds,
                                        int cap = kDefaultExactCap,
                                        Exec exec = Exec::serial);
double exact_adoption(const SocialItemGraph& g,
                      const std::vector<PurchaseNode>& seeds,
                      int cap = kDefaultExactCap, Exec exec = Exec::serial);
double exact_adoption_ids(const SocialItemGraph& g, std::span<const NodeId> seeds,
                          int cap = kDefaultExactCap, Exec exec = Exec::serial);

// Helpers shared across modules.
std::vector<NodeId> node_ids_of(const SocialItemGraph& g,
                                const std::vector<PurchaseNode>& nodes);
std::vector<NodeId> sorted_unique_ids(const SocialItemGraph& g,
                                      std::span<const NodeId> ids);

}  // namespace sigmax
