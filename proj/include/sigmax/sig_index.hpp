#pragma once

#include <cstdint>
#include <vector>

#include "sigmax/core.hpp"

namespace sigmax {

// Journal of raw field writes so a simulation can be rolled back instead of
// re-copying trees. Entries are undone in reverse order.
struct UndoJournal {
  enum Field : std::uint8_t { kProb, kParent, kFirstChild, kLastChild, kPrevSib, kNextSib };
  struct Entry {
    std::int32_t owner;  // destination slot when journaling a whole index set
    Field field;
    std::int32_t idx;
    std::uint64_t old_bits;
  };
  std::vector<Entry> entries;
  std::int32_t current_owner = 0;

  void clear() { entries.clear(); }
};

// Per-destination prefix tree over incoming hyperedges. Each hyperedge's
// sources, sorted by global node order, form a root path; its probability
// sits on the path's last vertex. Collapsing an activated node folds each
// vertex carrying that label into its parent: probabilities aggregate as
// 1-(1-p)(1-p'), children are re-parented (duplicate-label siblings are
// allowed), and the vertex goes away. Probability arriving at the root is
// exactly the mass of hyperedges whose last source just activated.
class SigIndex {
 public:
  static SigIndex build(const SocialItemGraph& g, NodeId dest);

  NodeId dest() const { return dest_; }
  // Vertex 0 is the root sentinel (label -1).
  int vertex_count() const { return static_cast<int>(label_.size()); }
  NodeId label(std::int32_t v) const { return label_[v]; }
  double prob(std::int32_t v) const { return prob_[v]; }
  std::int32_t parent(std::int32_t v) const { return parent_[v]; }
  std::vector<std::int32_t> children(std::int32_t v) const;
  double root_probability() const { return prob_[0]; }

  // Folds every vertex labeled `activated` into its parent. No-op when the
  // label is absent. A label must not be collapsed twice between rollbacks.
  void collapse(NodeId activated, UndoJournal* j = nullptr);
  // Low-level single-vertex fold used by the diffusion engine.
  void collapse_vertex(std::int32_t v, UndoJournal* j = nullptr);

  // Returns the accumulated root probability and resets it to zero.
  double take_root_probability(UndoJournal* j = nullptr);

  // Deep copy for an independent simulation.
  SigIndex fork() const { return *this; }

  void apply_undo(const UndoJournal::Entry& e);

  // Vertices carrying `label`, fixed at build time.
  std::span<const std::int32_t> vertices_with_label(NodeId label) const;

  std::uint64_t collapse_visits() const { return visits_; }
  void reset_collapse_visits() { visits_ = 0; }

 private:
  NodeId dest_ = -1;
  std::vector<NodeId> label_;
  std::vector<double> prob_;
  std::vector<std::int32_t> parent_, first_child_, last_child_, prev_sib_, next_sib_;
  // Immutable label lookup (sorted keys + CSR payload); shared by forks.
  std::vector<NodeId> ll_keys_;
  std::vector<std::int32_t> ll_offsets_, ll_verts_;
  std::uint64_t visits_ = 0;

  std::int32_t new_vertex(NodeId label);
  std::int32_t find_child(std::int32_t parent, NodeId label) const;
  void set_prob(std::int32_t v, double p, UndoJournal* j);
  void set_link(std::vector<std::int32_t>& arr, UndoJournal::Field f, std::int32_t v,
                std::int32_t val, UndoJournal* j);
};

}  // namespace sigmax
