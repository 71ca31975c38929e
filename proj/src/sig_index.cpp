#include "sigmax/sig_index.hpp"

#include <algorithm>
#include <bit>

namespace sigmax {

std::int32_t SigIndex::new_vertex(NodeId label) {
  label_.push_back(label);
  prob_.push_back(0.0);
  parent_.push_back(-1);
  first_child_.push_back(-1);
  last_child_.push_back(-1);
  prev_sib_.push_back(-1);
  next_sib_.push_back(-1);
  return static_cast<std::int32_t>(label_.size()) - 1;
}

std::int32_t SigIndex::find_child(std::int32_t parent, NodeId label) const {
  for (std::int32_t c = first_child_[parent]; c != -1; c = next_sib_[c])
    if (label_[c] == label) return c;
  return -1;
}

SigIndex SigIndex::build(const SocialItemGraph& g, NodeId dest) {
  SigIndex idx;
  idx.dest_ = dest;
  idx.new_vertex(-1);  // root

  for (std::int32_t ei : g.incoming(dest)) {
    const EdgeRec& e = g.edges()[ei];
    std::int32_t at = 0;
    for (NodeId s : e.sources) {  // already sorted ascending
      std::int32_t child = idx.find_child(at, s);
      if (child == -1) {
        child = idx.new_vertex(s);
        idx.parent_[child] = at;
        // append to the child list tail so build order is reproducible
        if (idx.last_child_[at] == -1) {
          idx.first_child_[at] = idx.last_child_[at] = child;
        } else {
          idx.next_sib_[idx.last_child_[at]] = child;
          idx.prev_sib_[child] = idx.last_child_[at];
          idx.last_child_[at] = child;
        }
      }
      at = child;
    }
    // Each vertex is a distinct source set and the graph holds one hyperedge
    // per (sources, dest), so at most one probability ever lands here. Assign
    // it directly; routing through 1-(1-p)(1-p') would cost a bit of accuracy.
    idx.prob_[at] = e.prob;
  }

  // label -> vertices lookup, frozen after build
  std::vector<std::pair<NodeId, std::int32_t>> pairs;
  pairs.reserve(idx.label_.size());
  for (std::int32_t v = 1; v < idx.vertex_count(); ++v)
    pairs.emplace_back(idx.label_[v], v);
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first) {
      idx.ll_keys_.push_back(pairs[i].first);
      idx.ll_offsets_.push_back(static_cast<std::int32_t>(idx.ll_verts_.size()));
    }
    idx.ll_verts_.push_back(pairs[i].second);
  }
  idx.ll_offsets_.push_back(static_cast<std::int32_t>(idx.ll_verts_.size()));
  return idx;
}

std::vector<std::int32_t> SigIndex::children(std::int32_t v) const {
  std::vector<std::int32_t> out;
  for (std::int32_t c = first_child_[v]; c != -1; c = next_sib_[c]) out.push_back(c);
  return out;
}

std::span<const std::int32_t> SigIndex::vertices_with_label(NodeId label) const {
  auto it = std::lower_bound(ll_keys_.begin(), ll_keys_.end(), label);
  if (it == ll_keys_.end() || *it != label) return {};
  const std::size_t k = static_cast<std::size_t>(it - ll_keys_.begin());
  return {ll_verts_.data() + ll_offsets_[k],
          static_cast<std::size_t>(ll_offsets_[k + 1] - ll_offsets_[k])};
}

void SigIndex::set_prob(std::int32_t v, double p, UndoJournal* j) {
  if (j)
    j->entries.push_back({j->current_owner, UndoJournal::kProb, v,
                          std::bit_cast<std::uint64_t>(prob_[v])});
  prob_[v] = p;
}

void SigIndex::set_link(std::vector<std::int32_t>& arr, UndoJournal::Field f,
                        std::int32_t v, std::int32_t val, UndoJournal* j) {
  if (j)
    j->entries.push_back(
        {j->current_owner, f, v, static_cast<std::uint64_t>(static_cast<std::uint32_t>(arr[v]))});
  arr[v] = val;
}

void SigIndex::collapse_vertex(std::int32_t v, UndoJournal* j) {
  ++visits_;
  const std::int32_t par = parent_[v];

  // A zero parent takes the child's value as-is: mathematically identical to
  // the fold, but it keeps the first aggregated probability bit-exact.
  set_prob(par,
           prob_[par] == 0.0 ? prob_[v]
                             : 1.0 - (1.0 - prob_[par]) * (1.0 - prob_[v]),
           j);

  // unlink v from its parent's child list
  const std::int32_t prev = prev_sib_[v], next = next_sib_[v];
  if (prev != -1)
    set_link(next_sib_, UndoJournal::kNextSib, prev, next, j);
  else
    set_link(first_child_, UndoJournal::kFirstChild, par, next, j);
  if (next != -1)
    set_link(prev_sib_, UndoJournal::kPrevSib, next, prev, j);
  else
    set_link(last_child_, UndoJournal::kLastChild, par, prev, j);

  // splice v's children onto the tail of par's child list
  const std::int32_t head = first_child_[v];
  if (head != -1) {
    for (std::int32_t c = head; c != -1; c = next_sib_[c])
      set_link(parent_, UndoJournal::kParent, c, par, j);
    const std::int32_t tail = last_child_[v];
    if (last_child_[par] == -1) {
      set_link(first_child_, UndoJournal::kFirstChild, par, head, j);
    } else {
      set_link(next_sib_, UndoJournal::kNextSib, last_child_[par], head, j);
      set_link(prev_sib_, UndoJournal::kPrevSib, head, last_child_[par], j);
    }
    set_link(last_child_, UndoJournal::kLastChild, par, tail, j);
    set_link(first_child_, UndoJournal::kFirstChild, v, -1, j);
    set_link(last_child_, UndoJournal::kLastChild, v, -1, j);
  }
}

void SigIndex::collapse(NodeId activated, UndoJournal* j) {
  for (std::int32_t v : vertices_with_label(activated)) collapse_vertex(v, j);
}

double SigIndex::take_root_probability(UndoJournal* j) {
  const double p = prob_[0];
  set_prob(0, 0.0, j);
  return p;
}

void SigIndex::apply_undo(const UndoJournal::Entry& e) {
  switch (e.field) {
    case UndoJournal::kProb:
      prob_[e.idx] = std::bit_cast<double>(e.old_bits);
      break;
    case UndoJournal::kParent:
      parent_[e.idx] = static_cast<std::int32_t>(e.old_bits);
      break;
    case UndoJournal::kFirstChild:
      first_child_[e.idx] = static_cast<std::int32_t>(e.old_bits);
      break;
    case UndoJournal::kLastChild:
      last_child_[e.idx] = static_cast<std::int32_t>(e.old_bits);
      break;
    case UndoJournal::kPrevSib:
      prev_sib_[e.idx] = static_cast<std::int32_t>(e.old_bits);
      break;
    case UndoJournal::kNextSib:
      next_sib_[e.idx] = static_cast<std::int32_t>(e.old_bits);
      break;
  }
}

}  // namespace sigmax
