#pragma once

#include <string>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/learning.hpp"

namespace sigmax {

// TSV, one directed edge "u<TAB>v" per line. '#' lines and blank lines are
// skipped; duplicate edges collapse. Malformed lines raise ValidationError
// naming the 1-based line number.
SocialGraph load_social_graph(const std::string& path);
// Same format; `extra_users` join the vertex set even when no edge mentions
// them, so downstream embeddings cover every log user.
SocialGraph load_social_graph(const std::string& path,
                              const std::vector<std::string>& extra_users);

// TSV "user<TAB>item<TAB>timestamp" (int64, negatives fine). Stable-sorted by
// timestamp on load so ties keep file order.
ActionLog load_action_log(const std::string& path);

// TSV "user<TAB>item", one seed node per line.
std::vector<PurchaseNode> load_seed_nodes(const std::string& path);

// JSONL model: one {"sources":[["u","i"],...],"dest":["v","j"],"p":0.42}
// object per line. Nodes are implied by edge endpoints, so isolated nodes do
// not survive a round-trip. Probabilities round-trip bit-exactly.
void save_model(const SocialItemGraph& g, const std::string& path);
SocialItemGraph load_model(const std::string& path, bool allow_empty = false);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sigmax
