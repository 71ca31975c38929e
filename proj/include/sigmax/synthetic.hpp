#pragma once

#include <cstdint>

#include "sigmax/core.hpp"

namespace sigmax {

// Random SIG instance. Nodes are laid out on a user x item grid and named
// with zero-padded labels so lexicographic order matches numeric order.
struct SyntheticSpec {
  int nodes = 100;
  int hyperedges = 0;          // ignored when avg_in_degree > 0
  double avg_in_degree = 0.0;  // hyperedges = round(avg_in_degree * nodes)
  int min_sources = 1;
  int max_sources = 3;
  double min_prob = 0.05;
  double max_prob = 0.9;
  std::uint64_t seed = 1;
};

// Deterministic under `seed`. Source sets are distinct nodes excluding the
// destination (dest-in-sources draws retried); duplicate (sources, dest)
// skeletons are rejected and redrawn. Throws ValidationError when more
// distinct hyperedges are requested than the node count allows.
SocialItemGraph generate_synthetic(const SyntheticSpec& spec);

}  // namespace sigmax
