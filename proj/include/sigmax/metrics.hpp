#pragma once

#include <cstdint>
#include <vector>

#include "sigmax/core.hpp"
#include "sigmax/learning.hpp"

namespace sigmax {

struct SetScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // A zero denominator somewhere; the affected metric is reported as 0.
  bool degenerate = false;
};

SetScores score_sets(const std::vector<PurchaseNode>& predicted,
                     const std::vector<PurchaseNode>& actual);

struct PredictionConfig {
  std::int64_t horizon = -1;  // truth window after the train tail; < 0 = whole test fold
  double threshold = 0.5;     // draw-free decision rule
  int draws = 0;              // > 0: Bernoulli-draw mode, scores averaged over draws
  std::uint64_t seed = 1;
  int exact_cap = kDefaultExactCap;  // unused; kept for config echo symmetry
};

struct PredictionResult {
  SetScores scores;
  std::int64_t predicted = 0;  // threshold mode; mean count in draw mode
  std::int64_t actual = 0;
};

// One-step prediction: model nodes observed in `train` are taken as active,
// every inactive model node gets its single-step activation probability, and
// nodes above the threshold (or sampled, in draw mode) are the predicted
// positives. Truth is the set of distinct new nodes in `test` within the
// horizon after the last train timestamp.
PredictionResult evaluate_prediction(const SocialItemGraph& model, const ActionLog& train,
                                     const ActionLog& test, const PredictionConfig& cfg);

}  // namespace sigmax
