#include "sigmax/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sigmax/diffusion.hpp"
#include "sigmax/rng.hpp"

namespace sigmax {
namespace {

std::vector<PurchaseNode> sorted_unique_nodes(std::vector<PurchaseNode> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

SetScores score_sets(const std::vector<PurchaseNode>& predicted,
                     const std::vector<PurchaseNode>& actual) {
  const std::vector<PurchaseNode> pred = sorted_unique_nodes(predicted);
  const std::vector<PurchaseNode> act = sorted_unique_nodes(actual);
  std::size_t tp = 0;
  for (const PurchaseNode& p : pred)
    if (std::binary_search(act.begin(), act.end(), p)) ++tp;

  SetScores s;
  if (!pred.empty()) s.precision = static_cast<double>(tp) / static_cast<double>(pred.size());
  if (!act.empty()) s.recall = static_cast<double>(tp) / static_cast<double>(act.size());
  if (s.precision + s.recall > 0.0)
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  s.degenerate = pred.empty() || act.empty() || s.precision + s.recall == 0.0;
  return s;
}

PredictionResult evaluate_prediction(const SocialItemGraph& model, const ActionLog& train,
                                     const ActionLog& test, const PredictionConfig& cfg) {
  if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
    throw ValidationError("threshold must be in [0, 1]");
  if (cfg.draws < 0) throw ValidationError("draws must be non-negative");

  // Observed actions that exist in the model become the active set.
  std::vector<NodeId> seeds;
  for (const ActionRecord& r : train.records) {
    if (std::optional<NodeId> id = model.node_id(r.node)) seeds.push_back(*id);
  }
  seeds = sorted_unique_ids(model, seeds);

  // Single diffusion step from the observed actions.
  const DiffusionState state = DiffusionState::initial(model, seeds);
  std::vector<std::pair<NodeId, double>> candidates;
  for (NodeId v = 0; v < model.node_count(); ++v) {
    if (state.active[v]) continue;
    const double ap = activation_probability(model, v, state);
    if (ap > 0.0) candidates.emplace_back(v, ap);
  }

  // Ground truth: new nodes purchased in the test fold within the horizon.
  std::int64_t t0 = 0;
  if (!train.records.empty())
    t0 = train.records.back().t;
  else if (!test.records.empty())
    t0 = test.records.front().t;
  std::vector<PurchaseNode> truth;
  for (const ActionRecord& r : test.records) {
    if (cfg.horizon >= 0 && r.t > t0 + cfg.horizon) continue;
    std::optional<NodeId> id = model.node_id(r.node);
    if (id && state.active[*id]) continue;  // re-buy of an observed node
    truth.push_back(r.node);
  }
  truth = sorted_unique_nodes(truth);

  PredictionResult out;
  out.actual = static_cast<std::int64_t>(truth.size());
  if (cfg.draws == 0) {
    std::vector<PurchaseNode> predicted;
    for (const auto& [v, ap] : candidates)
      if (ap > cfg.threshold) predicted.push_back(model.node(v));
    out.scores = score_sets(predicted, truth);
    out.predicted = static_cast<std::int64_t>(predicted.size());
    return out;
  }

  // Draw mode: sample the prediction set and average the scores.
  double psum = 0.0, rsum = 0.0, fsum = 0.0, nsum = 0.0;
  bool any_degenerate = false;
  for (int d = 0; d < cfg.draws; ++d) {
    std::vector<PurchaseNode> predicted;
    for (const auto& [v, ap] : candidates) {
      if (rng::to_unit(rng::hash3(cfg.seed, static_cast<std::uint64_t>(d),
                                  static_cast<std::uint64_t>(v))) < ap)
        predicted.push_back(model.node(v));
    }
    const SetScores s = score_sets(predicted, truth);
    psum += s.precision;
    rsum += s.recall;
    fsum += s.f1;
    nsum += static_cast<double>(predicted.size());
    any_degenerate = any_degenerate || s.degenerate;
  }
  out.scores.precision = psum / cfg.draws;
  out.scores.recall = rsum / cfg.draws;
  out.scores.f1 = fsum / cfg.draws;
  out.scores.degenerate = any_degenerate;
  out.predicted = std::llround(nsum / cfg.draws);
  return out;
}

}  // namespace sigmax
