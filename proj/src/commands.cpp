#include "sigmax/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sigmax/diffusion.hpp"
#include "sigmax/embedding.hpp"
#include "sigmax/io.hpp"
#include "sigmax/learning.hpp"
#include "sigmax/metrics.hpp"
#include "sigmax/report.hpp"
#include "sigmax/rng.hpp"
#include "sigmax/synthetic.hpp"

namespace sigmax {
namespace {

using nlohmann::json;

// Reports must not depend on where inputs live, so paths echo as basenames.
std::string base_name(const std::string& path) {
  return path.empty() ? path : std::filesystem::path(path).filename().string();
}

json common_config(const CommonArgs& c) {
  json j;
  j["format"] = c.format;
  j["seed"] = c.seed;
  j["timings"] = c.timings;
  j["exec"] = c.exec;
  return j;
}

std::vector<PurchaseNode> public_nodes(const SocialItemGraph& g,
                                       std::span<const NodeId> ids) {
  std::vector<PurchaseNode> out;
  out.reserve(ids.size());
  for (NodeId v : ids) out.push_back(g.node(v));
  return out;
}

// Seeds always count toward adoption, so any correct evaluation is bounded
// below by the seed count; a violation means a broken estimator.
void check_adoption_floor(double adoption, std::size_t seed_count) {
  if (adoption + 1e-9 < static_cast<double>(seed_count))
    throw std::logic_error("adoption estimate fell below the seed count");
}

EmsConfig ems_config_from(const LearnArgs& a) {
  EmsConfig cfg;
  cfg.mu = a.mu;
  cfg.mu_guard = a.mu_guard;
  cfg.item_window = a.item_window;
  cfg.social_window = a.social_window;
  cfg.pool_cap = a.pool_cap;
  cfg.bandwidth = a.bandwidth;
  cfg.theta = a.theta;
  cfg.init_p = a.init_p;
  cfg.tol = a.tol;
  cfg.max_iters = a.max_iters;
  cfg.embed_dim = a.embed_dim;
  cfg.item_copurchase = a.item_copurchase;
  return cfg;
}

json ems_config_echo(const EmsConfig& cfg) {
  json j;
  j["mu"] = cfg.mu;
  j["mu_guard"] = cfg.mu_guard;
  j["item_window"] = cfg.item_window;
  j["social_window"] = cfg.social_window;
  j["pool_cap"] = cfg.pool_cap;
  j["h"] = cfg.bandwidth;
  j["theta"] = cfg.theta;
  j["init_p"] = cfg.init_p;
  j["tol"] = cfg.tol;
  j["max_iters"] = cfg.max_iters;
  j["embed_dim"] = cfg.embed_dim;
  j["item_copurchase"] = cfg.item_copurchase;
  return j;
}

// Fit one model from a log slice. Shared by learn and the per-fold eval path.
struct FitOutcome {
  SocialItemGraph model;
  std::size_t candidate_edges = 0;
  bool converged = false;
  int iterations = 0;
};

FitOutcome fit_model(const ActionLog& log, const SocialGraph& social,
                     const EmsConfig& cfg, Exec exec) {
  FitOutcome out;
  CandidateSet cand = generate_candidates(log, social, cfg);
  out.candidate_edges = cand.hyperedges.size();
  std::optional<EdgeVectors> vecs;
  if (cfg.bandwidth > 0.0) {
    const std::vector<std::string> items = log.distinct_items();
    const Embedding emb =
        cfg.item_copurchase
            ? embed_users_items_copurchase(social, items, copurchase_pairs(log),
                                           cfg.embed_dim, exec)
            : embed_users_items(social, items, cfg.embed_dim, exec);
    vecs = edge_vectors(cand, emb);
  }
  const EmsResult fit = ems_fit(cand, cfg, vecs ? &*vecs : nullptr, exec);
  out.converged = fit.converged;
  out.iterations = fit.iterations;
  out.model = prune_and_build(cand, fit.probs, cfg.theta);
  return out;
}

}  // namespace

Exec CommonArgs::exec_policy() const {
  if (exec == "serial") return Exec::serial;
  if (exec == "parallel") return Exec::parallel;
  throw ValidationError("--exec must be serial or parallel");
}

int cmd_learn(const LearnArgs& a) {
  if (a.log_path.empty()) throw ValidationError("--log is required");
  if (a.model_out.empty()) throw ValidationError("--model output path is required");
  const Exec exec = a.common.exec_policy();
  const EmsConfig cfg = ems_config_from(a);

  ExperimentReport rep;
  Stopwatch watch;
  const ActionLog log = load_action_log(a.log_path);
  const SocialGraph social =
      a.graph_path.empty() ? SocialGraph::from_edges({}, log.distinct_users())
                           : load_social_graph(a.graph_path, log.distinct_users());
  rep.timings.emplace_back("load", watch.lap());

  const FitOutcome fit = fit_model(log, social, cfg, exec);
  rep.timings.emplace_back("fit", watch.lap());
  if (fit.model.edge_count() == 0 && !a.allow_empty)
    throw ValidationError("no candidate edge survived theta=" + std::to_string(cfg.theta) +
                          "; pass --allow-empty to write an empty model");
  save_model(fit.model, a.model_out);
  rep.timings.emplace_back("write", watch.lap());

  rep.command = "learn";
  rep.algorithm = cfg.bandwidth > 0.0 ? "ems" : "em";
  rep.rng_seed = a.common.seed;
  rep.config = common_config(a.common);
  rep.config.update(ems_config_echo(cfg));
  rep.config["log"] = base_name(a.log_path);
  rep.config["graph"] = base_name(a.graph_path);
  rep.config["model"] = base_name(a.model_out);
  rep.config["allow_empty"] = a.allow_empty;
  json learning;
  learning["actions"] = log.records.size();
  learning["nodes"] = fit.model.node_count();
  learning["candidate_edges"] = fit.candidate_edges;
  learning["kept_edges"] = fit.model.edge_count();
  learning["converged"] = fit.converged;
  learning["iterations"] = fit.iterations;
  rep.extra["learning"] = std::move(learning);
  emit_report(rep, a.common.out, a.common.format, a.common.timings);
  return 0;
}

int cmd_select(const SelectArgs& a) {
  if (a.model_path.empty()) throw ValidationError("--model is required");
  const Exec exec = a.common.exec_policy();
  const EngineKind engine = engine_from_string(a.engine);

  AdoptionEval eval;
  if (a.score == "exact")
    eval.kind = AdoptionEval::Kind::exact;
  else if (a.score == "mc")
    eval.kind = AdoptionEval::Kind::monte_carlo;
  else
    throw ValidationError("--score must be mc or exact");
  eval.runs = a.runs;
  eval.engine = engine;
  eval.seed = a.common.seed;
  eval.exact_cap = a.exact_cap;
  eval.exec = exec;

  SelectOptions opts;
  opts.prune_threshold = a.prune_threshold;
  if (!a.restrict_items.empty()) opts.restrict_items = a.restrict_items;
  opts.exec = exec;

  ExperimentReport rep;
  Stopwatch watch;
  const SocialItemGraph g = load_model(a.model_path, a.allow_empty);
  rep.timings.emplace_back("load", watch.lap());

  const bool is_mc = eval.kind == AdoptionEval::Kind::monte_carlo;
  std::vector<NodeId> seeds;
  if (a.algo == "hag") {
    seeds = hag_select(g, a.k, eval, opts);
  } else if (a.algo == "sns") {
    seeds = sns_select(g, a.k, eval, opts);
  } else if (a.algo == "soc") {
    seeds = soc_select(g, a.k, eval, opts);
  } else if (a.algo == "opt") {
    seeds = opt_select(g, a.k, a.exact_cap, a.opt_cap, exec, opts);
  } else if (a.algo != "ran") {
    throw ValidationError("unknown --algo '" + a.algo + "'");
  }

  if (a.algo == "ran") {
    if (a.ioc_eval)
      throw ValidationError("--ioc-eval needs a single chosen seed set; ran reports a sample");
    if (a.repetitions < 1) throw ValidationError("--reps must be positive");
    const auto sets = ran_select(g, a.k, a.common.seed, a.repetitions, opts);
    rep.timings.emplace_back("select", watch.lap());
    std::optional<EngineContext> ctx;
    if (is_mc) ctx.emplace(g, engine);
    json reps = json::array();
    std::vector<double> values;
    for (const std::vector<NodeId>& set : sets) {
      double adoption;
      if (is_mc)
        adoption = estimate_adoption(*ctx, set, a.runs, a.common.seed, exec).mean;
      else
        adoption = exact_adoption_ids(g, set, a.exact_cap, exec);
      check_adoption_floor(adoption, set.size());
      values.push_back(adoption);
      json row;
      json sj = json::array();
      for (const PurchaseNode& n : public_nodes(g, set))
        sj.push_back(json::array({n.user, n.item}));
      row["seeds"] = std::move(sj);
      row["adoption"] = adoption;
      reps.push_back(std::move(row));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stderr_sets =
        values.size() > 1
            ? std::sqrt(var / static_cast<double>(values.size() - 1) /
                        static_cast<double>(values.size()))
            : 0.0;
    rep.timings.emplace_back("evaluate", watch.lap());
    rep.adoption = mean;
    rep.std_error = stderr_sets;
    rep.extra["repetitions"] = std::move(reps);
  } else {
    // Early stop can leave fewer than k seeds; --pad tops up with the best
    // singleton per round even when its gain is zero.
    if (a.pad && static_cast<int>(seeds.size()) < a.k) {
      std::optional<EngineContext> ctx;
      if (is_mc) ctx.emplace(g, engine);
      const std::set<std::string> allowed_items(a.restrict_items.begin(),
                                                a.restrict_items.end());
      std::uint64_t salt = 1ull << 32;  // clear of the selector's salts
      while (static_cast<int>(seeds.size()) < a.k) {
        NodeId best = -1;
        double best_val = 0.0;
        std::vector<NodeId> trial;
        for (NodeId v = 0; v < g.node_count(); ++v) {
          if (std::find(seeds.begin(), seeds.end(), v) != seeds.end()) continue;
          if (!allowed_items.empty() && !allowed_items.count(g.node(v).item)) continue;
          trial.assign(seeds.begin(), seeds.end());
          trial.push_back(v);
          const double val =
              eval.evaluate(g, ctx ? &*ctx : nullptr, trial, salt);
          if (best < 0 || val > best_val) {
            best = v;
            best_val = val;
          }
        }
        if (best < 0) break;  // universe exhausted
        seeds.push_back(best);
        ++salt;
      }
    }
    rep.timings.emplace_back("select", watch.lap());

    double adoption, std_error = 0.0;
    if (is_mc) {
      EngineContext ctx(g, engine);
      const EstimateResult er = estimate_adoption(ctx, seeds, a.runs, a.common.seed, exec);
      adoption = er.mean;
      std_error = er.std_err;
    } else {
      adoption = exact_adoption_ids(g, seeds, a.exact_cap, exec);
    }
    check_adoption_floor(adoption, seeds.size());
    rep.timings.emplace_back("evaluate", watch.lap());
    rep.adoption = adoption;
    rep.std_error = std_error;
    rep.seeds = public_nodes(g, seeds);
    if (a.ioc_eval) rep.extra["ioc_adoption"] = ioc_evaluate(g, seeds, eval);
  }

  rep.command = "select";
  rep.algorithm = a.algo;
  rep.engine = engine_name(engine);
  rep.k = a.k;
  rep.rng_seed = a.common.seed;
  rep.runs = is_mc ? a.runs : 0;
  rep.config = common_config(a.common);
  rep.config["model"] = base_name(a.model_path);
  rep.config["algo"] = a.algo;
  rep.config["k"] = a.k;
  rep.config["engine"] = a.engine;
  rep.config["score"] = a.score;
  rep.config["runs"] = a.runs;
  rep.config["reps"] = a.repetitions;
  rep.config["opt_cap"] = a.opt_cap;
  rep.config["exact_cap"] = a.exact_cap;
  rep.config["prune"] = a.prune_threshold ? json(*a.prune_threshold) : json();
  rep.config["restrict_items"] = a.restrict_items;
  rep.config["ioc_eval"] = a.ioc_eval;
  rep.config["pad"] = a.pad;
  rep.config["allow_empty"] = a.allow_empty;
  emit_report(rep, a.common.out, a.common.format, a.common.timings);
  return 0;
}

int cmd_simulate(const SimulateArgs& a) {
  if (a.model_path.empty()) throw ValidationError("--model is required");
  if (a.seeds_path.empty()) throw ValidationError("--seeds is required");
  const Exec exec = a.common.exec_policy();
  const EngineKind engine = engine_from_string(a.engine);
  if (a.runs == 0) throw ValidationError("--runs must be positive");

  ExperimentReport rep;
  Stopwatch watch;
  const SocialItemGraph g = load_model(a.model_path, a.allow_empty);
  std::vector<NodeId> ids = node_ids_of(g, load_seed_nodes(a.seeds_path));
  ids = sorted_unique_ids(g, ids);
  if (ids.empty()) throw ValidationError("seed file lists no nodes");
  rep.timings.emplace_back("load", watch.lap());

  EngineContext ctx(g, engine);
  rep.timings.emplace_back("build", watch.lap());
  const EstimateResult er = estimate_adoption(ctx, ids, a.runs, a.common.seed, exec);
  check_adoption_floor(er.mean, ids.size());
  rep.timings.emplace_back("run", watch.lap());

  rep.command = "simulate";
  rep.algorithm = engine_name(engine);
  rep.engine = engine_name(engine);
  rep.k = static_cast<int>(ids.size());
  rep.rng_seed = a.common.seed;
  rep.runs = a.runs;
  rep.seeds = public_nodes(g, ids);
  rep.adoption = er.mean;
  rep.std_error = er.std_err;
  rep.config = common_config(a.common);
  rep.config["model"] = base_name(a.model_path);
  rep.config["seeds"] = base_name(a.seeds_path);
  rep.config["engine"] = a.engine;
  rep.config["runs"] = a.runs;
  rep.config["allow_empty"] = a.allow_empty;
  emit_report(rep, a.common.out, a.common.format, a.common.timings);
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  if (a.log_path.empty()) throw ValidationError("--log is required");
  if (a.folds < 2) throw ValidationError("--folds must be at least 2");
  const Exec exec = a.common.exec_policy();

  ExperimentReport rep;
  Stopwatch watch;
  const ActionLog log = load_action_log(a.log_path);
  const int n = static_cast<int>(log.records.size());
  if (n < a.folds)
    throw ValidationError("log has " + std::to_string(n) + " records, fewer than --folds");

  std::optional<SocialItemGraph> fixed;
  if (!a.model_path.empty()) fixed = load_model(a.model_path);
  const SocialGraph social =
      a.graph_path.empty() ? SocialGraph::from_edges({}, log.distinct_users())
                           : load_social_graph(a.graph_path, log.distinct_users());
  rep.timings.emplace_back("load", watch.lap());

  EmsConfig cfg;
  cfg.mu = a.mu;
  cfg.mu_guard = a.mu_guard;
  cfg.item_window = a.item_window;
  cfg.social_window = a.social_window;
  cfg.pool_cap = a.pool_cap;
  cfg.bandwidth = a.bandwidth;
  cfg.theta = a.theta;
  cfg.init_p = a.init_p;
  cfg.tol = a.tol;
  cfg.max_iters = a.max_iters;
  cfg.embed_dim = a.embed_dim;
  cfg.item_copurchase = a.item_copurchase;

  PredictionConfig pc;
  pc.horizon = a.horizon;
  pc.threshold = a.threshold;
  pc.draws = a.draws;
  pc.seed = a.common.seed;

  // Contiguous time splits: fold f tests segment f against everything before.
  json folds = json::array();
  double psum = 0.0, rsum = 0.0, fsum = 0.0;
  bool any_degenerate = false;
  for (int f = 1; f < a.folds; ++f) {
    const int lo = f * n / a.folds;
    const int hi = (f + 1) * n / a.folds;
    ActionLog train, test;
    train.records.assign(log.records.begin(), log.records.begin() + lo);
    test.records.assign(log.records.begin() + lo, log.records.begin() + hi);

    const SocialItemGraph* model = nullptr;
    SocialItemGraph learned;
    std::size_t candidate_edges = 0;
    if (fixed) {
      model = &*fixed;
    } else {
      FitOutcome fit = fit_model(train, social, cfg, exec);
      candidate_edges = fit.candidate_edges;
      learned = std::move(fit.model);
      model = &learned;
    }
    const PredictionResult pr = evaluate_prediction(*model, train, test, pc);

    json row;
    row["fold"] = f;
    row["train_records"] = train.records.size();
    row["test_records"] = test.records.size();
    row["model_edges"] = model->edge_count();
    if (!fixed) row["candidate_edges"] = candidate_edges;
    row["precision"] = pr.scores.precision;
    row["recall"] = pr.scores.recall;
    row["f1"] = pr.scores.f1;
    row["degenerate"] = pr.scores.degenerate;
    row["predicted"] = pr.predicted;
    row["actual"] = pr.actual;
    folds.push_back(std::move(row));

    psum += pr.scores.precision;
    rsum += pr.scores.recall;
    fsum += pr.scores.f1;
    any_degenerate = any_degenerate || pr.scores.degenerate;
  }
  rep.timings.emplace_back("folds", watch.lap());

  const double nf = static_cast<double>(a.folds - 1);
  json prediction;
  prediction["precision"] = psum / nf;
  prediction["recall"] = rsum / nf;
  prediction["f1"] = fsum / nf;
  prediction["degenerate"] = any_degenerate;
  prediction["folds"] = std::move(folds);
  rep.extra["prediction"] = std::move(prediction);

  rep.command = "eval";
  rep.algorithm = fixed ? "fixed-model" : (cfg.bandwidth > 0.0 ? "ems" : "em");
  rep.rng_seed = a.common.seed;
  rep.runs = static_cast<std::uint64_t>(a.draws);
  rep.config = common_config(a.common);
  rep.config.update(ems_config_echo(cfg));
  rep.config["log"] = base_name(a.log_path);
  rep.config["graph"] = base_name(a.graph_path);
  rep.config["model"] = base_name(a.model_path);
  rep.config["folds"] = a.folds;
  rep.config["horizon"] = a.horizon;
  rep.config["threshold"] = a.threshold;
  rep.config["draws"] = a.draws;
  emit_report(rep, a.common.out, a.common.format, a.common.timings);
  return 0;
}

int cmd_bench(const BenchArgs& a) {
  const Exec exec = a.common.exec_policy();
  if (a.engines.empty()) throw ValidationError("--engines must list at least one engine");
  if (a.runs == 0) throw ValidationError("--runs must be positive");
  std::vector<EngineKind> kinds;
  for (const std::string& e : a.engines) kinds.push_back(engine_from_string(e));

  ExperimentReport rep;
  Stopwatch watch;
  SocialItemGraph g;
  if (!a.model_path.empty()) {
    g = load_model(a.model_path);
  } else {
    SyntheticSpec sp;
    sp.nodes = a.nodes;
    sp.hyperedges = a.hyperedges;
    sp.avg_in_degree = a.hyperedges > 0 ? 0.0 : a.avg_in_degree;
    sp.min_sources = a.min_sources;
    sp.max_sources = a.max_sources;
    sp.min_prob = a.min_prob;
    sp.max_prob = a.max_prob;
    sp.seed = a.common.seed;
    g = generate_synthetic(sp);
  }
  std::vector<NodeId> seeds;
  if (!a.seeds_path.empty()) {
    seeds = sorted_unique_ids(g, node_ids_of(g, load_seed_nodes(a.seeds_path)));
  } else {
    seeds = ran_select(g, a.k, rng::hash2(a.common.seed, 0xbe9c5eedull), 1)[0];
  }
  if (seeds.empty()) throw ValidationError("empty seed set");
  rep.timings.emplace_back("instance", watch.lap());

  json engines = json::array();
  std::optional<double> shared_mean;
  EstimateResult last{};
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    Stopwatch ew;
    EngineContext ctx(g, kinds[i]);
    const double build_s = ew.lap();
    const EstimateResult er = estimate_adoption(ctx, seeds, a.runs, a.common.seed, exec);
    const double run_s = ew.lap();
    std::cout << "engine=" << engine_name(kinds[i]) << " mean=" << er.mean
              << " std_error=" << er.std_err << " build_s=" << build_s
              << " run_s=" << run_s << "\n";
    // All engines consume the same draws, so the estimates must agree to the
    // last bit; a mismatch is an engine bug, not noise.
    if (shared_mean && er.mean != *shared_mean)
      throw std::logic_error("engines disagree on adoption under a shared seed");
    shared_mean = er.mean;
    last = er;
    json row;
    row["engine"] = engine_name(kinds[i]);
    row["mean"] = er.mean;
    row["std_error"] = er.std_err;
    engines.push_back(std::move(row));
    rep.timings.emplace_back(std::string("build.") + engine_name(kinds[i]), build_s);
    rep.timings.emplace_back(std::string("run.") + engine_name(kinds[i]), run_s);
  }
  check_adoption_floor(last.mean, seeds.size());

  rep.command = "bench";
  rep.algorithm = "bench";
  for (std::size_t i = 0; i < a.engines.size(); ++i)
    rep.engine += (i ? "," : "") + a.engines[i];
  rep.k = static_cast<int>(seeds.size());
  rep.rng_seed = a.common.seed;
  rep.runs = a.runs;
  rep.seeds = public_nodes(g, seeds);
  rep.adoption = last.mean;
  rep.std_error = last.std_err;
  rep.extra["engines"] = std::move(engines);
  rep.config = common_config(a.common);
  rep.config["model"] = base_name(a.model_path);
  rep.config["nodes"] = a.nodes;
  rep.config["hyperedges"] = a.hyperedges;
  rep.config["avg_in_degree"] = a.avg_in_degree;
  rep.config["min_sources"] = a.min_sources;
  rep.config["max_sources"] = a.max_sources;
  rep.config["min_prob"] = a.min_prob;
  rep.config["max_prob"] = a.max_prob;
  rep.config["seeds"] = base_name(a.seeds_path);
  rep.config["k"] = a.k;
  rep.config["runs"] = a.runs;
  rep.config["engines"] = a.engines;
  emit_report(rep, a.common.out, a.common.format, a.common.timings);
  return 0;
}

}  // namespace sigmax
