#include <iostream>

#include <CLI11.hpp>

#include "sigmax/commands.hpp"
#include "sigmax/core.hpp"

namespace {

void add_common(CLI::App* cmd, sigmax::CommonArgs& c) {
  // --h is the kernel bandwidth, so help keeps only its long spelling.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--out", c.out, "Report file (stdout if omitted)");
  cmd->add_option("--format", c.format, "Report format: json or csv")->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_flag("--timings", c.timings, "Include wall-clock phase timings in the report");
  cmd->add_option("--exec", c.exec, "Kernel execution: parallel or serial")->capture_default_str();
}

void add_learn_knobs(CLI::App* cmd, auto& a) {
  cmd->add_option("--mu", a.mu, "Max candidate source-set size")->capture_default_str();
  cmd->add_option("--mu-guard", a.mu_guard, "Hard ceiling on --mu")->capture_default_str();
  cmd->add_option("--item-window", a.item_window, "Same-user lookback")->capture_default_str();
  cmd->add_option("--social-window", a.social_window, "In-neighbor lookback")->capture_default_str();
  cmd->add_option("--pool-cap", a.pool_cap, "Per-action trigger pool size")->capture_default_str();
  cmd->add_option("--h", a.bandwidth, "Kernel bandwidth; 0 = plain EM")->capture_default_str();
  cmd->add_option("--theta", a.theta, "Prune edges with p <= theta")->capture_default_str();
  cmd->add_option("--init-p", a.init_p, "Initial edge probability")->capture_default_str();
  cmd->add_option("--tol", a.tol, "Convergence threshold on max |delta p|")->capture_default_str();
  cmd->add_option("--max-iters", a.max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--embed-dim", a.embed_dim, "Embedding dimension per id")->capture_default_str();
  cmd->add_flag("--copurchase", a.item_copurchase,
                "Embed items from co-purchase hops instead of a complete graph");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sigmax: influence maximization on social-item hypergraphs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  sigmax::LearnArgs learn;
  CLI::App* cl = app.add_subcommand("learn", "Fit hyperedge probabilities from an action log");
  add_common(cl, learn.common);
  cl->add_option("--log", learn.log_path, "Action log TSV")->required();
  cl->add_option("--graph", learn.graph_path, "Social graph TSV");
  cl->add_option("--model", learn.model_out, "Output model JSONL")->required();
  add_learn_knobs(cl, learn);
  cl->add_flag("--allow-empty", learn.allow_empty, "Write the model even with zero edges");

  sigmax::SelectArgs sel;
  CLI::App* cs = app.add_subcommand("select", "Choose seed nodes maximizing expected adoption");
  add_common(cs, sel.common);
  cs->add_option("--model", sel.model_path, "Model JSONL")->required();
  cs->add_option("--algo", sel.algo, "hag | sns | ran | soc | opt")->capture_default_str();
  cs->add_option("--k", sel.k, "Seed budget")->capture_default_str();
  cs->add_option("--engine", sel.engine, "naive | sorting | sigindex")->capture_default_str();
  cs->add_option("--score", sel.score, "Candidate scoring: mc | exact")->capture_default_str();
  cs->add_option("--runs", sel.runs, "Monte Carlo runs per estimate")->capture_default_str();
  cs->add_option("--reps", sel.repetitions, "Random seed sets for --algo ran")->capture_default_str();
  cs->add_option("--opt-cap", sel.opt_cap, "Max k-subsets for --algo opt")->capture_default_str();
  cs->add_option("--exact-cap", sel.exact_cap, "Max uncertain edges for exact scoring")->capture_default_str();
  cs->add_option("--prune", sel.prune_threshold,
                 "Drop candidates whose gain fell to or below this value");
  cs->add_option("--restrict-items", sel.restrict_items,
                 "Only seed nodes whose item is listed (comma separated)")
      ->delimiter(',');
  cs->add_flag("--ioc-eval", sel.ioc_eval, "Also report adoption on the item-only restriction");
  cs->add_flag("--pad", sel.pad, "Top up with best singletons after an early stop");
  cs->add_flag("--allow-empty", sel.allow_empty, "Accept a model with zero edges");

  sigmax::SimulateArgs sim;
  CLI::App* cm = app.add_subcommand("simulate", "Estimate adoption for a fixed seed set");
  add_common(cm, sim.common);
  cm->add_option("--model", sim.model_path, "Model JSONL")->required();
  cm->add_option("--seeds", sim.seeds_path, "Seed nodes TSV")->required();
  cm->add_option("--engine", sim.engine, "naive | sorting | sigindex")->capture_default_str();
  cm->add_option("--runs", sim.runs, "Monte Carlo runs")->capture_default_str();
  cm->add_flag("--allow-empty", sim.allow_empty, "Accept a model with zero edges");

  sigmax::EvalArgs ev;
  CLI::App* ce = app.add_subcommand("eval", "Cross-validated purchase prediction scores");
  add_common(ce, ev.common);
  ce->add_option("--log", ev.log_path, "Action log TSV")->required();
  ce->add_option("--graph", ev.graph_path, "Social graph TSV");
  ce->add_option("--model", ev.model_path, "Fixed model JSONL (skips per-fold learning)");
  ce->add_option("--folds", ev.folds, "Contiguous time splits")->capture_default_str();
  ce->add_option("--horizon", ev.horizon, "Truth window after the train tail; -1 = whole fold")
      ->capture_default_str();
  ce->add_option("--threshold", ev.threshold, "Prediction probability threshold")->capture_default_str();
  ce->add_option("--draws", ev.draws, "Bernoulli-draw predictions averaged over this many draws")
      ->capture_default_str();
  add_learn_knobs(ce, ev);

  sigmax::BenchArgs bench;
  CLI::App* cb = app.add_subcommand("bench", "Time the diffusion engines on one instance");
  add_common(cb, bench.common);
  cb->add_option("--model", bench.model_path, "Model JSONL (otherwise synthetic)");
  cb->add_option("--nodes", bench.nodes, "Synthetic node count")->capture_default_str();
  cb->add_option("--hyperedges", bench.hyperedges, "Synthetic hyperedge count (overrides --avg-in-degree)")
      ->capture_default_str();
  cb->add_option("--avg-in-degree", bench.avg_in_degree, "Synthetic mean in-degree")->capture_default_str();
  cb->add_option("--min-sources", bench.min_sources, "Smallest source-set size")->capture_default_str();
  cb->add_option("--max-sources", bench.max_sources, "Largest source-set size")->capture_default_str();
  cb->add_option("--min-prob", bench.min_prob, "Lower edge probability bound")->capture_default_str();
  cb->add_option("--max-prob", bench.max_prob, "Upper edge probability bound")->capture_default_str();
  cb->add_option("--seeds", bench.seeds_path, "Seed nodes TSV (otherwise k random nodes)");
  cb->add_option("--k", bench.k, "Random seed count when --seeds is absent")->capture_default_str();
  cb->add_option("--runs", bench.runs, "Monte Carlo runs per engine")->capture_default_str();
  cb->add_option("--engines", bench.engines, "Engines to time (comma separated)")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are a validation failure
  }

  try {
    if (cl->parsed()) return sigmax::cmd_learn(learn);
    if (cs->parsed()) return sigmax::cmd_select(sel);
    if (cm->parsed()) return sigmax::cmd_simulate(sim);
    if (ce->parsed()) return sigmax::cmd_eval(ev);
    if (cb->parsed()) return sigmax::cmd_bench(bench);
  } catch (const sigmax::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sigmax::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
