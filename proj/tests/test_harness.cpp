#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "sigmax/commands.hpp"
#include "sigmax/io.hpp"
#include "sigmax/metrics.hpp"
#include "sigmax/report.hpp"
#include "sigmax/synthetic.hpp"

using namespace sigmax;
using namespace testutil;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("sigmax_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  REQUIRE(out.good());
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SIGMAX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

bool edges_equal(const SocialItemGraph& a, const SocialItemGraph& b) {
  if (a.edge_count() != b.edge_count()) return false;
  for (int i = 0; i < a.edge_count(); ++i) {
    const Hyperedge ea = a.edge_as_public(i);
    const Hyperedge eb = b.edge_as_public(i);
    if (ea.sources != eb.sources || ea.dest != eb.dest || ea.prob != eb.prob)
      return false;
  }
  return true;
}

// Chain-of-stars model: s triggers each of a, b, c, d at 0.9.
SocialItemGraph fan_model() {
  std::vector<PurchaseNode> nodes = {pn("s", "i"), pn("a", "i"), pn("b", "i"),
                                     pn("c", "i"), pn("d", "i")};
  std::vector<Hyperedge> edges;
  for (const char* u : {"a", "b", "c", "d"})
    edges.push_back(he({pn("s", "i")}, pn(u, "i"), 0.9));
  return build_graph(nodes, edges);
}

ExperimentReport golden_report() {
  ExperimentReport r;
  r.command = "select";
  r.algorithm = "hag";
  r.engine = "sigindex";
  r.k = 2;
  r.rng_seed = 7;
  r.runs = 300;
  r.seeds = {pn("u1", "x"), pn("u2", "x")};
  r.adoption = 7.0;
  r.std_error = 0.25;
  r.config["model"] = "toy.jsonl";
  r.config["runs"] = 300;
  r.extra["note"] = "schema probe";
  r.timings = {{"load", 0.5}, {"select", 1.5}};
  return r;
}

}  // namespace

TEST_CASE("social graph loader") {
  TempDir tmp;
  SUBCASE("one edge per tab-separated line") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "a\tb\n");
    const SocialGraph g = load_social_graph(p);
    CHECK(g.user_count() == 2);
    REQUIRE(g.user_id("a").has_value());
    CHECK(g.out_neighbors(*g.user_id("a")).size() == 1);
  }
  SUBCASE("comments, blanks, CRLF, duplicates") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "# header\n\na\tb\r\na\tb\nb\tc\n");
    const SocialGraph g = load_social_graph(p);
    CHECK(g.user_count() == 3);
    CHECK(g.out_neighbors(*g.user_id("a")).size() == 1);  // duplicate collapsed
  }
  SUBCASE("empty file gives an empty graph") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "");
    CHECK(load_social_graph(p).user_count() == 0);
  }
  SUBCASE("malformed line names the file and line number") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "a b c\n");
    const std::string msg = error_of([&] { load_social_graph(p); });
    CHECK(contains(msg, p + ":1:"));
  }
  SUBCASE("error on a later line carries its number") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "a\tb\n# fine\na\tb\tc\n");
    CHECK(contains(error_of([&] { load_social_graph(p); }), ":3:"));
  }
  SUBCASE("self-loops are rejected") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "a\ta\n");
    CHECK_THROWS_AS(load_social_graph(p), ValidationError);
  }
  SUBCASE("extra users join the vertex set") {
    const std::string p = tmp.file("g.tsv");
    write_file(p, "a\tb\n");
    const SocialGraph g = load_social_graph(p, {"zed", "a"});
    CHECK(g.user_count() == 3);
    CHECK(g.user_id("zed").has_value());
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_social_graph(tmp.file("nope.tsv")), ValidationError);
  }
}

TEST_CASE("action log loader") {
  TempDir tmp;
  SUBCASE("records sorted by timestamp, ties keep file order") {
    const std::string p = tmp.file("log.tsv");
    write_file(p, "u2\ti\t5\nu1\ti\t1\nu3\ti\t5\n");
    const ActionLog log = load_action_log(p);
    REQUIRE(log.records.size() == 3);
    CHECK(log.records[0].node == pn("u1", "i"));
    CHECK(log.records[1].node == pn("u2", "i"));  // stable: u2 before u3 at t=5
    CHECK(log.records[2].node == pn("u3", "i"));
  }
  SUBCASE("negative timestamps are legal") {
    const std::string p = tmp.file("log.tsv");
    write_file(p, "u\ti\t-12\n");
    const ActionLog log = load_action_log(p);
    REQUIRE(log.records.size() == 1);
    CHECK(log.records[0].t == -12);
  }
  SUBCASE("non-integer timestamp errors with the line number") {
    const std::string p = tmp.file("log.tsv");
    write_file(p, "u\ti\t1\nu\tj\tlater\n");
    const std::string msg = error_of([&] { load_action_log(p); });
    CHECK(contains(msg, ":2:"));
    CHECK(contains(msg, "timestamp"));
  }
  SUBCASE("wrong field count errors") {
    const std::string p = tmp.file("log.tsv");
    write_file(p, "u\ti\n");
    CHECK(contains(error_of([&] { load_action_log(p); }), ":1:"));
  }
}

TEST_CASE("seed node loader") {
  TempDir tmp;
  const std::string p = tmp.file("seeds.tsv");
  write_file(p, "# seeds\nu1\tx\nu2\ty\n");
  const std::vector<PurchaseNode> seeds = load_seed_nodes(p);
  REQUIRE(seeds.size() == 2);
  CHECK(seeds[0] == pn("u1", "x"));
  CHECK(seeds[1] == pn("u2", "y"));
  write_file(p, "u1\n");
  CHECK_THROWS_AS(load_seed_nodes(p), ValidationError);
}

TEST_CASE("model round-trip is lossless") {
  TempDir tmp;
  SUBCASE("nine-edge instance") {
    const SocialItemGraph g = nine_edge_graph();
    const std::string p = tmp.file("m.jsonl");
    save_model(g, p);
    const SocialItemGraph back = load_model(p);
    CHECK(edges_equal(g, back));
    CHECK(back.node_count() == g.node_count());  // every node touches an edge here
  }
  SUBCASE("random instances keep probabilities bit-exact") {
    for (std::uint64_t gs = 900; gs < 908; ++gs) {
      const SocialItemGraph g = random_graph(gs, 10, 14, 24);
      if (g.edge_count() == 0) continue;
      const std::string p = tmp.file("m" + std::to_string(gs) + ".jsonl");
      save_model(g, p);
      CHECK(edges_equal(g, load_model(p)));
    }
  }
  SUBCASE("isolated nodes do not survive") {
    std::vector<PurchaseNode> nodes = {pn("a", "x"), pn("b", "x"), pn("lone", "x")};
    const SocialItemGraph g =
        build_graph(nodes, {he({pn("a", "x")}, pn("b", "x"), 0.5)});
    const std::string p = tmp.file("m.jsonl");
    save_model(g, p);
    const SocialItemGraph back = load_model(p);
    CHECK(back.node_count() == 2);
    CHECK(edges_equal(g, back));
  }
}

TEST_CASE("model loader rejects bad rows by line") {
  TempDir tmp;
  const std::string p = tmp.file("m.jsonl");
  const std::string good =
      R"({"sources":[["a","x"]],"dest":["b","x"],"p":0.5})" "\n";
  SUBCASE("p outside [0, 1]") {
    write_file(p, good + R"({"sources":[["a","x"]],"dest":["c","x"],"p":1.5})" "\n");
    CHECK(contains(error_of([&] { load_model(p); }), ":2:"));
  }
  SUBCASE("empty sources") {
    write_file(p, R"({"sources":[],"dest":["b","x"],"p":0.5})" "\n");
    CHECK(contains(error_of([&] { load_model(p); }), ":1:"));
  }
  SUBCASE("malformed JSON") {
    write_file(p, good + "{nope\n");
    CHECK(contains(error_of([&] { load_model(p); }), ":2:"));
  }
  SUBCASE("dest among sources") {
    write_file(p, R"({"sources":[["b","x"]],"dest":["b","x"],"p":0.5})" "\n");
    CHECK_THROWS_AS(load_model(p), ValidationError);
  }
  SUBCASE("empty model needs explicit permission") {
    write_file(p, "# nothing\n");
    CHECK_THROWS_AS(load_model(p), ValidationError);
    CHECK(load_model(p, /*allow_empty=*/true).edge_count() == 0);
  }
}

TEST_CASE("set scores") {
  auto nodes = [](std::initializer_list<const char*> users) {
    std::vector<PurchaseNode> out;
    for (const char* u : users) out.push_back(pn(u, "i"));
    return out;
  };
  SUBCASE("worked example") {
    const SetScores s =
        score_sets(nodes({"a", "b", "c", "d"}), nodes({"a", "b", "x", "y", "z"}));
    CHECK(s.precision == 0.5);
    CHECK(s.recall == 0.4);
    CHECK(s.f1 == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(!s.degenerate);
  }
  SUBCASE("perfect prediction") {
    const SetScores s = score_sets(nodes({"a", "b"}), nodes({"b", "a"}));
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
    CHECK(!s.degenerate);
  }
  SUBCASE("empty prediction is flagged, not NaN") {
    const SetScores s = score_sets({}, nodes({"a"}));
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);
    CHECK(s.degenerate);
  }
  SUBCASE("duplicates collapse before scoring") {
    const SetScores s = score_sets(nodes({"a", "a", "b"}), nodes({"a"}));
    CHECK(s.precision == 0.5);
    CHECK(s.recall == 1.0);
  }
}

TEST_CASE("one-step purchase prediction") {
  const SocialItemGraph model = fan_model();
  ActionLog train;
  train.records = {{pn("s", "i"), 0}};
  ActionLog test;
  for (const char* u : {"a", "b", "x", "y", "z"}) test.records.push_back({pn(u, "i"), 1});

  SUBCASE("threshold mode reproduces the worked example") {
    PredictionConfig pc;
    const PredictionResult r = evaluate_prediction(model, train, test, pc);
    CHECK(r.predicted == 4);
    CHECK(r.actual == 5);
    CHECK(r.scores.precision == 0.5);
    CHECK(r.scores.recall == 0.4);
    CHECK(r.scores.f1 == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  }
  SUBCASE("high threshold empties the prediction") {
    PredictionConfig pc;
    pc.threshold = 0.95;
    const PredictionResult r = evaluate_prediction(model, train, test, pc);
    CHECK(r.predicted == 0);
    CHECK(r.scores.degenerate);
  }
  SUBCASE("horizon cuts late truth") {
    PredictionConfig pc;
    ActionLog spread;
    spread.records = {{pn("a", "i"), 1}, {pn("b", "i"), 5}};
    pc.horizon = 1;  // train tail is t=0, so only t <= 1 counts
    const PredictionResult r = evaluate_prediction(model, train, spread, pc);
    CHECK(r.actual == 1);
    pc.horizon = -1;
    CHECK(evaluate_prediction(model, train, spread, pc).actual == 2);
  }
  SUBCASE("re-buys of observed nodes leave the truth set") {
    PredictionConfig pc;
    ActionLog rebuy = test;
    rebuy.records.push_back({pn("s", "i"), 2});
    const PredictionResult r = evaluate_prediction(model, train, rebuy, pc);
    CHECK(r.actual == 5);
  }
  SUBCASE("draw mode is deterministic under its seed") {
    PredictionConfig pc;
    pc.draws = 40;
    pc.seed = 11;
    const PredictionResult a = evaluate_prediction(model, train, test, pc);
    const PredictionResult b = evaluate_prediction(model, train, test, pc);
    CHECK(a.scores.precision == b.scores.precision);
    CHECK(a.scores.recall == b.scores.recall);
    CHECK(a.scores.f1 == b.scores.f1);
    CHECK(a.predicted == b.predicted);
    CHECK(a.scores.precision >= 0.0);
    CHECK(a.scores.precision <= 1.0);
    CHECK(a.predicted >= 0);
    CHECK(a.predicted <= 4);
    pc.seed = 12;
    // a different seed is allowed to differ; just confirm it still scores
    const PredictionResult c = evaluate_prediction(model, train, test, pc);
    CHECK(c.scores.recall >= 0.0);
  }
  SUBCASE("config validation") {
    PredictionConfig pc;
    pc.threshold = 1.5;
    CHECK_THROWS_AS(evaluate_prediction(model, train, test, pc), ValidationError);
    pc = {};
    pc.draws = -1;
    CHECK_THROWS_AS(evaluate_prediction(model, train, test, pc), ValidationError);
  }
}

TEST_CASE("synthetic instances") {
  SUBCASE("zero hyperedges requested") {
    SyntheticSpec sp;
    sp.nodes = 5;
    sp.hyperedges = 0;
    sp.max_sources = 2;
    CHECK(generate_synthetic(sp).edge_count() == 0);
  }
  SUBCASE("deterministic under the seed") {
    SyntheticSpec sp;
    sp.nodes = 40;
    sp.avg_in_degree = 4.0;
    sp.seed = 31;
    const SocialItemGraph a = generate_synthetic(sp);
    const SocialItemGraph b = generate_synthetic(sp);
    CHECK(edges_equal(a, b));
    sp.seed = 32;
    CHECK(!edges_equal(a, generate_synthetic(sp)));
  }
  SUBCASE("average in-degree is hit exactly by construction") {
    SyntheticSpec sp;
    sp.nodes = 100;
    sp.avg_in_degree = 10.0;
    const SocialItemGraph g = generate_synthetic(sp);
    CHECK(g.edge_count() == 1000);  // each hyperedge contributes one in-edge
    const double mean = static_cast<double>(g.edge_count()) / g.node_count();
    CHECK(std::abs(mean - 10.0) <= 2.0);
    // distinct skeletons, dest never among sources, probs inside the band
    for (int i = 0; i < g.edge_count(); ++i) {
      const Hyperedge e = g.edge_as_public(i);
      for (const PurchaseNode& s : e.sources) CHECK(s != e.dest);
      CHECK(e.prob >= sp.min_prob);
      CHECK(e.prob <= sp.max_prob);
      CHECK(e.sources.size() >= 1);
      CHECK(e.sources.size() <= 3);
    }
  }
  SUBCASE("node labels sort in grid order") {
    SyntheticSpec sp;
    sp.nodes = 12;
    const SocialItemGraph g = generate_synthetic(sp);
    CHECK(g.node_count() == 12);
    for (NodeId v = 1; v < g.node_count(); ++v)
      CHECK(g.node(v - 1) < g.node(v));
  }
  SUBCASE("infeasible density is rejected") {
    SyntheticSpec sp;
    sp.nodes = 3;
    sp.hyperedges = 7;  // only 3 * 2 = 6 singleton skeletons exist
    sp.min_sources = 1;
    sp.max_sources = 1;
    CHECK_THROWS_AS(generate_synthetic(sp), ValidationError);
    sp.hyperedges = 6;
    CHECK(generate_synthetic(sp).edge_count() == 6);
  }
  SUBCASE("bad specs") {
    SyntheticSpec sp;
    sp.nodes = 0;
    CHECK_THROWS_AS(generate_synthetic(sp), ValidationError);
    sp = {};
    sp.max_sources = sp.nodes;
    CHECK_THROWS_AS(generate_synthetic(sp), ValidationError);
    sp = {};
    sp.min_prob = 0.8;
    sp.max_prob = 0.2;
    CHECK_THROWS_AS(generate_synthetic(sp), ValidationError);
  }
}

TEST_CASE("report rendering matches the golden files") {
  const ExperimentReport r = golden_report();
  const std::string golden_dir = SIGMAX_GOLDEN_DIR;
  SUBCASE("json") {
    CHECK(render_report(r, "json", false) == slurp(golden_dir + "/report.json"));
  }
  SUBCASE("csv") {
    CHECK(render_report(r, "csv", false) == slurp(golden_dir + "/report.csv"));
  }
  SUBCASE("timings appear only on request") {
    CHECK(!contains(render_report(r, "json", false), "timings"));
    const std::string timed = render_report(r, "json", true);
    CHECK(contains(timed, "\"timings\""));
    CHECK(contains(timed, "\"load\""));
  }
  SUBCASE("unknown format") {
    CHECK_THROWS_AS(render_report(r, "yaml", false), ValidationError);
  }
}

TEST_CASE("cli: simulate report is bit-stable and matches its golden") {
  TempDir tmp;
  save_model(nine_edge_graph(), tmp.file("nine.jsonl"));
  write_file(tmp.file("seeds.tsv"), "u2\tx\n");
  const std::string args = "simulate --model " + tmp.file("nine.jsonl") + " --seeds " +
                           tmp.file("seeds.tsv") + " --engine sigindex --runs 64 --seed 9";
  CHECK(run_cli(args + " --out " + tmp.file("rep1.json")) == 0);
  CHECK(run_cli(args + " --out " + tmp.file("rep2.json")) == 0);
  const std::string rep = slurp(tmp.file("rep1.json"));
  CHECK(rep == slurp(tmp.file("rep2.json")));
  CHECK(rep == slurp(std::string(SIGMAX_GOLDEN_DIR) + "/simulate_nine.json"));

  // the same inputs from a different directory give the same bytes: the
  // config echoes basenames, not paths
  TempDir other;
  save_model(nine_edge_graph(), other.file("nine.jsonl"));
  write_file(other.file("seeds.tsv"), "u2\tx\n");
  CHECK(run_cli("simulate --model " + other.file("nine.jsonl") + " --seeds " +
                other.file("seeds.tsv") + " --engine sigindex --runs 64 --seed 9 --out " +
                other.file("rep.json")) == 0);
  CHECK(slurp(other.file("rep.json")) == rep);
}

TEST_CASE("cli: learn then select then simulate") {
  TempDir tmp;
  // A's purchase of i1 precedes i2 twice; the learned model carries one
  // certain edge and seeds from it light both nodes.
  write_file(tmp.file("log.tsv"), "A\ti1\t1\nA\ti2\t2\n");
  CHECK(run_cli("learn --log " + tmp.file("log.tsv") + " --model " + tmp.file("m.jsonl") +
                " --out " + tmp.file("learn.json")) == 0);
  const SocialItemGraph m = load_model(tmp.file("m.jsonl"));
  REQUIRE(m.edge_count() == 1);
  CHECK(m.edge_as_public(0).prob == 1.0);

  CHECK(run_cli("select --model " + tmp.file("m.jsonl") +
                " --algo hag --k 1 --score exact --out " + tmp.file("sel.json")) == 0);
  const nlohmann::json sel = nlohmann::json::parse(slurp(tmp.file("sel.json")));
  CHECK(sel["adoption"]["estimate"].get<double>() == 2.0);
  CHECK(sel["seeds"].size() == 1);
  CHECK(sel["seeds"][0][1].get<std::string>() == "i1");

  write_file(tmp.file("seeds.tsv"), "A\ti1\n");
  CHECK(run_cli("simulate --model " + tmp.file("m.jsonl") + " --seeds " +
                tmp.file("seeds.tsv") + " --runs 8 --out " + tmp.file("sim.json")) == 0);
  const nlohmann::json sim = nlohmann::json::parse(slurp(tmp.file("sim.json")));
  CHECK(sim["adoption"]["estimate"].get<double>() == 2.0);
  CHECK(sim["adoption"]["std_error"].get<double>() == 0.0);
}

TEST_CASE("cli: eval reproduces the prediction example") {
  TempDir tmp;
  save_model(fan_model(), tmp.file("fan.jsonl"));
  // First half of the log observes s five times; second half is the truth
  // fold {a, b, x, y, z}, of which the model can see a and b.
  std::string log;
  for (int t = -4; t <= 0; ++t) log += "s\ti\t" + std::to_string(t) + "\n";
  for (const char* u : {"a", "b", "x", "y", "z"}) log += std::string(u) + "\ti\t1\n";
  write_file(tmp.file("log.tsv"), log);
  const std::string args = "eval --log " + tmp.file("log.tsv") + " --model " +
                           tmp.file("fan.jsonl") + " --folds 2";
  CHECK(run_cli(args + " --out " + tmp.file("ev1.json")) == 0);
  const nlohmann::json ev = nlohmann::json::parse(slurp(tmp.file("ev1.json")));
  CHECK(ev["prediction"]["precision"].get<double>() == 0.5);
  CHECK(ev["prediction"]["recall"].get<double>() == 0.4);
  CHECK(ev["prediction"]["f1"].get<double>() ==
        doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  REQUIRE(ev["prediction"]["folds"].size() == 1);
  CHECK(ev["prediction"]["folds"][0]["predicted"].get<int>() == 4);
  CHECK(ev["prediction"]["folds"][0]["actual"].get<int>() == 5);
  CHECK(ev["algorithm"].get<std::string>() == "fixed-model");

  CHECK(run_cli(args + " --out " + tmp.file("ev2.json")) == 0);
  CHECK(slurp(tmp.file("ev1.json")) == slurp(tmp.file("ev2.json")));
}

TEST_CASE("cli: bench runs every engine on one instance") {
  TempDir tmp;
  CHECK(run_cli("bench --nodes 30 --avg-in-degree 3 --k 3 --runs 50 --seed 5 --out " +
                tmp.file("b1.json")) == 0);
  const nlohmann::json b = nlohmann::json::parse(slurp(tmp.file("b1.json")));
  REQUIRE(b["engines"].size() == 3);
  const double mean = b["engines"][0]["mean"].get<double>();
  // cmd_bench aborts with a nonzero exit if the engines disagree, so equality
  // here is belt and braces
  CHECK(b["engines"][1]["mean"].get<double>() == mean);
  CHECK(b["engines"][2]["mean"].get<double>() == mean);
  CHECK(b["adoption"]["estimate"].get<double>() == mean);
  CHECK(mean >= 3.0);

  CHECK(run_cli("bench --nodes 30 --avg-in-degree 3 --k 3 --runs 50 --seed 5 --out " +
                tmp.file("b2.json")) == 0);
  CHECK(slurp(tmp.file("b1.json")) == slurp(tmp.file("b2.json")));
}

TEST_CASE("cli: exit codes") {
  TempDir tmp;
  SUBCASE("help exits zero") { CHECK(run_cli("--help") == 0); }
  SUBCASE("unknown flag is a usage error") {
    CHECK(run_cli("select --bogus 1") == 2);
  }
  SUBCASE("missing required flags") {
    CHECK(run_cli("simulate") == 2);
    CHECK(run_cli("learn --log only.tsv") == 2);
  }
  SUBCASE("validation failures inside a command") {
    write_file(tmp.file("bad.jsonl"),
               R"({"sources":[["a","x"]],"dest":["b","x"],"p":1.5})" "\n");
    write_file(tmp.file("seeds.tsv"), "a\tx\n");
    CHECK(run_cli("simulate --model " + tmp.file("bad.jsonl") + " --seeds " +
                  tmp.file("seeds.tsv")) == 2);
  }
  SUBCASE("cap violations exit three") {
    save_model(nine_edge_graph(), tmp.file("nine.jsonl"));
    CHECK(run_cli("select --model " + tmp.file("nine.jsonl") +
                  " --algo opt --k 2 --opt-cap 5") == 3);
    CHECK(run_cli("select --model " + tmp.file("nine.jsonl") +
                  " --algo hag --k 1 --score exact --exact-cap 3") == 3);
  }
  SUBCASE("unreadable input") {
    CHECK(run_cli("select --model " + tmp.file("missing.jsonl")) == 2);
  }
}

TEST_CASE("cli: csv format flattens the same report") {
  TempDir tmp;
  save_model(nine_edge_graph(), tmp.file("nine.jsonl"));
  write_file(tmp.file("seeds.tsv"), "u2\tx\n");
  CHECK(run_cli("simulate --model " + tmp.file("nine.jsonl") + " --seeds " +
                tmp.file("seeds.tsv") + " --runs 16 --format csv --out " +
                tmp.file("rep.csv")) == 0);
  const std::string csv = slurp(tmp.file("rep.csv"));
  CHECK(contains(csv, "key,value\n"));
  CHECK(contains(csv, "adoption.estimate,"));
  CHECK(contains(csv, "config.engine,\"sigindex\""));
  CHECK(contains(csv, "seeds.0.0,\"u2\""));
}
