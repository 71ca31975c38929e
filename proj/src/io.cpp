#include "sigmax/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace sigmax {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

// getline with CRLF tolerance.
bool next_line(std::ifstream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

[[noreturn]] void bad_line(const std::string& path, int lineno, const std::string& what) {
  throw ValidationError(path + ":" + std::to_string(lineno) + ": " + what);
}

std::int64_t parse_timestamp(const std::string& s, const std::string& path, int lineno) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || s.empty())
    bad_line(path, lineno, "timestamp is not an integer: '" + s + "'");
  return v;
}

json node_to_json(const PurchaseNode& n) { return json::array({n.user, n.item}); }

PurchaseNode node_from_json(const json& j, const std::string& path, int lineno) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    bad_line(path, lineno, "node must be a [\"user\",\"item\"] pair");
  return {j[0].get<std::string>(), j[1].get<std::string>()};
}

}  // namespace

namespace {

std::vector<std::pair<std::string, std::string>> read_social_edges(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  int lineno = 0;
  while (next_line(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 2) bad_line(path, lineno, "expected 2 tab-separated fields");
    if (f[0].empty() || f[1].empty()) bad_line(path, lineno, "empty user id");
    if (f[0] == f[1]) bad_line(path, lineno, "self-loop " + f[0] + " -> " + f[1]);
    edges.emplace_back(std::move(f[0]), std::move(f[1]));
  }
  return edges;
}

}  // namespace

SocialGraph load_social_graph(const std::string& path) {
  return SocialGraph::from_edges(read_social_edges(path));
}

SocialGraph load_social_graph(const std::string& path,
                              const std::vector<std::string>& extra_users) {
  return SocialGraph::from_edges(read_social_edges(path), extra_users);
}

ActionLog load_action_log(const std::string& path) {
  std::ifstream in = open_input(path);
  ActionLog log;
  std::string line;
  int lineno = 0;
  while (next_line(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 3) bad_line(path, lineno, "expected 3 tab-separated fields");
    if (f[0].empty() || f[1].empty()) bad_line(path, lineno, "empty user or item id");
    log.records.push_back({{std::move(f[0]), std::move(f[1])},
                           parse_timestamp(f[2], path, lineno)});
  }
  std::stable_sort(log.records.begin(), log.records.end(),
                   [](const ActionRecord& a, const ActionRecord& b) { return a.t < b.t; });
  return log;
}

std::vector<PurchaseNode> load_seed_nodes(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<PurchaseNode> out;
  std::string line;
  int lineno = 0;
  while (next_line(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 2) bad_line(path, lineno, "expected 2 tab-separated fields");
    if (f[0].empty() || f[1].empty()) bad_line(path, lineno, "empty user or item id");
    out.push_back({std::move(f[0]), std::move(f[1])});
  }
  return out;
}

void save_model(const SocialItemGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  for (int i = 0; i < g.edge_count(); ++i) {
    const Hyperedge e = g.edge_as_public(i);
    json row;  // keys serialize sorted: dest, p, sources
    json srcs = json::array();
    for (const PurchaseNode& s : e.sources) srcs.push_back(node_to_json(s));
    row["sources"] = std::move(srcs);
    row["dest"] = node_to_json(e.dest);
    row["p"] = e.prob;
    out << row.dump() << '\n';
  }
  if (!out) throw ValidationError("write failed for " + path);
}

SocialItemGraph load_model(const std::string& path, bool allow_empty) {
  std::ifstream in = open_input(path);
  std::vector<Hyperedge> edges;
  std::vector<PurchaseNode> nodes;
  std::string line;
  int lineno = 0;
  while (next_line(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      bad_line(path, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!row.is_object() || !row.contains("sources") || !row.contains("dest") ||
        !row.contains("p"))
      bad_line(path, lineno, "expected object with sources, dest, p");
    if (!row["sources"].is_array() || row["sources"].empty())
      bad_line(path, lineno, "sources must be a nonempty array");
    if (!row["p"].is_number()) bad_line(path, lineno, "p must be a number");
    Hyperedge e;
    for (const json& s : row["sources"]) e.sources.push_back(node_from_json(s, path, lineno));
    e.dest = node_from_json(row["dest"], path, lineno);
    e.prob = row["p"].get<double>();
    if (e.prob < 0.0 || e.prob > 1.0)
      bad_line(path, lineno, "p outside [0, 1]");
    for (const PurchaseNode& s : e.sources) {
      if (s == e.dest) bad_line(path, lineno, "dest appears among sources");
      nodes.push_back(s);
    }
    nodes.push_back(e.dest);
    edges.push_back(std::move(e));
  }
  if (edges.empty() && !allow_empty)
    throw ValidationError(path + ": model has no hyperedges (pass --allow-empty if intentional)");
  return build_graph(std::move(nodes), edges);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
  if (!out) throw ValidationError("write failed for " + path);
}

}  // namespace sigmax
