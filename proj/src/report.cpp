#include "sigmax/report.hpp"

#include <fstream>
#include <iostream>
#include <map>

namespace sigmax {
namespace {

using nlohmann::json;

void flatten(const json& j, const std::string& prefix,
             std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (const auto& [key, val] : j.items())
      flatten(val, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "." + std::to_string(i), out);
    if (j.empty()) out[prefix] = "[]";
  } else {
    out[prefix] = j.dump();
  }
}

}  // namespace

json report_to_json(const ExperimentReport& r, bool with_timings) {
  json j;
  j["command"] = r.command;
  j["algorithm"] = r.algorithm;
  j["engine"] = r.engine;
  j["k"] = r.k;
  j["seed"] = r.rng_seed;
  json adoption;
  adoption["estimate"] = r.adoption;
  adoption["std_error"] = r.std_error;
  adoption["runs"] = r.runs;
  j["adoption"] = std::move(adoption);
  json seeds = json::array();
  for (const PurchaseNode& s : r.seeds) seeds.push_back(json::array({s.user, s.item}));
  j["seeds"] = std::move(seeds);
  j["config"] = r.config;
  for (const auto& [key, val] : r.extra.items()) j[key] = val;
  if (with_timings) {
    json t;
    for (const auto& [phase, secs] : r.timings) t[phase] = secs;
    j["timings"] = std::move(t);
  }
  return j;
}

std::string render_report(const ExperimentReport& r, const std::string& format,
                          bool with_timings) {
  const json j = report_to_json(r, with_timings);
  if (format == "json") return j.dump(2) + "\n";
  if (format == "csv") {
    std::map<std::string, std::string> rows;
    flatten(j, "", rows);
    std::string out = "key,value\n";
    for (const auto& [key, val] : rows) out += key + "," + val + "\n";
    return out;
  }
  throw ValidationError("unknown report format '" + format + "' (expected json or csv)");
}

void emit_report(const ExperimentReport& r, const std::string& out_path,
                 const std::string& format, bool with_timings) {
  const std::string text = render_report(r, format, with_timings);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + out_path);
  out << text;
  if (!out) throw ValidationError("write failed for " + out_path);
}

}  // namespace sigmax
