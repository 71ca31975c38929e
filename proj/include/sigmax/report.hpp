#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sigmax/core.hpp"

namespace sigmax {

// Wall-clock phase timer. lap() returns seconds since construction or the
// previous lap.
class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - t0_).count();
    t0_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Uniform result record written by every CLI subcommand. Fields that do not
// apply to a command stay at their zero values so the schema never shifts.
// Timings are serialized only on request: they change run to run, and report
// files must be bit-identical under a fixed seed.
struct ExperimentReport {
  std::string command;
  std::string algorithm;
  std::string engine;
  int k = 0;
  std::uint64_t rng_seed = 0;
  std::uint64_t runs = 0;
  std::vector<PurchaseNode> seeds;
  double adoption = 0.0;
  double std_error = 0.0;
  nlohmann::json config = nlohmann::json::object();  // echo of the flags used
  nlohmann::json extra = nlohmann::json::object();   // command-specific payload
  std::vector<std::pair<std::string, double>> timings;
};

nlohmann::json report_to_json(const ExperimentReport& r, bool with_timings);

// format is "json" or "csv". CSV is the same tree flattened to sorted
// "dotted.key,value" lines with JSON-encoded values.
std::string render_report(const ExperimentReport& r, const std::string& format,
                          bool with_timings);

// Writes to out_path, or stdout when out_path is empty.
void emit_report(const ExperimentReport& r, const std::string& out_path,
                 const std::string& format, bool with_timings);

}  // namespace sigmax
