#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigrec/agent.hpp"
#include "sigrec/bench.hpp"
#include "sigrec/metrics.hpp"

namespace sigrec::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kBackend = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps a failure to its exit code and a one-line JSON error record.
int exit_code_for(const std::exception& e);
std::string error_line(const std::exception& e);

/// "medium=X,low=Y"; either key may be omitted. Throws UsageError.
SeverityWeights parse_weights(const std::string& spec, SeverityWeights base = {});

struct RunConfig {
  std::string command;
  std::string workspace;
  std::string backend = "scripted";  // scripted | remote
  std::string script;
  std::string endpoint;
  std::string model;
  int max_iters = 10;
  int max_turns = 16;
  int pool_size = 5;
  SeverityWeights weights;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  bool tools_enabled = true;
  bool feedback_enabled = true;
  StopRule stop_rule = StopRule::FirstAdmissible;

  /// Throws UsageError on out-of-range values.
  void validate() const;
  RefineOptions refine_options() const;
};

nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Reads a whole file; DataError when missing or unreadable.
std::string read_text(const std::filesystem::path& p);
nlohmann::json read_json(const std::filesystem::path& p);
/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& p, const std::string& text);
void write_json(const std::filesystem::path& p, const nlohmann::json& j);

nlohmann::json cmd_ingest(const std::filesystem::path& root);

struct LintEntry {
  std::string label;
  std::string candidate;
  DiagnosticSet diags;
};

/// A .json file holds [{"candidate", "original"?}, ...] (original defaults
/// to the candidate). Any other file is parsed as a header and each method
/// is linted against itself; malformed methods report as syntax errors.
std::vector<LintEntry> cmd_lint(const std::filesystem::path& file, const LintConfig& config = {});
std::string render_lint(const std::vector<LintEntry>& entries);
nlohmann::json lint_to_json(const std::vector<LintEntry>& entries);

struct InferResult {
  std::vector<InferenceTrace> traces;
  std::map<std::string, std::string> headers;  // name -> reconstructed text
  MetricsReport report;
};

/// Builds one job per ambiguous method of every workspace header, in
/// header name then source order.
std::vector<InferenceJob> collect_jobs(const Workspace& ws, const AmbiguityConfig& ambig = {});

/// Splices accepted candidates into the header text; see README for the
/// provenance comment format.
std::string reconstruct_header(const std::string& text, const std::string& name,
                               const std::vector<const InferenceTrace*>& traces);

InferResult cmd_infer(const RunConfig& config, Backend& backend);
/// Builds the backend named by the config, then runs cmd_infer and
/// writes config.json, traces.json, report.json, report.md and headers/.
InferResult cmd_infer(const RunConfig& config);

struct BenchBuildOptions {
  std::string gt_dir;
  std::string stripped_dir;
  std::string categories;  // JSON object framework -> category; optional
  DatasetOptions dataset;
  std::string out;
};

nlohmann::json cmd_bench_build(const BenchBuildOptions& opts);

struct BenchEvalOptions {
  std::string dataset;
  std::string traces;  // empty: no-op inferrer (stripped declarations)
  std::string split = "eval";
  int K = 10;
  bool count_redundant = false;
  std::string out;
};

MetricsReport cmd_bench_eval(const BenchEvalOptions& opts);

/// Renders a stored report.json as "markdown" or "json".
std::string cmd_report(const std::filesystem::path& report, const std::string& format);

}  // namespace sigrec::cli
