#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigrec/agent.hpp"
#include "sigrec/bench.hpp"
#include "sigrec/type_expr.hpp"

namespace sigrec {

class EmptyCorpus : public std::invalid_argument {
 public:
  EmptyCorpus() : std::invalid_argument("no scorable methods in corpus") {}
};

struct EvalPosition {
  std::size_t index = 0;
  std::optional<std::string> gt_type;        // empty = untyped in ground truth, not scored
  std::optional<std::string> inferred_type;  // empty = nothing inferred, scored as wrong
};

struct EvalRecord {
  std::string method_id;
  std::vector<EvalPosition> positions;
  std::optional<std::size_t> trace_index;
};

/// Canonical equality; text that does not parse as a type never matches.
bool types_match(const std::string& gt, const std::optional<std::string>& inferred);

/// Positions of `inferred` as canonical strings; nullopt when unparseable.
std::optional<std::vector<std::string>> inferred_positions(const std::string& signature);

/// Pairs each bench record with the final candidate of the trace whose
/// symbol matches its key. Without a trace the stripped declaration is the
/// inference (the no-op baseline); with a trace but no final, or an
/// unparseable final, every position is absent.
std::vector<EvalRecord> make_eval_records(const std::vector<BenchRecord>& bench,
                                          const std::vector<InferenceTrace>& traces);

/// Mean over methods of the per-method fraction of correct scored positions.
double pm_accuracy(const std::vector<EvalRecord>& records);
/// Correct scored positions over all scored positions.
double pm_pooled(const std::vector<EvalRecord>& records);
double em_accuracy(const std::vector<EvalRecord>& records);

std::optional<double> tool_usage_rate(const std::vector<InferenceTrace>& traces);
std::optional<double> inference_stability(const std::vector<InferenceTrace>& traces, int K = 10);

struct ToolCallCounts {
  std::size_t total = 0;
  std::size_t valid = 0;
  std::size_t hallucinated = 0;
};

/// With count_redundant, exact repeats move from valid to hallucinated.
ToolCallCounts count_tool_calls(const std::vector<InferenceTrace>& traces, bool count_redundant = false);
std::optional<double> tcc(const std::vector<InferenceTrace>& traces, bool count_redundant = false);
std::optional<double> hr(const std::vector<InferenceTrace>& traces, bool count_redundant = false);

enum class Subtask { Scalar, Collection, ProtocolQualified, Block };

std::string_view to_string(Subtask s);

std::set<std::string> default_subtask_scalars();

std::set<Subtask> classify_position(const TypeExpr& gt, const std::set<std::string>& scalars = default_subtask_scalars());

struct SubtaskScores {
  std::optional<double> btc, ci, dpi, bti;
  std::size_t n_scalar = 0, n_collection = 0, n_protocol = 0, n_block = 0;
};

SubtaskScores subtask_accuracies(const std::vector<EvalRecord>& records,
                                 const std::set<std::string>& scalars = default_subtask_scalars());

/// The seven histogram categories, in display order.
const std::vector<std::string>& histogram_categories();

/// Every diagnostic of every candidate in every iteration. Syntax errors
/// and unparsed methods fold into one "Method Not Parsed" count per set.
std::map<std::string, std::size_t> diagnostic_histogram(const std::vector<InferenceTrace>& traces,
                                                        const std::vector<DiagnosticSet>& extra = {});

struct MetricsReport {
  std::optional<double> pm, pm_pooled, em;
  std::optional<double> tool_usage_rate, inference_stability, tcc, hr;
  std::optional<double> btc, ci, dpi, bti;
  std::optional<double> avg_subtask;
  std::map<std::string, std::size_t> diagnostic_histogram;
  std::size_t methods = 0;
  std::size_t scored_positions = 0;
  std::size_t traces = 0;
  std::size_t tool_calls = 0;
};

struct ReportOptions {
  int K = 10;
  bool count_redundant = false;
  std::set<std::string> scalars = default_subtask_scalars();
  std::string label = "sigrec";
};

MetricsReport build_report(const std::vector<EvalRecord>& records, const std::vector<InferenceTrace>& traces,
                           const std::vector<DiagnosticSet>& extra_diags = {}, const ReportOptions& opts = {});

nlohmann::json report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const nlohmann::json& j);
/// Table-shaped markdown: the metrics row in table column order (percent,
/// one decimal, "--" when not applicable), then the histogram.
std::string render_markdown(const MetricsReport& r, const std::string& label = "sigrec");

}  // namespace sigrec
