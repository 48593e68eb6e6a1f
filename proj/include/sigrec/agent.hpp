#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigrec/backend.hpp"
#include "sigrec/linter.hpp"
#include "sigrec/method_decl.hpp"
#include "sigrec/selection.hpp"
#include "sigrec/toolbox.hpp"

namespace sigrec {

/// Evidence handed to the model for one target. Natural evidence is the
/// declaration and its surroundings; symbolic evidence is the bound
/// symbol, tools and framework metadata.
struct PromptContext {
  std::string declaration;
  std::vector<std::string> neighbors;
  std::string owning_class;
  std::string source_header;
  std::set<std::size_t> ambiguous_positions;

  std::string symbol;
  std::optional<std::uint64_t> address;
  std::vector<ToolDef> tools;
  std::string framework;
  std::string os_build;

  std::optional<DiagnosticSet> feedback;  // absent on the first iteration
};

/// Builds the first-iteration context. Neighbors are up to three
/// declarations on each side of the target within its interface.
PromptContext make_context(const InferenceTarget& target, const Workspace& ws,
                           const std::vector<ToolDef>& tools,
                           const std::vector<MethodDecl>& interface_methods = {});

/// Deterministic: system (task + tools), user (evidence), and a second user
/// message listing feedback as "constraint: message; suggestion".
std::vector<Message> assemble_prompt(const PromptContext& ctx);

/// Last line of text that parses as a method declaration, if any.
std::optional<std::string> harvest_signature(const std::string& text, const TypeConfig& types = {});

struct TurnRecord {
  TurnKind kind = TurnKind::Text;
  std::string text;
  std::optional<ToolCall> call;
  std::optional<ToolResult> result;
};

struct Dialogue {
  std::vector<TurnRecord> turns;
  std::optional<std::string> candidate;
  bool yielded = false;
  bool script_exhausted = false;
};

class NoCandidate : public std::runtime_error {
 public:
  explicit NoCandidate(Dialogue d)
      : std::runtime_error("dialogue ended without a candidate signature"), dialogue(std::move(d)) {}
  Dialogue dialogue;
};

/// Tracks (tool, args) pairs already issued within one trace.
class RedundancyTracker {
 public:
  bool seen_before(const ToolCall& call);

 private:
  std::set<std::string> seen_;
};

/// One dialogue. Ends at yield, at max_turns, or when a scripted backend
/// runs out; in the latter two cases the last parseable signature found
/// in a text turn becomes the candidate.
Dialogue run_dialogue(const InferenceTarget& target, const std::vector<Message>& prompt, Backend& backend,
                      const Toolbox& toolbox, int max_turns, int iteration, RedundancyTracker& redundancy);

/// Same as run_dialogue but throws NoCandidate when nothing was produced.
std::pair<std::string, std::vector<TurnRecord>> run_react(const InferenceTarget& target, const PromptContext& ctx,
                                                          Backend& backend, const Toolbox& toolbox,
                                                          int max_turns = 16);

struct PoolEntry {
  std::string text;
  DiagnosticSet diags;
  bool admissible = false;
  double soft_cost = 0.0;
  std::size_t hard_count = 0;
};

struct IterationRecord {
  int index = 1;
  std::vector<Message> prompt;
  std::vector<Dialogue> dialogues;
  std::vector<PoolEntry> pool;
  std::optional<std::size_t> selected;  // best admissible, else least violating
  bool admissible = false;

  const PoolEntry* chosen() const { return selected ? &pool.at(*selected) : nullptr; }
};

struct InferenceTrace {
  InferenceTarget target;
  std::vector<IterationRecord> iterations;
  bool converged = false;
  std::optional<int> converged_at;
  std::optional<PoolEntry> final;

  std::size_t tool_call_count() const;
};

enum class StopRule {
  FirstAdmissible,
  StableCost,  // keep going after admissibility until two consecutive equal soft costs
};

struct RefineOptions {
  int K = 10;
  int pool_size = 5;
  int max_turns = 16;
  SeverityWeights weights;
  LintConfig lint;
  bool tools_enabled = true;
  bool feedback_enabled = true;
  StopRule stop_rule = StopRule::FirstAdmissible;
};

/// The tools offered to the model: the full profile, or only yield.
std::vector<ToolDef> active_tool_defs(bool tools_enabled);

InferenceTrace refine(const InferenceTarget& target, const PromptContext& base_ctx, Backend& backend,
                      const Workspace& ws, const RefineOptions& opts = {});

/// Collects traces from concurrent producers; `sorted()` orders by the
/// submission index so output does not depend on scheduling.
class TraceSink {
 public:
  void append(std::size_t index, InferenceTrace trace);
  std::vector<InferenceTrace> sorted() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::pair<std::size_t, InferenceTrace>> traces_;
};

struct InferenceJob {
  InferenceTarget target;
  PromptContext ctx;
};

/// Runs refine for every job on up to `jobs` threads. The first
/// BackendError aborts remaining jobs and is rethrown.
std::vector<InferenceTrace> infer_all(const std::vector<InferenceJob>& work, Backend& backend, const Workspace& ws,
                                      const RefineOptions& opts, int jobs = 1);

}  // namespace sigrec
