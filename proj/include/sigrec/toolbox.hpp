#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigrec/method_decl.hpp"

namespace sigrec {

class MissingManifest : public std::runtime_error {
 public:
  explicit MissingManifest(const std::filesystem::path& root)
      : std::runtime_error("missing manifest.json in workspace " + root.string()) {}
};

class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestWarning {
  enum class Kind { MalformedSymbolRow, DuplicateSymbol, OrphanDisassembly, OrphanDecompilation, BadFileName };
  Kind kind;
  std::string detail;
};

std::string_view to_string(IngestWarning::Kind kind);

/// Snapshot of binary-derived evidence for one framework. Immutable after
/// ingest; safe to share across concurrent inference tasks.
struct Workspace {
  std::filesystem::path root;
  std::string framework;
  std::string os_build;
  SymbolTable symtab;
  std::map<std::uint64_t, std::string> disas_index;
  std::map<std::uint64_t, std::string> dec_index;
  std::map<std::string, std::string> headers;  // file name (e.g. "Foo.h") -> text
  std::set<std::uint64_t> orphans;
  std::vector<IngestWarning> warnings;
};

/// Loads manifest.json, symbols.json, disas/<hex>.txt, dec/<hex>.txt and
/// headers/*.h. Malformed rows and orphans become warnings.
Workspace ingest_workspace(const std::filesystem::path& root);

/// Parses "0x180017F48" or "180017f48".
std::optional<std::uint64_t> parse_address(std::string_view text);
/// Lowercase hex with "0x" prefix.
std::string format_address(std::uint64_t address);

struct ToolParam {
  std::string name;
  std::string semantic_type;  // selector | address | integer | header | signature
  bool required = true;
};

struct ToolDef {
  std::string name;
  std::vector<ToolParam> params;
  std::string description;
};

/// The six-tool inventory: sym_addr, disas, dec, hdr_read, hdr_scan, yield.
const std::vector<ToolDef>& standard_tool_defs();

/// A tool invocation exactly as the model emitted it.
struct ToolCall {
  std::string tool_name;
  nlohmann::json args = nlohmann::json::object();
  int turn_index = 0;
};

enum class CallStatus { Ok, InvalidCall, ProviderError };
enum class HallucinationReason { UnknownTool, MissingArg, UnknownArg, DanglingReference };

std::string_view to_string(CallStatus s);
std::string_view to_string(HallucinationReason r);
std::optional<CallStatus> call_status_from_string(std::string_view s);
std::optional<HallucinationReason> reason_from_string(std::string_view s);

struct Verdict {
  std::optional<HallucinationReason> reason;  // empty = valid
  std::string detail;

  bool valid() const { return !reason.has_value(); }
};

struct ToolResult {
  CallStatus status = CallStatus::Ok;
  std::string payload;
  Verdict verdict;
  bool redundant = false;  // exact repeat of an earlier (tool, args) pair in the trace
};

Verdict validate_call(const ToolCall& call, std::span<const ToolDef> defs, const Workspace& ws);

/// Read-only tool providers over a workspace.
class Toolbox {
 public:
  explicit Toolbox(const Workspace& ws, std::vector<ToolDef> defs = standard_tool_defs())
      : ws_(ws), defs_(std::move(defs)) {}

  const Workspace& workspace() const { return ws_; }
  const std::vector<ToolDef>& defs() const { return defs_; }

  std::optional<std::vector<std::uint64_t>> sym_addr(const std::string& selector) const;
  std::optional<std::string> disas(std::uint64_t address, int window_lines = 64) const;
  std::optional<std::string> dec(std::uint64_t address) const;
  std::optional<std::string> hdr_read(const std::string& header) const;
  std::vector<std::string> hdr_scan() const;

  /// Validates then dispatches. Invalid calls never reach a provider.
  ToolResult execute(const ToolCall& call) const;

 private:
  const Workspace& ws_;
  std::vector<ToolDef> defs_;
};

}  // namespace sigrec
