#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sigrec/toolbox.hpp"

namespace sigrec {

/// One chat message. Assistant messages may carry a tool call; tool
/// messages carry the name of the tool whose payload they hold.
struct Message {
  std::string role;  // system | user | assistant | tool
  std::string content;
  std::optional<ToolCall> tool_call;
  std::string tool_name;
};

bool operator==(const Message& a, const Message& b);

enum class TurnKind { Text, ToolCall, Yield };

std::string_view to_string(TurnKind k);
std::optional<TurnKind> turn_kind_from_string(std::string_view s);

/// What the model produced in one turn. `text` is prose for Text and the
/// candidate signature for Yield; `call` is set for ToolCall.
struct ModelTurn {
  TurnKind kind = TurnKind::Text;
  std::string text;
  std::optional<ToolCall> call;

  static ModelTurn make_text(std::string s) { return {TurnKind::Text, std::move(s), std::nullopt}; }
  static ModelTurn make_yield(std::string sig) { return {TurnKind::Yield, std::move(sig), std::nullopt}; }
  static ModelTurn make_call(ToolCall c) { return {TurnKind::ToolCall, {}, std::move(c)}; }
};

struct GenerateRequest {
  const std::vector<Message>& messages;
  const std::vector<ToolDef>& tools;
  int iteration = 1;
  std::string target;  // symbol text of the target, e.g. "-[Foo reset]"
};

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScriptExhausted : public BackendError {
 public:
  ScriptExhausted(const std::string& target, int iteration)
      : BackendError("script exhausted for " + target + " at iteration " + std::to_string(iteration)) {}
};

/// Model backend contract. Implementations must be safe to call from
/// several threads on distinct targets.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual ModelTurn generate(const GenerateRequest& req) = 0;
};

/// Replays recorded turns. A script is a JSON array of turn objects:
///   {"target"?: "-[Foo reset]", "iteration"?: 2, "kind": "text"|"tool_call"|"yield",
///    "content"?: "...", "tool"?: "disas", "args"?: {...}, "signature"?: "...", "repeat"?: n}
/// Entries without "target" or "iteration" match any. Each (target,
/// iteration) pair replays its matching entries in file order, "repeat"
/// times each (-1 repeats forever).
class ScriptedBackend : public Backend {
 public:
  struct Entry {
    std::optional<std::string> target;
    std::optional<int> iteration;
    ModelTurn turn;
    long repeat = 1;
  };

  explicit ScriptedBackend(std::vector<Entry> entries) : entries_(std::move(entries)) {}
  static ScriptedBackend from_json(const nlohmann::json& script);
  static ScriptedBackend from_file(const std::filesystem::path& path);

  ModelTurn generate(const GenerateRequest& req) override;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::mutex mu_;
  std::map<std::pair<std::string, int>, long> cursors_;
};

struct RemoteConfig {
  std::string endpoint;  // http://host[:port]/path
  std::string model;
  std::string api_key_env = "SIGREC_API_KEY";
  double temperature = 0.0;
  int timeout_seconds = 120;
  std::optional<std::uint64_t> seed;
};

/// Chat-completion style HTTP backend. Request body:
///   {"model", "messages": [...], "tools": [...], "temperature", "seed"?}
/// Response body: {"message": {"content": "..."} } or
///   {"message": {"tool_calls": [{"name": "...", "arguments": {...}}]}}
/// A tool call named "yield" whose arguments hold a "signature" string
/// becomes a Yield turn.
class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {}
  ModelTurn generate(const GenerateRequest& req) override;

  static nlohmann::json request_body(const RemoteConfig& cfg, const GenerateRequest& req);
  /// Maps a response document to a turn. Throws BackendError if malformed.
  static ModelTurn parse_response(const nlohmann::json& body);

 private:
  RemoteConfig cfg_;
};

nlohmann::json tool_def_json(const ToolDef& def);
nlohmann::json message_json(const Message& m);

}  // namespace sigrec
