#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "sigrec/backend.hpp"

namespace sigrec {

using json = nlohmann::json;

bool operator==(const Message& a, const Message& b) {
  auto call_eq = [](const std::optional<ToolCall>& x, const std::optional<ToolCall>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->tool_name == y->tool_name && x->args == y->args && x->turn_index == y->turn_index);
  };
  return a.role == b.role && a.content == b.content && a.tool_name == b.tool_name && call_eq(a.tool_call, b.tool_call);
}

std::string_view to_string(TurnKind k) {
  switch (k) {
    case TurnKind::Text: return "text";
    case TurnKind::ToolCall: return "tool_call";
    case TurnKind::Yield: return "yield";
  }
  return "text";
}

std::optional<TurnKind> turn_kind_from_string(std::string_view s) {
  for (auto k : {TurnKind::Text, TurnKind::ToolCall, TurnKind::Yield})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

json tool_def_json(const ToolDef& def) {
  json props = json::object();
  json required = json::array();
  for (const auto& p : def.params) {
    props[p.name] = {{"type", p.semantic_type == "integer" ? "integer" : "string"}, {"description", p.semantic_type}};
    if (p.required) required.push_back(p.name);
  }
  return {{"name", def.name},
          {"description", def.description},
          {"parameters", {{"type", "object"}, {"properties", props}, {"required", required}}}};
}

json message_json(const Message& m) {
  json out = {{"role", m.role}, {"content", m.content}};
  if (m.tool_call) out["tool_calls"] = json::array({{{"name", m.tool_call->tool_name}, {"arguments", m.tool_call->args}}});
  if (!m.tool_name.empty()) out["name"] = m.tool_name;
  return out;
}

ScriptedBackend ScriptedBackend::from_json(const json& script) {
  if (!script.is_array()) throw BackendError("script must be a JSON array of turns");
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& row = script[i];
    auto where = "script entry " + std::to_string(i) + ": ";
    if (!row.is_object() || !row.contains("kind") || !row["kind"].is_string())
      throw BackendError(where + "missing \"kind\"");
    auto kind = turn_kind_from_string(row["kind"].get<std::string>());
    if (!kind) throw BackendError(where + "unknown kind " + row["kind"].get<std::string>());
    Entry e;
    if (row.contains("target")) e.target = row["target"].get<std::string>();
    if (row.contains("iteration")) e.iteration = row["iteration"].get<int>();
    e.repeat = row.value("repeat", 1L);
    switch (*kind) {
      case TurnKind::Text: e.turn = ModelTurn::make_text(row.value("content", "")); break;
      case TurnKind::Yield:
        if (!row.contains("signature") || !row["signature"].is_string())
          throw BackendError(where + "yield needs a \"signature\" string");
        e.turn = ModelTurn::make_yield(row["signature"].get<std::string>());
        break;
      case TurnKind::ToolCall:
        if (!row.contains("tool") || !row["tool"].is_string()) throw BackendError(where + "tool_call needs \"tool\"");
        e.turn = ModelTurn::make_call(ToolCall{row["tool"].get<std::string>(), row.value("args", json::object()), 0});
        break;
    }
    entries.push_back(std::move(e));
  }
  return ScriptedBackend(std::move(entries));
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BackendError("cannot read script " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw BackendError("malformed script " + path.string() + ": " + e.what());
  }
}

ModelTurn ScriptedBackend::generate(const GenerateRequest& req) {
  std::lock_guard lock(mu_);
  long& cursor = cursors_[{req.target, req.iteration}];
  long skip = cursor;
  for (const auto& e : entries_) {
    if (e.target && *e.target != req.target) continue;
    if (e.iteration && *e.iteration != req.iteration) continue;
    if (e.repeat < 0 || skip < e.repeat) {
      ++cursor;
      return e.turn;
    }
    skip -= e.repeat;
  }
  throw ScriptExhausted(req.target, req.iteration);
}

json RemoteBackend::request_body(const RemoteConfig& cfg, const GenerateRequest& req) {
  json messages = json::array();
  for (const auto& m : req.messages) messages.push_back(message_json(m));
  json tools = json::array();
  for (const auto& t : req.tools) tools.push_back(tool_def_json(t));
  json body{{"model", cfg.model}, {"messages", messages}, {"tools", tools}, {"temperature", cfg.temperature}};
  if (cfg.seed) body["seed"] = *cfg.seed;
  return body;
}

ModelTurn RemoteBackend::parse_response(const json& body) {
  if (!body.is_object() || !body.contains("message") || !body["message"].is_object())
    throw BackendError("malformed response: missing \"message\" object");
  const json& msg = body["message"];
  if (msg.contains("tool_calls") && msg["tool_calls"].is_array() && !msg["tool_calls"].empty()) {
    json call = msg["tool_calls"][0];
    if (call.contains("function") && call["function"].is_object()) call = call["function"];
    if (!call.contains("name") || !call["name"].is_string())
      throw BackendError("malformed response: tool call without a name");
    json args = call.value("arguments", json::object());
    if (args.is_string()) {
      auto parsed = json::parse(args.get<std::string>(), nullptr, false);
      if (!parsed.is_discarded()) args = parsed;
    }
    std::string name = call["name"].get<std::string>();
    if (name == "yield" && args.is_object() && args.size() == 1 && args.contains("signature") &&
        args["signature"].is_string())
      return ModelTurn::make_yield(args["signature"].get<std::string>());
    return ModelTurn::make_call(ToolCall{std::move(name), std::move(args), 0});
  }
  if (msg.contains("content") && msg["content"].is_string()) return ModelTurn::make_text(msg["content"].get<std::string>());
  throw BackendError("malformed response: neither content nor tool_calls");
}

ModelTurn RemoteBackend::generate(const GenerateRequest& req) {
  const std::string& url = cfg_.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw BackendError("endpoint must be an http:// URL: " + url);
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http") throw BackendError("unsupported endpoint scheme '" + scheme + "' (this build speaks plain http)");
  std::string rest = url.substr(scheme_end + 3);
  auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  std::string host = authority;
  int port = 80;
  if (auto colon = authority.rfind(':'); colon != std::string::npos) {
    host = authority.substr(0, colon);
    try {
      port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw BackendError("bad port in endpoint " + url);
    }
  }

  httplib::Client client(host, port);
  client.set_connection_timeout(cfg_.timeout_seconds, 0);
  client.set_read_timeout(cfg_.timeout_seconds, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  auto res = client.Post(path, headers, request_body(cfg_, req).dump(), "application/json");
  if (!res) throw BackendError("transport failure: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403) throw BackendError("authentication rejected (HTTP " + std::to_string(res->status) + ")");
  if (res->status < 200 || res->status >= 300) throw BackendError("HTTP status " + std::to_string(res->status));
  auto body = json::parse(res->body, nullptr, false);
  if (body.is_discarded()) throw BackendError("malformed response: body is not JSON");
  return parse_response(body);
}

}  // namespace sigrec
