#include "sigrec/trace_json.hpp"

#include "sigrec/header_model.hpp"

namespace sigrec {

using json = nlohmann::json;

namespace {

json opt_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> get_opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

json call_to_json(const ToolCall& c) {
  return {{"tool", c.tool_name}, {"args", c.args}, {"turn_index", c.turn_index}};
}

ToolCall call_from_json(const json& j) {
  return ToolCall{j.at("tool").get<std::string>(), j.value("args", json::object()), j.value("turn_index", 0)};
}

json result_to_json(const ToolResult& r) {
  return {{"status", to_string(r.status)},
          {"payload", r.payload},
          {"verdict", r.verdict.valid() ? "valid" : "hallucinated"},
          {"reason", r.verdict.reason ? json(to_string(*r.verdict.reason)) : json(nullptr)},
          {"detail", r.verdict.detail},
          {"redundant", r.redundant}};
}

ToolResult result_from_json(const json& j) {
  ToolResult r;
  auto status = call_status_from_string(j.at("status").get<std::string>());
  if (!status) throw TraceFormatError("unknown call status " + j.at("status").dump());
  r.status = *status;
  r.payload = j.value("payload", "");
  if (auto reason = get_opt_string(j, "reason")) {
    r.verdict.reason = reason_from_string(*reason);
    if (!r.verdict.reason) throw TraceFormatError("unknown hallucination reason " + *reason);
  }
  r.verdict.detail = j.value("detail", "");
  r.redundant = j.value("redundant", false);
  return r;
}

json message_to_json(const Message& m) {
  json out = {{"role", m.role}, {"content", m.content}};
  if (m.tool_call) out["tool_call"] = call_to_json(*m.tool_call);
  if (!m.tool_name.empty()) out["tool_name"] = m.tool_name;
  return out;
}

Message message_from_json(const json& j) {
  Message m;
  m.role = j.at("role").get<std::string>();
  m.content = j.value("content", "");
  if (j.contains("tool_call")) m.tool_call = call_from_json(j["tool_call"]);
  m.tool_name = j.value("tool_name", "");
  return m;
}

json turn_to_json(const TurnRecord& t) {
  json out = {{"kind", to_string(t.kind)}};
  if (!t.text.empty() || t.kind != TurnKind::ToolCall) out["text"] = t.text;
  if (t.call) out["call"] = call_to_json(*t.call);
  if (t.result) out["result"] = result_to_json(*t.result);
  return out;
}

TurnRecord turn_from_json(const json& j) {
  TurnRecord t;
  auto kind = turn_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw TraceFormatError("unknown turn kind " + j.at("kind").dump());
  t.kind = *kind;
  t.text = j.value("text", "");
  if (j.contains("call")) t.call = call_from_json(j["call"]);
  if (j.contains("result")) t.result = result_from_json(j["result"]);
  return t;
}

json pool_entry_to_json(const PoolEntry& e) {
  return {{"text", e.text},
          {"admissible", e.admissible},
          {"soft_cost", e.soft_cost},
          {"hard_count", e.hard_count},
          {"diagnostics", diagnostic_set_to_json(e.diags)}};
}

PoolEntry pool_entry_from_json(const json& j) {
  PoolEntry e;
  e.text = j.at("text").get<std::string>();
  e.admissible = j.at("admissible").get<bool>();
  e.soft_cost = j.at("soft_cost").get<double>();
  e.hard_count = j.at("hard_count").get<std::size_t>();
  e.diags = diagnostic_set_from_json(j.at("diagnostics"));
  return e;
}

}  // namespace

json diagnostic_to_json(const Diagnostic& d) {
  return {{"constraint", to_string(d.constraint)},
          {"severity", to_string(d.severity)},
          {"position", d.position ? json(*d.position) : json(nullptr)},
          {"message", d.message},
          {"suggestion", opt_string(d.suggestion)}};
}

Diagnostic diagnostic_from_json(const json& j) {
  Diagnostic d;
  auto c = constraint_from_string(j.at("constraint").get<std::string>());
  auto s = severity_from_string(j.at("severity").get<std::string>());
  if (!c || !s) throw TraceFormatError("unknown constraint or severity in " + j.dump());
  d.constraint = *c;
  d.severity = *s;
  if (j.contains("position") && !j["position"].is_null()) d.position = j["position"].get<std::size_t>();
  d.message = j.value("message", "");
  d.suggestion = get_opt_string(j, "suggestion");
  return d;
}

json diagnostic_set_to_json(const DiagnosticSet& s) {
  json diags = json::array();
  for (const auto& d : s.diags) diags.push_back(diagnostic_to_json(d));
  return {{"target", s.target}, {"diagnostics", diags}};
}

DiagnosticSet diagnostic_set_from_json(const json& j) {
  DiagnosticSet s;
  s.target = j.value("target", "");
  for (const auto& d : j.at("diagnostics")) s.diags.push_back(diagnostic_from_json(d));
  return s;
}

json target_to_json(const InferenceTarget& t) {
  json positions = json::array();
  for (auto p : t.ambiguous_positions) positions.push_back(p);
  return {{"symbol", t.bound_symbol.text.empty() ? symbol_text(t.decl) : t.bound_symbol.text},
          {"address", t.bound_symbol.address ? json(format_address(*t.bound_symbol.address)) : json(nullptr)},
          {"framework", t.framework},
          {"class", t.decl.owning_class},
          {"header", t.decl.source_header},
          {"declaration", render_signature(t.decl)},
          {"ambiguous_positions", positions}};
}

InferenceTarget target_from_json(const json& j) {
  InferenceTarget t;
  try {
    t.decl = parse_method(j.at("declaration").get<std::string>());
  } catch (const ParseError& e) {
    throw TraceFormatError(std::string("unparseable target declaration: ") + e.what());
  }
  t.decl.owning_class = j.value("class", "");
  t.decl.source_header = j.value("header", "");
  for (const auto& p : j.value("ambiguous_positions", json::array())) t.ambiguous_positions.insert(p.get<std::size_t>());
  t.bound_symbol.text = j.value("symbol", "");
  if (auto addr = get_opt_string(j, "address")) t.bound_symbol.address = parse_address(*addr);
  t.framework = j.value("framework", "");
  return t;
}

json trace_to_json(const InferenceTrace& t) {
  json iterations = json::array();
  for (const auto& it : t.iterations) {
    json prompt = json::array();
    for (const auto& m : it.prompt) prompt.push_back(message_to_json(m));
    json dialogues = json::array();
    for (const auto& d : it.dialogues) {
      json turns = json::array();
      for (const auto& turn : d.turns) turns.push_back(turn_to_json(turn));
      dialogues.push_back({{"turns", turns},
                           {"candidate", opt_string(d.candidate)},
                           {"yielded", d.yielded},
                           {"script_exhausted", d.script_exhausted}});
    }
    json pool = json::array();
    for (const auto& e : it.pool) pool.push_back(pool_entry_to_json(e));
    iterations.push_back({{"index", it.index},
                          {"prompt", prompt},
                          {"dialogues", dialogues},
                          {"pool", pool},
                          {"selected", it.selected ? json(*it.selected) : json(nullptr)},
                          {"admissible", it.admissible}});
  }
  return {{"target", target_to_json(t.target)},
          {"iterations", iterations},
          {"converged", t.converged},
          {"converged_at", t.converged_at ? json(*t.converged_at) : json(nullptr)},
          {"final", t.final ? pool_entry_to_json(*t.final) : json(nullptr)}};
}

InferenceTrace trace_from_json(const json& j) {
  InferenceTrace t;
  t.target = target_from_json(j.at("target"));
  for (const auto& ij : j.at("iterations")) {
    IterationRecord it;
    it.index = ij.at("index").get<int>();
    for (const auto& m : ij.value("prompt", json::array())) it.prompt.push_back(message_from_json(m));
    for (const auto& dj : ij.value("dialogues", json::array())) {
      Dialogue d;
      for (const auto& turn : dj.at("turns")) d.turns.push_back(turn_from_json(turn));
      d.candidate = get_opt_string(dj, "candidate");
      d.yielded = dj.value("yielded", false);
      d.script_exhausted = dj.value("script_exhausted", false);
      it.dialogues.push_back(std::move(d));
    }
    for (const auto& e : ij.value("pool", json::array())) it.pool.push_back(pool_entry_from_json(e));
    if (ij.contains("selected") && !ij["selected"].is_null()) it.selected = ij["selected"].get<std::size_t>();
    it.admissible = ij.value("admissible", false);
    t.iterations.push_back(std::move(it));
  }
  t.converged = j.at("converged").get<bool>();
  if (j.contains("converged_at") && !j["converged_at"].is_null()) t.converged_at = j["converged_at"].get<int>();
  if (j.contains("final") && !j["final"].is_null()) t.final = pool_entry_from_json(j["final"]);
  return t;
}

json traces_to_json(const std::vector<InferenceTrace>& traces) {
  json out = json::array();
  for (const auto& t : traces) out.push_back(trace_to_json(t));
  return out;
}

std::vector<InferenceTrace> traces_from_json(const json& j) {
  if (!j.is_array()) throw TraceFormatError("traces document must be an array");
  std::vector<InferenceTrace> out;
  try {
    for (const auto& t : j) out.push_back(trace_from_json(t));
  } catch (const json::exception& e) {
    throw TraceFormatError(std::string("malformed trace: ") + e.what());
  }
  return out;
}

}  // namespace sigrec
