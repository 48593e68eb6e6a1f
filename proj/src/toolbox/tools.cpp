#include <algorithm>
#include <charconv>
#include <sstream>

#include "sigrec/toolbox.hpp"

namespace sigrec {

namespace {

using json = nlohmann::json;

const ToolDef* find_def(std::span<const ToolDef> defs, const std::string& name) {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

std::optional<std::uint64_t> address_arg(const json& v) {
  if (v.is_string()) return parse_address(v.get<std::string>());
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  return std::nullopt;
}

std::optional<int> positive_int_arg(const json& v) {
  long long n = 0;
  if (v.is_number_integer()) {
    n = v.get<long long>();
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (n <= 0 || n > 1'000'000) return std::nullopt;
  return static_cast<int>(n);
}

std::optional<std::string> string_arg(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return std::nullopt;
}

const std::string* header_text(const Workspace& ws, const std::string& name) {
  auto it = ws.headers.find(name);
  if (it == ws.headers.end()) it = ws.headers.find(name + ".h");
  return it == ws.headers.end() ? nullptr : &it->second;
}

Verdict hallucinated(HallucinationReason r, std::string detail) { return Verdict{r, std::move(detail)}; }

}  // namespace

std::string_view to_string(CallStatus s) {
  switch (s) {
    case CallStatus::Ok: return "ok";
    case CallStatus::InvalidCall: return "invalid_call";
    case CallStatus::ProviderError: return "provider_error";
  }
  return "ok";
}

std::string_view to_string(HallucinationReason r) {
  switch (r) {
    case HallucinationReason::UnknownTool: return "unknown_tool";
    case HallucinationReason::MissingArg: return "missing_arg";
    case HallucinationReason::UnknownArg: return "unknown_arg";
    case HallucinationReason::DanglingReference: return "dangling_reference";
  }
  return "unknown_tool";
}

std::optional<CallStatus> call_status_from_string(std::string_view s) {
  for (auto v : {CallStatus::Ok, CallStatus::InvalidCall, CallStatus::ProviderError})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<HallucinationReason> reason_from_string(std::string_view s) {
  for (auto v : {HallucinationReason::UnknownTool, HallucinationReason::MissingArg, HallucinationReason::UnknownArg,
                 HallucinationReason::DanglingReference})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

const std::vector<ToolDef>& standard_tool_defs() {
  static const std::vector<ToolDef> defs{
      {"sym_addr",
       {{"selector", "selector", true}},
       "Resolve a symbol such as -[Class selector:] to its address in the binary."},
      {"disas",
       {{"address", "address", true}, {"window_lines", "integer", false}},
       "Return the ARM64 disassembly window at an address (default 64 lines)."},
      {"dec", {{"address", "address", true}}, "Return decompiler pseudocode for the function at an address."},
      {"hdr_read", {{"header", "header", true}}, "Return the full text of a named header file."},
      {"hdr_scan", {}, "List the header files available in this framework."},
      {"yield",
       {{"signature", "signature", true}},
       "Submit the final method signature and end the inference loop."},
  };
  return defs;
}

Verdict validate_call(const ToolCall& call, std::span<const ToolDef> defs, const Workspace& ws) {
  const ToolDef* def = find_def(defs, call.tool_name);
  if (!def) return hallucinated(HallucinationReason::UnknownTool, call.tool_name);

  const json empty = json::object();
  const json& args = call.args.is_null() ? empty : call.args;
  if (!args.is_object()) return hallucinated(HallucinationReason::UnknownArg, "arguments are not a key/value map");

  for (const auto& [key, _] : args.items()) {
    bool known = std::any_of(def->params.begin(), def->params.end(), [&](const ToolParam& p) { return p.name == key; });
    if (!known) return hallucinated(HallucinationReason::UnknownArg, key);
  }
  for (const auto& p : def->params)
    if (p.required && !args.contains(p.name)) return hallucinated(HallucinationReason::MissingArg, p.name);

  for (const auto& p : def->params) {
    if (!args.contains(p.name)) continue;
    const json& v = args.at(p.name);
    if (p.semantic_type == "address") {
      auto addr = address_arg(v);
      const auto& index = def->name == "dec" ? ws.dec_index : ws.disas_index;
      if (!addr || !index.contains(*addr))
        return hallucinated(HallucinationReason::DanglingReference, v.is_string() ? v.get<std::string>() : v.dump());
    } else if (p.semantic_type == "integer") {
      if (!positive_int_arg(v)) return hallucinated(HallucinationReason::MissingArg, p.name + " is not a positive integer");
    } else if (p.semantic_type == "header") {
      auto name = string_arg(v);
      if (!name || !header_text(ws, *name))
        return hallucinated(HallucinationReason::DanglingReference, name.value_or(v.dump()));
    } else if (!string_arg(v)) {
      return hallucinated(HallucinationReason::MissingArg, p.name + " is not text");
    }
  }
  return Verdict{};
}

std::optional<std::vector<std::uint64_t>> Toolbox::sym_addr(const std::string& selector) const {
  auto hits = ws_.symtab.lookup(selector);
  if (hits.empty()) return std::nullopt;
  return hits;
}

std::optional<std::string> Toolbox::disas(std::uint64_t address, int window_lines) const {
  auto it = ws_.disas_index.find(address);
  if (it == ws_.disas_index.end()) return std::nullopt;
  const std::string& text = it->second;
  std::size_t pos = 0;
  for (int i = 0; i < window_lines; ++i) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) return text;
    pos = nl + 1;
  }
  return text.substr(0, pos);
}

std::optional<std::string> Toolbox::dec(std::uint64_t address) const {
  auto it = ws_.dec_index.find(address);
  if (it == ws_.dec_index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Toolbox::hdr_read(const std::string& header) const {
  const std::string* text = header_text(ws_, header);
  if (!text) return std::nullopt;
  return *text;
}

std::vector<std::string> Toolbox::hdr_scan() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : ws_.headers) names.push_back(name);
  std::sort(names.begin(), names.end());
  return names;
}

ToolResult Toolbox::execute(const ToolCall& call) const {
  ToolResult result;
  result.verdict = validate_call(call, defs_, ws_);
  if (!result.verdict.valid()) {
    result.status = CallStatus::InvalidCall;
    result.payload = "invalid call (" + std::string(to_string(*result.verdict.reason)) + "): " + result.verdict.detail;
    return result;
  }
  const json& args = call.args;
  auto provider_error = [&](std::string msg) {
    result.status = CallStatus::ProviderError;
    result.payload = std::move(msg);
    return result;
  };

  if (call.tool_name == "sym_addr") {
    auto addrs = sym_addr(args.at("selector").get<std::string>());
    if (!addrs) {
      result.payload = "symbol not present";
    } else {
      std::ostringstream out;
      for (std::size_t i = 0; i < addrs->size(); ++i) out << (i ? "\n" : "") << format_address((*addrs)[i]);
      result.payload = out.str();
    }
  } else if (call.tool_name == "disas") {
    int window = args.contains("window_lines") ? *positive_int_arg(args.at("window_lines")) : 64;
    auto text = disas(*address_arg(args.at("address")), window);
    if (!text) return provider_error("no disassembly at address");
    result.payload = *text;
  } else if (call.tool_name == "dec") {
    auto text = dec(*address_arg(args.at("address")));
    if (!text) return provider_error("no pseudocode at address");
    result.payload = *text;
  } else if (call.tool_name == "hdr_read") {
    auto text = hdr_read(args.at("header").get<std::string>());
    if (!text) return provider_error("header not present");
    result.payload = *text;
  } else if (call.tool_name == "hdr_scan") {
    std::ostringstream out;
    auto names = hdr_scan();
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "\n" : "") << names[i];
    result.payload = out.str();
  } else {
    // yield and any custom profile entries have no provider here
    return provider_error("tool '" + call.tool_name + "' has no provider");
  }
  return result;
}

}  // namespace sigrec
