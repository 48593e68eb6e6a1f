#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "sigrec/agent.hpp"
#include "sigrec/header_model.hpp"

namespace sigrec {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string position_label(const MethodDecl& decl, std::size_t pos) {
  if (pos == 0) return "return type";
  std::string label = "parameter " + std::to_string(pos);
  if (pos - 1 < decl.params.size()) label += " (" + decl.params[pos - 1].name + ")";
  return label;
}

constexpr const char* kPreamble =
    "You recover Objective-C method signatures from stripped binaries. Replace every underspecified type "
    "(id, void *, anonymous struct) in the declaration with the most specific type the evidence supports. "
    "Keep the selector pieces and parameter names unchanged. When you are done, call yield with exactly one "
    "complete method declaration.";

constexpr const char* kContinue = "Continue. Call yield with the final declaration when you are done.";

PoolEntry to_entry(const ScoredCandidate& s) {
  return PoolEntry{s.candidate.text, s.diags, s.admissible, s.soft_cost, s.hard_count};
}

}  // namespace

PromptContext make_context(const InferenceTarget& target, const Workspace& ws, const std::vector<ToolDef>& tools,
                           const std::vector<MethodDecl>& interface_methods) {
  PromptContext ctx;
  ctx.declaration = render_signature(target.decl);
  ctx.owning_class = target.decl.owning_class;
  ctx.source_header = target.decl.source_header;
  ctx.ambiguous_positions = target.ambiguous_positions;
  ctx.symbol = target.bound_symbol.text.empty() ? symbol_text(target.decl) : target.bound_symbol.text;
  ctx.address = target.bound_symbol.address;
  ctx.tools = tools;
  ctx.framework = target.framework.empty() ? ws.framework : target.framework;
  ctx.os_build = ws.os_build;

  auto it = std::find_if(interface_methods.begin(), interface_methods.end(), [&](const MethodDecl& m) {
    return m.is_class_method == target.decl.is_class_method && m.selector() == target.decl.selector();
  });
  if (it != interface_methods.end()) {
    auto idx = static_cast<std::size_t>(it - interface_methods.begin());
    std::size_t lo = idx >= 3 ? idx - 3 : 0;
    std::size_t hi = std::min(interface_methods.size(), idx + 4);
    for (std::size_t i = lo; i < hi; ++i)
      if (i != idx) ctx.neighbors.push_back(render_signature(interface_methods[i]));
  }
  return ctx;
}

std::vector<Message> assemble_prompt(const PromptContext& ctx) {
  std::vector<Message> out;

  std::ostringstream sys;
  sys << kPreamble << "\n\nAvailable tools:\n";
  for (const auto& t : ctx.tools) {
    sys << "- " << t.name << "(";
    for (std::size_t i = 0; i < t.params.size(); ++i) {
      const auto& p = t.params[i];
      sys << (i ? ", " : "") << p.name << (p.required ? "" : "?") << ": " << p.semantic_type;
    }
    sys << "): " << t.description << "\n";
  }
  out.push_back({"system", sys.str(), std::nullopt, {}});

  std::ostringstream user;
  user << "Declaration: " << ctx.declaration << "\n";
  if (!ctx.ambiguous_positions.empty()) {
    MethodDecl decl;
    try {
      decl = parse_method(ctx.declaration);
    } catch (const ParseError&) {
    }
    user << "Underspecified positions:";
    bool first = true;
    for (auto p : ctx.ambiguous_positions) {
      user << (first ? " " : ", ") << position_label(decl, p);
      first = false;
    }
    user << "\n";
  }
  user << "Symbol: " << ctx.symbol << "\n";
  if (ctx.address) user << "Address: " << format_address(*ctx.address) << "\n";
  if (!ctx.owning_class.empty()) user << "Class: " << ctx.owning_class << "\n";
  if (!ctx.source_header.empty()) user << "Header: " << ctx.source_header << "\n";
  user << "Framework: " << ctx.framework;
  if (!ctx.os_build.empty()) user << " (OS build " << ctx.os_build << ")";
  user << "\n";
  if (!ctx.neighbors.empty()) {
    user << "Neighboring declarations:\n";
    for (const auto& n : ctx.neighbors) user << "  " << n << "\n";
  }
  out.push_back({"user", user.str(), std::nullopt, {}});

  if (ctx.feedback) {
    std::ostringstream fb;
    fb << "The linter rejected or penalized the previous candidate";
    if (!ctx.feedback->target.empty()) fb << " `" << ctx.feedback->target << "`";
    fb << ":\n";
    for (const auto& d : ctx.feedback->diags) {
      fb << "- " << to_string(d.constraint) << ": " << d.message;
      if (d.suggestion) fb << "; " << *d.suggestion;
      fb << "\n";
    }
    if (ctx.feedback->diags.empty()) fb << "- no diagnostics\n";
    out.push_back({"user", fb.str(), std::nullopt, {}});
  }
  return out;
}

std::optional<std::string> harvest_signature(const std::string& text, const TypeConfig& types) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(trim(line));
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (it->empty() || (it->front() != '-' && it->front() != '+')) continue;
    try {
      parse_method(*it, types);
      return *it;
    } catch (const ParseError&) {
    }
  }
  return std::nullopt;
}

bool RedundancyTracker::seen_before(const ToolCall& call) {
  return !seen_.insert(call.tool_name + "\x1f" + call.args.dump()).second;
}

Dialogue run_dialogue(const InferenceTarget& target, const std::vector<Message>& prompt, Backend& backend,
                      const Toolbox& toolbox, int max_turns, int iteration, RedundancyTracker& redundancy) {
  std::vector<Message> messages = prompt;
  const std::string key = symbol_text(target.decl);
  Dialogue d;
  for (int t = 0; t < max_turns; ++t) {
    ModelTurn turn;
    try {
      turn = backend.generate(GenerateRequest{messages, toolbox.defs(), iteration, key});
    } catch (const ScriptExhausted&) {
      d.script_exhausted = true;
      break;
    }
    TurnRecord rec{turn.kind, turn.text, turn.call, std::nullopt};
    if (turn.kind == TurnKind::Yield) {
      d.turns.push_back(std::move(rec));
      d.candidate = turn.text;
      d.yielded = true;
      return d;
    }
    if (turn.kind == TurnKind::ToolCall) {
      ToolCall call = turn.call.value_or(ToolCall{});
      call.turn_index = t;
      ToolResult result = toolbox.execute(call);
      result.redundant = redundancy.seen_before(call);
      messages.push_back({"assistant", "", call, {}});
      messages.push_back({"tool", result.payload, std::nullopt, call.tool_name});
      rec.call = call;
      rec.result = std::move(result);
    } else {
      messages.push_back({"assistant", turn.text, std::nullopt, {}});
      messages.push_back({"user", kContinue, std::nullopt, {}});
    }
    d.turns.push_back(std::move(rec));
  }
  for (auto it = d.turns.rbegin(); it != d.turns.rend() && !d.candidate; ++it)
    if (it->kind == TurnKind::Text) d.candidate = harvest_signature(it->text);
  return d;
}

std::pair<std::string, std::vector<TurnRecord>> run_react(const InferenceTarget& target, const PromptContext& ctx,
                                                          Backend& backend, const Toolbox& toolbox, int max_turns) {
  RedundancyTracker redundancy;
  Dialogue d = run_dialogue(target, assemble_prompt(ctx), backend, toolbox, max_turns, 1, redundancy);
  if (!d.candidate) throw NoCandidate(std::move(d));
  return {*d.candidate, std::move(d.turns)};
}

std::size_t InferenceTrace::tool_call_count() const {
  std::size_t n = 0;
  for (const auto& it : iterations)
    for (const auto& d : it.dialogues)
      for (const auto& t : d.turns)
        if (t.kind == TurnKind::ToolCall) ++n;
  return n;
}

std::vector<ToolDef> active_tool_defs(bool tools_enabled) {
  std::vector<ToolDef> defs;
  for (const auto& d : standard_tool_defs())
    if (tools_enabled || d.name == "yield") defs.push_back(d);
  return defs;
}

InferenceTrace refine(const InferenceTarget& target, const PromptContext& base_ctx, Backend& backend,
                      const Workspace& ws, const RefineOptions& opts) {
  if (opts.K < 1) throw std::invalid_argument("K must be at least 1");
  if (opts.pool_size < 1) throw std::invalid_argument("pool size must be at least 1");
  if (!opts.weights.valid()) throw std::invalid_argument("invalid severity weights");

  Toolbox toolbox(ws, active_tool_defs(opts.tools_enabled));
  PromptContext ctx = base_ctx;
  ctx.tools = toolbox.defs();
  ctx.feedback.reset();

  RedundancyTracker redundancy;
  InferenceTrace trace;
  trace.target = target;
  bool have_last_cost = false;
  double last_cost = 0.0;

  for (int i = 1; i <= opts.K; ++i) {
    IterationRecord rec;
    rec.index = i;
    rec.prompt = assemble_prompt(ctx);

    std::vector<ScoredCandidate> scored;
    for (int p = 0; p < opts.pool_size; ++p) {
      Dialogue d = run_dialogue(target, rec.prompt, backend, toolbox, opts.max_turns, i, redundancy);
      bool exhausted = d.script_exhausted;
      if (d.candidate)
        scored.push_back(score(Candidate::from_text(*d.candidate, opts.lint.types), target.decl, opts.weights, opts.lint));
      rec.dialogues.push_back(std::move(d));
      if (exhausted) break;
    }

    if (!scored.empty()) {
      Selection sel = select_best(scored);
      rec.selected = sel.best ? *sel.best : least_violating(sel.scored);
      rec.admissible = sel.admissible();
      for (const auto& s : sel.scored) rec.pool.push_back(to_entry(s));
    }
    trace.iterations.push_back(std::move(rec));
    const IterationRecord& done = trace.iterations.back();

    bool stop = false;
    if (done.admissible) {
      const PoolEntry& best = *done.chosen();
      if (!trace.converged) {
        trace.converged = true;
        trace.converged_at = i;
      }
      trace.final = best;
      if (opts.stop_rule == StopRule::FirstAdmissible) {
        stop = true;
      } else {
        stop = have_last_cost && last_cost == best.soft_cost;
        have_last_cost = true;
        last_cost = best.soft_cost;
      }
    } else {
      have_last_cost = false;
    }
    if (stop) break;

    if (opts.feedback_enabled && done.chosen())
      ctx.feedback = done.chosen()->diags;
    else
      ctx.feedback.reset();
  }

  if (!trace.converged) {
    const PoolEntry* best = nullptr;
    for (const auto& it : trace.iterations) {
      for (const auto& e : it.pool) {
        if (!best || e.hard_count < best->hard_count ||
            (e.hard_count == best->hard_count && e.soft_cost < best->soft_cost))
          best = &e;
      }
    }
    if (best) trace.final = *best;
  }
  return trace;
}

void TraceSink::append(std::size_t index, InferenceTrace trace) {
  std::lock_guard lock(mu_);
  traces_.emplace_back(index, std::move(trace));
}

std::vector<InferenceTrace> TraceSink::sorted() const {
  std::lock_guard lock(mu_);
  auto copy = traces_;
  std::stable_sort(copy.begin(), copy.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<InferenceTrace> out;
  for (auto& [_, t] : copy) out.push_back(std::move(t));
  return out;
}

std::size_t TraceSink::size() const {
  std::lock_guard lock(mu_);
  return traces_.size();
}

std::vector<InferenceTrace> infer_all(const std::vector<InferenceJob>& work, Backend& backend, const Workspace& ws,
                                      const RefineOptions& opts, int jobs) {
  TraceSink sink;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    while (!failed) {
      std::size_t i = next++;
      if (i >= work.size()) return;
      try {
        sink.append(i, refine(work[i].target, work[i].ctx, backend, ws, opts));
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  int n = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  return sink.sorted();
}

}  // namespace sigrec
