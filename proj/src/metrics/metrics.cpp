#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <variant>

#include "sigrec/header_model.hpp"
#include "sigrec/metrics.hpp"

namespace sigrec {

using json = nlohmann::json;

namespace {

std::optional<std::string> try_canonical(std::string_view text) {
  try {
    return canonicalize_type(text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

bool scored(const EvalPosition& p) { return p.gt_type.has_value(); }

bool correct(const EvalPosition& p) { return p.gt_type && types_match(*p.gt_type, p.inferred_type); }

void require_scorable(const std::vector<EvalRecord>& records) {
  for (const auto& r : records)
    if (std::any_of(r.positions.begin(), r.positions.end(), scored)) return;
  throw EmptyCorpus();
}

bool has_protocol(const TypeExpr& t) {
  if (!t.protocols.empty()) return true;
  for (const auto& g : t.generic_args)
    if (has_protocol(g)) return true;
  if (t.block_signature) {
    if (has_protocol(*t.block_signature->return_type)) return true;
    for (const auto& p : t.block_signature->params)
      if (has_protocol(p)) return true;
  }
  return false;
}

// Candidate text -> canonical positions, or the raw text when unparseable,
// so that two identical unparseable candidates still compare equal.
std::variant<std::vector<std::string>, std::string> candidate_shape(const std::string& text) {
  if (auto p = inferred_positions(text)) return *p;
  return text;
}

}  // namespace

bool types_match(const std::string& gt, const std::optional<std::string>& inferred) {
  if (!inferred) return false;
  auto a = try_canonical(gt);
  auto b = try_canonical(*inferred);
  return a && b && *a == *b;
}

std::optional<std::vector<std::string>> inferred_positions(const std::string& signature) {
  MethodDecl d;
  try {
    d = parse_method(signature);
  } catch (const ParseError&) {
    return std::nullopt;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d.position_count(); ++i) out.push_back(canonical(d.type_at(i)));
  return out;
}

std::vector<EvalRecord> make_eval_records(const std::vector<BenchRecord>& bench,
                                          const std::vector<InferenceTrace>& traces) {
  std::map<std::pair<std::string, std::string>, std::size_t> by_fw_key;
  std::map<std::string, std::size_t> by_key;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    auto key = symbol_text(traces[i].target.decl);
    by_fw_key.emplace(std::pair{traces[i].target.framework, key}, i);
    by_key.emplace(key, i);
  }

  std::vector<EvalRecord> out;
  for (const auto& b : bench) {
    EvalRecord r;
    r.method_id = b.framework.empty() ? b.key() : b.framework + ":" + b.key();
    if (auto it = by_fw_key.find({b.framework, b.key()}); it != by_fw_key.end()) {
      r.trace_index = it->second;
    } else if (auto jt = by_key.find(b.key()); jt != by_key.end()) {
      r.trace_index = jt->second;
    }

    std::optional<std::vector<std::string>> inferred;
    if (!r.trace_index) {
      inferred = inferred_positions(render_signature(b.stripped_decl));
    } else if (const auto& fin = traces[*r.trace_index].final) {
      inferred = inferred_positions(fin->text);
    }

    for (const auto& p : b.position_types) {
      EvalPosition ep;
      ep.index = p.position;
      ep.gt_type = p.gt_type;
      if (inferred && p.position < inferred->size()) ep.inferred_type = (*inferred)[p.position];
      r.positions.push_back(std::move(ep));
    }
    out.push_back(std::move(r));
  }
  return out;
}

double pm_accuracy(const std::vector<EvalRecord>& records) {
  require_scorable(records);
  double sum = 0.0;
  std::size_t methods = 0;
  for (const auto& r : records) {
    std::size_t n = 0, ok = 0;
    for (const auto& p : r.positions) {
      if (!scored(p)) continue;
      ++n;
      if (correct(p)) ++ok;
    }
    if (n == 0) continue;
    sum += static_cast<double>(ok) / static_cast<double>(n);
    ++methods;
  }
  return sum / static_cast<double>(methods);
}

double pm_pooled(const std::vector<EvalRecord>& records) {
  require_scorable(records);
  std::size_t n = 0, ok = 0;
  for (const auto& r : records)
    for (const auto& p : r.positions)
      if (scored(p)) {
        ++n;
        if (correct(p)) ++ok;
      }
  return static_cast<double>(ok) / static_cast<double>(n);
}

double em_accuracy(const std::vector<EvalRecord>& records) {
  require_scorable(records);
  std::size_t methods = 0, exact = 0;
  for (const auto& r : records) {
    if (std::none_of(r.positions.begin(), r.positions.end(), scored)) continue;
    ++methods;
    bool all = std::all_of(r.positions.begin(), r.positions.end(),
                           [](const EvalPosition& p) { return !scored(p) || correct(p); });
    if (all) ++exact;
  }
  return static_cast<double>(exact) / static_cast<double>(methods);
}

std::optional<double> tool_usage_rate(const std::vector<InferenceTrace>& traces) {
  auto used = std::count_if(traces.begin(), traces.end(), [](const auto& t) { return t.tool_call_count() > 0; });
  return ratio(static_cast<std::size_t>(used), traces.size());
}

std::optional<double> inference_stability(const std::vector<InferenceTrace>& traces, int K) {
  std::size_t stable = 0;
  for (const auto& t : traces) {
    if (t.converged && t.converged_at == 1) {
      ++stable;
      continue;
    }
    auto limit = std::min<std::size_t>(t.iterations.size(), static_cast<std::size_t>(std::max(K, 0)));
    for (std::size_t k = 1; k < limit; ++k) {
      const auto* prev = t.iterations[k - 1].chosen();
      const auto* cur = t.iterations[k].chosen();
      if (prev && cur && candidate_shape(prev->text) == candidate_shape(cur->text)) {
        ++stable;
        break;
      }
    }
  }
  return ratio(stable, traces.size());
}

ToolCallCounts count_tool_calls(const std::vector<InferenceTrace>& traces, bool count_redundant) {
  ToolCallCounts c;
  for (const auto& t : traces)
    for (const auto& it : t.iterations)
      for (const auto& d : it.dialogues)
        for (const auto& turn : d.turns) {
          if (turn.kind != TurnKind::ToolCall) continue;
          ++c.total;
          bool bad = !turn.result || !turn.result->verdict.valid() || (count_redundant && turn.result->redundant);
          if (bad) ++c.hallucinated;
          else ++c.valid;
        }
  return c;
}

std::optional<double> tcc(const std::vector<InferenceTrace>& traces, bool count_redundant) {
  auto c = count_tool_calls(traces, count_redundant);
  return ratio(c.valid, c.total);
}

std::optional<double> hr(const std::vector<InferenceTrace>& traces, bool count_redundant) {
  auto c = count_tool_calls(traces, count_redundant);
  return ratio(c.hallucinated, c.total);
}

std::string_view to_string(Subtask s) {
  switch (s) {
    case Subtask::Scalar: return "scalar";
    case Subtask::Collection: return "collection";
    case Subtask::ProtocolQualified: return "protocol_qualified";
    case Subtask::Block: return "block";
  }
  return "scalar";
}

std::set<std::string> default_subtask_scalars() {
  return {"int",           "BOOL",          "long",           "long long",          "char",
          "short",         "float",         "double",         "unsigned",           "unsigned int",
          "unsigned long", "unsigned long long", "unsigned char", "unsigned short", "NSInteger",
          "NSUInteger"};
}

std::set<Subtask> classify_position(const TypeExpr& gt, const std::set<std::string>& scalars) {
  std::set<Subtask> out;
  if (gt.kind == TypeKind::Scalar && scalars.contains(core_name(gt))) out.insert(Subtask::Scalar);
  if (gt.kind == TypeKind::Collection) out.insert(Subtask::Collection);
  if (has_protocol(gt)) out.insert(Subtask::ProtocolQualified);
  if (gt.kind == TypeKind::Block) out.insert(Subtask::Block);
  return out;
}

SubtaskScores subtask_accuracies(const std::vector<EvalRecord>& records, const std::set<std::string>& scalars) {
  std::map<Subtask, std::pair<std::size_t, std::size_t>> tally;  // (correct, total)
  for (const auto& r : records)
    for (const auto& p : r.positions) {
      if (!p.gt_type) continue;
      TypeExpr gt;
      try {
        gt = parse_type(*p.gt_type);
      } catch (const ParseError&) {
        continue;
      }
      bool ok = correct(p);
      for (auto s : classify_position(gt, scalars)) {
        auto& [good, total] = tally[s];
        ++total;
        if (ok) ++good;
      }
    }
  auto get = [&](Subtask s) -> std::pair<std::optional<double>, std::size_t> {
    auto it = tally.find(s);
    if (it == tally.end()) return {std::nullopt, 0};
    return {ratio(it->second.first, it->second.second), it->second.second};
  };
  SubtaskScores out;
  std::tie(out.btc, out.n_scalar) = get(Subtask::Scalar);
  std::tie(out.ci, out.n_collection) = get(Subtask::Collection);
  std::tie(out.dpi, out.n_protocol) = get(Subtask::ProtocolQualified);
  std::tie(out.bti, out.n_block) = get(Subtask::Block);
  return out;
}

const std::vector<std::string>& histogram_categories() {
  static const std::vector<std::string> cats{"Conventional Types", "Generic Collections", "No ID Generics",
                                             "No Structs",         "Selector Mismatch",   "Struct Refs",
                                             "Method Not Parsed"};
  return cats;
}

std::map<std::string, std::size_t> diagnostic_histogram(const std::vector<InferenceTrace>& traces,
                                                        const std::vector<DiagnosticSet>& extra) {
  std::map<std::string, std::size_t> h;
  for (const auto& c : histogram_categories()) h[c] = 0;
  auto add = [&](const DiagnosticSet& set) {
    bool unparsed = false;
    for (const auto& d : set.diags) {
      if (d.constraint == Constraint::SyntaxErrors || d.constraint == Constraint::MethodNotParsed) {
        unparsed = true;
        continue;
      }
      ++h[std::string(display_name(d.constraint))];
    }
    if (unparsed) ++h["Method Not Parsed"];
  };
  for (const auto& t : traces)
    for (const auto& it : t.iterations)
      for (const auto& e : it.pool) add(e.diags);
  for (const auto& s : extra) add(s);
  return h;
}

MetricsReport build_report(const std::vector<EvalRecord>& records, const std::vector<InferenceTrace>& traces,
                           const std::vector<DiagnosticSet>& extra_diags, const ReportOptions& opts) {
  MetricsReport r;
  r.methods = records.size();
  for (const auto& rec : records) r.scored_positions += std::count_if(rec.positions.begin(), rec.positions.end(), scored);
  if (r.scored_positions > 0) {
    r.pm = pm_accuracy(records);
    r.pm_pooled = pm_pooled(records);
    r.em = em_accuracy(records);
  }
  r.traces = traces.size();
  r.tool_usage_rate = tool_usage_rate(traces);
  r.inference_stability = inference_stability(traces, opts.K);
  auto calls = count_tool_calls(traces, opts.count_redundant);
  r.tool_calls = calls.total;
  r.tcc = ratio(calls.valid, calls.total);
  r.hr = ratio(calls.hallucinated, calls.total);

  auto sub = subtask_accuracies(records, opts.scalars);
  r.btc = sub.btc;
  r.ci = sub.ci;
  r.dpi = sub.dpi;
  r.bti = sub.bti;
  double sum = 0.0;
  int n = 0;
  for (const auto& v : {r.btc, r.ci, r.dpi, r.bti})
    if (v) {
      sum += *v;
      ++n;
    }
  if (n > 0) r.avg_subtask = sum / n;

  r.diagnostic_histogram = diagnostic_histogram(traces, extra_diags);
  return r;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

struct Column {
  const char* header;
  std::optional<double> MetricsReport::*field;
};

const std::vector<Column>& table_columns() {
  static const std::vector<Column> cols{
      {"Avg.", &MetricsReport::avg_subtask},
      {"PM Accuracy", &MetricsReport::pm},
      {"EM Accuracy", &MetricsReport::em},
      {"Tool Usage Rate", &MetricsReport::tool_usage_rate},
      {"Inference Stability", &MetricsReport::inference_stability},
      {"Tool-Call Correctness", &MetricsReport::tcc},
      {"Tool-Call HR", &MetricsReport::hr},
      {"BT Completion", &MetricsReport::btc},
      {"Collection Inference", &MetricsReport::ci},
      {"DP Inference", &MetricsReport::dpi},
      {"BT Inference", &MetricsReport::bti},
  };
  return cols;
}

}  // namespace

json report_to_json(const MetricsReport& r) {
  json hist = json::object();
  for (const auto& c : histogram_categories()) {
    auto it = r.diagnostic_histogram.find(c);
    hist[c] = it == r.diagnostic_histogram.end() ? 0 : it->second;
  }
  return {{"pm", opt(r.pm)},
          {"pm_pooled", opt(r.pm_pooled)},
          {"em", opt(r.em)},
          {"tool_usage_rate", opt(r.tool_usage_rate)},
          {"inference_stability", opt(r.inference_stability)},
          {"tcc", opt(r.tcc)},
          {"hr", opt(r.hr)},
          {"btc", opt(r.btc)},
          {"ci", opt(r.ci)},
          {"dpi", opt(r.dpi)},
          {"bti", opt(r.bti)},
          {"avg_subtask", opt(r.avg_subtask)},
          {"diagnostic_histogram", hist},
          {"counts",
           {{"methods", r.methods},
            {"scored_positions", r.scored_positions},
            {"traces", r.traces},
            {"tool_calls", r.tool_calls}}}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport r;
  r.pm = read_opt(j, "pm");
  r.pm_pooled = read_opt(j, "pm_pooled");
  r.em = read_opt(j, "em");
  r.tool_usage_rate = read_opt(j, "tool_usage_rate");
  r.inference_stability = read_opt(j, "inference_stability");
  r.tcc = read_opt(j, "tcc");
  r.hr = read_opt(j, "hr");
  r.btc = read_opt(j, "btc");
  r.ci = read_opt(j, "ci");
  r.dpi = read_opt(j, "dpi");
  r.bti = read_opt(j, "bti");
  r.avg_subtask = read_opt(j, "avg_subtask");
  if (j.contains("diagnostic_histogram"))
    for (const auto& [k, v] : j.at("diagnostic_histogram").items()) r.diagnostic_histogram[k] = v.get<std::size_t>();
  if (j.contains("counts")) {
    const auto& c = j.at("counts");
    r.methods = c.value("methods", std::size_t{0});
    r.scored_positions = c.value("scored_positions", std::size_t{0});
    r.traces = c.value("traces", std::size_t{0});
    r.tool_calls = c.value("tool_calls", std::size_t{0});
  }
  return r;
}

std::string render_markdown(const MetricsReport& r, const std::string& label) {
  std::ostringstream out;
  out << "| Method |";
  for (const auto& c : table_columns()) out << ' ' << c.header << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < table_columns().size(); ++i) out << "---|";
  out << "\n| " << label << " |";
  out << std::fixed << std::setprecision(1);
  for (const auto& c : table_columns()) {
    const auto& v = r.*(c.field);
    if (v) out << ' ' << *v * 100.0 << " |";
    else out << " -- |";
  }
  out << "\n\n| Constraint | Count |\n|---|---|\n";
  for (const auto& c : histogram_categories()) {
    auto it = r.diagnostic_histogram.find(c);
    out << "| " << c << " | " << (it == r.diagnostic_histogram.end() ? 0 : it->second) << " |\n";
  }
  return out.str();
}

}  // namespace sigrec
