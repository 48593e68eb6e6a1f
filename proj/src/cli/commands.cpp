#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "sigrec/cli.hpp"
#include "sigrec/header_model.hpp"
#include "sigrec/trace_json.hpp"

namespace sigrec::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return kUsage;
  if (dynamic_cast<const BackendError*>(&e)) return kBackend;
  return kData;
}

std::string error_line(const std::exception& e) {
  static const char* const kinds[] = {"ok", "usage", "data", "backend"};
  int code = exit_code_for(e);
  return json{{"error", kinds[code]}, {"exit_code", code}, {"message", e.what()}}.dump();
}

SeverityWeights parse_weights(const std::string& spec, SeverityWeights w) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--weights: expected key=value, got \"" + item + "\"");
    std::string key = item.substr(0, eq);
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw UsageError("--weights: \"" + item.substr(eq + 1) + "\" is not a number");
    }
    if (key == "medium") w.medium = value;
    else if (key == "low") w.low = value;
    else throw UsageError("--weights: unknown severity \"" + key + "\" (expected medium or low)");
  }
  if (!w.valid()) throw UsageError("--weights: require medium >= low >= 0");
  return w;
}

void RunConfig::validate() const {
  if (backend != "scripted" && backend != "remote") throw UsageError("--backend must be scripted or remote");
  if (backend == "scripted" && script.empty()) throw UsageError("--script is required with --backend scripted");
  if (backend == "remote" && endpoint.empty()) throw UsageError("--endpoint is required with --backend remote");
  if (max_iters < 1) throw UsageError("--max-iters must be >= 1");
  if (max_turns < 1) throw UsageError("--max-turns must be >= 1");
  if (pool_size < 1) throw UsageError("--pool-size must be >= 1");
  if (jobs < 1) throw UsageError("--jobs must be >= 1");
  if (!weights.valid()) throw UsageError("weights must satisfy medium >= low >= 0");
}

RefineOptions RunConfig::refine_options() const {
  RefineOptions o;
  o.K = max_iters;
  o.max_turns = max_turns;
  o.pool_size = pool_size;
  o.weights = weights;
  o.tools_enabled = tools_enabled;
  o.feedback_enabled = feedback_enabled;
  o.stop_rule = stop_rule;
  return o;
}

json config_to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"workspace", c.workspace},
          {"backend", c.backend},
          {"script", c.script},
          {"endpoint", c.endpoint},
          {"model", c.model},
          {"max_iters", c.max_iters},
          {"max_turns", c.max_turns},
          {"pool_size", c.pool_size},
          {"weights", {{"medium", c.weights.medium}, {"low", c.weights.low}}},
          {"seed", c.seed},
          {"jobs", c.jobs},
          {"out", c.out},
          {"tools_enabled", c.tools_enabled},
          {"feedback_enabled", c.feedback_enabled},
          {"stop_rule", c.stop_rule == StopRule::StableCost ? "stable_cost" : "first_admissible"}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = j.value("command", "");
  c.workspace = j.value("workspace", "");
  c.backend = j.value("backend", "scripted");
  c.script = j.value("script", "");
  c.endpoint = j.value("endpoint", "");
  c.model = j.value("model", "");
  c.max_iters = j.value("max_iters", 10);
  c.max_turns = j.value("max_turns", 16);
  c.pool_size = j.value("pool_size", 5);
  if (j.contains("weights")) {
    c.weights.medium = j["weights"].value("medium", 2.0);
    c.weights.low = j["weights"].value("low", 1.0);
  }
  c.seed = j.value("seed", std::uint64_t{0});
  c.jobs = j.value("jobs", 1);
  c.out = j.value("out", "");
  c.tools_enabled = j.value("tools_enabled", true);
  c.feedback_enabled = j.value("feedback_enabled", true);
  c.stop_rule = j.value("stop_rule", "") == "stable_cost" ? StopRule::StableCost : StopRule::FirstAdmissible;
  return c;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  auto j = json::parse(read_text(p), nullptr, false);
  if (j.is_discarded()) throw DataError(p.string() + " is not valid JSON");
  return j;
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

json cmd_ingest(const fs::path& root) {
  Workspace ws = ingest_workspace(root);
  json warnings = json::array();
  for (const auto& w : ws.warnings) warnings.push_back({{"kind", to_string(w.kind)}, {"detail", w.detail}});
  json headers = json::array();
  for (const auto& [name, text] : ws.headers) headers.push_back(name);
  std::size_t targets = 0;
  for (const auto& [name, text] : ws.headers) targets += find_inference_targets(parse_header(text, name)).size();
  return {{"framework", ws.framework},
          {"os_build", ws.os_build},
          {"symbols", ws.symtab.size()},
          {"disassembly", ws.disas_index.size()},
          {"decompilation", ws.dec_index.size()},
          {"headers", headers},
          {"inference_targets", targets},
          {"orphans", ws.orphans.size()},
          {"warnings", warnings}};
}

std::vector<LintEntry> cmd_lint(const fs::path& file, const LintConfig& config) {
  std::vector<LintEntry> out;
  if (file.extension() == ".json") {
    json doc = read_json(file);
    if (!doc.is_array()) throw DataError(file.string() + ": expected an array of {candidate, original}");
    std::size_t i = 0;
    for (const auto& item : doc) {
      ++i;
      if (!item.is_object() || !item.contains("candidate") || !item["candidate"].is_string())
        throw DataError(file.string() + ": entry " + std::to_string(i) + " lacks a string \"candidate\"");
      std::string cand = item["candidate"];
      std::string orig = item.value("original", cand);
      MethodDecl original;
      try {
        original = parse_method(orig, config.types);
      } catch (const ParseError& e) {
        throw DataError(file.string() + ": entry " + std::to_string(i) + " original does not parse: " + e.what());
      }
      out.push_back({item.value("label", std::to_string(i)), cand, lint(cand, original, config)});
    }
    return out;
  }

  std::string text = read_text(file);
  HeaderAST ast = parse_header(text, file.filename().string(), config.types);
  for (const auto& e : ast.errors) {
    DiagnosticSet set;
    set.diags.push_back({Constraint::SyntaxErrors, Severity::High, std::nullopt,
                         "line " + std::to_string(e.line) + ":" + std::to_string(e.column) + ": expected " + e.expected,
                         std::nullopt});
    set.diags.push_back({Constraint::MethodNotParsed, Severity::High, std::nullopt, "method skipped", std::nullopt});
    out.push_back({file.filename().string() + ":" + std::to_string(e.line), "", std::move(set)});
  }
  for (const auto* m : ast.methods()) {
    auto rendered = render_signature(*m);
    out.push_back({symbol_text(*m), rendered, lint(*m, *m, config)});
  }
  return out;
}

std::string render_lint(const std::vector<LintEntry>& entries) {
  std::ostringstream out;
  std::size_t total = 0;
  for (const auto& e : entries)
    for (const auto& d : e.diags.diags) {
      ++total;
      out << e.label << '\t' << to_string(d.severity) << '\t' << to_string(d.constraint) << '\t';
      out << (d.position ? std::to_string(*d.position) : "-") << '\t' << d.message;
      if (d.suggestion) out << "\tsuggestion: " << *d.suggestion;
      out << '\n';
    }
  out << total << " diagnostic" << (total == 1 ? "" : "s") << " in " << entries.size() << " declaration"
      << (entries.size() == 1 ? "" : "s") << '\n';
  return out.str();
}

json lint_to_json(const std::vector<LintEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries)
    arr.push_back({{"label", e.label}, {"candidate", e.candidate}, {"diagnostics", diagnostic_set_to_json(e.diags)}});
  return arr;
}

std::vector<InferenceJob> collect_jobs(const Workspace& ws, const AmbiguityConfig& ambig) {
  std::vector<InferenceJob> jobs;
  const auto tools = standard_tool_defs();
  for (const auto& [name, text] : ws.headers) {
    HeaderAST ast = parse_header(text, name);
    for (auto& target : find_inference_targets(ast, ambig, ws.framework)) {
      target = bind_symbol(std::move(target), ws.symtab);
      std::vector<MethodDecl> siblings;
      for (const auto& iface : ast.interfaces)
        if (iface.name == target.decl.owning_class)
          siblings.insert(siblings.end(), iface.methods.begin(), iface.methods.end());
      auto ctx = make_context(target, ws, tools, siblings);
      jobs.push_back({std::move(target), std::move(ctx)});
    }
  }
  return jobs;
}

namespace {

std::string format_cost(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// The original declaration with ambiguous positions taken from the
// candidate. Empty when the candidate does not line up with it.
std::optional<MethodDecl> merge_candidate(const InferenceTrace& t, const MethodDecl& original) {
  if (!t.final) return std::nullopt;
  MethodDecl cand;
  try {
    cand = parse_method(t.final->text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
  if (cand.selector_pieces != original.selector_pieces || cand.params.size() != original.params.size())
    return std::nullopt;
  MethodDecl merged = original;
  for (auto pos : t.target.ambiguous_positions)
    if (pos < merged.position_count()) merged.type_at(pos) = cand.type_at(pos);
  return merged;
}

}  // namespace

std::string reconstruct_header(const std::string& text, const std::string& name,
                               const std::vector<const InferenceTrace*>& traces) {
  std::map<std::string, const InferenceTrace*> by_symbol;
  for (const auto* t : traces) by_symbol.emplace(symbol_text(t->target.decl), t);

  HeaderAST ast = parse_header(text, name);
  struct Splice {
    std::size_t begin, end;
    std::string replacement;
  };
  std::vector<Splice> splices;
  std::size_t accepted = 0, unresolved = 0;
  for (const auto* m : ast.methods()) {
    auto it = by_symbol.find(symbol_text(*m));
    if (it == by_symbol.end()) continue;
    const InferenceTrace& t = *it->second;
    std::optional<MethodDecl> merged = t.converged ? merge_candidate(t, *m) : std::nullopt;
    std::string note = "/* sigrec: iterations=" + std::to_string(t.iterations.size());
    std::string decl_text = text.substr(m->source_span.begin, m->source_span.end - m->source_span.begin);
    if (merged) {
      ++accepted;
      decl_text = render_signature(*merged);
      note += " soft_cost=" + format_cost(t.final->soft_cost) + " status=accepted */";
    } else {
      ++unresolved;
      if (t.final) note += " soft_cost=" + format_cost(t.final->soft_cost);
      note += " status=unresolved */";
    }
    splices.push_back({m->source_span.begin, m->source_span.end, decl_text + " " + note});
  }

  std::string out = text;
  std::sort(splices.begin(), splices.end(), [](const auto& a, const auto& b) { return a.begin > b.begin; });
  for (const auto& s : splices) out.replace(s.begin, s.end - s.begin, s.replacement);
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += "// sigrec: " + std::to_string(accepted + unresolved) + " targets, " + std::to_string(accepted) +
         " accepted, " + std::to_string(unresolved) + " unresolved\n";
  return out;
}

InferResult cmd_infer(const RunConfig& config, Backend& backend) {
  config.validate();
  Workspace ws = ingest_workspace(config.workspace);
  auto jobs = collect_jobs(ws);

  InferResult r;
  r.traces = infer_all(jobs, backend, ws, config.refine_options(), config.jobs);

  std::map<std::string, std::vector<const InferenceTrace*>> per_header;
  for (const auto& t : r.traces) per_header[t.target.decl.source_header].push_back(&t);
  for (const auto& [name, text] : ws.headers) r.headers[name] = reconstruct_header(text, name, per_header[name]);

  ReportOptions ro;
  ro.K = config.max_iters;
  r.report = build_report({}, r.traces, {}, ro);
  return r;
}

InferResult cmd_infer(const RunConfig& config) {
  config.validate();
  std::unique_ptr<Backend> backend;
  if (config.backend == "scripted") {
    backend.reset(new ScriptedBackend(ScriptedBackend::from_file(config.script)));
  } else {
    RemoteConfig rc;
    rc.endpoint = config.endpoint;
    rc.model = config.model;
    rc.seed = config.seed;
    backend = std::make_unique<RemoteBackend>(rc);
  }
  auto r = cmd_infer(config, *backend);
  if (!config.out.empty()) {
    fs::path out = config.out;
    write_json(out / "config.json", config_to_json(config));
    write_json(out / "traces.json", traces_to_json(r.traces));
    write_json(out / "report.json", report_to_json(r.report));
    write_text(out / "report.md", render_markdown(r.report));
    for (const auto& [name, text] : r.headers) write_text(out / "headers" / name, text);
  }
  return r;
}

json cmd_bench_build(const BenchBuildOptions& opts) {
  for (const auto* dir : {&opts.gt_dir, &opts.stripped_dir})
    if (dir->empty() || !fs::is_directory(*dir)) throw DataError("not a directory: " + *dir);
  std::map<std::string, std::string> categories;
  if (!opts.categories.empty()) {
    json c = read_json(opts.categories);
    if (!c.is_object()) throw DataError(opts.categories + ": expected an object of framework -> category");
    for (const auto& [k, v] : c.items()) {
      if (!v.is_string()) throw DataError(opts.categories + ": category of " + k + " is not a string");
      categories[k] = v.get<std::string>();
    }
  }
  Dataset d = build_dataset(opts.gt_dir, opts.stripped_dir, categories, opts.dataset);
  json manifest = dataset_to_json(d);
  if (!opts.out.empty()) {
    fs::path out = opts.out;
    write_json(out / "config.json", {{"command", "bench-build"},
                                     {"gt", opts.gt_dir},
                                     {"stripped", opts.stripped_dir},
                                     {"categories", opts.categories},
                                     {"n_per_bin", opts.dataset.n_per_bin},
                                     {"sample_seed", opts.dataset.sample_seed},
                                     {"split_seed", opts.dataset.split_seed},
                                     {"eval_fraction", opts.dataset.eval_fraction},
                                     {"include_oversize", opts.dataset.include_oversize}});
    write_json(out / "dataset.json", manifest);
    write_text(out / "ratios.md", render_ratio_table(d.split.ratios));
  }
  return manifest;
}

MetricsReport cmd_bench_eval(const BenchEvalOptions& opts) {
  if (opts.split != "eval" && opts.split != "train" && opts.split != "all")
    throw UsageError("--split must be eval, train or all");
  json dataset = read_json(opts.dataset);
  std::vector<BenchRecord> bench;
  try {
    bench = dataset_records(dataset, opts.split);
  } catch (const json::exception& e) {
    throw DataError(opts.dataset + ": malformed dataset manifest: " + e.what());
  }
  std::vector<InferenceTrace> traces;
  json traces_doc;
  if (!opts.traces.empty()) {
    traces_doc = read_json(opts.traces);
    traces = traces_from_json(traces_doc);
  }

  ReportOptions ro;
  ro.K = opts.K;
  ro.count_redundant = opts.count_redundant;
  auto records = make_eval_records(bench, traces);
  auto report = build_report(records, traces, {}, ro);

  if (!opts.out.empty()) {
    fs::path out = opts.out;
    write_json(out / "config.json", {{"command", "bench-eval"},
                                     {"dataset", opts.dataset},
                                     {"traces", opts.traces},
                                     {"split", opts.split},
                                     {"max_iters", opts.K},
                                     {"count_redundant", opts.count_redundant}});
    write_json(out / "traces.json", traces_to_json(traces));
    write_json(out / "report.json", report_to_json(report));
    write_text(out / "report.md", render_markdown(report));
  }
  return report;
}

std::string cmd_report(const fs::path& report, const std::string& format) {
  json j = read_json(report);
  if (format == "json") return j.dump(2) + "\n";
  if (format == "markdown" || format == "md") return render_markdown(report_from_json(j));
  throw UsageError("--format must be markdown or json");
}

}  // namespace sigrec::cli
