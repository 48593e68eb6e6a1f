// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "sigrec/agent.hpp"
#include "sigrec/bench.hpp"
#include "sigrec/cli.hpp"
#include "sigrec/header_model.hpp"
#include "sigrec/linter.hpp"
#include "sigrec/metrics.hpp"
#include "sigrec/selection.hpp"
#include "sigrec/trace_json.hpp"
#include "../support/generators.hpp"
#include "../support/metric_corpus.hpp"
#include "../support/selection_oracle.hpp"
#include "../support/violation_cases.hpp"
#include "../support/temp_workspace.hpp"

using namespace sigrec;
using nlohmann::json;

namespace {

constexpr double kMetricTolerance = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failed_;
      if (first_failure_.empty()) first_failure_ = what;
    }
  }
  std::size_t checks() const { return checks_; }
  bool ok() const { return failed_ == 0; }
  std::string summary(const std::string& unit = "checks") const {
    std::string s = std::to_string(checks_ - failed_) + "/" + std::to_string(checks_) + " " + unit;
    if (!first_failure_.empty()) s += "; first failure: " + first_failure_;
    return s;
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::string first_failure_;
};

int g_failed = 0;
int g_run = 0;

void criterion(int n, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  ++g_run;
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < limit_seconds;
  bool pass = o.pass && in_time;
  if (!pass) ++g_failed;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3f s, limit %g s", secs, limit_seconds);
  std::cout << (pass ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << o.detail << " (" << timing
            << (in_time ? "" : ", over time") << ")\n";
}

// 1 ------------------------------------------------------------------------

Outcome violation_golden() {
  Tally t;
  for (const auto& row : testing::violation_rows()) {
    auto original = parse_method(row.original);
    auto diags = lint(row.candidate, original);
    bool exact = diags.diags.size() == 1 && diags.diags[0].constraint == row.constraint &&
                 diags.diags[0].severity == row.severity;
    t.expect(exact, std::string(to_string(row.constraint)) + " fires alone at its severity");
    bool clean = false;
    if (!diags.diags.empty() && diags.diags[0].suggestion) {
      auto fixed = testing::apply_suggestion(row.candidate, diags.diags[0]);
      clean = lint(fixed, original).count(row.constraint) == 0;
    }
    t.expect(clean, std::string(to_string(row.constraint)) + " correction re-lints clean");
  }
  return {t.ok() && t.checks() == 14, t.summary("assertions")};
}

// 2 ------------------------------------------------------------------------

Outcome selection_oracle() {
  std::mt19937_64 rng(20240611);
  std::size_t agree = 0;
  const std::size_t trials = 1000;
  std::string first;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto rp = testing::random_pool(rng);
    SeverityWeights w{rp.medium, rp.low};
    std::vector<ScoredCandidate> scored;
    for (const auto& cs : rp.pool) {
      DiagnosticSet set;
      for (auto c : cs) set.diags.push_back({c, severity_of(c), std::nullopt, "", std::nullopt});
      scored.push_back(score_diagnostics(Candidate{}, set, w));
    }
    auto sel = select_best(scored);
    auto want = testing::exhaustive_select(rp.pool, rp.medium, rp.low);
    bool ok = sel.best.has_value() == want.index.has_value() &&
              (!want.index || (*sel.best == *want.index && sel.chosen().soft_cost == want.cost));
    if (ok) ++agree;
    else if (first.empty()) first = "trial " + std::to_string(trial);
  }
  std::string detail = std::to_string(agree) + "/" + std::to_string(trials) + " pools agree on index and cost";
  if (!first.empty()) detail += "; first disagreement at " + first;
  return {agree == trials, detail};
}

// 3 ------------------------------------------------------------------------

Outcome metric_oracle() {
  auto corpus = testing::make_corpus(50, 50);
  auto r = build_report(corpus.records, corpus.traces, {}, ReportOptions{});
  auto want = testing::recount(corpus);
  Tally t;
  auto same = [&](const char* name, const std::optional<double>& got, const std::optional<double>& exp) {
    bool ok = got.has_value() == exp.has_value() && (!got || std::fabs(*got - *exp) <= kMetricTolerance);
    t.expect(ok, name);
  };
  t.expect(corpus.records.size() == 50, "fixture size");
  same("PM", r.pm, want.pm);
  same("EM", r.em, want.em);
  same("BTC", r.btc, want.btc);
  same("CI", r.ci, want.ci);
  same("DPI", r.dpi, want.dpi);
  same("BTI", r.bti, want.bti);
  same("tool usage", r.tool_usage_rate, want.tool_usage_rate);
  same("stability", r.inference_stability, want.inference_stability);
  same("TCC", r.tcc, want.tcc);
  same("HR", r.hr, want.hr);
  char buf[160];
  std::snprintf(buf, sizeof buf, "; PM %.4f EM %.4f TCC %.4f HR %.4f", *r.pm, *r.em, r.tcc.value_or(-1),
                r.hr.value_or(-1));
  return {t.ok(), t.summary("metrics equal the recount") + buf};
}

// 4 ------------------------------------------------------------------------

struct PosSpec {
  const char* gt;
  const char* stripped;
  enum { Ambiguous, Kept, KeptWrong, Untyped } kind;
};

Outcome static_baseline() {
  static const std::vector<PosSpec> ambiguous{
      {"NSString *", "id", PosSpec::Ambiguous},
      {"NSArray<NSString *> *", "id", PosSpec::Ambiguous},
      {"id<NSCopying>", "id", PosSpec::Ambiguous},
      {"void (^)(NSError *)", "id", PosSpec::Ambiguous},
      {"CGPoint", "struct { double x0; double x1; }", PosSpec::Ambiguous},
      {"NSData *", "void *", PosSpec::Ambiguous},
  };
  static const std::vector<PosSpec> other{
      {"BOOL", "BOOL", PosSpec::Kept},
      {"double", "double", PosSpec::Kept},
      {"NSString *", "NSString *", PosSpec::Kept},
      {"NSInteger", "NSInteger", PosSpec::Kept},
      {"NSUInteger", "unsigned long long", PosSpec::KeptWrong},
      {"id", "id", PosSpec::Untyped},
  };
  std::mt19937_64 rng(4);
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::ostringstream gt, st;
  gt << "@interface Fixture : NSObject\n";
  st << "@interface Fixture : NSObject\n";
  double expected_sum = 0.0;
  const int methods = 40;
  for (int m = 0; m < methods; ++m) {
    std::size_t n_params = 1 + below(3);
    std::size_t forced = below(n_params + 1);
    std::vector<PosSpec> specs;
    for (std::size_t p = 0; p <= n_params; ++p) {
      if (p == forced) specs.push_back(ambiguous[below(ambiguous.size())]);
      else if (below(3) == 0) specs.push_back(ambiguous[below(ambiguous.size())]);
      else specs.push_back(other[below(other.size())]);
    }
    std::size_t scored = 0, correct = 0;
    for (const auto& s : specs) {
      if (s.kind == PosSpec::Untyped) continue;
      ++scored;
      if (s.kind == PosSpec::Kept) ++correct;
    }
    expected_sum += static_cast<double>(correct) / static_cast<double>(scored);
    for (auto* out : {&gt, &st}) {
      bool is_gt = out == &gt;
      auto type = [&](std::size_t p) { return is_gt ? specs[p].gt : specs[p].stripped; };
      *out << "- (" << type(0) << ")m" << m;
      for (std::size_t p = 1; p <= n_params; ++p) *out << (p == 1 ? ":(" : " arg:(") << type(p) << ")a" << p;
      *out << ";\n";
    }
  }
  gt << "@end\n";
  st << "@end\n";

  auto match = match_ground_truth({parse_header(st.str(), "Fixture.h")}, {parse_header(gt.str(), "Fixture.h")});
  auto records = make_eval_records(match.records, {});
  auto r = build_report(records, {});
  double expected_pm = expected_sum / methods;

  Tally t;
  t.expect(match.records.size() == static_cast<std::size_t>(methods), "all methods matched");
  bool every_ambiguous = std::all_of(match.records.begin(), match.records.end(), [](const BenchRecord& b) {
    return std::any_of(b.position_types.begin(), b.position_types.end(),
                       [](const PositionType& p) { return p.was_ambiguous && p.gt_type; });
  });
  t.expect(every_ambiguous, "every method has a scored ambiguous position");
  t.expect(r.em && *r.em == 0.0, "EM is exactly 0");
  t.expect(r.pm && std::fabs(*r.pm - expected_pm) <= kMetricTolerance, "PM equals the known fraction");
  char buf[128];
  std::snprintf(buf, sizeof buf, "; EM %.1f, PM %.6f vs known %.6f", r.em.value_or(-1), r.pm.value_or(-1), expected_pm);
  return {t.ok(), t.summary() + buf};
}

// 5 ------------------------------------------------------------------------

// Deterministic model stand-in. It yields a prior guess, adopts a
// declaration found in tool output when tools are offered, and otherwise
// changes only what the linter feedback in its prompt names.
class CorrectingBackend : public Backend {
 public:
  explicit CorrectingBackend(std::map<std::string, std::string> priors) : priors_(std::move(priors)) {}

  ModelTurn generate(const GenerateRequest& req) override {
    bool offered = std::any_of(req.tools.begin(), req.tools.end(), [](const ToolDef& d) { return d.name == "dec"; });
    const Message* tool_msg = nullptr;
    const Message* feedback = nullptr;
    std::string address;
    for (const auto& m : req.messages) {
      if (m.role == "tool") tool_msg = &m;
      if (m.role == "user" && m.content.starts_with("The linter rejected")) feedback = &m;
      if (m.role == "user") {
        auto at = m.content.find("Address: ");
        if (at != std::string::npos) address = m.content.substr(at + 9, m.content.find('\n', at) - at - 9);
      }
    }
    if (offered && !tool_msg && !address.empty())
      return ModelTurn::make_call(ToolCall{"dec", json{{"address", address}}, 0});

    std::string guess = priors_.at(req.target);
    if (tool_msg) {
      auto at = tool_msg->content.find("// declared: ");
      if (at != std::string::npos) guess = tool_msg->content.substr(at + 13, tool_msg->content.find('\n', at) - at - 13);
    }
    if (feedback) guess = apply_feedback(feedback->content);
    return ModelTurn::make_yield(guess);
  }

  static std::string apply_feedback(const std::string& text) {
    auto open = text.find('`');
    auto close = text.find("`:\n", open + 1);
    std::string candidate = text.substr(open + 1, close - open - 1);
    std::istringstream lines(text.substr(close + 3));
    std::string line;
    static const std::regex position(R"(at position (\d+))");
    while (std::getline(lines, line)) {
      if (!line.starts_with("- ")) continue;
      auto colon = line.find(": ");
      auto constraint = constraint_from_string(line.substr(2, colon - 2));
      auto semi = line.rfind("; ");
      if (!constraint || semi == std::string::npos || semi < colon) continue;
      Diagnostic d{*constraint, severity_of(*constraint), std::nullopt, "", line.substr(semi + 2)};
      std::smatch m;
      std::string message = line.substr(colon + 2, semi - colon - 2);
      if (std::regex_search(message, m, position)) d.position = std::stoul(m[1]);
      candidate = testing::apply_suggestion(candidate, d);
    }
    return candidate;
  }

 private:
  std::map<std::string, std::string> priors_;
};

struct AblationMethod {
  const char* stripped;
  const char* gt;
  const char* prior;
  const char* evidence;  // declaration visible in decompiler output, if any
};

Outcome feedback_ablation() {
  static const std::vector<AblationMethod> methods{
      // prior already right
      {"- (void)setTitle:(id)title;", "- (void)setTitle:(NSString *)title;", "- (void)setTitle:(NSString *)title;", nullptr},
      {"- (id)identifier;", "- (NSUUID *)identifier;", "- (NSUUID *)identifier;", nullptr},
      {"- (void)setTags:(id)tags;", "- (void)setTags:(NSSet<NSString *> *)tags;",
       "- (void)setTags:(NSSet<NSString *> *)tags;", nullptr},
      // wrong in a way only binary evidence reveals
      {"- (void)setPayload:(id)payload;", "- (void)setPayload:(NSData *)payload;",
       "- (void)setPayload:(NSString *)payload;", "- (void)setPayload:(NSData *)payload;"},
      {"- (id)owner;", "- (ABUser *)owner;", "- (NSObject *)owner;", "- (ABUser *)owner;"},
      {"- (void)loadWithHandler:(id)handler;", "- (void)loadWithHandler:(void (^)(NSError *))handler;",
       "- (void)loadWithHandler:(void (^)(NSData *))handler;", "- (void)loadWithHandler:(void (^)(NSError *))handler;"},
      // hard violations the linter names
      {"- (void)setOrigin:(struct { double x0; double x1; })origin;", "- (void)setOrigin:(CGPoint)origin;",
       "- (void)setOrigin:(struct { double x0; double x1; })origin;", nullptr},
      {"- (void)moveTo:(struct { double x0; double x1; })p;", "- (void)moveTo:(CGPoint)p;",
       "- (void)moveTo:(struct { double x0; double x1; })p;", nullptr},
      {"- (struct { double x0; double x1; })center;", "- (CGPoint)center;",
       "- (struct { double x0; double x1; })center;", nullptr},
      {"- (void)setCount:(id)count;", "- (void)setCount:(NSNumber *)count;", "- (void)setCount:NSNumber *)count;",
       nullptr},
      {"- (id)name;", "- (NSString *)name;", "- NSString *)name;", nullptr},
      // soft violations; admissible, so never fed back under the default stop rule
      {"- (void)setItems:(id)items;", "- (void)setItems:(NSArray<ABItem *> *)items;", "- (void)setItems:(NSArray *)items;",
       nullptr},
      {"- (id)lookup;", "- (NSDictionary<NSString *, ABItem *> *)lookup;", "- (NSDictionary *)lookup;", nullptr},
  };

  testing::TempDir dir;
  std::ostringstream stripped, gt;
  stripped << "@interface ABStore : NSObject\n";
  gt << "@interface ABStore : NSObject\n";
  json symbols = json::array();
  std::map<std::string, std::string> priors;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& m = methods[i];
    stripped << m.stripped << "\n";
    gt << m.gt << "\n";
    auto decl = parse_method(m.stripped);
    decl.owning_class = "ABStore";
    auto sym = symbol_text(decl);
    priors[sym] = m.prior;
    std::uint64_t addr = 0x1b0000000 + 0x100 * i;
    symbols.push_back({{"symbol", sym}, {"address", format_address(addr)}});
    std::string body = "void " + sym + "(ABStore *self, SEL _cmd)\n{\n  objc_retain(self);\n";
    if (m.evidence) body += "  // declared: " + std::string(m.evidence) + "\n";
    dir.write("dec/" + format_address(addr).substr(2) + ".txt", body + "}\n");
  }
  stripped << "@end\n";
  gt << "@end\n";
  dir.write("manifest.json", R"({"framework": "ABKit", "os_build": "23A344"})");
  dir.write("symbols.json", symbols.dump());
  dir.write("headers/ABStore.h", stripped.str());

  Workspace ws = ingest_workspace(dir.path());
  auto jobs = cli::collect_jobs(ws);
  auto match = match_ground_truth({parse_header(stripped.str(), "ABStore.h")}, {parse_header(gt.str(), "ABStore.h")},
                                  "ABKit");

  auto em_for = [&](bool tools, bool feedback, int K) {
    CorrectingBackend backend(priors);
    RefineOptions o;
    o.K = K;
    o.pool_size = 1;
    o.tools_enabled = tools;
    o.feedback_enabled = feedback;
    auto traces = infer_all(jobs, backend, ws, o, 4);
    return em_accuracy(make_eval_records(match.records, traces));
  };
  double one_shot = em_for(false, false, 1);
  double tool_context = em_for(true, false, 10);
  double loop = em_for(true, true, 10);

  char buf[160];
  std::snprintf(buf, sizeof buf, "EM one-shot %.3f < tool-context %.3f < feedback-loop %.3f over %zu methods",
                one_shot, tool_context, loop, match.records.size());
  return {jobs.size() == methods.size() && one_shot < tool_context && tool_context < loop, buf};
}

// 6 ------------------------------------------------------------------------

Outcome budget_safety() {
  testing::TempDir dir;
  dir.write("manifest.json", R"({"framework": "Adv", "os_build": "1"})");
  dir.write("symbols.json", R"([{"symbol": "-[Adv setCenter:]", "address": "0x1000"}])");
  dir.write("headers/Adv.h", "@interface Adv : NSObject\n- (void)setCenter:(struct { double x0; double x1; })c;\n@end\n");
  Workspace ws = ingest_workspace(dir.path());
  auto jobs = cli::collect_jobs(ws);
  const auto& job = jobs.at(0);

  RefineOptions o;
  o.K = 10;
  o.max_turns = 16;
  o.pool_size = 3;

  Tally t;
  auto check_trace = [&](const std::string& label, const InferenceTrace& tr, double expected_stability) {
    t.expect(!tr.converged && !tr.converged_at, label + ": not converged");
    t.expect(tr.iterations.size() == static_cast<std::size_t>(o.K), label + ": exactly K iterations");
    bool within = true;
    for (const auto& it : tr.iterations)
      for (const auto& d : it.dialogues) within = within && d.turns.size() <= static_cast<std::size_t>(o.max_turns);
    t.expect(within, label + ": every dialogue within max_turns");
    auto back = trace_to_json(trace_from_json(trace_to_json(tr)));
    t.expect(back == trace_to_json(tr), label + ": trace serializes completely");
    t.expect(inference_stability({tr}, o.K) == expected_stability, label + ": stability per fixed-point definition");
  };

  {
    auto backend = ScriptedBackend::from_json(json::parse(R"([{"kind": "tool_call", "tool": "hdr_scan", "repeat": -1}])"));
    auto tr = refine(job.target, job.ctx, backend, ws, o);
    check_trace("infinite tool calls", tr, 0.0);
    bool saturated = true;
    for (const auto& it : tr.iterations)
      for (const auto& d : it.dialogues) saturated = saturated && d.turns.size() == static_cast<std::size_t>(o.max_turns);
    t.expect(saturated && !tr.final, "infinite tool calls: budget reached, no candidate");
  }
  {
    json script = json::array();
    for (int k = 1; k <= 12; ++k)
      script.push_back({{"iteration", k},
                        {"kind", "yield"},
                        {"signature", k % 2 ? "- (void)setCenter:(struct { double x0; double x1; })c;"
                                            : "- (void)setMiddle:(CGPoint)c;"}});
    auto backend = ScriptedBackend::from_json(script);
    auto tr = refine(job.target, job.ctx, backend, ws, o);
    check_trace("alternating inadmissible", tr, 0.0);
    t.expect(tr.final.has_value() && !tr.final->admissible, "alternating inadmissible: least-violating final kept");
  }
  {
    auto backend = ScriptedBackend::from_json(
        json::parse(R"([{"kind": "yield", "signature": "- (void)setCenter:(struct { double x0; double x1; })c;"}])"));
    auto tr = refine(job.target, job.ctx, backend, ws, o);
    check_trace("constant inadmissible", tr, 1.0);
  }
  return {t.ok(), t.summary()};
}

// 7 ------------------------------------------------------------------------

Outcome bench_determinism() {
  std::mt19937_64 rng(7);
  static const std::vector<std::string> cats{"Graphics", "Media", "Networking", "System"};
  static const std::vector<std::size_t> sizes{1, 5, 10, 11, 50, 100, 101, 400, 1000, 1001, 2500};
  std::vector<FrameworkEntry> frameworks;
  for (int i = 0; i < 90; ++i)
    frameworks.push_back({"FW" + std::to_string(i), cats[rng() % cats.size()], sizes[rng() % sizes.size()], {}, {}});

  auto run_once = [&] {
    auto bins = stratify(frameworks);
    auto sample = sample_balanced(bins, 5, 42);
    auto sp = split(sample.selected, 0.7, 43);
    json j;
    for (const auto& f : sample.selected) j["selected"].push_back(f.name);
    for (const auto& s : sample.shortfalls)
      j["shortfalls"].push_back({s.bin.first, to_string(s.bin.second), s.available, s.requested});
    for (const auto& f : sp.train) j["train"].push_back(f.name);
    for (const auto& f : sp.eval) j["eval"].push_back(f.name);
    j["ratios"] = render_ratio_table(sp.ratios);
    return j.dump();
  };
  Tally t;
  auto first = run_once();
  for (int rep = 1; rep < 5; ++rep) t.expect(run_once() == first, "repeat " + std::to_string(rep) + " identical");
  const std::vector<std::pair<std::size_t, SizeBin>> bounds{{10, SizeBin::Small},   {11, SizeBin::Medium},
                                                           {100, SizeBin::Medium}, {101, SizeBin::Large},
                                                           {1000, SizeBin::Large}, {1001, SizeBin::Oversize}};
  for (const auto& [n, bin] : bounds) t.expect(size_bin(n) == bin, "bin at " + std::to_string(n));
  return {t.ok(), t.summary() + " (4 repeats identical to the first, 6 bin boundaries)"};
}

// 8 ------------------------------------------------------------------------

Outcome parser_round_trip() {
  testing::Gen gen(8);
  std::size_t ok = 0, scalars = 0, generics = 0, protocols = 0, blocks = 0;
  std::string first;
  const std::size_t n = 500;
  std::function<void(const TypeExpr&)> census = [&](const TypeExpr& t) {
    if (t.kind == TypeKind::Scalar) ++scalars;
    if (!t.generic_args.empty()) ++generics;
    if (!t.protocols.empty()) ++protocols;
    if (t.kind == TypeKind::Block) ++blocks;
    for (const auto& g : t.generic_args) census(g);
  };
  for (std::size_t i = 0; i < n; ++i) {
    MethodDecl d = gen.method();
    for (std::size_t p = 0; p < d.position_count(); ++p) census(d.type_at(p));
    auto text = render_signature(d);
    try {
      if (same_signature(parse_method(text), d)) {
        ++ok;
        continue;
      }
    } catch (const ParseError&) {
    }
    if (first.empty()) first = text;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu round-trip (scalar %zu, generic %zu, protocol %zu, block %zu)", ok, n,
                scalars, generics, protocols, blocks);
  std::string detail = buf;
  if (!first.empty()) detail += "; first failure: " + first;
  return {ok == n && scalars && generics && protocols && blocks, detail};
}

// 9 ------------------------------------------------------------------------

Outcome end_to_end() {
  const std::filesystem::path fx = SIGREC_FIXTURE_DIR;
  testing::TempDir out;
  cli::RunConfig cfg;
  cfg.command = "infer";
  cfg.workspace = (fx / "e2e/workspace").string();
  cfg.script = (fx / "e2e/script.json").string();
  cfg.out = (out.path() / "run").string();
  cfg.jobs = 4;
  cli::cmd_infer(cfg);

  cli::BenchBuildOptions b;
  b.gt_dir = (fx / "e2e/bench/gt").string();
  b.stripped_dir = (fx / "e2e/bench/stripped").string();
  b.categories = (fx / "e2e/bench/categories.json").string();
  b.out = (out.path() / "bench").string();
  cli::cmd_bench_build(b);

  cli::BenchEvalOptions e;
  e.dataset = (out.path() / "bench/dataset.json").string();
  e.traces = (out.path() / "run/traces.json").string();
  e.split = "all";
  e.out = (out.path() / "eval").string();
  cli::cmd_bench_eval(e);

  auto produced = cli::read_text(out.path() / "eval/report.json");
  auto golden = cli::read_text(fx / "e2e/golden/report.json");
  bool same = produced == golden;
  return {same, same ? "report.json equals the golden report byte-for-byte (" + std::to_string(golden.size()) + " bytes)"
                     : "report.json differs from the golden report"};
}

}  // namespace

int main() {
  criterion(1, "constraint golden suite", 1.0, violation_golden);
  criterion(2, "selection oracle", 5.0, selection_oracle);
  criterion(3, "metric oracle", 5.0, metric_oracle);
  criterion(4, "static-baseline direction", 5.0, static_baseline);
  criterion(5, "feedback-ablation direction", 30.0, feedback_ablation);
  criterion(6, "convergence and budget safety", 30.0, budget_safety);
  criterion(7, "bench determinism", 5.0, bench_determinism);
  criterion(8, "parser round-trip", 5.0, parser_round_trip);
  criterion(9, "end-to-end hermetic run", 60.0, end_to_end);
  std::cout << (g_run - g_failed) << "/" << g_run << " criteria passed\n";
  return g_failed == 0 ? 0 : 1;
}
