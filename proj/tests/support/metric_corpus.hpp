#pragma once

// Synthetic metric corpora whose per-position correctness, subtask
// membership, tool-call validity and trace stability are fixed at
// generation time, plus a recount that reads only those flags.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigrec/agent.hpp"
#include "sigrec/metrics.hpp"

namespace sigrec::testing {

inline PoolEntry entry(std::string text, bool admissible = true) {
  PoolEntry e;
  e.text = std::move(text);
  e.admissible = admissible;
  e.diags.target = e.text;
  return e;
}

inline IterationRecord iteration(int index, std::optional<std::string> chosen_text) {
  IterationRecord it;
  it.index = index;
  if (chosen_text) {
    it.pool.push_back(entry(*chosen_text));
    it.selected = 0;
  }
  return it;
}

inline TurnRecord call_turn(bool valid, bool redundant = false) {
  TurnRecord t;
  t.kind = TurnKind::ToolCall;
  t.call = ToolCall{valid ? "disas" : "objdump", nlohmann::json::object(), 0};
  ToolResult r;
  r.status = valid ? CallStatus::Ok : CallStatus::InvalidCall;
  if (!valid) r.verdict.reason = HallucinationReason::UnknownTool;
  r.redundant = redundant;
  t.result = r;
  return t;
}


struct TruthPos {
  bool scored;
  bool correct;
  bool s, c, p, b;
};

struct Corpus {
  std::vector<EvalRecord> records;
  std::vector<std::vector<TruthPos>> truth;
  std::vector<InferenceTrace> traces;
  std::vector<bool> trace_uses_tools;
  std::vector<bool> trace_stable;
  std::size_t calls = 0, bad_calls = 0;
};

struct Sample {
  const char* gt;
  const char* right;  // differs in spelling only
  const char* wrong;
  bool s, c, p, b;
};

inline const std::vector<Sample>& samples() {
  static const std::vector<Sample> v{
      {"BOOL", "BOOL", "char", true, false, false, false},
      {"NSInteger", "NSInteger", "int", true, false, false, false},
      {"unsigned long", "unsigned long", "long", true, false, false, false},
      {"double", "double", "float", true, false, false, false},
      {"NSString *", "NSString*", "NSData *", false, false, false, false},
      {"CGFloat", "CGFloat", "double", false, false, false, false},
      {"NSArray<NSString *> *", "NSArray<NSString*>*", "NSArray *", false, true, false, false},
      {"NSDictionary<NSString *, NSNumber *> *", "NSDictionary<NSString*,NSNumber*> *", "NSDictionary *", false, true,
       false, false},
      {"NSArray<id<NSCopying>> *", "NSArray<id<NSCopying> > *", "NSArray<id> *", false, true, true, false},
      {"id<NSCopying>", "id <NSCopying>", "id", false, false, true, false},
      {"NSObject<NSCoding> *", "NSObject <NSCoding>*", "NSObject *", false, false, true, false},
      {"void (^)(NSError *)", "void(^)(NSError*)", "void (^)(NSString *)", false, false, false, true},
      {"void (^)(id<NSCopying>)", "void (^)(id <NSCopying>)", "void (^)(id)", false, false, true, true},
      {"BOOL (^)(NSString *, NSUInteger)", "BOOL(^)(NSString*,NSUInteger)", "BOOL (^)(NSString *)", false, false,
       false, true},
  };
  return v;
}

inline Corpus make_corpus(std::uint64_t seed, std::size_t methods) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  Corpus c;
  for (std::size_t m = 0; m < methods; ++m) {
    EvalRecord r;
    r.method_id = "m" + std::to_string(m);
    std::vector<TruthPos> truth;
    std::size_t n = 1 + below(4);
    bool any_scored = false;
    for (std::size_t i = 0; i < n; ++i) {
      bool scored = below(5) != 0 || (i + 1 == n && !any_scored);
      any_scored |= scored;
      if (!scored) {
        r.positions.push_back({i, std::nullopt, below(2) ? std::optional<std::string>("id") : std::nullopt});
        truth.push_back({false, false, false, false, false, false});
        continue;
      }
      const auto& s = samples()[below(samples().size())];
      std::optional<std::string> inferred;
      bool ok = false;
      switch (below(4)) {
        case 0: inferred = s.right; ok = true; break;
        case 1: inferred = s.gt; ok = true; break;
        case 2: inferred = s.wrong; break;
        default: break;  // absent
      }
      r.positions.push_back({i, std::string(s.gt), inferred});
      truth.push_back({true, ok, s.s, s.c, s.p, s.b});
    }
    c.records.push_back(std::move(r));
    c.truth.push_back(std::move(truth));
  }

  const std::vector<std::string> texts{"- (void)a:(NSArray *)x;", "- (void)a:(NSSet *)x;", "- (void)a:(NSData *)x;",
                                       "- (void)a:(NSString *)x;"};
  std::size_t n_traces = 1 + below(methods);
  for (std::size_t i = 0; i < n_traces; ++i) {
    InferenceTrace t;
    bool uses = false, stable = false;
    std::size_t iters = 1 + below(10);
    bool at_one = iters == 1 && below(2);
    std::size_t prev = SIZE_MAX;
    for (std::size_t k = 0; k < iters; ++k) {
      bool has_candidate = below(6) != 0;
      std::size_t pick = below(texts.size());
      auto it = iteration(static_cast<int>(k + 1), has_candidate ? std::optional(texts[pick]) : std::nullopt);
      if (has_candidate && prev == pick) stable = true;
      prev = has_candidate ? pick : SIZE_MAX;
      Dialogue d;
      std::size_t n_calls = below(3);
      for (std::size_t q = 0; q < n_calls; ++q) {
        bool valid = below(3) != 0;
        d.turns.push_back(call_turn(valid));
        ++c.calls;
        if (!valid) ++c.bad_calls;
        uses = true;
      }
      it.dialogues.push_back(std::move(d));
      t.iterations.push_back(std::move(it));
    }
    if (at_one) {
      t.converged = true;
      t.converged_at = 1;
      stable = true;
    }
    c.traces.push_back(std::move(t));
    c.trace_uses_tools.push_back(uses);
    c.trace_stable.push_back(stable);
  }
  return c;
}

inline std::optional<double> frac(std::size_t a, std::size_t b) {
  if (b == 0) return std::nullopt;
  return static_cast<double>(a) / static_cast<double>(b);
}

struct Recount {
  std::optional<double> pm, em, pm_pooled, btc, ci, dpi, bti, tool_usage_rate, inference_stability, tcc, hr;
};

inline Recount recount(const Corpus& corpus) {
  Recount r;
  double pm_sum = 0;
  std::size_t exact = 0, pos_ok = 0, pos_n = 0;
  std::size_t st[4][2] = {};
  for (const auto& truth : corpus.truth) {
    std::size_t n = 0, ok = 0;
    for (const auto& t : truth) {
      if (!t.scored) continue;
      ++n;
      ok += t.correct;
      bool in[4] = {t.s, t.c, t.p, t.b};
      for (int k = 0; k < 4; ++k)
        if (in[k]) {
          ++st[k][1];
          st[k][0] += t.correct;
        }
    }
    pm_sum += static_cast<double>(ok) / static_cast<double>(n);
    exact += ok == n;
    pos_ok += ok;
    pos_n += n;
  }
  double methods = static_cast<double>(corpus.truth.size());
  r.pm = pm_sum / methods;
  r.em = static_cast<double>(exact) / methods;
  r.pm_pooled = frac(pos_ok, pos_n);
  r.btc = frac(st[0][0], st[0][1]);
  r.ci = frac(st[1][0], st[1][1]);
  r.dpi = frac(st[2][0], st[2][1]);
  r.bti = frac(st[3][0], st[3][1]);
  auto count = [](const std::vector<bool>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), true)); };
  r.tool_usage_rate = frac(count(corpus.trace_uses_tools), corpus.traces.size());
  r.inference_stability = frac(count(corpus.trace_stable), corpus.traces.size());
  r.tcc = frac(corpus.calls - corpus.bad_calls, corpus.calls);
  r.hr = frac(corpus.bad_calls, corpus.calls);
  return r;
}

}  // namespace sigrec::testing

