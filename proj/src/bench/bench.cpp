#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "sigrec/bench.hpp"

namespace sigrec {

using json = nlohmann::json;

bool is_untyped(const TypeExpr& gt) {
  return (gt.kind == TypeKind::IdType && gt.protocols.empty()) || gt.kind == TypeKind::VoidPointer;
}

MatchResult match_ground_truth(const std::vector<HeaderAST>& stripped, const std::vector<HeaderAST>& gt,
                               const std::string& framework, const AmbiguityConfig& ambig) {
  struct Side {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const MethodDecl*>> by_key;
  };
  auto index = [](const std::vector<HeaderAST>& asts) {
    Side s;
    for (const auto& ast : asts)
      for (const auto* m : ast.methods()) {
        auto key = symbol_text(*m);
        auto& slot = s.by_key[key];
        if (slot.empty()) s.order.push_back(key);
        slot.push_back(m);
      }
    return s;
  };
  Side st = index(stripped);
  Side g = index(gt);

  MatchResult out;
  for (const auto& key : st.order) {
    const auto& ss = st.by_key.at(key);
    auto git = g.by_key.find(key);
    if (ss.size() > 1) out.report.stripped_duplicates.push_back(key);
    if (git == g.by_key.end()) {
      if (ss.size() == 1) out.report.stripped_unmatched.push_back(key);
      continue;
    }
    if (ss.size() > 1 || git->second.size() > 1) continue;

    BenchRecord rec;
    rec.framework = framework;
    rec.stripped_decl = *ss.front();
    rec.gt_decl = *git->second.front();
    rec.class_name = rec.gt_decl.owning_class;
    for (std::size_t pos = 0; pos < rec.gt_decl.position_count(); ++pos) {
      const TypeExpr& gt_type = rec.gt_decl.type_at(pos);
      PositionType p;
      p.position = pos;
      if (!is_untyped(gt_type)) p.gt_type = canonical(gt_type);
      p.was_ambiguous = ambig.is_ambiguous(rec.stripped_decl.type_at(pos));
      rec.position_types.push_back(std::move(p));
    }
    out.records.push_back(std::move(rec));
  }
  for (const auto& key : g.order) {
    const auto& gs = g.by_key.at(key);
    if (gs.size() > 1) out.report.gt_duplicates.push_back(key);
    else if (!st.by_key.contains(key)) out.report.gt_unmatched.push_back(key);
  }
  return out;
}

std::string_view to_string(SizeBin b) {
  switch (b) {
    case SizeBin::Small: return "small";
    case SizeBin::Medium: return "medium";
    case SizeBin::Large: return "large";
    case SizeBin::Oversize: return "oversize";
  }
  return "small";
}

std::optional<SizeBin> size_bin_from_string(std::string_view s) {
  for (auto b : {SizeBin::Small, SizeBin::Medium, SizeBin::Large, SizeBin::Oversize})
    if (to_string(b) == s) return b;
  return std::nullopt;
}

SizeBin size_bin(std::size_t n) {
  if (n <= 10) return SizeBin::Small;
  if (n <= 100) return SizeBin::Medium;
  if (n <= 1000) return SizeBin::Large;
  return SizeBin::Oversize;
}

Bins stratify(const std::vector<FrameworkEntry>& frameworks) {
  Bins bins;
  for (const auto& f : frameworks) bins[{f.category, size_bin(f.method_count)}].push_back(f);
  return bins;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return x % n;
}

namespace {

std::vector<FrameworkEntry> sorted_by_name(std::vector<FrameworkEntry> v) {
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return v;
}

}  // namespace

SampleResult sample_balanced(const Bins& bins, std::size_t n_per_bin, std::uint64_t seed, bool include_oversize) {
  std::mt19937_64 rng(seed);
  SampleResult out;
  for (const auto& [key, members] : bins) {
    if (key.second == SizeBin::Oversize && !include_oversize) continue;
    auto pool = sorted_by_name(members);
    portable_shuffle(pool, rng);
    std::size_t take = std::min(n_per_bin, pool.size());
    if (pool.size() < n_per_bin) out.shortfalls.push_back({key, pool.size(), n_per_bin});
    auto chosen = std::vector<FrameworkEntry>(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    for (auto& f : sorted_by_name(std::move(chosen))) out.selected.push_back(std::move(f));
  }
  return out;
}

SplitResult split(const std::vector<FrameworkEntry>& selection, double eval_fraction, std::uint64_t seed) {
  if (!(eval_fraction >= 0.0 && eval_fraction <= 1.0)) throw std::invalid_argument("eval fraction must lie in [0, 1]");
  std::map<std::string, std::vector<FrameworkEntry>> by_category;
  for (const auto& f : selection) by_category[f.category].push_back(f);

  std::mt19937_64 rng(seed);
  SplitResult out;
  RatioRow total{"Total"};
  auto finish = [](RatioRow& r) {
    std::size_t n = r.train + r.eval;
    r.train_ratio = n ? static_cast<double>(r.train) / static_cast<double>(n) : 0.0;
    r.eval_ratio = n ? static_cast<double>(r.eval) / static_cast<double>(n) : 0.0;
  };
  for (auto& [category, members] : by_category) {
    auto pool = sorted_by_name(members);
    portable_shuffle(pool, rng);
    auto n_eval = static_cast<std::size_t>(std::floor(static_cast<double>(pool.size()) * eval_fraction + 0.5));
    n_eval = std::min(n_eval, pool.size());
    std::vector<FrameworkEntry> ev(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_eval));
    std::vector<FrameworkEntry> tr(pool.begin() + static_cast<std::ptrdiff_t>(n_eval), pool.end());
    RatioRow row{category, tr.size(), ev.size()};
    finish(row);
    out.ratios.push_back(row);
    total.train += tr.size();
    total.eval += ev.size();
    for (auto& f : sorted_by_name(std::move(ev))) out.eval.push_back(std::move(f));
    for (auto& f : sorted_by_name(std::move(tr))) out.train.push_back(std::move(f));
  }
  finish(total);
  out.ratios.push_back(total);
  return out;
}

std::string render_ratio_table(const std::vector<RatioRow>& rows) {
  std::ostringstream out;
  out << "| Category | Train | Test |\n|---|---|---|\n";
  out << std::fixed << std::setprecision(2);
  for (const auto& r : rows) out << "| " << r.category << " | " << r.train_ratio << " | " << r.eval_ratio << " |\n";
  return out.str();
}

json record_to_json(const BenchRecord& r) {
  json positions = json::array();
  for (const auto& p : r.position_types)
    positions.push_back({{"position", p.position},
                         {"gt_type", p.gt_type ? json(*p.gt_type) : json(nullptr)},
                         {"ambiguous", p.was_ambiguous}});
  return {{"key", r.key()},
          {"framework", r.framework},
          {"class", r.class_name},
          {"header", r.gt_decl.source_header},
          {"stripped", render_signature(r.stripped_decl)},
          {"ground_truth", render_signature(r.gt_decl)},
          {"positions", positions}};
}

BenchRecord record_from_json(const json& j) {
  BenchRecord r;
  r.framework = j.value("framework", "");
  r.class_name = j.value("class", "");
  r.stripped_decl = parse_method(j.at("stripped").get<std::string>());
  r.gt_decl = parse_method(j.at("ground_truth").get<std::string>());
  for (auto* d : {&r.stripped_decl, &r.gt_decl}) {
    d->owning_class = r.class_name;
    d->source_header = j.value("header", "");
  }
  for (const auto& p : j.at("positions")) {
    PositionType pt;
    pt.position = p.at("position").get<std::size_t>();
    if (!p.at("gt_type").is_null()) pt.gt_type = p["gt_type"].get<std::string>();
    pt.was_ambiguous = p.value("ambiguous", false);
    r.position_types.push_back(std::move(pt));
  }
  return r;
}

json framework_to_json(const FrameworkEntry& f) {
  return {{"name", f.name},
          {"category", f.category},
          {"method_count", f.method_count},
          {"bin", to_string(size_bin(f.method_count))},
          {"gt_headers", f.gt_header_paths},
          {"stripped_headers", f.stripped_header_paths}};
}

FrameworkEntry framework_from_json(const json& j) {
  FrameworkEntry f;
  f.name = j.at("name").get<std::string>();
  f.category = j.at("category").get<std::string>();
  f.method_count = j.at("method_count").get<std::size_t>();
  f.gt_header_paths = j.value("gt_headers", std::vector<std::string>{});
  f.stripped_header_paths = j.value("stripped_headers", std::vector<std::string>{});
  return f;
}

}  // namespace sigrec
