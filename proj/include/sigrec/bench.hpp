#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigrec/header_model.hpp"
#include "sigrec/method_decl.hpp"

namespace sigrec {

struct PositionType {
  std::size_t position = 0;
  std::optional<std::string> gt_type;  // canonical; empty = untyped in ground truth, not scored
  bool was_ambiguous = false;
};

struct BenchRecord {
  std::string framework;
  std::string class_name;
  MethodDecl stripped_decl;
  MethodDecl gt_decl;
  std::vector<PositionType> position_types;

  /// "-[Class selector]" style key shared by both sides.
  std::string key() const { return symbol_text(gt_decl); }
};

/// Ground-truth positions that carry no type information (bare `id`,
/// `void *`) are excluded from scoring.
bool is_untyped(const TypeExpr& gt);

struct MatchReport {
  std::vector<std::string> stripped_unmatched;
  std::vector<std::string> gt_unmatched;
  std::vector<std::string> stripped_duplicates;
  std::vector<std::string> gt_duplicates;
};

struct MatchResult {
  std::vector<BenchRecord> records;
  MatchReport report;
};

/// One-to-one match on (class, class/instance, selector). Keys duplicated
/// on either side are excluded and reported; records follow stripped order.
MatchResult match_ground_truth(const std::vector<HeaderAST>& stripped, const std::vector<HeaderAST>& gt,
                               const std::string& framework = {}, const AmbiguityConfig& ambig = {});

enum class SizeBin { Small, Medium, Large, Oversize };

std::string_view to_string(SizeBin b);
std::optional<SizeBin> size_bin_from_string(std::string_view s);
SizeBin size_bin(std::size_t method_count);

struct FrameworkEntry {
  std::string name;
  std::string category;
  std::size_t method_count = 0;
  std::vector<std::string> gt_header_paths;
  std::vector<std::string> stripped_header_paths;

  friend bool operator==(const FrameworkEntry&, const FrameworkEntry&) = default;
};

using BinKey = std::pair<std::string, SizeBin>;
using Bins = std::map<BinKey, std::vector<FrameworkEntry>>;

Bins stratify(const std::vector<FrameworkEntry>& frameworks);

/// Uniform integer in [0, n) by rejection; identical on every platform for
/// a given engine state (std::uniform_int_distribution is not).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Fisher-Yates shuffle driven by uniform_below.
template <class T>
void portable_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

struct Shortfall {
  BinKey bin;
  std::size_t available = 0;
  std::size_t requested = 0;
};

struct SampleResult {
  std::vector<FrameworkEntry> selected;
  std::vector<Shortfall> shortfalls;
};

/// min(n_per_bin, |bin|) per bin, uniformly without replacement. Bins are
/// visited in key order and frameworks sorted by name before shuffling.
/// The oversize bin is skipped unless include_oversize is set.
SampleResult sample_balanced(const Bins& bins, std::size_t n_per_bin, std::uint64_t seed,
                             bool include_oversize = false);

struct RatioRow {
  std::string category;  // "Total" for the last row
  std::size_t train = 0;
  std::size_t eval = 0;
  double train_ratio = 0.0;
  double eval_ratio = 0.0;
};

struct SplitResult {
  std::vector<FrameworkEntry> train;
  std::vector<FrameworkEntry> eval;
  std::vector<RatioRow> ratios;  // per category in name order, then Total
};

/// Per-category framework-level split; eval count = floor(n * fraction + 0.5).
SplitResult split(const std::vector<FrameworkEntry>& selection, double eval_fraction, std::uint64_t seed);

std::string render_ratio_table(const std::vector<RatioRow>& rows);

struct DatasetOptions {
  std::size_t n_per_bin = 5;
  std::uint64_t sample_seed = 0;
  std::uint64_t split_seed = 0;
  double eval_fraction = 0.70;
  bool include_oversize = false;
};

struct Dataset {
  DatasetOptions options;
  std::vector<FrameworkEntry> frameworks;  // every framework present on both sides
  std::map<std::string, MatchResult> matches;
  SampleResult sample;
  SplitResult split;

  /// "train", "eval" or "unsampled".
  std::string split_of(const std::string& framework) const;
};

/// Each immediate subdirectory of the two roots is one framework; its .h
/// files (recursively) are parsed and matched. `categories` maps framework
/// name to category label; unknown frameworks get "Uncategorized".
Dataset build_dataset(const std::filesystem::path& gt_root, const std::filesystem::path& stripped_root,
                      const std::map<std::string, std::string>& categories, const DatasetOptions& options);

nlohmann::json dataset_to_json(const Dataset& d);
/// Records of the frameworks assigned to `which` ("eval", "train", or "all").
std::vector<BenchRecord> dataset_records(const nlohmann::json& dataset, const std::string& which = "eval");

nlohmann::json record_to_json(const BenchRecord& r);
BenchRecord record_from_json(const nlohmann::json& j);
nlohmann::json framework_to_json(const FrameworkEntry& f);
FrameworkEntry framework_from_json(const nlohmann::json& j);

}  // namespace sigrec
