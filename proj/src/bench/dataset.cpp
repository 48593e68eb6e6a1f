#include <algorithm>
#include <fstream>
#include <sstream>

#include "sigrec/bench.hpp"

namespace sigrec {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<fs::path> header_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".h") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> framework_dirs(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::is_directory(root)) throw std::runtime_error("not a directory: " + root.string());
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HeaderAST> parse_all(const fs::path& root, const std::vector<fs::path>& files,
                                 std::vector<std::string>& rel_paths) {
  std::vector<HeaderAST> asts;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto rel = fs::relative(f, root).generic_string();
    rel_paths.push_back(rel);
    asts.push_back(parse_header(ss.str(), f.filename().string()));
  }
  return asts;
}

json report_json(const MatchReport& r) {
  return {{"stripped_unmatched", r.stripped_unmatched},
          {"gt_unmatched", r.gt_unmatched},
          {"stripped_duplicates", r.stripped_duplicates},
          {"gt_duplicates", r.gt_duplicates}};
}

}  // namespace

std::string Dataset::split_of(const std::string& framework) const {
  auto has = [&](const std::vector<FrameworkEntry>& v) {
    return std::any_of(v.begin(), v.end(), [&](const FrameworkEntry& f) { return f.name == framework; });
  };
  if (has(split.eval)) return "eval";
  if (has(split.train)) return "train";
  return "unsampled";
}

Dataset build_dataset(const fs::path& gt_root, const fs::path& stripped_root,
                      const std::map<std::string, std::string>& categories, const DatasetOptions& options) {
  Dataset d;
  d.options = options;
  auto gt_names = framework_dirs(gt_root);
  for (const auto& name : framework_dirs(stripped_root)) {
    if (!std::binary_search(gt_names.begin(), gt_names.end(), name)) continue;
    FrameworkEntry f;
    f.name = name;
    auto cat = categories.find(name);
    f.category = cat == categories.end() ? "Uncategorized" : cat->second;
    auto gt_asts = parse_all(gt_root, header_files(gt_root / name), f.gt_header_paths);
    auto st_asts = parse_all(stripped_root, header_files(stripped_root / name), f.stripped_header_paths);
    auto match = match_ground_truth(st_asts, gt_asts, name);
    f.method_count = match.records.size();
    d.frameworks.push_back(f);
    d.matches.emplace(name, std::move(match));
  }
  d.sample = sample_balanced(stratify(d.frameworks), options.n_per_bin, options.sample_seed, options.include_oversize);
  d.split = split(d.sample.selected, options.eval_fraction, options.split_seed);
  return d;
}

json dataset_to_json(const Dataset& d) {
  json frameworks = json::array();
  json records = json::array();
  json reports = json::object();
  for (const auto& f : d.frameworks) {
    auto fj = framework_to_json(f);
    auto which = d.split_of(f.name);
    fj["split"] = which;
    frameworks.push_back(fj);
    const auto& match = d.matches.at(f.name);
    reports[f.name] = report_json(match.report);
    if (which == "unsampled") continue;
    for (const auto& r : match.records) {
      auto rj = record_to_json(r);
      rj["split"] = which;
      records.push_back(rj);
    }
  }
  json bins = json::array();
  for (const auto& [key, members] : stratify(d.frameworks)) {
    json names = json::array();
    for (const auto& m : members) names.push_back(m.name);
    bins.push_back({{"category", key.first}, {"bin", to_string(key.second)}, {"frameworks", names}});
  }
  json shortfalls = json::array();
  for (const auto& s : d.sample.shortfalls)
    shortfalls.push_back({{"category", s.bin.first},
                          {"bin", to_string(s.bin.second)},
                          {"available", s.available},
                          {"requested", s.requested}});
  json ratios = json::array();
  for (const auto& r : d.split.ratios)
    ratios.push_back({{"category", r.category},
                      {"train", r.train},
                      {"eval", r.eval},
                      {"train_ratio", r.train_ratio},
                      {"eval_ratio", r.eval_ratio}});
  return {{"options",
           {{"n_per_bin", d.options.n_per_bin},
            {"sample_seed", d.options.sample_seed},
            {"split_seed", d.options.split_seed},
            {"eval_fraction", d.options.eval_fraction},
            {"include_oversize", d.options.include_oversize}}},
          {"frameworks", frameworks},
          {"bins", bins},
          {"shortfalls", shortfalls},
          {"ratio_table", ratios},
          {"match_reports", reports},
          {"records", records}};
}

std::vector<BenchRecord> dataset_records(const json& dataset, const std::string& which) {
  std::vector<BenchRecord> out;
  for (const auto& r : dataset.at("records"))
    if (which == "all" || r.value("split", "") == which) out.push_back(record_from_json(r));
  return out;
}

}  // namespace sigrec
