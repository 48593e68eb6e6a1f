#include <iostream>

#include "CLI11.hpp"
#include "sigrec/cli.hpp"

using namespace sigrec;
using namespace sigrec::cli;

namespace {

struct Args {
  RunConfig run;
  std::string weights;
  std::string stop_rule = "first_admissible";
  bool no_tools = false;
  bool no_feedback = false;

  std::string lint_file;
  std::string lint_out;

  BenchBuildOptions build;
  std::optional<std::uint64_t> sample_seed, split_seed;
  BenchEvalOptions eval;

  std::string report_file;
  std::string report_format = "markdown";
};

void add_run_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--workspace", a.run.workspace, "Workspace directory")->required();
  cmd->add_option("--backend", a.run.backend, "scripted or remote")->check(CLI::IsMember({"scripted", "remote"}));
  cmd->add_option("--script", a.run.script, "Scripted backend JSON file");
  cmd->add_option("--endpoint", a.run.endpoint, "Remote chat endpoint (http://host:port/path)");
  cmd->add_option("--model", a.run.model, "Remote model name");
  cmd->add_option("--max-iters", a.run.max_iters, "Refinement iterations K");
  cmd->add_option("--max-turns", a.run.max_turns, "Turn budget per dialogue");
  cmd->add_option("--pool-size", a.run.pool_size, "Candidates per iteration");
  cmd->add_option("--weights", a.weights, "Soft weights, e.g. medium=2,low=1");
  cmd->add_option("--seed", a.run.seed, "Seed forwarded to the backend");
  cmd->add_option("--jobs", a.run.jobs, "Concurrent targets");
  cmd->add_option("--out", a.run.out, "Run output directory");
  cmd->add_option("--stop-rule", a.stop_rule, "first_admissible or stable_cost")
      ->check(CLI::IsMember({"first_admissible", "stable_cost"}));
  cmd->add_flag("--no-tools", a.no_tools, "Offer only the yield tool");
  cmd->add_flag("--no-feedback", a.no_feedback, "Do not return linter diagnostics to the model");
}

int run(int argc, char** argv) {
  CLI::App app{"Recover typed Objective-C method signatures from stripped headers"};
  app.require_subcommand(1);
  Args a;

  auto* ingest = app.add_subcommand("ingest", "Summarize a workspace");
  ingest->add_option("--workspace", a.run.workspace)->required();
  ingest->add_option("--out", a.run.out, "Write workspace.json here");

  auto* lint_cmd = app.add_subcommand("lint", "Lint declarations in a header or a JSON case file");
  lint_cmd->add_option("file", a.lint_file)->required();
  lint_cmd->add_option("--out", a.lint_out, "Write lint.json here");

  auto* infer = app.add_subcommand("infer", "Infer ambiguous signatures of a workspace");
  add_run_flags(infer, a);

  auto* build = app.add_subcommand("bench-build", "Match, bin, sample and split a header corpus");
  build->add_option("--gt", a.build.gt_dir, "Ground-truth header root")->required();
  build->add_option("--stripped", a.build.stripped_dir, "Stripped header root")->required();
  build->add_option("--categories", a.build.categories, "JSON object framework -> category");
  build->add_option("--n-per-bin", a.build.dataset.n_per_bin);
  build->add_option("--seed", a.build.dataset.sample_seed, "Default for both seeds");
  build->add_option("--sample-seed", a.sample_seed);
  build->add_option("--split-seed", a.split_seed);
  build->add_option("--eval-fraction", a.build.dataset.eval_fraction)->check(CLI::Range(0.0, 1.0));
  build->add_flag("--include-oversize", a.build.dataset.include_oversize);
  build->add_option("--out", a.build.out)->required();

  auto* eval = app.add_subcommand("bench-eval", "Score traces against a dataset manifest");
  eval->add_option("--dataset", a.eval.dataset)->required();
  eval->add_option("--traces", a.eval.traces, "traces.json; omitted = stripped declarations as inference");
  eval->add_option("--split", a.eval.split)->check(CLI::IsMember({"eval", "train", "all"}));
  eval->add_option("--max-iters", a.eval.K, "K for inference stability");
  eval->add_flag("--count-redundant", a.eval.count_redundant, "Score repeated tool calls as hallucinated");
  eval->add_option("--out", a.eval.out);

  auto* report = app.add_subcommand("report", "Render a stored report");
  report->add_option("report", a.report_file)->required();
  report->add_option("--format", a.report_format)->check(CLI::IsMember({"markdown", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line(UsageError(e.what())) << '\n';
    return kUsage;
  }

  try {
    if (*ingest) {
      auto summary = cmd_ingest(a.run.workspace);
      if (!a.run.out.empty()) write_json(std::filesystem::path(a.run.out) / "workspace.json", summary);
      std::cout << summary.dump(2) << '\n';
    } else if (*lint_cmd) {
      auto entries = cmd_lint(a.lint_file);
      if (!a.lint_out.empty()) write_json(std::filesystem::path(a.lint_out) / "lint.json", lint_to_json(entries));
      std::cout << render_lint(entries);
    } else if (*infer) {
      a.run.command = "infer";
      if (!a.weights.empty()) a.run.weights = parse_weights(a.weights);
      a.run.tools_enabled = !a.no_tools;
      a.run.feedback_enabled = !a.no_feedback;
      a.run.stop_rule = a.stop_rule == "stable_cost" ? StopRule::StableCost : StopRule::FirstAdmissible;
      auto r = cmd_infer(a.run);
      std::size_t converged = 0;
      for (const auto& t : r.traces) converged += t.converged;
      std::cout << r.traces.size() << " targets, " << converged << " converged\n";
    } else if (*build) {
      a.build.dataset.split_seed = a.build.dataset.sample_seed;
      if (a.sample_seed) a.build.dataset.sample_seed = *a.sample_seed;
      if (a.split_seed) a.build.dataset.split_seed = *a.split_seed;
      auto manifest = cmd_bench_build(a.build);
      std::cout << manifest["records"].size() << " records, " << manifest["frameworks"].size() << " frameworks\n";
    } else if (*eval) {
      auto r = cmd_bench_eval(a.eval);
      std::cout << render_markdown(r);
    } else if (*report) {
      std::cout << cmd_report(a.report_file, a.report_format);
    }
  } catch (const std::exception& e) {
    std::cerr << error_line(e) << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
