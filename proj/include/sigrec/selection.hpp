#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigrec/linter.hpp"
#include "sigrec/method_decl.hpp"

namespace sigrec {

/// Cost weights for soft (medium and low) violations. High-severity
/// violations are hard constraints and carry no weight.
struct SeverityWeights {
  double medium = 2.0;
  double low = 1.0;

  bool valid() const { return medium >= low && low >= 0.0; }
  double weight(Severity s) const;
};

/// A candidate as produced by the agent: raw text plus its parse, if any.
struct Candidate {
  std::string text;
  std::optional<MethodDecl> decl;

  static Candidate from_text(std::string text, const TypeConfig& types = {});
  static Candidate from_decl(MethodDecl decl);
};

struct ScoredCandidate {
  Candidate candidate;
  DiagnosticSet diags;
  bool admissible = false;
  double soft_cost = 0.0;
  std::size_t hard_count = 0;
};

class EmptyPool : public std::invalid_argument {
 public:
  EmptyPool() : std::invalid_argument("candidate pool is empty") {}
};

/// Scores an already-linted candidate: admissible iff no high-severity
/// diagnostic; soft cost is the weighted sum over soft diagnostics.
ScoredCandidate score_diagnostics(Candidate candidate, DiagnosticSet diags,
                                  const SeverityWeights& weights);

ScoredCandidate score(const Candidate& candidate, const MethodDecl& original,
                      const SeverityWeights& weights, const LintConfig& config = {});

/// Outcome of selection over one pool. `best` indexes the admissible
/// candidate of minimal soft cost (earliest on ties); when it is empty no
/// candidate satisfied the hard constraints and `scored` carries every
/// candidate's scoring for feedback.
struct Selection {
  std::vector<ScoredCandidate> scored;
  std::optional<std::size_t> best;

  bool admissible() const { return best.has_value(); }
  const ScoredCandidate& chosen() const { return scored.at(*best); }
};

/// Exhaustive minimization over a scored pool. Throws EmptyPool.
Selection select_best(std::vector<ScoredCandidate> scored);

Selection select_best(const std::vector<Candidate>& pool, const MethodDecl& original,
                      const SeverityWeights& weights, const LintConfig& config = {});

/// Ranking used when nothing is admissible: fewest hard violations, then
/// least soft cost, then earliest. Returns an index into `scored`.
std::size_t least_violating(const std::vector<ScoredCandidate>& scored);

}  // namespace sigrec
