#include "sigrec/selection.hpp"

#include "sigrec/header_model.hpp"

namespace sigrec {

double SeverityWeights::weight(Severity s) const {
  switch (s) {
    case Severity::Medium: return medium;
    case Severity::Low: return low;
    case Severity::High: return 0.0;
  }
  return 0.0;
}

Candidate Candidate::from_text(std::string text, const TypeConfig& types) {
  Candidate c;
  try {
    c.decl = parse_method(text, types);
  } catch (const ParseError&) {
  }
  c.text = std::move(text);
  return c;
}

Candidate Candidate::from_decl(MethodDecl decl) {
  Candidate c;
  c.text = render_signature(decl);
  c.decl = std::move(decl);
  return c;
}

ScoredCandidate score_diagnostics(Candidate candidate, DiagnosticSet diags,
                                  const SeverityWeights& weights) {
  if (!weights.valid()) throw std::invalid_argument("severity weights must satisfy medium >= low >= 0");
  ScoredCandidate sc;
  sc.candidate = std::move(candidate);
  for (const auto& d : diags.diags) {
    if (d.severity == Severity::High) {
      ++sc.hard_count;
    } else {
      sc.soft_cost += weights.weight(d.severity);
    }
  }
  sc.admissible = sc.hard_count == 0;
  sc.diags = std::move(diags);
  return sc;
}

ScoredCandidate score(const Candidate& candidate, const MethodDecl& original,
                      const SeverityWeights& weights, const LintConfig& config) {
  DiagnosticSet diags = candidate.decl ? lint(*candidate.decl, original, config)
                                       : lint(std::string_view(candidate.text), original, config);
  diags.target = candidate.text;
  return score_diagnostics(candidate, std::move(diags), weights);
}

Selection select_best(std::vector<ScoredCandidate> scored) {
  if (scored.empty()) throw EmptyPool();
  Selection sel;
  sel.scored = std::move(scored);
  for (std::size_t i = 0; i < sel.scored.size(); ++i) {
    const auto& c = sel.scored[i];
    if (!c.admissible) continue;
    if (!sel.best || c.soft_cost < sel.scored[*sel.best].soft_cost) sel.best = i;
  }
  return sel;
}

Selection select_best(const std::vector<Candidate>& pool, const MethodDecl& original,
                      const SeverityWeights& weights, const LintConfig& config) {
  if (pool.empty()) throw EmptyPool();
  std::vector<ScoredCandidate> scored;
  scored.reserve(pool.size());
  for (const auto& c : pool) scored.push_back(score(c, original, weights, config));
  return select_best(std::move(scored));
}

std::size_t least_violating(const std::vector<ScoredCandidate>& scored) {
  if (scored.empty()) throw EmptyPool();
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    const auto& a = scored[i];
    const auto& b = scored[best];
    if (a.hard_count < b.hard_count || (a.hard_count == b.hard_count && a.soft_cost < b.soft_cost))
      best = i;
  }
  return best;
}

}  // namespace sigrec
