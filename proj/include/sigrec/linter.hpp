#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sigrec/method_decl.hpp"
#include "sigrec/type_expr.hpp"

namespace sigrec {

enum class Constraint {
  SyntaxErrors,
  NoStructs,
  SelectorMismatch,
  StructRefs,
  GenericCollections,
  NoIdGenerics,
  ConventionalTypes,
  MethodNotParsed,
};

enum class Severity { Low, Medium, High };

inline constexpr std::array kAllConstraints{
    Constraint::SyntaxErrors,       Constraint::NoStructs,    Constraint::SelectorMismatch,
    Constraint::StructRefs,         Constraint::GenericCollections, Constraint::NoIdGenerics,
    Constraint::ConventionalTypes,  Constraint::MethodNotParsed,
};

/// The severity column of the constraint taxonomy. Fixed per constraint.
Severity severity_of(Constraint c);

std::string_view to_string(Constraint c);
std::string_view to_string(Severity s);
/// Human label used in reports, e.g. "Generic Collections".
std::string_view display_name(Constraint c);
/// Message type, e.g. "Missing Generic Parameter".
std::string_view message_type(Constraint c);
std::optional<Constraint> constraint_from_string(std::string_view name);
std::optional<Severity> severity_from_string(std::string_view name);

struct Diagnostic {
  Constraint constraint = Constraint::SyntaxErrors;
  Severity severity = Severity::High;
  std::optional<std::size_t> position;
  std::string message;
  std::optional<std::string> suggestion;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct DiagnosticSet {
  std::vector<Diagnostic> diags;
  std::string target;  // candidate text the set judged

  bool clean() const { return diags.empty(); }
  std::size_t count(Constraint c) const;
  bool has_high() const;

  friend bool operator==(const DiagnosticSet&, const DiagnosticSet&) = default;
};

struct LintConfig {
  std::set<Constraint> enabled{kAllConstraints.begin(), kAllConstraints.end()};
  TypeConfig types;
  /// Non-conventional scalar spelling -> conventional replacement.
  std::map<std::string, std::string> scalar_conventions{{"_Bool", "BOOL"}};
  /// Comma-joined inline-struct field types -> named struct used in suggestions.
  std::map<std::string, std::string> struct_shapes{{"double,double", "CGPoint"}};
  /// Collections whose generic list has key and value arguments.
  std::set<std::string> keyed_collections{"NSDictionary", "NSMutableDictionary"};
  std::string element_placeholder = "NSString *";
  std::string key_placeholder = "NSString *";
  std::string value_placeholder = "NSObject *";

  bool is_enabled(Constraint c) const { return enabled.contains(c); }
};

/// Lints a candidate given as raw text. Unparseable text yields
/// SyntaxErrors (with a repaired suggestion when a single missing token
/// explains the failure) and MethodNotParsed when no repair exists.
DiagnosticSet lint(std::string_view candidate, const MethodDecl& original,
                   const LintConfig& config = {});

/// Lints an already-parsed candidate (checks 2-7).
DiagnosticSet lint(const MethodDecl& candidate, const MethodDecl& original,
                   const LintConfig& config = {});

/// Attempts to make unparseable candidate text parse by inserting at most
/// a few missing punctuation tokens. Returns the repaired text, if any.
std::optional<std::string> repair_candidate(std::string_view text, const TypeConfig& config = {});

struct Partition {
  std::vector<Diagnostic> hard;
  std::vector<Diagnostic> soft;
};

/// hard = high severity, soft = medium and low; multiplicity preserved.
Partition partition(const DiagnosticSet& diags);

}  // namespace sigrec
