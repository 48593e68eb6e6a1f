#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigrec/type_expr.hpp"

namespace sigrec {

struct SourceSpan {
  int line = 0;
  int column = 0;
  // Byte range of the full declaration (sign through ';') in the source text.
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Param {
  std::string name;
  TypeExpr type;

  friend bool operator==(const Param&, const Param&) = default;
};

struct MethodDecl {
  bool is_class_method = false;
  std::vector<std::string> selector_pieces;
  TypeExpr return_type;
  std::vector<Param> params;
  std::string owning_class;
  std::string source_header;
  SourceSpan source_span;

  /// Joined selector, e.g. `doSomething:withArg2:`.
  std::string selector() const;
  /// Number of positions: return type plus parameters.
  std::size_t position_count() const { return params.size() + 1; }
  /// Type at position index (0 = return, 1..n = parameters).
  const TypeExpr& type_at(std::size_t position) const;
  TypeExpr& type_at(std::size_t position);
};

/// Structural equality over the signature: sign, selector pieces, return
/// type, parameter names and types. Provenance fields are ignored.
bool same_signature(const MethodDecl& a, const MethodDecl& b);

/// Positional type equality only (ignores parameter names).
bool same_types(const MethodDecl& a, const MethodDecl& b);

struct ClassInterface {
  std::string name;
  std::string category;  // empty unless a category or extension
  bool is_category = false;
  bool is_protocol = false;
  std::string superclass;
  std::vector<std::string> protocols;
  std::vector<MethodDecl> methods;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::size_t offset, std::string expected);

  int line() const { return line_; }
  int column() const { return column_; }
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::size_t offset_;
  std::string expected_;
};

struct ParseDiagnostic {
  int line = 0;
  int column = 0;
  std::string expected;
};

struct SkipCounts {
  int properties = 0;
  int preprocessor = 0;
  int other = 0;

  int total() const { return properties + preprocessor + other; }
};

struct HeaderAST {
  std::string source_header;
  std::vector<ClassInterface> interfaces;
  std::vector<ParseDiagnostic> errors;
  SkipCounts skipped;

  std::vector<const MethodDecl*> methods() const;
};

struct SelectorSymbol {
  std::string text;
  std::optional<std::uint64_t> address;

  friend bool operator==(const SelectorSymbol&, const SelectorSymbol&) = default;
};

/// Canonical binary symbol text, e.g. `+[CBUUID UUIDWithData:]`.
std::string symbol_text(const MethodDecl& decl);

struct InferenceTarget {
  MethodDecl decl;
  std::set<std::size_t> ambiguous_positions;
  SelectorSymbol bound_symbol;
  std::string framework;
};

/// Symbol table rows as ingested. Duplicate texts are retained so that
/// corrupted ingestion can be detected at bind time.
class SymbolTable {
 public:
  void add(std::string text, std::uint64_t address);
  std::vector<std::uint64_t> lookup(const std::string& text) const;
  std::size_t size() const { return rows_.size(); }
  bool contains_address(std::uint64_t address) const;
  const std::multimap<std::string, std::uint64_t>& rows() const { return rows_; }

 private:
  std::multimap<std::string, std::uint64_t> rows_;
};

class SymbolCollision : public std::runtime_error {
 public:
  explicit SymbolCollision(const std::string& text)
      : std::runtime_error("symbol collision: " + text) {}
};

}  // namespace sigrec
