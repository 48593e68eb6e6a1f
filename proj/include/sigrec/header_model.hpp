#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sigrec/method_decl.hpp"
#include "sigrec/type_expr.hpp"

namespace sigrec {

/// Parses Objective-C interface text. Properties, preprocessor lines and
/// unsupported top-level constructs are skipped and counted. A malformed
/// method is recorded in `errors` and parsing resumes after the next `;`
/// or before the next `@end`.
HeaderAST parse_header(std::string_view text, std::string source_header = {},
                       const TypeConfig& config = {});

/// Parses a single method declaration. The leading `-`/`+` is optional
/// (instance method when absent); the trailing `;` is optional.
/// Throws ParseError.
MethodDecl parse_method(std::string_view text, const TypeConfig& config = {});

/// Parses a bare type expression such as `NSArray<NSString *> *`.
/// Throws ParseError.
TypeExpr parse_type(std::string_view text, const TypeConfig& config = {});

/// Deterministic canonical spelling: one space before the first `*`, no
/// spaces inside generic brackets, `, ` between arguments, nullability and
/// ownership annotations dropped.
std::string canonical(const TypeExpr& t);

/// Parses then canonicalizes.
std::string canonicalize_type(std::string_view text, const TypeConfig& config = {});

/// Renders a declaration, e.g. `- (void)doSomething:(id)a withArg2:(id)b;`.
std::string render_signature(const MethodDecl& decl);

/// Renders one position as it would appear in a declaration fragment:
/// the bare type for the return position, `type name` for parameters.
std::string render_position(const MethodDecl& decl, std::size_t position);

struct AmbiguityConfig {
  std::set<TypeKind> kinds{TypeKind::IdType, TypeKind::VoidPointer, TypeKind::InlineStruct};

  bool is_ambiguous(const TypeExpr& t) const { return kinds.contains(t.kind); }
};

/// Declarations with at least one ambiguous position. Symbols are unbound.
std::vector<InferenceTarget> find_inference_targets(const HeaderAST& ast,
                                                    const AmbiguityConfig& ambig = {},
                                                    const std::string& framework = {});

/// Fills `bound_symbol`. Throws SymbolCollision when the table holds the
/// canonical text more than once.
InferenceTarget bind_symbol(InferenceTarget target, const SymbolTable& symtab);

}  // namespace sigrec
