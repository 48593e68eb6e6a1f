#include "sigrec/linter.hpp"

#include <algorithm>
#include <functional>

#include "sigrec/header_model.hpp"

namespace sigrec {

namespace {

struct ConstraintInfo {
  Constraint constraint;
  std::string_view name;
  std::string_view display;
  std::string_view message_type;
  Severity severity;
};

constexpr std::array<ConstraintInfo, 8> kInfo{{
    {Constraint::SyntaxErrors, "SyntaxErrors", "Syntax Errors", "Syntax Violation", Severity::High},
    {Constraint::NoStructs, "NoStructs", "No Structs", "Inline Struct Detected", Severity::High},
    {Constraint::SelectorMismatch, "SelectorMismatch", "Selector Mismatch", "Selector Divergence",
     Severity::High},
    {Constraint::StructRefs, "StructRefs", "Struct Refs", "Raw Struct Pointer Used", Severity::Medium},
    {Constraint::GenericCollections, "GenericCollections", "Generic Collections",
     "Missing Generic Parameter", Severity::Medium},
    {Constraint::NoIdGenerics, "NoIdGenerics", "No ID Generics", "Generic Type is id",
     Severity::Medium},
    {Constraint::ConventionalTypes, "ConventionalTypes", "Conventional Types",
     "Non-conventional Scalar Type", Severity::Low},
    {Constraint::MethodNotParsed, "MethodNotParsed", "Method Not Parsed", "Method Not Parsed",
     Severity::High},
}};

const ConstraintInfo& info(Constraint c) {
  return *std::find_if(kInfo.begin(), kInfo.end(),
                       [c](const ConstraintInfo& i) { return i.constraint == c; });
}

// Preorder traversal: node, generic args, block return, block params.
void visit(const TypeExpr& t, const std::function<void(const TypeExpr&)>& fn) {
  fn(t);
  for (const auto& g : t.generic_args) visit(g, fn);
  if (t.block_signature) {
    visit(*t.block_signature->return_type, fn);
    for (const auto& p : t.block_signature->params) visit(p, fn);
  }
}

TypeExpr* nth_node(TypeExpr& t, std::size_t& remaining) {
  if (remaining == 0) return &t;
  --remaining;
  for (auto& g : t.generic_args)
    if (auto* hit = nth_node(g, remaining)) return hit;
  if (t.block_signature) {
    if (auto* hit = nth_node(*t.block_signature->return_type, remaining)) return hit;
    for (auto& p : t.block_signature->params)
      if (auto* hit = nth_node(p, remaining)) return hit;
  }
  return nullptr;
}

using Fix = std::function<bool(TypeExpr&)>;

class Linter {
 public:
  Linter(const MethodDecl& candidate, const LintConfig& config)
      : candidate_(candidate), config_(config) {}

  void check_selector(const MethodDecl& original, std::vector<Diagnostic>& out) const {
    const auto& got = candidate_.selector_pieces;
    const auto& want = original.selector_pieces;
    std::size_t n = std::max(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::string g = i < got.size() ? got[i] : std::string();
      std::string w = i < want.size() ? want[i] : std::string();
      if (g == w) continue;
      Diagnostic d = make(Constraint::SelectorMismatch);
      if ((i < got.size() && g.ends_with(":")) || (i >= got.size() && w.ends_with(":")))
        d.position = i + 1;
      d.message += ": piece " + std::to_string(i + 1) + " expected '" + w + "' but found '" + g +
                   "' (" + candidate_.selector() + " vs " + original.selector() + ")";
      d.suggestion = original.selector();
      out.push_back(std::move(d));
    }
  }

  /// Emits one diagnostic per node (across all positions) matching `pred`.
  void check_nodes(Constraint c, const std::function<bool(const TypeExpr&)>& pred, const Fix& fix,
                   const std::string& detail, std::vector<Diagnostic>& out) const {
    for (std::size_t pos = 0; pos < candidate_.position_count(); ++pos) {
      std::size_t index = 0;
      visit(candidate_.type_at(pos), [&](const TypeExpr& node) {
        if (pred(node)) {
          Diagnostic d = make(c);
          d.position = pos;
          d.message += ": " + detail + " '" + canonical(node) + "' at position " +
                       std::to_string(pos);
          d.suggestion = suggest(pos, index, fix);
          out.push_back(std::move(d));
        }
        ++index;
      });
    }
  }

  bool names_collection(const TypeExpr& t) const {
    if (!config_.types.collection_classes.contains(core_name(t))) return false;
    // Bare fragments such as "NSArray args" omit the pointer; treat them as
    // the collection they name.
    return t.kind == TypeKind::Collection || (t.kind == TypeKind::Other && t.protocols.empty());
  }

  std::vector<TypeExpr> placeholder_args(const TypeExpr& t) const {
    std::vector<TypeExpr> args;
    if (config_.keyed_collections.contains(core_name(t))) {
      args.push_back(parse_type(config_.key_placeholder, config_.types));
      args.push_back(parse_type(config_.value_placeholder, config_.types));
    } else {
      args.push_back(parse_type(config_.element_placeholder, config_.types));
    }
    return args;
  }

  std::optional<std::string> struct_name(const TypeExpr& t) const {
    std::string_view base = t.base_name;
    auto space = base.rfind(' ');
    if (base.find("struct ") != std::string_view::npos || base.find("union ") != std::string_view::npos)
      return std::string(base.substr(space + 1));
    // Untagged: look up the field-type shape.
    std::string shape;
    std::size_t start = 0;
    const std::string& body = t.struct_body;
    while (start < body.size()) {
      auto semi = body.find(';', start);
      if (semi == std::string::npos) break;
      std::string field = body.substr(start, semi - start);
      while (!field.empty() && field.front() == ' ') field.erase(field.begin());
      auto last = field.rfind(' ');
      if (last == std::string::npos) return std::nullopt;
      if (!shape.empty()) shape += ',';
      shape += field.substr(0, last);
      start = semi + 1;
    }
    auto it = config_.struct_shapes.find(shape);
    if (it == config_.struct_shapes.end()) return std::nullopt;
    return it->second;
  }

  Fix named_replacement(std::function<std::optional<std::string>(const TypeExpr&)> namer,
                        int depth_delta) const {
    return [namer = std::move(namer), depth_delta](TypeExpr& node) {
      auto name = namer(node);
      if (!name) return false;
      TypeExpr repl;
      repl.kind = TypeKind::Other;
      repl.base_name = *name;
      repl.pointer_depth = std::max(0, node.pointer_depth + depth_delta);
      node = std::move(repl);
      return true;
    };
  }

  std::vector<Diagnostic> run_type_checks() const {
    std::vector<Diagnostic> out;
    const auto& cfg = config_;

    if (cfg.is_enabled(Constraint::NoStructs)) {
      check_nodes(
          Constraint::NoStructs, [](const TypeExpr& t) { return t.kind == TypeKind::InlineStruct; },
          named_replacement([this](const TypeExpr& t) { return struct_name(t); }, 0),
          "inline struct", out);
    }
    if (cfg.is_enabled(Constraint::StructRefs)) {
      check_nodes(
          Constraint::StructRefs, [](const TypeExpr& t) { return t.kind == TypeKind::StructRef; },
          named_replacement(
              [](const TypeExpr& t) -> std::optional<std::string> {
                std::string tag = t.base_name.substr(t.base_name.rfind(' ') + 1);
                tag.erase(0, tag.find_first_not_of('_'));
                if (tag.empty()) return std::nullopt;
                return tag + "Ref";
              },
              -1),
          "raw struct pointer", out);
    }
    if (cfg.is_enabled(Constraint::GenericCollections)) {
      check_nodes(
          Constraint::GenericCollections,
          [this](const TypeExpr& t) { return names_collection(t) && t.generic_args.empty(); },
          [this](TypeExpr& node) {
            node.generic_args = placeholder_args(node);
            return true;
          },
          "collection without element type", out);
    }
    if (cfg.is_enabled(Constraint::NoIdGenerics)) {
      check_nodes(
          Constraint::NoIdGenerics,
          [this](const TypeExpr& t) {
            return names_collection(t) &&
                   std::any_of(t.generic_args.begin(), t.generic_args.end(), [](const TypeExpr& g) {
                     return g.kind == TypeKind::IdType && g.pointer_depth == 0;
                   });
          },
          [](TypeExpr& node) {
            node.generic_args.clear();
            return true;
          },
          "bare id generic argument in", out);
    }
    if (cfg.is_enabled(Constraint::ConventionalTypes)) {
      check_nodes(
          Constraint::ConventionalTypes,
          [&cfg](const TypeExpr& t) {
            return t.kind == TypeKind::Scalar && cfg.scalar_conventions.contains(core_name(t));
          },
          [&cfg](TypeExpr& node) {
            std::string core = core_name(node);
            std::string prefix = node.base_name.substr(0, node.base_name.size() - core.size());
            node.base_name = prefix + cfg.scalar_conventions.at(core);
            return true;
          },
          "non-conventional scalar", out);
    }
    return out;
  }

 private:
  static Diagnostic make(Constraint c) {
    Diagnostic d;
    d.constraint = c;
    d.severity = severity_of(c);
    d.message = std::string(message_type(c));
    return d;
  }

  std::optional<std::string> suggest(std::size_t pos, std::size_t node_index, const Fix& fix) const {
    MethodDecl fixed = candidate_;
    std::size_t remaining = node_index;
    TypeExpr* node = nth_node(fixed.type_at(pos), remaining);
    if (node == nullptr || !fix(*node)) return std::nullopt;
    return render_position(fixed, pos);
  }

  const MethodDecl& candidate_;
  const LintConfig& config_;
};

}  // namespace

Severity severity_of(Constraint c) { return info(c).severity; }
std::string_view to_string(Constraint c) { return info(c).name; }
std::string_view display_name(Constraint c) { return info(c).display; }
std::string_view message_type(Constraint c) { return info(c).message_type; }

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::High: return "high";
    case Severity::Medium: return "medium";
    case Severity::Low: return "low";
  }
  return "low";
}

std::optional<Constraint> constraint_from_string(std::string_view name) {
  for (const auto& i : kInfo)
    if (i.name == name || i.display == name) return i.constraint;
  return std::nullopt;
}

std::optional<Severity> severity_from_string(std::string_view name) {
  if (name == "high") return Severity::High;
  if (name == "medium") return Severity::Medium;
  if (name == "low") return Severity::Low;
  return std::nullopt;
}

std::size_t DiagnosticSet::count(Constraint c) const {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [c](const Diagnostic& d) { return d.constraint == c; }));
}

bool DiagnosticSet::has_high() const {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::High; });
}

std::optional<std::string> repair_candidate(std::string_view text, const TypeConfig& config) {
  std::string current(text);
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      parse_method(current, config);
      return attempt == 0 ? std::nullopt : std::optional<std::string>(current);
    } catch (const ParseError& e) {
      const std::string& want = e.expected();
      if (want != "'('" && want != "')'" && want != "';'" && want != "':'") return std::nullopt;
      current.insert(e.offset(), want.substr(1, 1));
    }
  }
  return std::nullopt;
}

DiagnosticSet lint(const MethodDecl& candidate, const MethodDecl& original, const LintConfig& config) {
  DiagnosticSet set;
  set.target = render_signature(candidate);
  if (config.is_enabled(Constraint::SelectorMismatch))
    Linter(candidate, config).check_selector(original, set.diags);
  auto typed = Linter(candidate, config).run_type_checks();
  set.diags.insert(set.diags.end(), typed.begin(), typed.end());
  return set;
}

DiagnosticSet lint(std::string_view candidate, const MethodDecl& original, const LintConfig& config) {
  MethodDecl parsed;
  try {
    parsed = parse_method(candidate, config.types);
  } catch (const ParseError& e) {
    DiagnosticSet set;
    set.target = std::string(candidate);
    auto repaired = repair_candidate(candidate, config.types);
    if (config.is_enabled(Constraint::SyntaxErrors)) {
      Diagnostic d;
      d.constraint = Constraint::SyntaxErrors;
      d.severity = severity_of(d.constraint);
      d.message = std::string(message_type(d.constraint)) + ": " + e.what();
      d.suggestion = repaired;
      set.diags.push_back(std::move(d));
    }
    if (!repaired && config.is_enabled(Constraint::MethodNotParsed)) {
      Diagnostic d;
      d.constraint = Constraint::MethodNotParsed;
      d.severity = severity_of(d.constraint);
      d.message = "Method Not Parsed: candidate is not a recoverable method declaration";
      set.diags.push_back(std::move(d));
    }
    return set;
  }
  DiagnosticSet set = lint(parsed, original, config);
  set.target = std::string(candidate);
  return set;
}

Partition partition(const DiagnosticSet& diags) {
  Partition p;
  for (const auto& d : diags.diags) {
    if (d.severity == Severity::High) {
      p.hard.push_back(d);
    } else {
      p.soft.push_back(d);
    }
  }
  return p;
}

}  // namespace sigrec
