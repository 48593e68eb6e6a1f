#include <algorithm>
#include <array>
#include <string>

#include "lexer.hpp"
#include "sigrec/header_model.hpp"

namespace sigrec {

using detail::Token;
using detail::TokKind;

namespace {

constexpr std::array<std::string_view, 24> kDroppedQualifiers{
    "nullable",        "nonnull",        "null_unspecified", "null_resettable",
    "_Nullable",       "_Nonnull",       "_Null_unspecified", "_Nullable_result",
    "__nullable",      "__nonnull",      "__null_unspecified", "__kindof",
    "__strong",        "__weak",         "__unsafe_unretained", "__autoreleasing",
    "__block",         "in",             "out",              "inout",
    "bycopy",          "byref",          "oneway",           "__unused",
};

bool is_dropped_qualifier(const Token& t) {
  if (!t.is_ident()) return false;
  return std::find(kDroppedQualifiers.begin(), kDroppedQualifiers.end(), t.text) !=
         kDroppedQualifiers.end();
}

bool is_cv(const Token& t) { return t.is("const") || t.is("volatile"); }

bool is_builtin_word(const Token& t) {
  static constexpr std::array<std::string_view, 12> words{
      "void", "char", "short", "int", "long", "float", "double", "signed", "unsigned",
      "_Bool", "bool", "_Complex"};
  return t.is_ident() && std::find(words.begin(), words.end(), t.text) != words.end();
}

bool is_bare_identifier(const TypeExpr& t) {
  return t.kind == TypeKind::Other && t.pointer_depth == 0 && t.generic_args.empty() &&
         t.protocols.empty() && t.struct_body.empty() && !t.block_signature &&
         !is_scalar_spelling(t.base_name) && t.base_name.find(' ') == std::string::npos;
}

/// Joins body tokens of an inline struct into a stable normalized form.
std::string join_body(const std::vector<Token>& toks, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    const auto& t = toks[i].text;
    bool glue_left = t == ";" || t == "," || t == ")" || t == "]";
    bool prev_opens = !out.empty() && (out.back() == '(' || out.back() == '[');
    if (!out.empty() && !glue_left && !prev_opens) out += ' ';
    out += t;
  }
  return out;
}

class TokenParser {
 public:
  TokenParser(const std::vector<Token>& toks, const TypeConfig& config)
      : toks_(toks), config_(config) {}

  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at_end() const { return cur().kind == TokKind::End; }
  void advance() {
    if (!at_end()) ++pos_;
  }

  [[noreturn]] void fail(std::string expected) const {
    const auto& t = cur();
    throw ParseError(t.line, t.column, t.offset, std::move(expected));
  }

  void expect(std::string_view punct) {
    if (!cur().is(punct) || cur().kind != TokKind::Punct) fail("'" + std::string(punct) + "'");
    advance();
  }

  void skip_dropped() {
    while (is_dropped_qualifier(cur())) advance();
  }

  TypeExpr parse_type() {
    skip_dropped();
    TypeExpr t;
    std::string prefix;
    while (is_cv(cur())) {
      prefix += cur().text + " ";
      advance();
      skip_dropped();
    }

    if (cur().is("struct") || cur().is("union")) {
      std::string keyword = cur().text;
      advance();
      std::string tag;
      if (cur().is_ident()) {
        tag = cur().text;
        advance();
      }
      t.base_name = prefix + keyword + (tag.empty() ? "" : " " + tag);
      if (cur().is("{")) {
        t.kind = TypeKind::InlineStruct;
        t.struct_body = capture_braces();
      } else if (tag.empty()) {
        fail("struct tag or '{'");
      } else {
        t.kind = TypeKind::StructRef;
      }
    } else if (cur().is("enum")) {
      advance();
      if (!cur().is_ident()) fail("enum tag");
      t.base_name = prefix + "enum " + cur().text;
      advance();
    } else if (is_builtin_word(cur())) {
      std::string words;
      while (is_builtin_word(cur())) {
        if (!words.empty()) words += ' ';
        words += cur().text;
        advance();
      }
      t.base_name = prefix + words;
    } else if (cur().is_ident()) {
      t.base_name = prefix + cur().text;
      advance();
      if (cur().is("<")) parse_angle_list(t);
    } else {
      fail("type name");
    }

    parse_pointer_suffix(t);

    if (cur().is("(") && (peek().is("^") || peek().is("*"))) return parse_callable(std::move(t));

    classify(t);
    return t;
  }

  MethodDecl parse_method(bool require_sign, bool require_semicolon) {
    MethodDecl m;
    const Token& first = cur();
    m.source_span.line = first.line;
    m.source_span.column = first.column;
    m.source_span.begin = first.offset;

    if (cur().is("-") || cur().is("+")) {
      m.is_class_method = cur().is("+");
      advance();
    } else if (require_sign) {
      fail("'-' or '+'");
    }

    expect("(");
    m.return_type = parse_type();
    expect(")");

    std::string name;
    if (cur().is_ident()) {
      name = cur().text;
      advance();
    } else if (!cur().is(":")) {
      fail("selector");
    }

    if (!cur().is(":")) {
      m.selector_pieces.push_back(name);
    } else {
      for (;;) {
        expect(":");
        m.selector_pieces.push_back(name + ":");
        Param p;
        expect("(");
        p.type = parse_type();
        expect(")");
        if (!cur().is_ident()) fail("parameter name");
        p.name = cur().text;
        advance();
        m.params.push_back(std::move(p));

        if (cur().is_ident() && peek().is(":")) {
          name = cur().text;
          advance();
        } else if (cur().is(":")) {
          name.clear();
        } else {
          break;
        }
      }
      if (cur().is(",") && peek().is("...")) {
        advance();
        advance();
      }
    }

    skip_trailing_attributes();

    if (cur().is(";")) {
      m.source_span.end = cur().end;
      advance();
    } else if (cur().is("{")) {
      capture_braces();
      m.source_span.end = toks_[pos_ - 1].end;
    } else if (require_semicolon || !at_end()) {
      fail("';'");
    } else {
      m.source_span.end = pos_ > 0 ? toks_[pos_ - 1].end : 0;
    }
    return m;
  }

  /// Skips a balanced `{...}` group starting at the current '{' and returns
  /// the normalized inner text.
  std::string capture_braces() {
    std::size_t open = pos_;
    int depth = 0;
    do {
      if (at_end()) fail("'}'");
      if (cur().is("{")) ++depth;
      if (cur().is("}")) --depth;
      advance();
    } while (depth > 0);
    return join_body(toks_, open + 1, pos_ - 1);
  }

  void skip_parens() {
    int depth = 0;
    do {
      if (at_end()) fail("')'");
      if (cur().is("(")) ++depth;
      if (cur().is(")")) --depth;
      advance();
    } while (depth > 0);
  }

 private:
  void parse_pointer_suffix(TypeExpr& t) {
    for (;;) {
      if (cur().is("*")) {
        ++t.pointer_depth;
        advance();
      } else if (is_dropped_qualifier(cur()) || is_cv(cur()) || cur().is("restrict") ||
                 cur().is("__restrict")) {
        advance();
      } else {
        break;
      }
    }
  }

  void parse_angle_list(TypeExpr& t) {
    expect("<");
    std::vector<TypeExpr> args;
    for (;;) {
      args.push_back(parse_type());
      if (cur().is(",")) {
        advance();
        continue;
      }
      expect(">");
      break;
    }
    std::string core = core_name(t);
    bool protocol_list = core == "id" || core == "Class";
    if (!protocol_list && !config_.collection_classes.contains(core))
      protocol_list = std::all_of(args.begin(), args.end(), is_bare_identifier);
    if (protocol_list) {
      for (auto& a : args) {
        if (!is_bare_identifier(a)) fail("protocol name");
        t.protocols.push_back(a.base_name);
      }
    } else {
      t.generic_args = std::move(args);
    }
  }

  TypeExpr parse_callable(TypeExpr ret) {
    classify(ret);
    expect("(");
    bool block = cur().is("^");
    advance();
    skip_dropped();
    while (is_cv(cur())) advance();
    if (cur().is_ident()) advance();  // declarator name
    expect(")");
    expect("(");
    std::vector<TypeExpr> params;
    if (cur().is("void") && peek().is(")")) {
      advance();
    } else if (!cur().is(")")) {
      for (;;) {
        if (cur().is("...")) {
          TypeExpr va;
          va.base_name = "...";
          params.push_back(va);
          advance();
        } else {
          params.push_back(parse_type());
          skip_dropped();
          if (cur().is_ident()) advance();  // parameter name
        }
        if (cur().is(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    expect(")");
    skip_dropped();

    TypeExpr t;
    if (block) {
      t.kind = TypeKind::Block;
      t.block_signature = BlockSignature{Box<TypeExpr>(std::move(ret)), std::move(params)};
    } else {
      // Function pointers are opaque for scoring; keep their canonical text.
      BlockSignature sig{Box<TypeExpr>(std::move(ret)), std::move(params)};
      TypeExpr shaped;
      shaped.kind = TypeKind::Block;
      shaped.block_signature = std::move(sig);
      std::string text = canonical(shaped);
      auto caret = text.find("(^)");
      text.replace(caret, 3, "(*)");
      t.kind = TypeKind::Other;
      t.base_name = text;
    }
    return t;
  }

  void classify(TypeExpr& t) const {
    if (t.kind == TypeKind::InlineStruct || t.kind == TypeKind::Block) return;
    if (t.kind == TypeKind::StructRef) {
      if (t.pointer_depth == 0) t.kind = TypeKind::Other;
      return;
    }
    std::string core = core_name(t);
    if (core == "id") {
      t.kind = t.protocols.empty() ? TypeKind::IdType : TypeKind::ProtocolQualified;
    } else if (core == "Class") {
      t.kind = t.protocols.empty() ? TypeKind::ClassType : TypeKind::ProtocolQualified;
    } else if (!t.protocols.empty()) {
      t.kind = TypeKind::ProtocolQualified;
    } else if (is_scalar_spelling(core)) {
      if (t.pointer_depth == 0) {
        t.kind = TypeKind::Scalar;
      } else if (core == "void" || core.ends_with(" void")) {
        t.kind = TypeKind::VoidPointer;
      } else {
        t.kind = TypeKind::Other;
      }
    } else if (t.pointer_depth >= 1 && config_.collection_classes.contains(core)) {
      t.kind = TypeKind::Collection;
    } else if (t.pointer_depth >= 1) {
      t.kind = TypeKind::ObjectPointer;
    } else {
      t.kind = TypeKind::Other;
    }
  }

  void skip_trailing_attributes() {
    while (cur().is_ident() && !peek().is(":")) {
      advance();
      if (cur().is("(")) skip_parens();
    }
  }

  const std::vector<Token>& toks_;
  const TypeConfig& config_;
  std::size_t pos_ = 0;
};

class HeaderParser {
 public:
  HeaderParser(std::string_view text, std::string header, const TypeConfig& config)
      : lexed_(detail::lex(text)), p_(lexed_.tokens, config) {
    ast_.source_header = std::move(header);
    ast_.skipped.preprocessor = lexed_.preprocessor_lines;
  }

  HeaderAST run() {
    while (!p_.at_end()) {
      const Token& t = p_.cur();
      if (t.kind == TokKind::AtKeyword) {
        if (t.is("@interface")) {
          parse_interface(false);
        } else if (t.is("@protocol")) {
          if (is_forward_protocol()) {
            skip_to_semicolon();
          } else {
            parse_interface(true);
          }
        } else if (t.is("@implementation")) {
          skip_to_end_keyword();
        } else if (t.is("@property")) {
          skip_to_semicolon();
          ++ast_.skipped.properties;
        } else if (t.is("@class")) {
          skip_to_semicolon();
        } else {
          p_.advance();
        }
      } else if ((t.is("-") || t.is("+")) && p_.peek().is("(")) {
        parse_method_into(loose_interface(), "");
      } else {
        skip_statement();
      }
    }
    return std::move(ast_);
  }

 private:
  ClassInterface& loose_interface() {
    if (loose_index_ < 0) {
      ast_.interfaces.emplace_back();
      loose_index_ = static_cast<int>(ast_.interfaces.size()) - 1;
    }
    return ast_.interfaces[static_cast<std::size_t>(loose_index_)];
  }

  bool is_forward_protocol() const {
    // "@protocol Foo;" or "@protocol Foo, Bar;"
    std::size_t i = 1;
    while (p_.peek(i).is_ident() || p_.peek(i).is(",")) ++i;
    return p_.peek(i).is(";");
  }

  void parse_interface(bool is_protocol) {
    p_.advance();  // @interface / @protocol
    ClassInterface iface;
    iface.is_protocol = is_protocol;
    if (p_.cur().is_ident()) {
      iface.name = p_.cur().text;
      p_.advance();
    }
    bool generic_params_allowed = !is_protocol;
    for (;;) {
      if (p_.cur().is("<")) {
        auto list = read_angle_idents();
        // "@interface NSArray<ObjectType> : NSObject" declares generic
        // parameters; any later list names adopted protocols.
        if (!generic_params_allowed)
          iface.protocols.insert(iface.protocols.end(), list.begin(), list.end());
        generic_params_allowed = false;
      } else if (p_.cur().is(":")) {
        generic_params_allowed = false;
        p_.advance();
        if (p_.cur().is_ident()) {
          iface.superclass = p_.cur().text;
          p_.advance();
        }
      } else if (p_.cur().is("(")) {
        generic_params_allowed = false;
        p_.advance();
        iface.is_category = true;
        if (p_.cur().is_ident()) {
          iface.category = p_.cur().text;
          p_.advance();
        }
        if (p_.cur().is(")")) p_.advance();
      } else {
        break;
      }
    }
    if (p_.cur().is("{")) {
      try {
        p_.capture_braces();
      } catch (const ParseError& e) {
        record(e);
      }
    }

    while (!p_.at_end() && !p_.cur().is("@end")) {
      const Token& t = p_.cur();
      if (t.is("-") || t.is("+")) {
        parse_method_into(iface, iface.name);
      } else if (t.is("@property")) {
        skip_to_semicolon();
        ++ast_.skipped.properties;
      } else if (t.is("@optional") || t.is("@required") || t.is("@public") ||
                 t.is("@private") || t.is("@protected") || t.is("@package")) {
        p_.advance();
      } else if (t.kind == TokKind::AtKeyword) {
        // A nested @interface means a missing @end; close this block.
        if (t.is("@interface") || t.is("@protocol") || t.is("@implementation")) break;
        skip_to_semicolon();
        ++ast_.skipped.other;
      } else {
        skip_statement();
      }
    }
    if (p_.cur().is("@end")) p_.advance();
    ast_.interfaces.push_back(std::move(iface));
  }

  std::vector<std::string> read_angle_idents() {
    std::vector<std::string> out;
    p_.advance();
    int depth = 1;
    while (!p_.at_end() && depth > 0) {
      if (p_.cur().is("<")) ++depth;
      if (p_.cur().is(">")) --depth;
      if (depth == 1 && p_.cur().is_ident() && !p_.cur().is("__covariant") &&
          !p_.cur().is("__contravariant"))
        out.push_back(p_.cur().text);
      p_.advance();
    }
    return out;
  }

  void parse_method_into(ClassInterface& iface, const std::string& owner) {
    std::size_t start = p_.pos();
    try {
      MethodDecl m = p_.parse_method(true, true);
      m.owning_class = owner;
      m.source_header = ast_.source_header;
      iface.methods.push_back(std::move(m));
    } catch (const ParseError& e) {
      record(e);
      if (p_.pos() == start) p_.advance();
      recover();
    }
  }

  void record(const ParseError& e) {
    ast_.errors.push_back(ParseDiagnostic{e.line(), e.column(), e.expected()});
  }

  /// Resume after the next ';' or before the next '@end'.
  void recover() {
    while (!p_.at_end()) {
      if (p_.cur().is("@end") || p_.cur().is("@interface") || p_.cur().is("@protocol")) return;
      if (p_.cur().is(";")) {
        p_.advance();
        return;
      }
      p_.advance();
    }
  }

  void skip_to_semicolon() {
    while (!p_.at_end() && !p_.cur().is(";")) {
      if (p_.cur().is("@end")) return;
      p_.advance();
    }
    if (p_.cur().is(";")) p_.advance();
  }

  void skip_to_end_keyword() {
    while (!p_.at_end() && !p_.cur().is("@end")) p_.advance();
    if (p_.cur().is("@end")) p_.advance();
  }

  /// Skips one unsupported statement. A statement whose parentheses close
  /// before they open is treated as a method declaration missing its
  /// opening parenthesis and reported as a parse error.
  void skip_statement() {
    const Token first = p_.cur();
    int paren = 0;
    int brace = 0;
    bool unbalanced = false;
    bool consumed = false;
    while (!p_.at_end()) {
      const Token& t = p_.cur();
      if (t.kind == TokKind::AtKeyword) break;
      if (brace == 0 && paren == 0 && consumed && (t.is("-") || t.is("+")) && p_.peek().is("("))
        break;
      if (t.is("(")) ++paren;
      if (t.is(")")) {
        if (paren == 0) unbalanced = true;
        else --paren;
      }
      if (t.is("{")) ++brace;
      if (t.is("}")) {
        if (brace > 0) --brace;
        p_.advance();
        consumed = true;
        if (brace == 0 && !(p_.cur().is_ident() || p_.cur().is(";"))) break;
        continue;
      }
      p_.advance();
      consumed = true;
      if (t.is(";") && brace == 0) break;
    }
    if (!consumed) p_.advance();
    if (unbalanced) {
      ast_.errors.push_back(ParseDiagnostic{first.line, first.column, "'('"});
    } else {
      ++ast_.skipped.other;
    }
  }

  detail::LexResult lexed_;
  TokenParser p_;
  HeaderAST ast_;
  int loose_index_ = -1;
};

}  // namespace

ParseError::ParseError(int line, int column, std::size_t offset, std::string expected)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": expected " + expected),
      line_(line),
      column_(column),
      offset_(offset),
      expected_(std::move(expected)) {}

HeaderAST parse_header(std::string_view text, std::string source_header,
                       const TypeConfig& config) {
  return HeaderParser(text, std::move(source_header), config).run();
}

MethodDecl parse_method(std::string_view text, const TypeConfig& config) {
  auto lexed = detail::lex(text);
  TokenParser p(lexed.tokens, config);
  MethodDecl m = p.parse_method(false, false);
  if (!p.at_end()) p.fail("end of declaration");
  return m;
}

TypeExpr parse_type(std::string_view text, const TypeConfig& config) {
  auto lexed = detail::lex(text);
  TokenParser p(lexed.tokens, config);
  TypeExpr t = p.parse_type();
  if (!p.at_end()) p.fail("end of type");
  return t;
}

}  // namespace sigrec
