#include "sigrec/header_model.hpp"

namespace sigrec {

namespace {

void append_stars(std::string& out, int depth) {
  if (depth > 0) {
    out += ' ';
    out.append(static_cast<std::size_t>(depth), '*');
  }
}

}  // namespace

std::string canonical(const TypeExpr& t) {
  std::string out;
  switch (t.kind) {
    case TypeKind::Block: {
      const auto& sig = *t.block_signature;
      out = canonical(*sig.return_type) + " (^)(";
      if (sig.params.empty()) {
        out += "void";
      } else {
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
          if (i) out += ", ";
          out += canonical(sig.params[i]);
        }
      }
      out += ')';
      return out;
    }
    case TypeKind::InlineStruct:
      out = t.base_name + " {";
      if (!t.struct_body.empty()) out += " " + t.struct_body;
      out += " }";
      append_stars(out, t.pointer_depth);
      return out;
    default:
      break;
  }

  out = t.base_name;
  if (!t.protocols.empty()) {
    out += '<';
    for (std::size_t i = 0; i < t.protocols.size(); ++i) {
      if (i) out += ", ";
      out += t.protocols[i];
    }
    out += '>';
  } else if (!t.generic_args.empty()) {
    out += '<';
    for (std::size_t i = 0; i < t.generic_args.size(); ++i) {
      if (i) out += ", ";
      out += canonical(t.generic_args[i]);
    }
    out += '>';
  }
  append_stars(out, t.pointer_depth);
  return out;
}

std::string canonicalize_type(std::string_view text, const TypeConfig& config) {
  return canonical(parse_type(text, config));
}

std::string render_signature(const MethodDecl& decl) {
  std::string out = decl.is_class_method ? "+ (" : "- (";
  out += canonical(decl.return_type);
  out += ')';
  if (decl.params.empty()) {
    out += decl.selector_pieces.empty() ? std::string() : decl.selector_pieces.front();
  } else {
    for (std::size_t i = 0; i < decl.params.size(); ++i) {
      if (i) out += ' ';
      out += i < decl.selector_pieces.size() ? decl.selector_pieces[i] : std::string(":");
      out += '(' + canonical(decl.params[i].type) + ')' + decl.params[i].name;
    }
  }
  out += ';';
  return out;
}

std::string render_position(const MethodDecl& decl, std::size_t position) {
  if (position == 0) return canonical(decl.return_type);
  const auto& p = decl.params.at(position - 1);
  return canonical(p.type) + " " + p.name;
}

}  // namespace sigrec
