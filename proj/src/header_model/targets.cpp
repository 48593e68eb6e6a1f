#include <algorithm>

#include "sigrec/header_model.hpp"

namespace sigrec {

std::string MethodDecl::selector() const {
  std::string out;
  for (const auto& p : selector_pieces) out += p;
  return out;
}

const TypeExpr& MethodDecl::type_at(std::size_t position) const {
  return position == 0 ? return_type : params.at(position - 1).type;
}

TypeExpr& MethodDecl::type_at(std::size_t position) {
  return position == 0 ? return_type : params.at(position - 1).type;
}

bool same_signature(const MethodDecl& a, const MethodDecl& b) {
  return a.is_class_method == b.is_class_method && a.selector_pieces == b.selector_pieces &&
         a.return_type == b.return_type && a.params == b.params;
}

bool same_types(const MethodDecl& a, const MethodDecl& b) {
  if (a.params.size() != b.params.size() || !(a.return_type == b.return_type)) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (!(a.params[i].type == b.params[i].type)) return false;
  return true;
}

std::vector<const MethodDecl*> HeaderAST::methods() const {
  std::vector<const MethodDecl*> out;
  for (const auto& iface : interfaces)
    for (const auto& m : iface.methods) out.push_back(&m);
  return out;
}

std::string symbol_text(const MethodDecl& decl) {
  return std::string(decl.is_class_method ? "+[" : "-[") + decl.owning_class + " " +
         decl.selector() + "]";
}

void SymbolTable::add(std::string text, std::uint64_t address) {
  rows_.emplace(std::move(text), address);
}

std::vector<std::uint64_t> SymbolTable::lookup(const std::string& text) const {
  std::vector<std::uint64_t> out;
  auto [lo, hi] = rows_.equal_range(text);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

bool SymbolTable::contains_address(std::uint64_t address) const {
  return std::any_of(rows_.begin(), rows_.end(),
                     [&](const auto& row) { return row.second == address; });
}

std::vector<InferenceTarget> find_inference_targets(const HeaderAST& ast,
                                                    const AmbiguityConfig& ambig,
                                                    const std::string& framework) {
  std::vector<InferenceTarget> out;
  for (const MethodDecl* m : ast.methods()) {
    std::set<std::size_t> positions;
    for (std::size_t i = 0; i < m->position_count(); ++i)
      if (ambig.is_ambiguous(m->type_at(i))) positions.insert(i);
    if (positions.empty()) continue;
    InferenceTarget t;
    t.decl = *m;
    t.ambiguous_positions = std::move(positions);
    t.framework = framework;
    out.push_back(std::move(t));
  }
  return out;
}

InferenceTarget bind_symbol(InferenceTarget target, const SymbolTable& symtab) {
  target.bound_symbol.text = symbol_text(target.decl);
  auto hits = symtab.lookup(target.bound_symbol.text);
  if (hits.size() > 1) throw SymbolCollision(target.bound_symbol.text);
  if (hits.size() == 1) {
    target.bound_symbol.address = hits.front();
  } else {
    target.bound_symbol.address.reset();
  }
  return target;
}

}  // namespace sigrec
