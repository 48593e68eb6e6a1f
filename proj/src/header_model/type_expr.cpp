#include "sigrec/type_expr.hpp"

#include <array>
#include <utility>

namespace sigrec {

namespace {

constexpr std::array<std::pair<TypeKind, std::string_view>, 11> kKindNames{{
    {TypeKind::Scalar, "scalar"},
    {TypeKind::ObjectPointer, "object-pointer"},
    {TypeKind::IdType, "id-type"},
    {TypeKind::VoidPointer, "void-pointer"},
    {TypeKind::InlineStruct, "inline-struct"},
    {TypeKind::StructRef, "struct-ref"},
    {TypeKind::Collection, "collection"},
    {TypeKind::ProtocolQualified, "protocol-qualified"},
    {TypeKind::Block, "block"},
    {TypeKind::ClassType, "class-type"},
    {TypeKind::Other, "other"},
}};

constexpr std::array<std::string_view, 40> kScalarTypedefs{
    "BOOL",      "NSInteger", "NSUInteger", "CGFloat",   "NSTimeInterval", "int8_t",   "int16_t",
    "int32_t",   "int64_t",   "uint8_t",    "uint16_t",  "uint32_t",       "uint64_t", "size_t",
    "ssize_t",   "intptr_t",  "uintptr_t",  "unichar",   "UniChar",        "OSStatus", "pid_t",
    "uid_t",     "gid_t",     "off_t",      "mode_t",    "Boolean",        "UInt8",    "UInt16",
    "UInt32",    "UInt64",    "SInt8",      "SInt16",    "SInt32",         "SInt64",   "CFIndex",
    "FourCharCode", "OSType", "dev_t",      "time_t",    "useconds_t",
};

constexpr std::array<std::string_view, 12> kBuiltinWords{
    "void", "char", "short", "int", "long", "float", "double", "signed", "unsigned", "_Bool", "bool",
    "_Complex",
};

bool is_builtin_word(std::string_view w) {
  for (auto b : kBuiltinWords)
    if (b == w) return true;
  return false;
}

}  // namespace

std::string_view to_string(TypeKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "other";
}

std::optional<TypeKind> type_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

bool operator==(const BlockSignature& a, const BlockSignature& b) {
  return a.return_type == b.return_type && a.params == b.params;
}

bool operator==(const TypeExpr& a, const TypeExpr& b) {
  return a.kind == b.kind && a.base_name == b.base_name && a.generic_args == b.generic_args &&
         a.protocols == b.protocols && a.block_signature == b.block_signature &&
         a.pointer_depth == b.pointer_depth && a.struct_body == b.struct_body;
}

std::set<std::string> default_collection_classes() {
  return {"NSArray",        "NSDictionary",        "NSSet",        "NSOrderedSet",
          "NSMutableArray", "NSMutableDictionary", "NSMutableSet"};
}

std::string core_name(const TypeExpr& t) {
  std::string_view s = t.base_name;
  for (;;) {
    if (s.starts_with("const ")) {
      s.remove_prefix(6);
    } else if (s.starts_with("volatile ")) {
      s.remove_prefix(9);
    } else {
      break;
    }
  }
  return std::string(s);
}

bool is_scalar_spelling(std::string_view base) {
  for (;;) {
    if (base.starts_with("const ")) {
      base.remove_prefix(6);
    } else if (base.starts_with("volatile ")) {
      base.remove_prefix(9);
    } else {
      break;
    }
  }
  if (base.empty()) return false;
  for (auto t : kScalarTypedefs)
    if (t == base) return true;
  // Every word must be a builtin keyword ("unsigned long long", "signed char").
  std::size_t start = 0;
  while (start < base.size()) {
    auto end = base.find(' ', start);
    if (end == std::string_view::npos) end = base.size();
    if (!is_builtin_word(base.substr(start, end - start))) return false;
    start = end + 1;
  }
  return true;
}

bool is_well_formed(const TypeExpr& t, const TypeConfig& config) {
  if (t.pointer_depth < 0) return false;
  if (t.kind == TypeKind::Collection &&
      (!config.collection_classes.contains(core_name(t)) || t.pointer_depth < 1))
    return false;
  if (t.kind == TypeKind::ProtocolQualified && t.protocols.empty()) return false;
  if ((t.kind == TypeKind::Block) != t.block_signature.has_value()) return false;
  if (t.kind == TypeKind::IdType && !t.generic_args.empty()) return false;
  for (const auto& g : t.generic_args)
    if (!is_well_formed(g, config)) return false;
  if (t.block_signature) {
    if (!is_well_formed(*t.block_signature->return_type, config)) return false;
    for (const auto& p : t.block_signature->params)
      if (!is_well_formed(p, config)) return false;
  }
  return true;
}

}  // namespace sigrec
