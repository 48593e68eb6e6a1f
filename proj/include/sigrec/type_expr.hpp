#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sigrec {

/// Owning, deep-copying pointer with value semantics. Used to break the
/// recursion between TypeExpr and BlockSignature.
template <class T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

enum class TypeKind {
  Scalar,
  ObjectPointer,
  IdType,
  VoidPointer,
  InlineStruct,
  StructRef,
  Collection,
  ProtocolQualified,
  Block,
  ClassType,
  Other,
};

std::string_view to_string(TypeKind kind);
std::optional<TypeKind> type_kind_from_string(std::string_view name);

struct TypeExpr;

struct BlockSignature {
  Box<TypeExpr> return_type;
  std::vector<TypeExpr> params;

  friend bool operator==(const BlockSignature& a, const BlockSignature& b);
};

/// A parsed Objective-C type expression.
///
/// `base_name` holds the spelled base (e.g. `NSArray`, `unsigned long`,
/// `const char`, `struct _NSZone`). Inline struct bodies are kept in
/// `struct_body` as normalized field text so they render back verbatim.
struct TypeExpr {
  TypeKind kind = TypeKind::Other;
  std::string base_name;
  std::vector<TypeExpr> generic_args;
  std::vector<std::string> protocols;
  std::optional<BlockSignature> block_signature;
  int pointer_depth = 0;
  std::string struct_body;

  friend bool operator==(const TypeExpr& a, const TypeExpr& b);
};

/// Class names treated as collections. Shared by the parser (for kind
/// assignment) and the linter (for generic checks).
std::set<std::string> default_collection_classes();

struct TypeConfig {
  std::set<std::string> collection_classes = default_collection_classes();
};

/// Base name with leading `const`/`volatile` qualifiers removed.
std::string core_name(const TypeExpr& t);

/// True when the spelled base is a C builtin scalar or a well-known scalar
/// typedef (BOOL, NSInteger, CGFloat, ...).
bool is_scalar_spelling(std::string_view base);

/// Checks the structural invariants of a TypeExpr, recursively.
bool is_well_formed(const TypeExpr& t, const TypeConfig& config = {});

}  // namespace sigrec
