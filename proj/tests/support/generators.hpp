#pragma once

// Random structure generators for property tests. They build TypeExpr and
// MethodDecl values directly (not through the parser), assigning the kind a
// correct parser must infer.

#include <random>
#include <string>
#include <vector>

#include "sigrec/method_decl.hpp"
#include "sigrec/type_expr.hpp"

namespace sigrec::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
  std::mt19937_64& rng() { return rng_; }

  static TypeExpr make(TypeKind kind, std::string base, int depth = 0) {
    TypeExpr t;
    t.kind = kind;
    t.base_name = std::move(base);
    t.pointer_depth = depth;
    return t;
  }

  TypeExpr scalar() {
    static const std::vector<std::string> names{"int", "BOOL", "long", "unsigned long long", "double",
                                                "float", "char", "NSInteger", "NSUInteger", "CGFloat",
                                                "short", "unsigned int", "void"};
    return make(TypeKind::Scalar, pick(names));
  }

  TypeExpr object_pointer() {
    static const std::vector<std::string> names{"NSString", "NSData", "NSError", "NSURL", "NSNumber",
                                                "NSCoder", "CustomViewModel"};
    return make(TypeKind::ObjectPointer, pick(names), coin(0.1) ? 2 : 1);
  }

  TypeExpr protocol_qualified() {
    static const std::vector<std::string> protos{"NSCopying", "NSCoding", "NSSecureCoding",
                                                 "NSFastEnumeration", "CBPeripheralDelegate"};
    TypeExpr t;
    t.kind = TypeKind::ProtocolQualified;
    if (coin()) {
      t.base_name = "id";
    } else {
      t.base_name = coin() ? "NSObject" : "UIView";
      t.pointer_depth = 1;
    }
    std::size_t n = 1 + below(2);
    for (std::size_t i = 0; i < n; ++i) t.protocols.push_back(pick(protos));
    return t;
  }

  TypeExpr element(int depth) {
    switch (below(depth > 0 ? 4 : 3)) {
      case 0: return object_pointer();
      case 1: return make(TypeKind::IdType, "id");
      case 2: return protocol_qualified();
      default: return collection(depth - 1);
    }
  }

  TypeExpr collection(int depth) {
    static const std::vector<std::string> one{"NSArray", "NSSet", "NSOrderedSet", "NSMutableArray",
                                              "NSMutableSet"};
    static const std::vector<std::string> two{"NSDictionary", "NSMutableDictionary"};
    TypeExpr t;
    t.kind = TypeKind::Collection;
    t.pointer_depth = 1;
    if (coin(0.3)) {
      t.base_name = pick(two);
      if (!coin(0.2)) {
        t.generic_args.push_back(element(depth));
        t.generic_args.push_back(element(depth));
      }
    } else {
      t.base_name = pick(one);
      if (!coin(0.2)) t.generic_args.push_back(element(depth));
    }
    return t;
  }

  TypeExpr block() {
    TypeExpr t;
    t.kind = TypeKind::Block;
    BlockSignature sig;
    *sig.return_type = coin() ? make(TypeKind::Scalar, "void") : leaf();
    std::size_t n = below(4);
    for (std::size_t i = 0; i < n; ++i) {
      TypeExpr param = leaf();
      if (param.kind == TypeKind::Scalar && param.base_name == "void") param = object_pointer();
      sig.params.push_back(std::move(param));
    }
    t.block_signature = std::move(sig);
    return t;
  }

  TypeExpr leaf() {
    switch (below(5)) {
      case 0: return scalar();
      case 1: return object_pointer();
      case 2: return make(TypeKind::IdType, "id");
      case 3: return protocol_qualified();
      default: return collection(0);
    }
  }

  TypeExpr inline_struct() {
    TypeExpr t = make(TypeKind::InlineStruct, coin() ? "struct" : "struct CGPoint");
    t.struct_body = coin() ? "double x0; double x1;" : "int a; unsigned long long b; char * c;";
    return t;
  }

  TypeExpr any_type() {
    switch (below(11)) {
      case 0:
      case 1: return scalar();
      case 2: return object_pointer();
      case 3: return make(TypeKind::IdType, "id");
      case 4: return make(TypeKind::VoidPointer, "void", 1);
      case 5: return collection(1);
      case 6: return protocol_qualified();
      case 7: return block();
      case 8: return make(TypeKind::ClassType, "Class");
      case 9: return inline_struct();
      default: return make(TypeKind::StructRef, "struct _NSZone", 1);
    }
  }

  std::string identifier(const char* stem) { return std::string(stem) + std::to_string(below(100)); }

  MethodDecl method() {
    static const std::vector<std::string> stems{"value", "setObject", "initWithCoder", "doSomething",
                                                "withArg", "forKey", "completion", "reset", "delegate"};
    MethodDecl m;
    m.is_class_method = coin(0.3);
    m.return_type = any_type();
    std::size_t n = below(5);
    if (n == 0) {
      m.selector_pieces.push_back(pick(stems) + std::to_string(below(10)));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        m.selector_pieces.push_back(pick(stems) + std::to_string(i) + ":");
        Param p;
        p.name = identifier("arg");
        p.type = any_type();
        if (p.type.kind == TypeKind::Scalar && p.type.base_name == "void") p.type = object_pointer();
        m.params.push_back(std::move(p));
      }
    }
    m.owning_class = "Foo";
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace sigrec::testing
