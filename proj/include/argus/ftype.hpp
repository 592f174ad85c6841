#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "argus/diag.hpp"

namespace argus {

struct FiniteType;
using FTypePtr = std::shared_ptr<const FiniteType>;

// Finite value domain of a state variable. Values are handled as ordinals
// into the type's canonical order:
//   Boolean:     false, true
//   Enumeration: constructors in declaration order
//   BoundedInt:  lo..hi
//   Optional:    None, then Some(v) for v in inner order
//   SetOf:       subsets as bitmasks 0..2^n-1 (bit i = constructor i)
struct FiniteType {
  enum class Kind { Boolean, Enumeration, BoundedInt, Optional, SetOf };

  Kind kind = Kind::Boolean;
  std::vector<std::string> ctors;  // Enumeration / SetOf element names
  long lo = 0, hi = 0;             // BoundedInt
  FTypePtr inner;                  // Optional

  static FTypePtr boolean() {
    auto t = std::make_shared<FiniteType>();
    t->kind = Kind::Boolean;
    return t;
  }
  static FTypePtr enumeration(std::vector<std::string> cs) {
    if (cs.empty()) throw Error("BadType", "enumeration needs at least one constructor");
    auto t = std::make_shared<FiniteType>();
    t->kind = Kind::Enumeration;
    t->ctors = std::move(cs);
    return t;
  }
  static FTypePtr bounded_int(long lo, long hi) {
    if (lo > hi) throw Error("BadType", "int range is empty");
    auto t = std::make_shared<FiniteType>();
    t->kind = Kind::BoundedInt;
    t->lo = lo;
    t->hi = hi;
    return t;
  }
  static FTypePtr optional(FTypePtr in) {
    auto t = std::make_shared<FiniteType>();
    t->kind = Kind::Optional;
    t->inner = std::move(in);
    return t;
  }
  static FTypePtr set_of(std::vector<std::string> cs) {
    if (cs.empty()) throw Error("BadType", "set type needs at least one element name");
    if (cs.size() > 20) throw Error("BadType", "set element space too large");
    auto t = std::make_shared<FiniteType>();
    t->kind = Kind::SetOf;
    t->ctors = std::move(cs);
    return t;
  }

  std::uint64_t cardinality() const {
    switch (kind) {
      case Kind::Boolean: return 2;
      case Kind::Enumeration: return ctors.size();
      case Kind::BoundedInt: return static_cast<std::uint64_t>(hi - lo + 1);
      case Kind::Optional: return 1 + inner->cardinality();
      case Kind::SetOf: return 1ull << ctors.size();
    }
    return 0;
  }

  bool is_boolean() const { return kind == Kind::Boolean; }
  bool is_int() const { return kind == Kind::BoundedInt; }
  bool is_set() const { return kind == Kind::SetOf; }
  bool is_optional() const { return kind == Kind::Optional; }

  long int_value(std::uint32_t ord) const { return lo + static_cast<long>(ord); }
  std::uint32_t ord_of_int(long v) const {
    if (v < lo || v > hi) throw Error("BadLiteral", "integer literal out of range");
    return static_cast<std::uint32_t>(v - lo);
  }

  int ctor_index(const std::string& name) const {
    for (size_t i = 0; i < ctors.size(); ++i)
      if (ctors[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::string value_name(std::uint32_t ord) const {
    switch (kind) {
      case Kind::Boolean: return ord ? "true" : "false";
      case Kind::Enumeration: return ctors.at(ord);
      case Kind::BoundedInt: return std::to_string(int_value(ord));
      case Kind::Optional:
        if (ord == 0) return "None";
        return "Some(" + inner->value_name(ord - 1) + ")";
      case Kind::SetOf: {
        std::string s = "{";
        bool first = true;
        for (size_t i = 0; i < ctors.size(); ++i) {
          if (ord & (1u << i)) {
            if (!first) s += ", ";
            s += ctors[i];
            first = false;
          }
        }
        return s + "}";
      }
    }
    return "?";
  }

  std::string name() const {
    switch (kind) {
      case Kind::Boolean: return "bool";
      case Kind::Enumeration: {
        std::string s = "enum(";
        for (size_t i = 0; i < ctors.size(); ++i) s += (i ? ", " : "") + ctors[i];
        return s + ")";
      }
      case Kind::BoundedInt:
        return "int[" + std::to_string(lo) + ".." + std::to_string(hi) + "]";
      case Kind::Optional: return "option " + inner->name();
      case Kind::SetOf: {
        std::string s = "set(";
        for (size_t i = 0; i < ctors.size(); ++i) s += (i ? ", " : "") + ctors[i];
        return s + ")";
      }
    }
    return "?";
  }

  friend bool operator==(const FiniteType& a, const FiniteType& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Boolean: return true;
      case Kind::Enumeration:
      case Kind::SetOf: return a.ctors == b.ctors;
      case Kind::BoundedInt: return a.lo == b.lo && a.hi == b.hi;
      case Kind::Optional: return *a.inner == *b.inner;
    }
    return false;
  }
  friend bool operator!=(const FiniteType& a, const FiniteType& b) { return !(a == b); }
};

inline bool same_type(const FTypePtr& a, const FTypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline size_t type_hash(const FiniteType& t) {
  size_t h = static_cast<size_t>(t.kind) * 0x9e3779b97f4a7c15ull;
  for (const auto& c : t.ctors) h = h * 31 + std::hash<std::string>{}(c);
  h = h * 31 + static_cast<size_t>(t.lo) * 7 + static_cast<size_t>(t.hi);
  if (t.inner) h = h * 31 + type_hash(*t.inner);
  return h;
}

}  // namespace argus
