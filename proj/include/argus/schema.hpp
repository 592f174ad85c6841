#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "argus/ftype.hpp"

namespace argus {

// Dotted variable path, e.g. rw.mon.now.
struct Path {
  std::vector<std::string> segs;

  Path() = default;
  explicit Path(std::vector<std::string> s) : segs(std::move(s)) {}
  static Path parse(const std::string& dotted) {
    Path p;
    std::string cur;
    for (char c : dotted) {
      if (c == '.') {
        p.segs.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    p.segs.push_back(cur);
    return p;
  }
  std::string str() const {
    std::string s;
    for (size_t i = 0; i < segs.size(); ++i) s += (i ? "." : "") + segs[i];
    return s;
  }
  bool empty() const { return segs.empty(); }
  friend bool operator==(const Path& a, const Path& b) { return a.segs == b.segs; }
  friend bool operator!=(const Path& a, const Path& b) { return !(a == b); }
  friend bool operator<(const Path& a, const Path& b) { return a.segs < b.segs; }
  bool is_prefix_of(const Path& other) const {
    if (segs.size() > other.segs.size()) return false;
    for (size_t i = 0; i < segs.size(); ++i)
      if (segs[i] != other.segs[i]) return false;
    return true;
  }
};

// Two leaf paths are independent iff neither is a prefix of the other.
inline bool paths_independent(const Path& a, const Path& b) {
  return !a.is_prefix_of(b) && !b.is_prefix_of(a);
}

// Declaration tree: leaves carry a type, interior nodes are namespaces.
struct SchemaNode {
  std::string name;
  FTypePtr type;                    // set iff leaf
  std::vector<SchemaNode> children; // set iff namespace

  bool is_leaf() const { return type != nullptr; }

  static SchemaNode leaf(std::string n, FTypePtr t) {
    SchemaNode s;
    s.name = std::move(n);
    s.type = std::move(t);
    return s;
  }
  static SchemaNode ns(std::string n, std::vector<SchemaNode> cs) {
    SchemaNode s;
    s.name = std::move(n);
    s.children = std::move(cs);
    return s;
  }
};

inline bool schema_node_eq(const SchemaNode& a, const SchemaNode& b) {
  if (a.name != b.name || a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return same_type(a.type, b.type);
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!schema_node_eq(a.children[i], b.children[i])) return false;
  return true;
}

// Total valuation of a schema's leaves, one ordinal per leaf in declaration
// order.
using State = std::vector<std::uint32_t>;

constexpr std::uint64_t kDefaultStateBound = 1ull << 24;

// A schema with leaves flattened in depth-first declaration order. The leaves
// of any namespace form a contiguous index range, which makes the frame
// coercions index shifts.
class Schema {
 public:
  struct Leaf {
    Path path;
    FTypePtr type;
  };

  Schema() = default;
  explicit Schema(std::vector<SchemaNode> roots) : roots_(std::move(roots)) {
    flatten(roots_, {});
    if (leaves_.empty()) throw Error("BadSchema", "schema has no variables");
  }

  const std::vector<SchemaNode>& roots() const { return roots_; }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  size_t leaf_count() const { return leaves_.size(); }
  const Leaf& leaf(std::uint32_t i) const { return leaves_[i]; }

  std::optional<std::uint32_t> find_leaf(const Path& p) const {
    auto it = by_path_.find(p.str());
    if (it == by_path_.end()) return std::nullopt;
    return it->second;
  }

  // Leaf index range [lo, hi) of a namespace path; empty optional when the
  // path is not an interior node.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> ns_range(const Path& p) const {
    auto it = ns_range_.find(p.str());
    if (it == ns_range_.end()) return std::nullopt;
    return it->second;
  }

  bool is_namespace(const Path& p) const { return ns_range_.count(p.str()) > 0; }

  // Schema of the subtree rooted at namespace `p`.
  Schema subschema(const Path& p) const {
    const std::vector<SchemaNode>* nodes = &roots_;
    const SchemaNode* found = nullptr;
    for (const auto& seg : p.segs) {
      found = nullptr;
      for (const auto& n : *nodes)
        if (n.name == seg) {
          found = &n;
          break;
        }
      if (!found || found->is_leaf()) throw Error("BadPath", "not a namespace: " + p.str());
      nodes = &found->children;
    }
    return Schema(*nodes);
  }

  std::uint64_t cardinality() const {
    std::uint64_t prod = 1;
    for (const auto& l : leaves_) {
      std::uint64_t c = l.type->cardinality();
      if (prod > (1ull << 62) / c) return 1ull << 63;  // saturate
      prod *= c;
    }
    return prod;
  }

  // Exhaustive, duplicate-free, deterministic enumeration: the first leaf
  // varies slowest (lexicographic order over leaves in declaration order).
  std::vector<State> states(std::uint64_t bound = kDefaultStateBound) const {
    std::uint64_t card = cardinality();
    if (card > bound) throw StateSpaceTooLarge(card, bound);
    std::vector<State> all;
    all.reserve(static_cast<size_t>(card));
    State s(leaves_.size(), 0);
    while (true) {
      all.push_back(s);
      size_t i = leaves_.size();
      while (i > 0) {
        --i;
        if (s[i] + 1 < leaves_[i].type->cardinality()) {
          ++s[i];
          std::fill(s.begin() + static_cast<long>(i) + 1, s.end(), 0);
          break;
        }
        if (i == 0) return all;
      }
    }
  }

  std::string state_str(const State& s) const {
    std::string out = "{";
    for (size_t i = 0; i < leaves_.size(); ++i) {
      if (i) out += ", ";
      out += leaves_[i].path.str() + "=" + leaves_[i].type->value_name(s[i]);
    }
    return out + "}";
  }

  friend bool operator==(const Schema& a, const Schema& b) {
    if (a.roots_.size() != b.roots_.size()) return false;
    for (size_t i = 0; i < a.roots_.size(); ++i)
      if (!schema_node_eq(a.roots_[i], b.roots_[i])) return false;
    return true;
  }

 private:
  void flatten(const std::vector<SchemaNode>& nodes, std::vector<std::string> prefix) {
    for (const auto& n : nodes) {
      std::map<std::string, int> seen;
      for (const auto& m : nodes)
        if (++seen[m.name] > 1 && m.name == n.name)
          throw Error("BadSchema", "duplicate sibling name: " + n.name);
    }
    for (const auto& n : nodes) {
      auto below = prefix;
      below.push_back(n.name);
      if (n.is_leaf()) {
        Leaf l;
        l.path = Path(below);
        l.type = n.type;
        by_path_[l.path.str()] = static_cast<std::uint32_t>(leaves_.size());
        leaves_.push_back(std::move(l));
      } else {
        auto lo = static_cast<std::uint32_t>(leaves_.size());
        flatten(n.children, below);
        auto hi = static_cast<std::uint32_t>(leaves_.size());
        ns_range_[Path(below).str()] = {lo, hi};
      }
    }
  }

  std::vector<SchemaNode> roots_;
  std::vector<Leaf> leaves_;
  std::unordered_map<std::string, std::uint32_t> by_path_;
  std::unordered_map<std::string, std::pair<std::uint32_t, std::uint32_t>> ns_range_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

}  // namespace argus
