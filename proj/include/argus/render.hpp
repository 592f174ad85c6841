#pragma once

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "argus/sacm.hpp"

namespace argus {

namespace render_detail {
inline std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}
}  // namespace render_detail

// GSN-shaped DOT: claims are boxes, strategies (relationships carrying a
// reasoning text) are parallelograms interposed on their edges, evidence
// sources are ellipses, other artifacts are notes. Context links are dashed
// with open arrowheads, support links solid with filled arrowheads, artifact
// relations dotted.
inline std::string render_dot(const AssuranceModel& model) {
  using render_detail::esc;
  std::string s = "digraph assurance {\n  rankdir=BT;\n";
  std::set<std::string> evidenceSrc;
  for (const auto& e : model.elements())
    if (e.kind == ElemKind::Evidence)
      for (const auto& r : e.src) evidenceSrc.insert(r.gid);

  for (const auto& e : model.elements()) {
    if (e.kind == ElemKind::Claim) {
      s += "  \"" + esc(e.gid) + "\" [shape=box, label=\"" + esc(e.gid) + "\"];\n";
    } else if (is_relationship(e.kind)) {
      if (e.reasoning)
        s += "  \"" + esc(e.gid) + "\" [shape=parallelogram, label=\"" + esc(e.gid) + "\"];\n";
    } else if (evidenceSrc.count(e.gid)) {
      s += "  \"" + esc(e.gid) + "\" [shape=ellipse, label=\"" + esc(e.gid) + "\"];\n";
    } else {
      s += "  \"" + esc(e.gid) + "\" [shape=note, label=\"" + esc(e.gid) + "\"];\n";
    }
  }

  auto edgeAttrs = [](const Element& e) -> std::string {
    if (e.kind == ElemKind::Context) return " [style=dashed, arrowhead=empty]";
    if (e.kind == ElemKind::ArtifactRelation) return " [style=dotted, arrowhead=normal]";
    std::string a = " [style=solid, arrowhead=normal";
    if (e.isCounter) a += ", color=red";
    return a + "]";
  };

  for (const auto& e : model.elements()) {
    if (!is_relationship(e.kind) && e.kind != ElemKind::ArtifactRelation) continue;
    auto attrs = edgeAttrs(e);
    if (is_relationship(e.kind) && e.reasoning) {
      for (const auto& r : e.src)
        s += "  \"" + esc(r.gid) + "\" -> \"" + esc(e.gid) + "\"" + attrs + ";\n";
      for (const auto& r : e.tgt)
        s += "  \"" + esc(e.gid) + "\" -> \"" + esc(r.gid) + "\"" + attrs + ";\n";
    } else {
      for (const auto& r : e.src)
        for (const auto& t : e.tgt)
          s += "  \"" + esc(r.gid) + "\" -> \"" + esc(t.gid) + "\"" + attrs + ";\n";
    }
  }
  s += "}\n";
  return s;
}

// Mirror of the model graph: one node per element, one edge per reference.
inline nlohmann::json render_json(const AssuranceModel& model) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : model.elements()) {
    nlohmann::json n;
    n["gid"] = e.gid;
    n["kind"] = elem_kind_name(e.kind);
    n["declaration"] = declaration_keyword(e.declaration);
    if (e.isCounter) n["isCounter"] = true;
    if (e.isAbstract) n["isAbstract"] = true;
    if (e.isCitation) n["isCitation"] = true;
    n["description"] = e.content.flat();
    nodes.push_back(std::move(n));
    auto edge = [&](const std::string& to, const char* via) {
      edges.push_back({{"from", e.gid}, {"to", to}, {"via", via}});
    };
    for (const auto& r : e.src) edge(r.gid, "src");
    for (const auto& r : e.tgt) edge(r.gid, "tgt");
    for (const auto& r : e.metaClaims) edge(r.gid, "metaClaim");
    for (const auto& seg : e.content.segments)
      if (seg.isRef) edge(seg.target, "ref");
    if (e.reasoning)
      for (const auto& seg : e.reasoning->segments)
        if (seg.isRef) edge(seg.target, "ref");
  }
  return nlohmann::json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace argus
