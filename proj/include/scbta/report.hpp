#pragma once

// Text, JSON and DOT renderings of graphs and analysis results.

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scbta/bta.hpp"
#include "scbta/closure.hpp"
#include "scbta/pipeline.hpp"
#include "scbta/scg.hpp"

namespace scbta {

using json = nlohmann::ordered_json;

inline json ids_json(const IdSet& ids) {
  json a = json::array();
  for (auto id : ids) a.push_back("G" + std::to_string(id));
  return a;
}

inline json to_json(const SizeChangeGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"label", to_string(e.label)}});
  }
  return {{"id_set", ids_json(g.ids())},
          {"source", g.source().str()},
          {"target", g.target().str()},
          {"edges", std::move(edges)}};
}

inline json graphs_json(const std::vector<SizeChangeGraph>& graphs, const std::string& selection) {
  json doc = {{"selection", selection}, {"graphs", json::array()}};
  for (const auto& g : graphs) doc["graphs"].push_back(to_json(g));
  if (graphs.empty()) doc["note"] = "no graphs";
  return doc;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

/// One cluster per graph, captioned with its identifier set. Strict edges
/// are solid with label ">", non-strict ones dashed with label ">=".
inline std::string graphs_dot(const std::vector<SizeChangeGraph>& graphs,
                              const std::string& name = "size_change_graphs") {
  using detail::dot_escape;
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=plaintext];\n";
  if (graphs.empty()) os << "  label=\"no graphs\";\n";
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    auto node = [gi](char side, std::size_t arg) {
      return "\"g" + std::to_string(gi) + side + std::to_string(arg) + "\"";
    };
    os << "  subgraph \"cluster_" << gi << "\" {\n";
    os << "    label=\"" << dot_escape(to_string(g.ids()) + ": " + g.source().str() + " -> " +
                               g.target().str())
       << "\";\n";
    for (std::size_t i = 1; i <= g.source().arity; ++i) {
      os << "    " << node('s', i) << " [label=\"" << i << "_" << dot_escape(g.source().name)
         << "\"];\n";
    }
    for (std::size_t i = 1; i <= g.target().arity; ++i) {
      os << "    " << node('t', i) << " [label=\"" << i << "_" << dot_escape(g.target().name)
         << "\"];\n";
    }
    for (const auto& e : g.edges()) {
      bool strict = e.label == Label::Strict;
      os << "    " << node('s', e.from) << " -> " << node('t', e.to) << " [label=\""
         << to_string(e.label) << "\", style=" << (strict ? "solid" : "dashed") << "];\n";
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string graphs_text(const std::vector<SizeChangeGraph>& graphs) {
  if (graphs.empty()) return "no graphs\n";
  std::string s;
  for (const auto& g : graphs) s += g.str() + "\n";
  return s;
}

struct ReportContext {
  std::string norm;
  bool min_memo = false;
  bool right_propagation = false;
  bool trust_unfoldable = false;
};

inline json annotation_json(const AnalysisResult& r, const ReportContext& ctx) {
  const Annotation& a = r.annotation;
  json marks = json::object();
  for (const auto& [p, m] : a.marks) marks[p.str()] = to_string(m);
  json division = json::object();
  for (const auto& [p, bs] : a.division) {
    json arr = json::array();
    for (auto b : bs) arr.push_back(std::string(1, to_char(b)));
    division[p.str()] = std::move(arr);
  }
  json classes = json::array();
  for (const auto& c : r.classes) {
    json preds = json::array();
    for (const auto& p : c.predicates) preds.push_back(p.str());
    json members = json::array();
    for (const auto& g : c.members) members.push_back(to_json(g));
    classes.push_back({{"id_set", ids_json(c.ids)},
                       {"predicates", std::move(preds)},
                       {"graphs", std::move(members)}});
  }
  return {{"norm", ctx.norm},
          {"improvements",
           {{"min_memo", ctx.min_memo},
            {"right_propagation", ctx.right_propagation},
            {"trust_unfoldable", ctx.trust_unfoldable}}},
          {"marks", std::move(marks)},
          {"division", std::move(division)},
          {"requires_mgg", a.requires_mgg},
          {"loop_classes", std::move(classes)},
          {"graph_counts",
           {{"base", r.base.size()},
            {"closure", r.closure.size()},
            {"idempotent", r.idempotent.size()}}},
          {"diagnostics", a.diagnostics}};
}

inline std::string annotation_text(const AnalysisResult& r, const ReportContext& ctx) {
  const Annotation& a = r.annotation;
  std::ostringstream os;
  os << "norm: " << ctx.norm << '\n';
  os << "graphs: " << r.base.size() << " base, " << r.closure.size() << " in closure, "
     << r.idempotent.size() << " idempotent\n";
  os << "loop classes:\n";
  if (r.classes.empty()) os << "  (none)\n";
  for (const auto& c : r.classes) {
    os << "  " << to_string(c.ids) << ':';
    for (const auto& p : c.predicates) os << ' ' << p.str();
    os << '\n';
  }
  os << "marks:\n";
  for (const auto& [p, m] : a.marks) os << "  " << p.str() << ": " << to_string(m) << '\n';
  os << "division:\n";
  for (const auto& [p, bs] : a.division) {
    os << "  " << p.str() << ": " << division_str(bs) << '\n';
  }
  os << "requires_mgg: " << (a.requires_mgg ? "yes" : "no") << '\n';
  if (!a.diagnostics.empty()) {
    os << "diagnostics:\n";
    for (const auto& d : a.diagnostics) os << "  " << d << '\n';
  }
  return os.str();
}

}  // namespace scbta
