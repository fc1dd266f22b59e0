#pragma once

// Size-change graphs between the argument positions of caller and callee,
// plain construction from clauses, construction strengthened with
// right-propagated success relations, and concatenation.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "scbta/lincons.hpp"
#include "scbta/norm.hpp"
#include "scbta/print.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

enum class Label { NonStrict, Strict };

inline const char* to_string(Label l) { return l == Label::Strict ? ">" : ">="; }

/// Edge from argument `from` of the source to argument `to` of the target
/// (both 1-based).
struct Edge {
  std::size_t from;
  std::size_t to;
  Label label;

  auto operator<=>(const Edge&) const = default;
};

/// Ordinal of a base graph: G1, G2, ... in clause then body-atom order.
using GraphId = std::size_t;
using IdSet = std::set<GraphId>;

inline std::string to_string(const IdSet& ids) {
  std::string s = "{";
  bool first = true;
  for (auto id : ids) {
    if (!first) s += ",";
    first = false;
    s += "G" + std::to_string(id);
  }
  return s + "}";
}

class SizeChangeGraph {
 public:
  SizeChangeGraph(Predicate source, Predicate target, std::vector<Edge> edges = {},
                  IdSet ids = {})
      : source_(std::move(source)), target_(std::move(target)), ids_(std::move(ids)) {
    for (const auto& e : edges) add_edge(e);
  }

  const Predicate& source() const { return source_; }
  const Predicate& target() const { return target_; }
  /// Sorted by (from, to); at most one edge per pair.
  const std::vector<Edge>& edges() const { return edges_; }
  const IdSet& ids() const { return ids_; }
  void set_ids(IdSet ids) { ids_ = std::move(ids); }

  bool is_self_loop() const { return source_ == target_; }

  /// Inserts an edge; when the pair is already present the stronger label
  /// is kept.
  void add_edge(const Edge& e) {
    if (e.from < 1 || e.from > source_.arity || e.to < 1 || e.to > target_.arity) {
      throw std::out_of_range("edge " + std::to_string(e.from) + "->" +
                              std::to_string(e.to) + " out of range for " +
                              source_.str() + " -> " + target_.str());
    }
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                               [](const Edge& a, const Edge& b) {
                                 return std::tie(a.from, a.to) < std::tie(b.from, b.to);
                               });
    if (it != edges_.end() && it->from == e.from && it->to == e.to) {
      if (e.label == Label::Strict) it->label = Label::Strict;
      return;
    }
    edges_.insert(it, e);
  }

  std::optional<Label> label(std::size_t from, std::size_t to) const {
    for (const auto& e : edges_) {
      if (e.from == from && e.to == to) return e.label;
    }
    return std::nullopt;
  }

  /// Equality that ignores the identifier set.
  bool same_shape(const SizeChangeGraph& o) const {
    return source_ == o.source_ && target_ == o.target_ && edges_ == o.edges_;
  }

  /// Strict weak order on shapes (identifier set excluded).
  bool shape_less(const SizeChangeGraph& o) const {
    return std::tie(source_, target_, edges_) < std::tie(o.source_, o.target_, o.edges_);
  }

  bool operator==(const SizeChangeGraph&) const = default;

  std::string str() const {
    std::string s = to_string(ids_) + ": " + source_.str() + " -> " + target_.str() + " [";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(edges_[i].from) + to_string(edges_[i].label) +
           std::to_string(edges_[i].to);
    }
    return s + "]";
  }

 private:
  Predicate source_;
  Predicate target_;
  std::vector<Edge> edges_;
  IdSet ids_;
};

struct ShapeLess {
  bool operator()(const SizeChangeGraph& a, const SizeChangeGraph& b) const {
    return a.shape_less(b);
  }
};

/// g • h: an edge i -> k for every path i -> j -> k, strict if either step
/// is strict.
inline SizeChangeGraph concat(const SizeChangeGraph& g, const SizeChangeGraph& h) {
  if (g.target() != h.source()) {
    throw std::invalid_argument("cannot concatenate " + g.source().str() + " -> " +
                                g.target().str() + " with " + h.source().str() +
                                " -> " + h.target().str());
  }
  IdSet ids = g.ids();
  ids.insert(h.ids().begin(), h.ids().end());
  SizeChangeGraph out(g.source(), h.target(), {}, std::move(ids));
  for (const auto& e1 : g.edges()) {
    for (const auto& e2 : h.edges()) {
      if (e1.to != e2.from) continue;
      Label l = (e1.label == Label::Strict || e2.label == Label::Strict)
                    ? Label::Strict
                    : Label::NonStrict;
      out.add_edge({e1.from, e2.to, l});
    }
  }
  return out;
}

/// One graph per (clause head, body atom) pair, edges from comparing the
/// argument norms. Unknown comparisons produce no edge.
inline std::vector<SizeChangeGraph> build_graphs(const Program& p, const NormSpec& n) {
  std::vector<SizeChangeGraph> out;
  GraphId next = 1;
  for (const auto& c : p.clauses()) {
    std::vector<SizeExpr> head;
    for (const auto& a : c.head.args()) head.push_back(norm_of(a, n));
    for (const auto& b : c.body) {
      SizeChangeGraph g(c.head.functor(), b.functor(), {}, {next++});
      for (std::size_t k = 0; k < b.arity(); ++k) {
        SizeExpr callee = norm_of(b.arg(k), n);
        for (std::size_t j = 0; j < head.size(); ++j) {
          switch (compare(head[j], callee)) {
            case CompareResult::Strict: g.add_edge({j + 1, k + 1, Label::Strict}); break;
            case CompareResult::NonStrict: g.add_edge({j + 1, k + 1, Label::NonStrict}); break;
            case CompareResult::Unknown: break;
          }
        }
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

/// Like build_graphs, but the comparison for body atom B_i may assume the
/// success relations of every completely unfoldable atom B_j, j < i.
/// Unsatisfiable contexts make every edge strict and add a warning.
inline std::vector<SizeChangeGraph> build_graphs_rp(
    const Program& p, const NormSpec& n, const std::set<Predicate>& unfoldable,
    const RelationTable& rels, std::vector<std::string>* warnings = nullptr,
    const EntailmentLimits& limits = {}) {
  for (const auto& [pred, store] : rels) {
    for (const auto& v : store.variables()) {
      if (v.size() < 2 || v[0] != 'A' || std::stoul(v.substr(1)) < 1 ||
          std::stoul(v.substr(1)) > pred.arity) {
        throw std::invalid_argument("relation placeholder " + v +
                                    " out of range for " + pred.str());
      }
    }
  }
  std::vector<SizeChangeGraph> out;
  GraphId next = 1;
  for (std::size_t ci = 0; ci < p.clauses().size(); ++ci) {
    const Clause& c = p.clauses()[ci];
    std::vector<SizeExpr> head;
    for (const auto& a : c.head.args()) head.push_back(norm_of(a, n));
    ConstraintStore context;
    for (const auto& b : c.body) {
      SizeChangeGraph g(c.head.functor(), b.functor(), {}, {next++});
      bool vacuous = !context.empty() && !satisfiable(context, limits);
      if (vacuous && warnings) {
        warnings->push_back("clause " + std::to_string(ci + 1) + " (" + to_string(c) +
                            "): propagated context " + context.str() +
                            " is unsatisfiable before " + to_string(b) +
                            "; all edges of G" + std::to_string(next - 1) +
                            " are strict");
      }
      for (std::size_t k = 0; k < b.arity(); ++k) {
        SizeExpr callee = norm_of(b.arg(k), n);
        for (std::size_t j = 0; j < head.size(); ++j) {
          CompareResult plain = compare(head[j], callee);
          SizeExpr diff = head[j] - callee;
          if (vacuous || plain == CompareResult::Strict ||
              (!context.empty() && entails(context, {diff, Rel::Gt}, limits))) {
            g.add_edge({j + 1, k + 1, Label::Strict});
          } else if (plain == CompareResult::NonStrict ||
                     (!context.empty() && entails(context, {diff, Rel::Ge}, limits))) {
            g.add_edge({j + 1, k + 1, Label::NonStrict});
          }
        }
      }
      out.push_back(std::move(g));
      if (unfoldable.contains(b.functor())) {
        if (auto it = rels.find(b.functor()); it != rels.end()) {
          context.add_all(instantiate(it->second, b, n));
        }
      }
    }
  }
  return out;
}

/// Drops graphs that enter or leave a trusted (completely unfoldable)
/// predicate, so those predicates take no part in loop detection.
inline std::vector<SizeChangeGraph> without_predicates(std::vector<SizeChangeGraph> graphs,
                                                       const std::set<Predicate>& preds) {
  std::erase_if(graphs, [&](const SizeChangeGraph& g) {
    return preds.contains(g.source()) || preds.contains(g.target());
  });
  return graphs;
}

}  // namespace scbta
