#pragma once

// Composition closure of size-change graphs, idempotent graphs, and loop
// classes (idempotent graphs grouped by identifier set).

#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "scbta/scg.hpp"

namespace scbta {

/// Identifier set preferred on a shape collision: fewer identifiers first,
/// then the lexicographically least sequence.
inline bool preferred_ids(const IdSet& a, const IdSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Graphs deduplicated by shape. Each shape keeps one identifier set.
class GraphSet {
 public:
  const std::vector<SizeChangeGraph>& graphs() const { return graphs_; }
  std::size_t size() const { return graphs_.size(); }
  bool closed() const { return closed_; }

  const SizeChangeGraph* find_shape(const SizeChangeGraph& g) const {
    auto it = index_.find(g);
    return it == index_.end() ? nullptr : &graphs_[it->second];
  }

  bool contains_shape(const SizeChangeGraph& g) const { return find_shape(g) != nullptr; }

 private:
  friend GraphSet close(const std::vector<SizeChangeGraph>& init);

  std::vector<SizeChangeGraph> graphs_;
  std::map<SizeChangeGraph, std::size_t, ShapeLess> index_;
  bool closed_ = false;
};

/// Least shape-deduplicated set containing `init` and closed under
/// concatenation. Worklist order is insertion order; when a shape is
/// rederived with a preferred identifier set, the set is replaced and the
/// graph is re-queued so its compositions pick up the change.
inline GraphSet close(const std::vector<SizeChangeGraph>& init) {
  GraphSet s;
  std::deque<std::size_t> work;
  auto insert = [&](SizeChangeGraph g) {
    auto it = s.index_.find(g);
    if (it == s.index_.end()) {
      std::size_t idx = s.graphs_.size();
      s.index_.emplace(g, idx);
      s.graphs_.push_back(std::move(g));
      work.push_back(idx);
      return;
    }
    SizeChangeGraph& old = s.graphs_[it->second];
    if (preferred_ids(g.ids(), old.ids())) {
      old.set_ids(g.ids());
      work.push_back(it->second);
    }
  };
  for (const auto& g : init) insert(g);
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    // Indices stay valid; graphs_ may grow while we iterate.
    for (std::size_t j = 0; j < s.graphs_.size(); ++j) {
      SizeChangeGraph gi = s.graphs_[i];
      SizeChangeGraph gj = s.graphs_[j];
      if (gi.target() == gj.source()) insert(concat(gi, gj));
      if (j != i && gj.target() == gi.source()) insert(concat(gj, gi));
    }
  }
  s.closed_ = true;
  return s;
}

inline bool is_idempotent(const SizeChangeGraph& g) {
  return g.is_self_loop() && concat(g, g).same_shape(g);
}

/// Graphs p -> p of a closed set with g • g = g, in insertion order.
inline std::vector<SizeChangeGraph> idempotents(const GraphSet& s) {
  if (!s.closed()) throw std::logic_error("idempotents: graph set is not closed");
  std::vector<SizeChangeGraph> out;
  for (const auto& g : s.graphs()) {
    if (is_idempotent(g)) out.push_back(g);
  }
  return out;
}

struct LoopClass {
  IdSet ids;
  std::vector<SizeChangeGraph> members;
  std::set<Predicate> predicates;
};

/// Partitions idempotent graphs by identifier set, ordered by the least
/// identifier of each set (then by the whole set).
inline std::vector<LoopClass> loop_classes(const std::vector<SizeChangeGraph>& idem) {
  auto order = [](const IdSet& a, const IdSet& b) {
    if (a.empty() || b.empty()) return a.empty() && !b.empty();
    if (*a.begin() != *b.begin()) return *a.begin() < *b.begin();
    return a < b;
  };
  std::map<IdSet, LoopClass, decltype(order)> by_ids(order);
  for (const auto& g : idem) {
    auto& cls = by_ids[g.ids()];
    cls.ids = g.ids();
    cls.members.push_back(g);
    cls.predicates.insert(g.source());
  }
  std::vector<LoopClass> out;
  for (auto& [ids, cls] : by_ids) out.push_back(std::move(cls));
  return out;
}

}  // namespace scbta
