#pragma once

#include <set>
#include <string>
#include <vector>

#include "scbta/bta.hpp"
#include "scbta/closure.hpp"
#include "scbta/lincons.hpp"
#include "scbta/norm.hpp"
#include "scbta/scg.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

struct AnalysisOptions {
  bool min_memo = false;
  /// Right-propagation is on when any predicate is declared unfoldable.
  std::set<Predicate> unfoldable;
  RelationTable relations;
  bool trust_unfoldable = false;
  EntailmentLimits limits;
};

struct AnalysisResult {
  std::vector<SizeChangeGraph> base;
  GraphSet closure;
  std::vector<SizeChangeGraph> idempotent;
  std::vector<LoopClass> classes;
  Annotation annotation;
};

inline std::vector<SizeChangeGraph> base_graphs(const Program& p, const NormSpec& n,
                                                const AnalysisOptions& opts,
                                                std::vector<std::string>* warnings = nullptr) {
  if (opts.unfoldable.empty() && opts.relations.empty()) return build_graphs(p, n);
  auto graphs = build_graphs_rp(p, n, opts.unfoldable, opts.relations, warnings, opts.limits);
  if (opts.trust_unfoldable) graphs = without_predicates(std::move(graphs), opts.unfoldable);
  return graphs;
}

/// Graph construction, closure and annotation in one pass.
inline AnalysisResult analyze(const Program& p, const NormSpec& n, const Division& d,
                              const AnalysisOptions& opts = {}) {
  std::vector<std::string> warnings;
  AnalysisResult r;
  r.base = base_graphs(p, n, opts, &warnings);
  r.closure = close(r.base);
  r.idempotent = idempotents(r.closure);
  r.classes = loop_classes(r.idempotent);
  r.annotation = opts.min_memo ? annotate_min_memo(p, r.classes, d, n)
                               : annotate(p, r.idempotent, d, n);
  std::vector<std::string> diags;
  for (auto& w : warnings) diags.push_back("warning: " + w);
  diags.insert(diags.end(), r.annotation.diagnostics.begin(), r.annotation.diagnostics.end());
  r.annotation.diagnostics = std::move(diags);
  return r;
}

}  // namespace scbta
