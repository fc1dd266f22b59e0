#pragma once

// Binding-time analysis: divisions, the termination and quasi-termination
// checks over idempotent size-change graphs, unfold/memo annotation and
// memo minimization over loop classes.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scbta/closure.hpp"
#include "scbta/lexer.hpp"
#include "scbta/norm.hpp"
#include "scbta/parser.hpp"
#include "scbta/scg.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

enum class Binding { Static, Dynamic };
enum class Mark { Unfold, Memo };

inline char to_char(Binding b) { return b == Binding::Static ? 's' : 'd'; }
inline const char* to_string(Mark m) { return m == Mark::Unfold ? "unfold" : "memo"; }

using Division = std::map<Predicate, std::vector<Binding>>;

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Annotation {
  std::map<Predicate, Mark> marks;
  Division division;
  bool requires_mgg = false;
  std::vector<std::string> diagnostics;

  Mark mark(const Predicate& p) const {
    auto it = marks.find(p);
    return it == marks.end() ? Mark::Unfold : it->second;
  }
};

inline std::string division_str(const std::vector<Binding>& bs) {
  std::string s;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i) s += ',';
    s += to_char(bs[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Division files

namespace detail {

inline void read_division_entry(TokenStream& ts, Division& out) {
  const Token& at = ts.peek();
  Predicate p = parse_predicate_ref(ts);
  ts.expect(":");
  std::vector<Binding> bs;
  if (p.arity > 0) {
    do {
      const Token& t = ts.expect(TokenKind::Ident, "'s' or 'd'");
      if (t.text == "s") {
        bs.push_back(Binding::Static);
      } else if (t.text == "d") {
        bs.push_back(Binding::Dynamic);
      } else {
        throw SyntaxError("expected 's' or 'd', found '" + t.text + "'", t.line, t.column);
      }
    } while (ts.accept(","));
  }
  if (bs.size() != p.arity) {
    throw SyntaxError(p.str() + " needs " + std::to_string(p.arity) +
                          " binding times, found " + std::to_string(bs.size()),
                      at.line, at.column);
  }
  if (!out.emplace(p, std::move(bs)).second) {
    throw SyntaxError("duplicate division for " + p.str(), at.line, at.column);
  }
}

}  // namespace detail

/// Reads lines `pred/arity: s,d,... .`
inline Division parse_division(std::string_view text) {
  TokenStream ts(text);
  Division d;
  while (!ts.at_end()) {
    detail::read_division_entry(ts, d);
    ts.expect(".");
  }
  return d;
}

/// Reads a single `pred/arity: s,d,...` entry (trailing '.' optional).
inline std::pair<Predicate, std::vector<Binding>> parse_division_entry(std::string_view text) {
  TokenStream ts(text);
  Division d;
  detail::read_division_entry(ts, d);
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after division entry");
  return *d.begin();
}

// ---------------------------------------------------------------------------
// Division propagation

namespace detail {

inline std::set<std::string> static_head_vars(const Clause& c, const Division& d) {
  std::set<std::string> out;
  const auto& bs = d.at(c.head.functor());
  for (std::size_t i = 0; i < c.head.arity(); ++i) {
    if (bs[i] == Binding::Static) {
      for (const auto& v : vars_of(c.head.arg(i))) out.insert(v);
    }
  }
  return out;
}

inline bool all_in(const Term& t, const std::set<std::string>& vars) {
  for (const auto& v : vars_of(t)) {
    if (!vars.contains(v)) return false;
  }
  return true;
}

}  // namespace detail

/// Monovariant greatest-static fixpoint from an entry division: a body
/// argument becomes dynamic when it has a variable that no static head
/// argument of its clause provides.
inline Division propagate_division(const Program& p, const Predicate& entry,
                                   const std::vector<Binding>& entry_div) {
  if (!p.predicates().contains(entry)) {
    throw AnalysisError("unknown entry predicate " + entry.str());
  }
  if (entry_div.size() != entry.arity) {
    throw AnalysisError("entry division for " + entry.str() + " has " +
                        std::to_string(entry_div.size()) + " entries");
  }
  Division d;
  for (const auto& pred : p.predicates()) {
    d.emplace(pred, std::vector<Binding>(pred.arity, Binding::Static));
  }
  d[entry] = entry_div;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : p.clauses()) {
      auto ground = detail::static_head_vars(c, d);
      for (const auto& b : c.body) {
        auto& bs = d[b.functor()];
        for (std::size_t k = 0; k < b.arity(); ++k) {
          if (bs[k] == Binding::Static && !detail::all_in(b.arg(k), ground)) {
            bs[k] = Binding::Dynamic;
            changed = true;
          }
        }
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Termination and quasi-termination

namespace detail {

inline const std::vector<Binding>& division_of(const Division& d, const Predicate& p) {
  auto it = d.find(p);
  if (it == d.end()) throw AnalysisError("predicate " + p.str() + " missing from division");
  if (it->second.size() != p.arity) {
    throw AnalysisError("division for " + p.str() + " has wrong length");
  }
  return it->second;
}

}  // namespace detail

/// A self-loop graph witnesses termination when it has a strict edge i -> i
/// on a static argument.
inline bool graph_terminates(const SizeChangeGraph& g, const Division& d) {
  const auto& bs = detail::division_of(d, g.source());
  return std::any_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return e.from == e.to && e.label == Label::Strict && bs[e.from - 1] == Binding::Static;
  });
}

/// Predicates of `d` all of whose idempotent self-loops witness termination.
inline std::set<Predicate> terminating_preds(const std::vector<SizeChangeGraph>& idem,
                                             const Division& d) {
  std::set<Predicate> out;
  for (const auto& [p, bs] : d) out.insert(p);
  for (const auto& g : idem) {
    if (!g.is_self_loop()) continue;
    if (!graph_terminates(g, d)) out.erase(g.source());
  }
  return out;
}

/// For non-terminating predicates, a static argument that is not bounded by
/// some static argument of the previous call (no incoming edge from a static
/// position in some idempotent self-loop) becomes dynamic.
inline Division quasi_check(const std::vector<SizeChangeGraph>& idem, const Division& d,
                            const std::set<Predicate>& terminating,
                            std::vector<std::string>* diagnostics = nullptr) {
  Division out = d;
  for (const auto& g : idem) {
    if (!g.is_self_loop() || terminating.contains(g.source())) continue;
    const auto& before = detail::division_of(d, g.source());
    auto& after = out.at(g.source());
    for (std::size_t i = 1; i <= g.source().arity; ++i) {
      if (before[i - 1] != Binding::Static || after[i - 1] != Binding::Static) continue;
      bool bounded = std::any_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
        return e.to == i && before[e.from - 1] == Binding::Static;
      });
      if (!bounded) {
        after[i - 1] = Binding::Dynamic;
        if (diagnostics) {
          diagnostics->push_back("argument " + std::to_string(i) + " of " +
                                 g.source().str() +
                                 " reclassified dynamic: no incoming edge from a static "
                                 "argument in idempotent graph " + g.str());
        }
      }
    }
  }
  return out;
}

/// Pushes reclassifications through the clauses: a static body argument
/// becomes dynamic when it uses a variable that the reference division
/// provided through a static head argument but `current` no longer does.
inline Division repropagate(const Program& p, const Division& reference, Division current,
                            std::vector<std::string>* diagnostics = nullptr) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : p.clauses()) {
      auto was = detail::static_head_vars(c, reference);
      auto now = detail::static_head_vars(c, current);
      std::set<std::string> lost;
      std::set_difference(was.begin(), was.end(), now.begin(), now.end(),
                          std::inserter(lost, lost.begin()));
      if (lost.empty()) continue;
      for (const auto& b : c.body) {
        auto& bs = current.at(b.functor());
        for (std::size_t k = 0; k < b.arity(); ++k) {
          if (bs[k] != Binding::Static) continue;
          auto vs = vars_of(b.arg(k));
          if (std::none_of(vs.begin(), vs.end(),
                           [&](const std::string& v) { return lost.contains(v); })) {
            continue;
          }
          bs[k] = Binding::Dynamic;
          changed = true;
          if (diagnostics) {
            diagnostics->push_back("argument " + std::to_string(k + 1) + " of " +
                                   b.functor().str() +
                                   " reclassified dynamic: depends on a reclassified "
                                   "argument of " + c.head.functor().str());
          }
        }
      }
    }
  }
  return current;
}

namespace detail {

inline void require_total(const Program& p, const Division& d) {
  for (const auto& pred : p.predicates()) division_of(d, pred);
}

struct PipelineResult {
  Division division;
  std::set<Predicate> terminating;
  std::vector<std::string> diagnostics;
};

/// Termination, quasi-termination and repropagation iterated to a joint
/// fixpoint. Arguments only move static -> dynamic.
inline PipelineResult run_pipeline(const Program& p, const std::vector<SizeChangeGraph>& idem,
                                   const Division& d0) {
  require_total(p, d0);
  PipelineResult r{d0, {}, {}};
  while (true) {
    r.terminating = terminating_preds(idem, r.division);
    Division next = quasi_check(idem, r.division, r.terminating, &r.diagnostics);
    next = repropagate(p, d0, std::move(next), &r.diagnostics);
    if (next == r.division) break;
    r.division = std::move(next);
  }
  return r;
}

inline void describe_loops(const std::vector<SizeChangeGraph>& idem, const Division& d,
                           std::vector<std::string>& diagnostics) {
  for (const auto& g : idem) {
    if (g.is_self_loop() && !graph_terminates(g, d)) {
      diagnostics.push_back("loop " + g.str() + " has no strict self-edge on a static argument");
    }
  }
}

}  // namespace detail

/// Baseline annotation: terminating predicates are unfolded, all others
/// memoized.
inline Annotation annotate(const Program& p, const std::vector<SizeChangeGraph>& idem,
                           const Division& d, const NormSpec& n) {
  auto r = detail::run_pipeline(p, idem, d);
  Annotation ann;
  ann.division = r.division;
  ann.diagnostics = std::move(r.diagnostics);
  detail::describe_loops(idem, ann.division, ann.diagnostics);
  for (const auto& pred : p.predicates()) {
    ann.marks.emplace(pred, r.terminating.contains(pred) ? Mark::Unfold : Mark::Memo);
  }
  ann.requires_mgg = boundedness(n, p.signature()) == Boundedness::PossiblyUnbounded;
  return ann;
}

/// Memo minimization: one memo per unsafe loop class, chosen greedily by the
/// number of still-uncovered unsafe classes a predicate breaks, ties broken
/// by predicate order. A class is unsafe when one of its members fails the
/// termination check. Candidates are the non-terminating predicates the loop
/// passes through: endpoints of the base graphs named by its identifiers.
inline Annotation annotate_min_memo(const Program& p, const std::vector<LoopClass>& classes,
                                    const Division& d, const NormSpec& n) {
  std::vector<SizeChangeGraph> idem;
  for (const auto& cls : classes) {
    idem.insert(idem.end(), cls.members.begin(), cls.members.end());
  }
  auto r = detail::run_pipeline(p, idem, d);

  // Base graph k (1-based, clause then body order) runs head -> k-th call.
  std::vector<std::pair<Predicate, Predicate>> endpoints;
  for (const auto& c : p.clauses()) {
    for (const auto& b : c.body) endpoints.emplace_back(c.head.functor(), b.functor());
  }

  std::vector<std::set<Predicate>> unsafe;
  for (const auto& cls : classes) {
    bool failing = std::any_of(cls.members.begin(), cls.members.end(),
                               [&](const auto& g) { return !graph_terminates(g, r.division); });
    if (!failing) continue;
    std::set<Predicate> candidates;
    for (const auto& g : cls.members) {
      if (!graph_terminates(g, r.division)) candidates.insert(g.source());
    }
    // Terminating predicates stay unfolded, as in the baseline.
    for (auto id : cls.ids) {
      if (id == 0 || id > endpoints.size()) continue;
      for (const auto& pred : {endpoints[id - 1].first, endpoints[id - 1].second}) {
        if (!r.terminating.contains(pred)) candidates.insert(pred);
      }
    }
    unsafe.push_back(std::move(candidates));
  }

  std::set<Predicate> chosen;
  std::vector<bool> covered(unsafe.size(), false);
  std::size_t remaining = unsafe.size();
  while (remaining > 0) {
    std::map<Predicate, std::size_t> score;
    for (std::size_t i = 0; i < unsafe.size(); ++i) {
      if (covered[i]) continue;
      for (const auto& pred : unsafe[i]) ++score[pred];
    }
    const Predicate* best = nullptr;
    std::size_t best_score = 0;
    for (const auto& [pred, s] : score) {
      if (s > best_score) {
        best = &pred;
        best_score = s;
      }
    }
    Predicate pick = *best;
    chosen.insert(pick);
    for (std::size_t i = 0; i < unsafe.size(); ++i) {
      if (!covered[i] && unsafe[i].contains(pick)) {
        covered[i] = true;
        --remaining;
      }
    }
  }

  Annotation ann;
  ann.division = r.division;
  ann.diagnostics = std::move(r.diagnostics);
  detail::describe_loops(idem, ann.division, ann.diagnostics);
  for (const auto& pred : p.predicates()) {
    ann.marks.emplace(pred, chosen.contains(pred) ? Mark::Memo : Mark::Unfold);
  }
  for (const auto& pred : chosen) {
    ann.diagnostics.push_back("memo " + pred.str() + " breaks " +
                              std::to_string(std::count_if(
                                  unsafe.begin(), unsafe.end(),
                                  [&](const auto& s) { return s.contains(pred); })) +
                              " unsafe loop class(es)");
  }
  ann.requires_mgg = boundedness(n, p.signature()) == Boundedness::PossiblyUnbounded;
  return ann;
}

}  // namespace scbta
