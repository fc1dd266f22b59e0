#pragma once

// Offline partial evaluation driven by unfold/memo annotations, plus a
// plain SLD interpreter used to check answer preservation.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scbta/bta.hpp"
#include "scbta/norm.hpp"
#include "scbta/print.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

/// Local unfolding exceeded its step budget: the annotations do not
/// guarantee local termination.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const Term& root, std::size_t budget, const char* unit = "steps")
      : std::runtime_error("unfold budget of " + std::to_string(budget) + " " + unit +
                           " exhausted while unfolding " + to_string(canonical_variant(root, "X"))) {}
};

constexpr std::size_t kDefaultUnfoldBudget = 100000;
/// Cap on the term nodes built by one local tree (goals and resultants,
/// counted as trees). Growing branches make each step costlier, so the step
/// budget alone does not bound time or memory.
constexpr std::size_t kDefaultNodeBudget = 5'000'000;

/// Abstraction for the global level: dynamic arguments become fresh
/// variables, static ones are kept or (with use_mgg) replaced by their mgg.
inline Term generalize(const Term& atom, const Division& d, const NormSpec& n, bool use_mgg,
                       VarSupply& fresh) {
  auto it = d.find(atom.functor());
  if (it == d.end()) throw AnalysisError("unknown predicate " + atom.functor().str());
  std::vector<Term> args;
  args.reserve(atom.arity());
  for (std::size_t i = 0; i < atom.arity(); ++i) {
    if (it->second[i] == Binding::Dynamic) {
      args.push_back(fresh.fresh());
    } else {
      args.push_back(use_mgg ? mgg(atom.arg(i), n, fresh) : atom.arg(i));
    }
  }
  return Term::structure(atom.name(), std::move(args));
}

struct Resultant {
  Term head;
  std::vector<Term> leaves;
  Substitution bindings;
};

/// Builds the local SLD tree of `root`, always selecting the leftmost
/// unfold-marked atom. Leaves are goals with no unfold-marked atom left.
/// With `unfold_root` the root is resolved once whatever its mark, which is
/// how a memoized call gets its specialized definition.
inline std::vector<Resultant> unfold_tree(const Term& root, const Program& p,
                                          const Annotation& ann,
                                          std::size_t budget = kDefaultUnfoldBudget,
                                          bool unfold_root = false,
                                          VarSupply* supply = nullptr,
                                          std::size_t node_budget = kDefaultNodeBudget) {
  struct Node {
    std::vector<Term> goal;
    Term head;
    bool at_root;
  };
  VarSupply local("#u");
  VarSupply& fresh = supply ? *supply : local;
  std::vector<Resultant> out;
  std::vector<Node> stack{{{root}, root, unfold_root}};
  std::size_t steps = 0;
  std::size_t nodes = 0;
  auto charge = [&](const Term& t) {
    nodes += t.node_count();
    if (nodes > node_budget) throw BudgetExhausted(root, node_budget, "term nodes");
  };
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    std::optional<std::size_t> sel;
    if (node.at_root) {
      sel = 0;
    } else {
      for (std::size_t i = 0; i < node.goal.size(); ++i) {
        if (ann.mark(node.goal[i].functor()) == Mark::Unfold) {
          sel = i;
          break;
        }
      }
    }
    if (!sel) {
      auto b = match(root, node.head);
      out.push_back({node.head, std::move(node.goal), b ? *b : Substitution()});
      continue;
    }
    const Term& atom = node.goal[*sel];
    std::vector<Node> children;
    for (const Clause* c : p.clauses_for(atom.functor())) {
      Clause rc = rename_fresh(*c, fresh);
      auto mgu = unify(atom, rc.head);
      if (!mgu) continue;
      if (++steps > budget) throw BudgetExhausted(root, budget);
      std::vector<Term> goal;
      goal.reserve(node.goal.size() - 1 + rc.body.size());
      for (std::size_t i = 0; i < *sel; ++i) goal.push_back(mgu->apply(node.goal[i]));
      for (const auto& b : rc.body) goal.push_back(mgu->apply(b));
      for (std::size_t i = *sel + 1; i < node.goal.size(); ++i) {
        goal.push_back(mgu->apply(node.goal[i]));
      }
      Term head = mgu->apply(node.head);
      charge(head);
      for (const auto& g : goal) charge(g);
      children.push_back({std::move(goal), std::move(head), false});
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      stack.push_back(std::move(*it));
    }
  }
  return out;
}

struct GlobalEntry {
  Term atom;  // generalized atom
  std::string name;
};

struct Specialization {
  Program program;
  std::vector<GlobalEntry> global;
  /// The entry atom expressed as a call to the residual program.
  Term entry_call;
  bool used_mgg = false;
};

struct SpecializeOptions {
  std::size_t budget = kDefaultUnfoldBudget;
  std::size_t node_budget = kDefaultNodeBudget;
  bool force_mgg = false;
  /// Hard cap on the global set; 0 means unlimited.
  std::size_t max_global = 0;
};

class GlobalLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Term renamed_call(const GlobalEntry& e, const Term& instance) {
  auto mu = match(e.atom, instance);
  if (!mu) {
    throw std::logic_error(to_string(instance) + " is not an instance of " +
                           to_string(e.atom));
  }
  std::vector<Term> args;
  for (const auto& v : vars_of(e.atom)) args.push_back(mu->apply(Term::var(v)));
  return Term::structure(e.name, std::move(args));
}

inline Term renamed_head(const GlobalEntry& e) {
  std::vector<Term> args;
  for (const auto& v : vars_of(e.atom)) args.push_back(Term::var(v));
  return Term::structure(e.name, std::move(args));
}

}  // namespace detail

/// Offline specialization of `entry`. The global set holds generalized
/// atoms modulo variance; each gets a residual predicate pred_0, pred_1, ...
/// in insertion order.
inline Specialization specialize(const Program& p, const Annotation& ann, const Division& d,
                                 const NormSpec& n, const Term& entry,
                                 const SpecializeOptions& opts = {}) {
  auto dit = d.find(entry.functor());
  if (dit == d.end()) throw AnalysisError("unknown entry predicate " + entry.functor().str());
  for (std::size_t i = 0; i < entry.arity(); ++i) {
    if (dit->second[i] == Binding::Static && !is_ground(entry.arg(i))) {
      throw AnalysisError("static argument " + std::to_string(i + 1) + " of entry " +
                          to_string(entry) + " is not ground");
    }
  }
  Specialization out;
  out.used_mgg = ann.requires_mgg || opts.force_mgg;
  VarSupply fresh("#g");
  std::map<Term, std::size_t> by_variant;  // canonical variant -> index
  auto lookup = [&](const Term& leaf) -> const GlobalEntry& {
    Term g = generalize(leaf, d, n, out.used_mgg, fresh);
    Term key = canonical_variant(g);
    auto [it, inserted] = by_variant.emplace(key, out.global.size());
    if (inserted) {
      if (opts.max_global && out.global.size() >= opts.max_global) {
        throw GlobalLimitExceeded("global set exceeded " + std::to_string(opts.max_global) +
                                  " atoms");
      }
      out.global.push_back({g, "pred_" + std::to_string(out.global.size())});
    }
    return out.global[it->second];
  };

  out.entry_call = detail::renamed_call(lookup(entry), entry);
  std::vector<Clause> residual;
  for (std::size_t i = 0; i < out.global.size(); ++i) {
    GlobalEntry current = out.global[i];
    Term head = detail::renamed_head(current);
    for (const auto& r : unfold_tree(current.atom, p, ann, opts.budget, true, &fresh, opts.node_budget)) {
      Clause c{r.bindings.apply(head), {}};
      for (const auto& leaf : r.leaves) {
        c.body.push_back(detail::renamed_call(lookup(leaf), leaf));
      }
      residual.push_back(std::move(c));
    }
  }
  out.program = Program(std::move(residual));
  return out;
}

/// Residual program text, preceded by the renaming table.
inline std::string print_specialization(const Specialization& s, const Term& entry) {
  std::ostringstream os;
  os << "% entry " << to_string(entry) << " = " << to_string(s.entry_call) << '\n';
  for (const auto& e : s.global) {
    os << "% " << e.name << " = " << to_string(canonical_variant(e.atom, "F")) << '\n';
  }
  for (const auto& c : s.program.clauses()) {
    Clause cc = c;
    std::vector<Term> all{c.head};
    all.insert(all.end(), c.body.begin(), c.body.end());
    Term canon = canonical_variant(Term::structure("$c", all), "X");
    cc.head = canon.arg(0);
    cc.body.assign(canon.args().begin() + 1, canon.args().end());
    os << to_string(cc) << '\n';
  }
  return os.str();
}

struct QueryResult {
  std::vector<Substitution> answers;
  /// Some branch hit the depth bound, the step cap or the term size cap.
  bool cut_off = false;
};

/// All computed answers of `goal` under leftmost selection and clause order,
/// restricted to the goal's variables. Branches deeper than `depth`
/// resolution steps are cut and reported through `cut_off`, as are goals
/// holding an atom of more than `max_term_nodes` nodes (0: no limit).
inline QueryResult run_query(const Program& p, const std::vector<Term>& goal, std::size_t depth,
                             std::size_t max_steps = 10'000'000,
                             std::size_t max_term_nodes = 0) {
  struct Node {
    std::vector<Term> goal;
    std::vector<Term> answer;
    std::size_t depth;
  };
  std::vector<std::string> qvars;
  {
    std::set<std::string> seen;
    for (const auto& g : goal) collect_vars(g, qvars, seen);
  }
  std::vector<Term> start;
  for (const auto& v : qvars) start.push_back(Term::var(v));
  QueryResult out;
  VarSupply fresh("#q");
  std::vector<Node> stack{{goal, start, 0}};
  std::size_t steps = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.goal.empty()) {
      Substitution::Map m;
      for (std::size_t i = 0; i < qvars.size(); ++i) m.emplace(qvars[i], node.answer[i]);
      out.answers.emplace_back(std::move(m));
      continue;
    }
    bool too_big = max_term_nodes &&
                   std::any_of(node.goal.begin(), node.goal.end(),
                               [&](const Term& t) { return t.node_count() > max_term_nodes; });
    if (node.depth >= depth || steps >= max_steps || too_big) {
      out.cut_off = true;
      continue;
    }
    const Term& atom = node.goal.front();
    std::vector<Node> children;
    for (const Clause* c : p.clauses_for(atom.functor())) {
      Clause rc = rename_fresh(*c, fresh);
      auto mgu = unify(atom, rc.head);
      if (!mgu) continue;
      ++steps;
      std::vector<Term> g = mgu->apply(rc.body);
      for (std::size_t i = 1; i < node.goal.size(); ++i) g.push_back(mgu->apply(node.goal[i]));
      children.push_back({std::move(g), mgu->apply(node.answer), node.depth + 1});
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      stack.push_back(std::move(*it));
    }
  }
  return out;
}

}  // namespace scbta
