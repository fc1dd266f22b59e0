#pragma once

// Abstract syntax for pure logic programs: terms, clauses, programs,
// substitutions, unification and variant checking.

#include <compare>
#include <cstdint>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scbta {

/// A function or predicate symbol together with its arity.
struct Functor {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const Functor&) const = default;
  bool operator==(const Functor&) const = default;

  std::string str() const { return name + "/" + std::to_string(arity); }
};

using Predicate = Functor;

class Term {
 public:
  Term() : Term(structure("[]")) {}

  static Term var(std::string name) {
    return Term(std::make_shared<const Node>(Node{true, std::move(name), {}, 1, false}));
  }
  static Term structure(std::string functor, std::vector<Term> args = {}) {
    std::size_t n = 1;
    bool ground = true;
    for (const auto& a : args) {
      n = saturating_add(n, a.node_->nodes);
      ground = ground && a.node_->ground;
    }
    return Term(std::make_shared<const Node>(
        Node{false, std::move(functor), std::move(args), n, ground}));
  }
  static Term nil() { return structure("[]"); }
  static Term cons(Term head, Term tail) {
    return structure(".", {std::move(head), std::move(tail)});
  }
  template <typename It>
  static Term list(It first, It last, Term tail = nil()) {
    std::vector<Term> items(first, last);
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      tail = cons(*it, std::move(tail));
    }
    return tail;
  }

  bool is_var() const { return node_->is_var; }
  bool is_structure() const { return !node_->is_var; }
  /// Variable name, or functor name for structures.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }
  Functor functor() const { return Functor{node_->name, node_->args.size()}; }
  /// Number of nodes of the term as a tree (saturates at SIZE_MAX).
  std::size_t node_count() const { return node_->nodes; }
  bool ground() const { return node_->ground; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_var() != b.is_var() || a.name() != b.name() ||
        a.arity() != b.arity()) {
      return false;
    }
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (!(a.arg(i) == b.arg(i))) return false;
    }
    return true;
  }

  /// Total structural order: variables before structures, then by name,
  /// arity and arguments.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_var() != b.is_var()) {
      return a.is_var() ? std::strong_ordering::less
                        : std::strong_ordering::greater;
    }
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (auto c = a.arity() <=> b.arity(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    bool is_var;
    std::string name;
    std::vector<Term> args;
    std::size_t nodes;
    bool ground;
  };
  static std::size_t saturating_add(std::size_t a, std::size_t b) {
    return a > SIZE_MAX - b ? SIZE_MAX : a + b;
  }
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Clause {
  Term head;
  std::vector<Term> body;

  bool operator==(const Clause&) const = default;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// ---------------------------------------------------------------------------
// Variable utilities

inline void collect_vars(const Term& t, std::vector<std::string>& out,
                         std::set<std::string>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  if (t.ground()) return;
  for (const auto& a : t.args()) collect_vars(a, out, seen);
}

/// Variables of `t` in order of first occurrence.
inline std::vector<std::string> vars_of(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(t, out, seen);
  return out;
}

inline std::vector<std::string> vars_of(const Clause& c) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(c.head, out, seen);
  for (const auto& b : c.body) collect_vars(b, out, seen);
  return out;
}

inline bool occurs_in(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name() == var;
  if (t.ground()) return false;
  for (const auto& a : t.args()) {
    if (occurs_in(var, a)) return true;
  }
  return false;
}

inline bool is_ground(const Term& t) { return t.ground(); }

/// Source of fresh variable names. Generated names contain '#', which the
/// parser never produces, so they cannot clash with program variables.
class VarSupply {
 public:
  explicit VarSupply(std::string prefix = "#") : prefix_(std::move(prefix)) {}

  std::string fresh_name() { return prefix_ + std::to_string(next_++); }
  Term fresh() { return Term::var(fresh_name()); }

 private:
  std::string prefix_;
  std::size_t next_ = 0;
};

// ---------------------------------------------------------------------------
// Substitutions

/// Finite map from variable names to terms. `apply` replaces every bound
/// variable simultaneously. Substitutions returned by `unify` are idempotent.
class Substitution {
 public:
  using Map = std::map<std::string, Term>;

  Substitution() = default;
  explicit Substitution(Map bindings) {
    for (auto& [v, t] : bindings) {
      if (!(t.is_var() && t.name() == v)) map_.emplace(v, std::move(t));
    }
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& bindings() const { return map_; }

  const Term* lookup(const std::string& v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }

  Term apply(const Term& t) const {
    if (map_.empty()) return t;
    if (t.is_var()) {
      auto it = map_.find(t.name());
      return it == map_.end() ? t : it->second;
    }
    if (t.ground()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(apply(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Term::structure(t.name(), std::move(args)) : t;
  }

  Clause apply(const Clause& c) const {
    Clause out{apply(c.head), {}};
    out.body.reserve(c.body.size());
    for (const auto& b : c.body) out.body.push_back(apply(b));
    return out;
  }

  std::vector<Term> apply(const std::vector<Term>& ts) const {
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(apply(t));
    return out;
  }

  /// Extends an idempotent substitution with var -> t, where t is already
  /// normalized under this substitution and does not contain var.
  void bind(const std::string& var, const Term& t) {
    Substitution single(Map{{var, t}});
    for (auto& [v, u] : map_) u = single.apply(u);
    if (!(t.is_var() && t.name() == var)) map_.insert_or_assign(var, t);
  }

  /// Composition: applying the result equals applying *this then `next`.
  Substitution then(const Substitution& next) const {
    Map out;
    for (const auto& [v, t] : map_) out.emplace(v, next.apply(t));
    for (const auto& [v, t] : next.map_) out.emplace(v, t);
    return Substitution(std::move(out));
  }

  Substitution restricted_to(const std::vector<std::string>& vars) const {
    Map out;
    for (const auto& v : vars) {
      if (auto it = map_.find(v); it != map_.end()) out.emplace(v, it->second);
    }
    return Substitution(std::move(out));
  }

  bool operator==(const Substitution&) const = default;

 private:
  Map map_;
};

/// Most general unifier with occurs check; nullopt when none exists.
inline std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  std::vector<std::pair<Term, Term>> pending{{a, b}};
  while (!pending.empty()) {
    auto [x, y] = std::move(pending.back());
    pending.pop_back();
    x = s.apply(x);
    y = s.apply(y);
    if (x.is_var() && y.is_var() && x.name() == y.name()) continue;
    if (x.is_var() || y.is_var()) {
      if (!x.is_var()) std::swap(x, y);
      if (occurs_in(x.name(), y)) return std::nullopt;
      s.bind(x.name(), y);
      continue;
    }
    if (x.name() != y.name() || x.arity() != y.arity()) return std::nullopt;
    for (std::size_t i = 0; i < x.arity(); ++i) {
      pending.emplace_back(x.arg(i), y.arg(i));
    }
  }
  return s;
}

/// Unifies two equal-length atom lists pairwise.
inline std::optional<Substitution> unify_all(const std::vector<Term>& xs,
                                             const std::vector<Term>& ys) {
  if (xs.size() != ys.size()) return std::nullopt;
  return unify(Term::structure("$tuple", xs), Term::structure("$tuple", ys));
}

/// One-way matching: a substitution θ over the variables of `pattern` with
/// pattern·θ == instance, or nullopt.
inline std::optional<Substitution> match(const Term& pattern,
                                         const Term& instance) {
  Substitution::Map m;
  std::vector<std::pair<Term, Term>> pending{{pattern, instance}};
  while (!pending.empty()) {
    auto [p, i] = std::move(pending.back());
    pending.pop_back();
    if (p.is_var()) {
      auto [it, inserted] = m.emplace(p.name(), i);
      if (!inserted && !(it->second == i)) return std::nullopt;
      continue;
    }
    if (i.is_var() || p.name() != i.name() || p.arity() != i.arity()) {
      return std::nullopt;
    }
    for (std::size_t k = 0; k < p.arity(); ++k) {
      pending.emplace_back(p.arg(k), i.arg(k));
    }
  }
  return Substitution(std::move(m));
}

inline bool is_instance_of(const Term& instance, const Term& general) {
  return match(general, instance).has_value();
}

namespace detail {
inline bool variant_walk(const Term& a, const Term& b,
                         std::map<std::string, std::string>& fwd,
                         std::map<std::string, std::string>& bwd) {
  if (a.is_var() || b.is_var()) {
    if (!(a.is_var() && b.is_var())) return false;
    auto [f, fi] = fwd.emplace(a.name(), b.name());
    auto [r, ri] = bwd.emplace(b.name(), a.name());
    return f->second == b.name() && r->second == a.name();
  }
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!variant_walk(a.arg(i), b.arg(i), fwd, bwd)) return false;
  }
  return true;
}
}  // namespace detail

/// True iff some variable renaming maps a1 onto a2 (and back).
inline bool is_variant(const Term& a1, const Term& a2) {
  std::map<std::string, std::string> fwd, bwd;
  return detail::variant_walk(a1, a2, fwd, bwd);
}

inline bool is_variant(const Clause& c1, const Clause& c2) {
  if (c1.body.size() != c2.body.size()) return false;
  std::vector<Term> a{c1.head}, b{c2.head};
  a.insert(a.end(), c1.body.begin(), c1.body.end());
  b.insert(b.end(), c2.body.begin(), c2.body.end());
  return is_variant(Term::structure("$clause", a),
                    Term::structure("$clause", b));
}

/// Renames every variable of `t` to V1, V2, ... by first occurrence. Two
/// terms are variants iff their canonical forms are equal.
inline Term canonical_variant(const Term& t, const std::string& prefix = "V") {
  Substitution::Map m;
  std::size_t n = 0;
  for (const auto& v : vars_of(t)) {
    m.emplace(v, Term::var(prefix + std::to_string(++n)));
  }
  return Substitution(std::move(m)).apply(t);
}

/// Variant of `c` whose variables are disjoint from `used`. Clashing
/// variables get the smallest numeric suffix that is free.
inline Clause rename_apart(const Clause& c, const std::set<std::string>& used) {
  auto own = vars_of(c);
  std::set<std::string> taken(used.begin(), used.end());
  taken.insert(own.begin(), own.end());
  Substitution::Map m;
  for (const auto& v : own) {
    if (!used.contains(v)) continue;
    for (std::size_t k = 1;; ++k) {
      std::string candidate = v + std::to_string(k);
      if (taken.insert(candidate).second) {
        m.emplace(v, Term::var(std::move(candidate)));
        break;
      }
    }
  }
  return Substitution(std::move(m)).apply(c);
}

/// Renames every variable of `c` to a fresh name from `supply`.
inline Clause rename_fresh(const Clause& c, VarSupply& supply) {
  Substitution::Map m;
  for (const auto& v : vars_of(c)) m.emplace(v, supply.fresh());
  return Substitution(std::move(m)).apply(c);
}

// ---------------------------------------------------------------------------
// Programs

class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      const auto& c = clauses_[i];
      if (!c.head.is_structure()) {
        throw std::invalid_argument("clause head must be an atom");
      }
      by_pred_[c.head.functor()].push_back(i);
      predicates_.insert(c.head.functor());
      for (const auto& b : c.body) {
        if (!b.is_structure()) {
          throw std::invalid_argument("body atom must not be a variable");
        }
        predicates_.insert(b.functor());
      }
    }
  }

  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::set<Predicate>& predicates() const { return predicates_; }

  bool defines(const Predicate& p) const { return by_pred_.contains(p); }

  /// Clauses whose head predicate is p, in textual order.
  std::vector<const Clause*> clauses_for(const Predicate& p) const {
    std::vector<const Clause*> out;
    if (auto it = by_pred_.find(p); it != by_pred_.end()) {
      for (auto i : it->second) out.push_back(&clauses_[i]);
    }
    return out;
  }

  /// Function symbols occurring inside atom arguments.
  std::set<Functor> signature() const {
    std::set<Functor> out;
    auto walk = [&out](const Term& t, auto&& self) -> void {
      if (t.is_var()) return;
      out.insert(t.functor());
      for (const auto& a : t.args()) self(a, self);
    };
    for (const auto& c : clauses_) {
      for (const auto& a : c.head.args()) walk(a, walk);
      for (const auto& b : c.body) {
        for (const auto& a : b.args()) walk(a, walk);
      }
    }
    return out;
  }

 private:
  std::vector<Clause> clauses_;
  std::map<Predicate, std::vector<std::size_t>> by_pred_;
  std::set<Predicate> predicates_;
};

}  // namespace scbta
