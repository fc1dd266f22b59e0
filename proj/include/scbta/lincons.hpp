#pragma once

// Conjunctions of linear constraints over non-negative size variables, with
// an exact Fourier-Motzkin decision procedure for satisfiability and
// entailment over the rationals.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scbta/lexer.hpp"
#include "scbta/norm.hpp"
#include "scbta/parser.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Rel { Ge, Gt, Eq };

inline const char* to_string(Rel r) {
  switch (r) {
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
    case Rel::Eq: return "=";
  }
  return "?";
}

/// `expr rel 0`.
struct LinConstraint {
  SizeExpr expr;
  Rel rel = Rel::Ge;

  bool operator==(const LinConstraint&) const = default;

  std::string str() const { return expr.str() + " " + to_string(rel) + " 0"; }

  bool holds(const std::map<std::string, std::int64_t>& env) const {
    auto v = expr.evaluate(env);
    switch (rel) {
      case Rel::Ge: return v >= 0;
      case Rel::Gt: return v > 0;
      case Rel::Eq: return v == 0;
    }
    return false;
  }
};

/// Conjunction of constraints; every mentioned variable is implicitly >= 0.
class ConstraintStore {
 public:
  ConstraintStore() = default;
  ConstraintStore(std::initializer_list<LinConstraint> cs) : cs_(cs) {}
  explicit ConstraintStore(std::vector<LinConstraint> cs) : cs_(std::move(cs)) {}

  void add(LinConstraint c) { cs_.push_back(std::move(c)); }
  void add_all(const ConstraintStore& o) {
    cs_.insert(cs_.end(), o.cs_.begin(), o.cs_.end());
  }

  const std::vector<LinConstraint>& constraints() const { return cs_; }
  bool empty() const { return cs_.empty(); }
  std::size_t size() const { return cs_.size(); }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& c : cs_) {
      for (const auto& [v, k] : c.expr.coefficients()) out.insert(v);
    }
    return out;
  }

  bool holds(const std::map<std::string, std::int64_t>& env) const {
    return std::all_of(cs_.begin(), cs_.end(),
                       [&](const LinConstraint& c) { return c.holds(env); });
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < cs_.size(); ++i) {
      if (i) s += ", ";
      s += cs_[i].str();
    }
    return s + "}";
  }

  bool operator==(const ConstraintStore&) const = default;

 private:
  std::vector<LinConstraint> cs_;
};

/// Success-pattern size relations per predicate, over placeholders A1..An.
using RelationTable = std::map<Predicate, ConstraintStore>;

inline std::string placeholder(std::size_t i) { return "A" + std::to_string(i); }

class TooComplex : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EntailmentLimits {
  std::size_t max_variables = 32;
  std::size_t max_constraints = 20000;
};

namespace detail {

// Σ coeffs[i]·x_i + constant (> | >=) 0
struct FmRow {
  std::vector<BigInt> coeffs;
  BigInt constant;
  bool strict = false;

  bool operator<(const FmRow& o) const {
    return std::tie(coeffs, constant, strict) < std::tie(o.coeffs, o.constant, o.strict);
  }
};

inline void normalize(FmRow& r) {
  BigInt g = abs(r.constant);
  for (const auto& c : r.coeffs) g = gcd(g, abs(c));
  if (g > 1) {
    for (auto& c : r.coeffs) c /= g;
    r.constant /= g;
  }
}

inline bool is_trivial(const FmRow& r) {
  return std::all_of(r.coeffs.begin(), r.coeffs.end(),
                     [](const BigInt& c) { return c == 0; });
}

inline bool trivially_false(const FmRow& r) {
  return r.constant < 0 || (r.constant == 0 && r.strict);
}

class FourierMotzkin {
 public:
  FourierMotzkin(const ConstraintStore& store, const EntailmentLimits& limits)
      : limits_(limits) {
    auto vs = store.variables();
    vars_.assign(vs.begin(), vs.end());
    if (vars_.size() > limits.max_variables) {
      throw TooComplex("constraint store too complex: " +
                       std::to_string(vars_.size()) + " variables (limit " +
                       std::to_string(limits.max_variables) + ")");
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vars_.size(); ++i) index.emplace(vars_[i], i);
    auto to_row = [&](const SizeExpr& e, bool strict) {
      FmRow r{std::vector<BigInt>(vars_.size()), BigInt(e.constant()), strict};
      for (const auto& [v, c] : e.coefficients()) r.coeffs[index.at(v)] = c;
      return r;
    };
    std::set<FmRow> rows;
    for (const auto& c : store.constraints()) {
      switch (c.rel) {
        case Rel::Ge: rows.insert(to_row(c.expr, false)); break;
        case Rel::Gt: rows.insert(to_row(c.expr, true)); break;
        case Rel::Eq:
          rows.insert(to_row(c.expr, false));
          rows.insert(to_row(-c.expr, false));
          break;
      }
    }
    for (const auto& v : vars_) rows.insert(to_row(SizeExpr::variable(v), false));
    stages_.emplace_back();
    for (auto r : rows) {
      normalize(r);
      stages_.back().push_back(std::move(r));
    }
  }

  /// Eliminates every variable; false as soon as a contradiction appears.
  bool run() {
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (!check_constants(stages_.back())) return false;
      stages_.push_back(eliminate(stages_.back(), v));
    }
    return check_constants(stages_.back());
  }

  /// A rational model of the rows; only valid after run() returned true.
  std::map<std::string, Rational> model() const {
    std::vector<Rational> value(vars_.size());
    for (std::size_t v = vars_.size(); v-- > 0;) {
      std::optional<Rational> lo, hi;
      bool lo_strict = false, hi_strict = false;
      for (const auto& r : stages_[v]) {
        if (r.coeffs[v] == 0) continue;
        Rational rest(r.constant);
        for (std::size_t w = v + 1; w < vars_.size(); ++w) {
          rest += Rational(r.coeffs[w]) * value[w];
        }
        Rational bound = -rest / Rational(r.coeffs[v]);
        if (r.coeffs[v] > 0) {
          if (!lo || bound > *lo || (bound == *lo && r.strict)) {
            lo = bound;
            lo_strict = r.strict;
          }
        } else if (!hi || bound < *hi || (bound == *hi && r.strict)) {
          hi = bound;
          hi_strict = r.strict;
        }
      }
      if (lo && hi) {
        value[v] = (*lo + *hi) / 2;
      } else if (lo) {
        value[v] = *lo + (lo_strict ? 1 : 0);
      } else if (hi) {
        value[v] = *hi - (hi_strict ? 1 : 0);
      } else {
        value[v] = 0;
      }
    }
    std::map<std::string, Rational> out;
    for (std::size_t i = 0; i < vars_.size(); ++i) out.emplace(vars_[i], value[i]);
    return out;
  }

 private:
  static bool check_constants(const std::vector<FmRow>& rows) {
    return std::none_of(rows.begin(), rows.end(), [](const FmRow& r) {
      return is_trivial(r) && trivially_false(r);
    });
  }

  std::vector<FmRow> eliminate(const std::vector<FmRow>& rows, std::size_t v) const {
    std::vector<const FmRow*> pos, neg;
    std::set<FmRow> next;
    for (const auto& r : rows) {
      if (r.coeffs[v] > 0) {
        pos.push_back(&r);
      } else if (r.coeffs[v] < 0) {
        neg.push_back(&r);
      } else if (!(is_trivial(r) && !trivially_false(r))) {
        next.insert(r);
      }
    }
    for (const FmRow* p : pos) {
      for (const FmRow* q : neg) {
        BigInt a = p->coeffs[v], b = -q->coeffs[v];
        FmRow c{std::vector<BigInt>(vars_.size()), b * p->constant + a * q->constant,
                p->strict || q->strict};
        for (std::size_t w = 0; w < vars_.size(); ++w) {
          c.coeffs[w] = b * p->coeffs[w] + a * q->coeffs[w];
        }
        normalize(c);
        if (is_trivial(c) && !trivially_false(c)) continue;
        next.insert(std::move(c));
        if (next.size() > limits_.max_constraints) {
          throw TooComplex("constraint store too complex: more than " +
                           std::to_string(limits_.max_constraints) +
                           " derived constraints");
        }
      }
    }
    return {next.begin(), next.end()};
  }

  EntailmentLimits limits_;
  std::vector<std::string> vars_;
  // stages_[v] mentions only variables v, v+1, ...
  std::vector<std::vector<FmRow>> stages_;
};

inline ConstraintStore negate_into(const ConstraintStore& c, const SizeExpr& e,
                                   Rel rel) {
  // not(e >= 0) is -e > 0; not(e > 0) is -e >= 0.
  ConstraintStore s = c;
  s.add(LinConstraint{-e, rel == Rel::Ge ? Rel::Gt : Rel::Ge});
  return s;
}

}  // namespace detail

/// A rational model of `c` with all variables >= 0, if one exists.
inline std::optional<std::map<std::string, Rational>> find_model(
    const ConstraintStore& c, const EntailmentLimits& limits = {}) {
  detail::FourierMotzkin fm(c, limits);
  if (!fm.run()) return std::nullopt;
  return fm.model();
}

inline bool satisfiable(const ConstraintStore& c, const EntailmentLimits& limits = {}) {
  detail::FourierMotzkin fm(c, limits);
  return fm.run();
}

/// Checks a rational assignment against a store (including non-negativity).
inline bool satisfied_by(const ConstraintStore& c,
                         const std::map<std::string, Rational>& model) {
  for (const auto& [v, x] : model) {
    if (x < 0) return false;
  }
  for (const auto& lc : c.constraints()) {
    Rational val(lc.expr.constant());
    for (const auto& [v, k] : lc.expr.coefficients()) {
      auto it = model.find(v);
      if (it != model.end()) val += Rational(k) * it->second;
    }
    bool ok = lc.rel == Rel::Ge ? val >= 0 : lc.rel == Rel::Gt ? val > 0 : val == 0;
    if (!ok) return false;
  }
  return true;
}

/// A rational model of c that violates goal, if one exists.
inline std::optional<std::map<std::string, Rational>> countermodel(
    const ConstraintStore& c, const LinConstraint& goal,
    const EntailmentLimits& limits = {}) {
  if (goal.rel == Rel::Eq) {
    if (auto m = find_model(detail::negate_into(c, goal.expr, Rel::Ge), limits)) {
      return m;
    }
    return find_model(detail::negate_into(c, -goal.expr, Rel::Ge), limits);
  }
  return find_model(detail::negate_into(c, goal.expr, goal.rel), limits);
}

/// True iff every non-negative rational solution of c satisfies goal.
inline bool entails(const ConstraintStore& c, const LinConstraint& goal,
                    const EntailmentLimits& limits = {}) {
  if (goal.rel == Rel::Eq) {
    return entails(c, {goal.expr, Rel::Ge}, limits) &&
           entails(c, {-goal.expr, Rel::Ge}, limits);
  }
  return !satisfiable(detail::negate_into(c, goal.expr, goal.rel), limits);
}

/// Replaces each placeholder Ai by the norm of the atom's i-th argument.
inline ConstraintStore instantiate(const ConstraintStore& store, const Term& atom,
                                   const NormSpec& n) {
  std::map<std::string, SizeExpr> m;
  for (std::size_t i = 0; i < atom.arity(); ++i) {
    m.emplace(placeholder(i + 1), norm_of(atom.arg(i), n));
  }
  for (const auto& v : store.variables()) {
    if (!m.contains(v)) {
      throw std::invalid_argument("relation placeholder " + v +
                                  " out of range for " + atom.functor().str());
    }
  }
  ConstraintStore out;
  for (const auto& c : store.constraints()) {
    out.add(LinConstraint{c.expr.substitute(m), c.rel});
  }
  return out;
}

namespace detail {

// <lin> ::= ['-'] <term> (('+'|'-') <term>)*
// <term> ::= <int> ['*' A<i>] | A<i>
inline SizeExpr read_linear(TokenStream& ts, std::size_t arity) {
  SizeExpr e;
  bool first = true;
  while (true) {
    std::int64_t sign = 1;
    if (ts.accept("-")) {
      sign = -1;
    } else if (!first && !ts.accept("+")) {
      break;
    }
    first = false;
    const Token& t = ts.peek();
    std::int64_t k = 1;
    bool has_int = false;
    if (t.kind == TokenKind::Int) {
      k = std::stoll(ts.next().text);
      has_int = true;
      if (!ts.accept("*")) {
        e.add_constant(sign * k);
        continue;
      }
    }
    const Token& v = ts.peek();
    if (v.kind != TokenKind::Var || v.text.size() < 2 || v.text[0] != 'A' ||
        v.text.find_first_not_of("0123456789", 1) != std::string::npos) {
      ts.fail(has_int ? "expected a placeholder A<i>"
                      : "expected an integer or placeholder A<i>");
    }
    std::size_t idx = std::stoul(v.text.substr(1));
    if (idx < 1 || idx > arity) {
      throw SyntaxError("placeholder " + v.text + " out of range for arity " +
                            std::to_string(arity),
                        v.line, v.column);
    }
    ts.next();
    e.add_term(placeholder(idx), sign * k);
  }
  return e;
}

}  // namespace detail

/// Reads lines `pred/arity: { <lin> <rel> <lin>, ... }.`
inline RelationTable parse_relations(std::string_view text) {
  TokenStream ts(text);
  RelationTable table;
  while (!ts.at_end()) {
    const Token& at = ts.peek();
    Predicate p = parse_predicate_ref(ts);
    ts.expect(":");
    ts.expect("{");
    ConstraintStore store;
    if (!ts.accept("}")) {
      do {
        SizeExpr lhs = detail::read_linear(ts, p.arity);
        const Token& op = ts.next();
        SizeExpr rhs = detail::read_linear(ts, p.arity);
        if (op.is(">")) {
          store.add({lhs - rhs, Rel::Gt});
        } else if (op.is(">=")) {
          store.add({lhs - rhs, Rel::Ge});
        } else if (op.is("=")) {
          store.add({lhs - rhs, Rel::Eq});
        } else if (op.is("<")) {
          store.add({rhs - lhs, Rel::Gt});
        } else if (op.is("<=")) {
          store.add({rhs - lhs, Rel::Ge});
        } else {
          throw SyntaxError("expected a relation operator", op.line, op.column);
        }
      } while (ts.accept(","));
      ts.expect("}");
    }
    ts.expect(".");
    if (table.contains(p)) {
      throw SyntaxError("duplicate relation for " + p.str(), at.line, at.column);
    }
    table.emplace(p, std::move(store));
  }
  return table;
}

}  // namespace scbta
