#pragma once

// Symbolic norms, the reduction pair they induce, norm-preserving
// generalization (mgg) and a syntactic boundedness check.

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scbta/lexer.hpp"
#include "scbta/parser.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

/// Integer-linear expression `constant + Σ coeff·var` over size variables.
/// Norm values only have non-negative coefficients; differences of norm
/// values (and linear constraints) may have negative ones. Zero
/// coefficients are never stored.
class SizeExpr {
 public:
  using Coeffs = std::map<std::string, std::int64_t>;

  SizeExpr() = default;
  explicit SizeExpr(std::int64_t constant) : constant_(constant) {}
  static SizeExpr variable(const std::string& name, std::int64_t coeff = 1) {
    SizeExpr e;
    e.add_term(name, coeff);
    return e;
  }

  std::int64_t constant() const { return constant_; }
  const Coeffs& coefficients() const { return coeffs_; }
  std::int64_t coefficient(const std::string& v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0 : it->second;
  }
  bool is_constant() const { return coeffs_.empty(); }

  void add_term(const std::string& v, std::int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.emplace(v, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  void add_constant(std::int64_t c) { constant_ += c; }

  SizeExpr& operator+=(const SizeExpr& o) {
    constant_ += o.constant_;
    for (const auto& [v, c] : o.coeffs_) add_term(v, c);
    return *this;
  }
  SizeExpr& operator-=(const SizeExpr& o) { return *this += o * -1; }
  SizeExpr& operator*=(std::int64_t k) {
    if (k == 0) return *this = SizeExpr();
    constant_ *= k;
    for (auto& [v, c] : coeffs_) c *= k;
    return *this;
  }
  friend SizeExpr operator+(SizeExpr a, const SizeExpr& b) { return a += b; }
  friend SizeExpr operator-(SizeExpr a, const SizeExpr& b) { return a -= b; }
  friend SizeExpr operator*(SizeExpr a, std::int64_t k) { return a *= k; }
  friend SizeExpr operator-(SizeExpr a) { return a *= -1; }

  bool operator==(const SizeExpr&) const = default;

  /// Value under an assignment; unassigned variables count as 0.
  std::int64_t evaluate(const std::map<std::string, std::int64_t>& env) const {
    std::int64_t v = constant_;
    for (const auto& [name, c] : coeffs_) {
      auto it = env.find(name);
      if (it != env.end()) v += c * it->second;
    }
    return v;
  }

  /// Simultaneously replaces variables by expressions.
  SizeExpr substitute(const std::map<std::string, SizeExpr>& m) const {
    SizeExpr out(constant_);
    for (const auto& [v, c] : coeffs_) {
      auto it = m.find(v);
      if (it == m.end()) {
        out.add_term(v, c);
      } else {
        out += it->second * c;
      }
    }
    return out;
  }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& [v, c] : coeffs_) out.insert(v);
    return out;
  }

  /// Renders like `X+R+2` or `A1-A2-1`.
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : coeffs_) {
      if (c < 0) {
        os << '-';
      } else if (!first) {
        os << '+';
      }
      std::int64_t a = c < 0 ? -c : c;
      if (a != 1) os << a << '*';
      os << v;
      first = false;
    }
    if (first) {
      os << constant_;
    } else if (constant_ > 0) {
      os << '+' << constant_;
    } else if (constant_ < 0) {
      os << constant_;
    }
    return os.str();
  }

 private:
  std::int64_t constant_ = 0;
  Coeffs coeffs_;
};

/// Weight of a function symbol: ||f(t1..tn)|| = m + Σ k_i ||t_i||.
struct NormRule {
  std::int64_t m = 0;
  std::vector<std::int64_t> k;

  bool operator==(const NormRule&) const = default;
};

enum class DefaultRule { TermSize, Zero };

class NormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NormSpec {
 public:
  NormSpec(std::string name, DefaultRule def) : name_(std::move(name)), default_(def) {}

  /// Sums the arities of all function symbols.
  static NormSpec term_size() { return NormSpec("term_size", DefaultRule::TermSize); }

  /// Counts list elements: ./2 has weight 1 and ignores the element.
  static NormSpec list_length() {
    NormSpec n("list_length", DefaultRule::Zero);
    n.set_rule(Functor{".", 2}, NormRule{1, {0, 1}});
    return n;
  }

  void set_rule(const Functor& f, NormRule rule) {
    if (rule.k.size() != f.arity) {
      throw NormError("rule for " + f.str() + " has " +
                      std::to_string(rule.k.size()) + " weights, expected " +
                      std::to_string(f.arity));
    }
    if (rule.m < 0) throw NormError("negative constant in rule for " + f.str());
    for (auto k : rule.k) {
      if (k < 0) throw NormError("negative weight in rule for " + f.str());
    }
    rules_.insert_or_assign(f, std::move(rule));
  }

  NormRule rule_for(const Functor& f) const {
    if (auto it = rules_.find(f); it != rules_.end()) return it->second;
    if (default_ == DefaultRule::TermSize) {
      return NormRule{static_cast<std::int64_t>(f.arity),
                      std::vector<std::int64_t>(f.arity, 1)};
    }
    return NormRule{0, std::vector<std::int64_t>(f.arity, 0)};
  }

  const std::string& name() const { return name_; }
  DefaultRule default_rule() const { return default_; }
  const std::map<Functor, NormRule>& rules() const { return rules_; }

 private:
  std::string name_;
  DefaultRule default_;
  std::map<Functor, NormRule> rules_;
};

/// Symbolic norm of a term; a logical variable X becomes the size variable X.
inline SizeExpr norm_of(const Term& t, const NormSpec& n) {
  if (t.is_var()) return SizeExpr::variable(t.name());
  NormRule r = n.rule_for(t.functor());
  SizeExpr e(r.m);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (r.k[i] != 0) e += norm_of(t.arg(i), n) * r.k[i];
  }
  return e;
}

enum class CompareResult { Strict, NonStrict, Unknown };

inline const char* to_string(CompareResult r) {
  switch (r) {
    case CompareResult::Strict: return "strict";
    case CompareResult::NonStrict: return "non-strict";
    case CompareResult::Unknown: return "unknown";
  }
  return "?";
}

/// Decides e1 > e2 (Strict) or e1 >= e2 (NonStrict) for every assignment of
/// non-negative integers to the size variables.
inline CompareResult compare(const SizeExpr& e1, const SizeExpr& e2) {
  SizeExpr d = e1 - e2;
  for (const auto& [v, c] : d.coefficients()) {
    if (c < 0) return CompareResult::Unknown;
  }
  if (d.constant() >= 1) return CompareResult::Strict;
  if (d.constant() >= 0) return CompareResult::NonStrict;
  return CompareResult::Unknown;
}

/// Most general generalization of `t` with the same symbolic norm: every
/// argument position of weight zero is replaced by a fresh variable.
inline Term mgg(const Term& t, const NormSpec& n, VarSupply& fresh) {
  if (t.is_var() || t.arity() == 0) return t;
  NormRule r = n.rule_for(t.functor());
  std::vector<Term> args;
  args.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    args.push_back(r.k[i] == 0 ? fresh.fresh() : mgg(t.arg(i), n, fresh));
  }
  return Term::structure(t.name(), std::move(args));
}

inline Term mgg(const Term& t, const NormSpec& n) {
  VarSupply fresh;
  return mgg(t, n, fresh);
}

/// Argument-wise mgg of an atom; the predicate symbol is kept.
inline Term mgg_atom(const Term& atom, const NormSpec& n, VarSupply& fresh) {
  if (atom.is_var()) throw std::invalid_argument("mgg_atom: atom expected");
  std::vector<Term> args;
  args.reserve(atom.arity());
  for (const auto& a : atom.args()) args.push_back(mgg(a, n, fresh));
  return Term::structure(atom.name(), std::move(args));
}

inline Term mgg_atom(const Term& atom, const NormSpec& n) {
  VarSupply fresh;
  return mgg_atom(atom, n, fresh);
}

enum class Boundedness { Bounded, PossiblyUnbounded };

/// Bounded when every non-constant symbol of the signature has m >= 1 and
/// all weights >= 1, so a norm value bounds both depth and width.
inline Boundedness boundedness(const NormSpec& n,
                               const std::set<Functor>& signature) {
  for (const auto& f : signature) {
    if (f.arity == 0) continue;
    NormRule r = n.rule_for(f);
    if (r.m < 1) return Boundedness::PossiblyUnbounded;
    for (auto k : r.k) {
      if (k < 1) return Boundedness::PossiblyUnbounded;
    }
  }
  return Boundedness::Bounded;
}

/// Reads a norm file:
///
///   default: term_size.          (or `default: zero.`)
///   ./2: m=1, k=[0,1].
inline NormSpec parse_norm(std::string_view text, std::string name = "custom") {
  TokenStream ts(text);
  std::optional<DefaultRule> def;
  std::vector<std::pair<Functor, NormRule>> rules;
  auto read_int = [&ts]() -> std::int64_t {
    bool neg = ts.accept("-");
    std::int64_t v = std::stoll(ts.expect(TokenKind::Int, "an integer").text);
    return neg ? -v : v;
  };
  while (!ts.at_end()) {
    if (ts.peek().kind == TokenKind::Ident && ts.peek().text == "default" &&
        ts.peek(1).is(":")) {
      const Token& at = ts.next();
      ts.expect(":");
      const Token& which = ts.expect(TokenKind::Ident, "term_size or zero");
      if (def) throw SyntaxError("duplicate default directive", at.line, at.column);
      if (which.text == "term_size") {
        def = DefaultRule::TermSize;
      } else if (which.text == "zero") {
        def = DefaultRule::Zero;
      } else {
        throw SyntaxError("unknown default '" + which.text + "'", which.line,
                          which.column);
      }
      ts.expect(".");
      continue;
    }
    const Token& at = ts.peek();
    Functor f = parse_predicate_ref(ts);
    ts.expect(":");
    NormRule r;
    const Token& mk = ts.expect(TokenKind::Ident, "'m'");
    if (mk.text != "m") throw SyntaxError("expected 'm'", mk.line, mk.column);
    ts.expect("=");
    r.m = read_int();
    ts.expect(",");
    const Token& kk = ts.expect(TokenKind::Ident, "'k'");
    if (kk.text != "k") throw SyntaxError("expected 'k'", kk.line, kk.column);
    ts.expect("=");
    ts.expect("[");
    if (!ts.accept("]")) {
      do {
        r.k.push_back(read_int());
      } while (ts.accept(","));
      ts.expect("]");
    }
    ts.expect(".");
    for (const auto& [g, _] : rules) {
      if (g == f) {
        throw SyntaxError("duplicate rule for " + f.str(), at.line, at.column);
      }
    }
    rules.emplace_back(f, std::move(r));
  }
  if (!def) throw SyntaxError("missing default directive", 1, 1);
  NormSpec n(std::move(name), *def);
  for (auto& [f, r] : rules) n.set_rule(f, std::move(r));
  return n;
}

}  // namespace scbta
