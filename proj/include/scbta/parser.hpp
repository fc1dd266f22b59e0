#pragma once

// Reader for the program file grammar:
//
//   clause ::= atom "." | atom ":-" atom ("," atom)* "."
//
// with `%` line comments, list sugar ([], [H|T], [a,b,c]), lowercase or
// numeric functors and Edinburgh-style variables. Each `_` is a distinct
// anonymous variable.

#include <string>
#include <string_view>
#include <vector>

#include "scbta/lexer.hpp"
#include "scbta/syntax.hpp"

namespace scbta {

namespace detail {

class TermReader {
 public:
  explicit TermReader(TokenStream& ts) : ts_(ts) {}

  void reset_clause_scope() { anon_ = 0; }

  Term term() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case TokenKind::Var: {
        std::string name = ts_.next().text;
        if (name == "_") name = "_#" + std::to_string(anon_++);
        return Term::var(std::move(name));
      }
      case TokenKind::Int:
        return Term::structure(ts_.next().text);
      case TokenKind::Ident:
        return compound();
      case TokenKind::Punct:
        if (t.is("[")) return list();
        [[fallthrough]];
      default:
        ts_.fail("expected a term");
    }
  }

  /// An atom: an identifier with optional arguments. Variables are rejected.
  Term atom() {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::Var) {
      throw SyntaxError("variable '" + t.text + "' used as an atom", t.line,
                        t.column);
    }
    if (t.kind != TokenKind::Ident) ts_.fail("expected an atom");
    return compound();
  }

 private:
  Term compound() {
    std::string name = ts_.next().text;
    std::vector<Term> args;
    if (ts_.accept("(")) {
      do {
        args.push_back(term());
      } while (ts_.accept(","));
      ts_.expect(")");
    }
    return Term::structure(std::move(name), std::move(args));
  }

  Term list() {
    ts_.expect("[");
    if (ts_.accept("]")) return Term::nil();
    std::vector<Term> items;
    do {
      items.push_back(term());
    } while (ts_.accept(","));
    Term tail = Term::nil();
    if (ts_.accept("|")) tail = term();
    ts_.expect("]");
    return Term::list(items.begin(), items.end(), tail);
  }

  TokenStream& ts_;
  std::size_t anon_ = 0;
};

}  // namespace detail

inline Program parse_program(std::string_view text) {
  TokenStream ts(text);
  detail::TermReader reader(ts);
  std::vector<Clause> clauses;
  while (!ts.at_end()) {
    reader.reset_clause_scope();
    Clause c{reader.atom(), {}};
    if (ts.accept(":-")) {
      do {
        c.body.push_back(reader.atom());
      } while (ts.accept(","));
    }
    ts.expect(".");
    clauses.push_back(std::move(c));
  }
  return Program(std::move(clauses));
}

inline Term parse_term(std::string_view text) {
  TokenStream ts(text);
  detail::TermReader reader(ts);
  Term t = reader.term();
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after term");
  return t;
}

/// A conjunction of atoms, optionally terminated by '.'.
inline std::vector<Term> parse_goal(std::string_view text) {
  TokenStream ts(text);
  detail::TermReader reader(ts);
  std::vector<Term> atoms;
  do {
    atoms.push_back(reader.atom());
  } while (ts.accept(","));
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after goal");
  return atoms;
}

inline Term parse_atom(std::string_view text) {
  auto atoms = parse_goal(text);
  if (atoms.size() != 1) throw SyntaxError("expected a single atom", 1, 1);
  return atoms.front();
}

/// Parses `name/arity`.
inline Predicate parse_predicate_ref(TokenStream& ts) {
  const Token& name = ts.peek();
  if (name.kind != TokenKind::Ident && name.kind != TokenKind::Int &&
      !name.is(".") && !name.is("[")) {
    ts.fail("expected a predicate name");
  }
  std::string n = ts.next().text;
  if (n == "[") {
    ts.expect("]");
    n = "[]";
  }
  ts.expect("/");
  const Token& ar = ts.expect(TokenKind::Int, "an arity");
  return Predicate{n, static_cast<std::size_t>(std::stoul(ar.text))};
}

}  // namespace scbta
