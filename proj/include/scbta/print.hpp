#pragma once

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "scbta/syntax.hpp"

namespace scbta {

namespace detail {

inline void print_term(std::ostream& os, const Term& t);

inline void print_list_tail(std::ostream& os, const Term& tail) {
  Term cur = tail;
  while (cur.is_structure() && cur.name() == "." && cur.arity() == 2) {
    os << ',';
    print_term(os, cur.arg(0));
    cur = cur.arg(1);
  }
  if (!(cur.is_structure() && cur.name() == "[]" && cur.arity() == 0)) {
    os << '|';
    print_term(os, cur);
  }
}

inline void print_term(std::ostream& os, const Term& t) {
  if (t.is_var()) {
    os << t.name();
    return;
  }
  if (t.name() == "." && t.arity() == 2) {
    os << '[';
    print_term(os, t.arg(0));
    print_list_tail(os, t.arg(1));
    os << ']';
    return;
  }
  os << t.name();
  if (t.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print_term(os, t.arg(i));
  }
  os << ')';
}

inline bool is_valid_var_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return s != "_";
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  detail::print_term(os, t);
  return os.str();
}

/// Gives every internal (non-parseable) variable of `c` a readable name
/// that does not clash with the clause's other variables.
inline Clause with_printable_vars(const Clause& c) {
  auto vars = vars_of(c);
  std::set<std::string> taken(vars.begin(), vars.end());
  Substitution::Map m;
  std::size_t next = 0;
  for (const auto& v : vars) {
    if (detail::is_valid_var_name(v)) continue;
    std::string name;
    do {
      name = "_G" + std::to_string(next++);
    } while (taken.contains(name));
    taken.insert(name);
    m.emplace(v, Term::var(name));
  }
  return Substitution(std::move(m)).apply(c);
}

inline std::string to_string(const Clause& clause) {
  Clause c = with_printable_vars(clause);
  std::ostringstream os;
  detail::print_term(os, c.head);
  if (!c.body.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) os << ", ";
      detail::print_term(os, c.body[i]);
    }
  }
  os << '.';
  return os.str();
}

inline std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const auto& c : p.clauses()) os << to_string(c) << '\n';
  return os.str();
}

inline std::string to_string(const Substitution& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << v << " = " << to_string(t);
  }
  os << '}';
  return os.str();
}

}  // namespace scbta
