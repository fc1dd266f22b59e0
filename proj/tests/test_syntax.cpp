#include <gtest/gtest.h>

#include "scbta/parser.hpp"
#include "scbta/print.hpp"
#include "scbta/syntax.hpp"
#include "support/corpus.hpp"
#include "support/random_gen.hpp"

using namespace scbta;
using namespace scbta::testing;

TEST(Parse, IncListProgram) {
  Program p = parse_program(kIncList);
  EXPECT_EQ(p.clauses().size(), 5u);
  std::set<Predicate> want{{"incList", 3}, {"iList", 4}, {"add", 3}};
  EXPECT_EQ(p.predicates(), want);
  EXPECT_EQ(to_string(p.clauses()[1].head), "incList([X|R],I,L)");
}

TEST(Parse, SingleFact) {
  Program p = parse_program("p.");
  ASSERT_EQ(p.clauses().size(), 1u);
  EXPECT_TRUE(p.clauses()[0].body.empty());
  EXPECT_EQ(p.clauses()[0].head.functor(), (Predicate{"p", 0}));
}

TEST(Parse, VariableBodyAtomRejected) {
  EXPECT_THROW(parse_program("p :- X."), SyntaxError);
}

TEST(Parse, VariableHeadRejected) {
  EXPECT_THROW(parse_program("X :- p."), SyntaxError);
}

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse_program("p(a).\nq(b) :- r(.\n");
    FAIL() << "no error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Parse, ListSugar) {
  Term t = parse_term("[a,b|T]");
  EXPECT_EQ(t, Term::cons(Term::structure("a"), Term::cons(Term::structure("b"), Term::var("T"))));
  EXPECT_EQ(parse_term("[]"), Term::nil());
  EXPECT_EQ(to_string(parse_term("[a,b]")), "[a,b]");
}

TEST(Parse, CommentsAndIntegers) {
  Program p = parse_program("% header\nn(10). % trailing\n");
  ASSERT_EQ(p.clauses().size(), 1u);
  Term arg = p.clauses()[0].head.arg(0);
  EXPECT_TRUE(arg.is_structure());
  EXPECT_EQ(arg.name(), "10");
  EXPECT_EQ(arg.arity(), 0u);
}

TEST(Parse, VariablesScopedPerClause) {
  Program p = parse_program("p(X) :- q(X).\nq(X).\n");
  EXPECT_EQ(p.clauses()[0].head.arg(0), p.clauses()[0].body[0].arg(0));
}

TEST(Parse, AnonymousVariablesAreDistinct) {
  Program p = parse_program("p(_,_).");
  Term h = p.clauses()[0].head;
  EXPECT_TRUE(h.arg(0).is_var());
  EXPECT_NE(h.arg(0), h.arg(1));
}

TEST(Unify, AddExample) {
  Term a = parse_term("add(s(X),Y,s(Z))"), b = parse_term("add(s(0),B,C)");
  auto s = unify(a, b);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->apply(a), s->apply(b));
  EXPECT_EQ(s->apply(Term::var("X")), parse_term("0"));
  EXPECT_TRUE(is_variant(s->apply(a), parse_term("add(s(0),B,s(Z))")));
}

TEST(Unify, Identity) {
  auto s = unify(Term::var("X"), Term::var("X"));
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->empty());
}

TEST(Unify, OccursCheck) {
  EXPECT_FALSE(unify(Term::var("X"), parse_term("f(X)")));
}

TEST(Unify, Clash) {
  EXPECT_FALSE(unify(parse_term("f(a)"), parse_term("f(b)")));
  EXPECT_FALSE(unify(parse_term("f(a)"), parse_term("f(a,b)")));
}

TEST(Variant, Examples) {
  EXPECT_TRUE(is_variant(parse_term("p(X,Y,X)"), parse_term("p(A,B,A)")));
  EXPECT_FALSE(is_variant(parse_term("p(X,Y,X)"), parse_term("p(A,B,B)")));
  EXPECT_TRUE(is_variant(parse_term("p(a)"), parse_term("p(a)")));
  EXPECT_FALSE(is_variant(parse_term("p(X,Y)"), parse_term("p(A,A)")));
}

TEST(RenameApart, ForcedDisjointness) {
  Program p = parse_program("p(X) :- q(X).");
  Clause c = rename_apart(p.clauses()[0], {"X"});
  EXPECT_EQ(to_string(c.head), "p(X1)");
  EXPECT_EQ(to_string(c.body[0]), "q(X1)");
}

TEST(RenameApart, GroundClauseUnchanged) {
  Clause c = parse_program("p(a).").clauses()[0];
  EXPECT_EQ(rename_apart(c, {}), c);
}

TEST(RenameApart, OnlyClashingVariablesMove) {
  Clause c = parse_program("p(X,Y).").clauses()[0];
  Clause r = rename_apart(c, {"X"});
  EXPECT_TRUE(is_variant(r, c));
  auto vs = vars_of(r);
  EXPECT_EQ(std::count(vs.begin(), vs.end(), "X"), 0);
  EXPECT_EQ(r.head.arg(1), Term::var("Y"));
}

TEST(Term, GroundAndSizeCache) {
  Term t = parse_term("f(s(0),[a])");
  EXPECT_TRUE(t.ground());
  EXPECT_EQ(t.node_count(), 6u);
  EXPECT_FALSE(parse_term("f(a,X)").ground());
}

// Random properties ---------------------------------------------------------

TEST(SyntaxProperty, PrintParseRoundTrip) {
  for (const auto& c : hand_corpus()) {
    Program p = parse_program(c.text);
    Program q = parse_program(to_string(p));
    ASSERT_EQ(p.clauses().size(), q.clauses().size()) << c.name;
    for (std::size_t i = 0; i < p.clauses().size(); ++i) {
      EXPECT_TRUE(is_variant(p.clauses()[i], q.clauses()[i])) << c.name << " clause " << i;
    }
  }
  Gen g(101);
  for (int i = 0; i < 500; ++i) {
    Program p = random_program(g);
    Program q = parse_program(to_string(p));
    ASSERT_EQ(p.clauses().size(), q.clauses().size());
    for (std::size_t k = 0; k < p.clauses().size(); ++k) {
      ASSERT_TRUE(is_variant(p.clauses()[k], q.clauses()[k])) << to_string(p);
    }
  }
}

TEST(SyntaxProperty, UnifierIsMostGeneral) {
  Gen g(102);
  std::vector<std::string> vars{"X", "Y", "Z"};
  int unified = 0;
  for (int i = 0; i < 600; ++i) {
    Term a = g.term(3, vars, 0.5), b = g.term(3, vars, 0.5);
    auto s = unify(a, b);
    if (!s) continue;
    ++unified;
    ASSERT_EQ(s->apply(a), s->apply(b)) << to_string(a) << " = " << to_string(b);
    // Idempotent.
    ASSERT_EQ(s->apply(s->apply(a)), s->apply(a));
    // Any other unifier obtained by grounding σ's image is an instance of σ.
    Substitution::Map ground;
    for (const auto& v : vars) ground.emplace(v, g.term(2, {}));
    Substitution theta = s->then(Substitution(ground));
    ASSERT_EQ(theta.apply(a), theta.apply(b));
    // Independent check: a grounding that unifies a and b factors through σ.
    Substitution tau(ground);
    if (tau.apply(a) == tau.apply(b)) {
      ASSERT_EQ(s->then(tau).apply(a), tau.apply(a));
    }
  }
  EXPECT_GT(unified, 100);
}

TEST(SyntaxProperty, VariantIsEquivalence) {
  Gen g(103);
  std::vector<std::string> vars{"X", "Y"};
  for (int i = 0; i < 500; ++i) {
    Term a = g.term(3, vars, 0.5);
    Term b = canonical_variant(a, "Q");
    Term c = canonical_variant(b, "R");
    Term d = g.term(3, vars, 0.5);
    ASSERT_TRUE(is_variant(a, a));
    ASSERT_TRUE(is_variant(a, b));
    ASSERT_TRUE(is_variant(b, a));
    ASSERT_TRUE(is_variant(a, c));
    ASSERT_EQ(is_variant(a, d), is_variant(d, a));
    if (is_variant(a, d)) {
      ASSERT_TRUE(is_variant(c, d));
    }
    ASSERT_EQ(is_variant(a, d), canonical_variant(a) == canonical_variant(d));
  }
}
