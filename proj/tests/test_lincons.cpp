#include <gtest/gtest.h>

#include "scbta/lincons.hpp"
#include "scbta/parser.hpp"
#include "support/random_gen.hpp"

using namespace scbta;
using namespace scbta::testing;

namespace {
SizeExpr ex(std::int64_t c, std::initializer_list<std::pair<const char*, std::int64_t>> vs = {}) {
  SizeExpr e(c);
  for (auto [v, k] : vs) e.add_term(v, k);
  return e;
}

const Predicate kQ{"q", 2};
}  // namespace

TEST(ParseRelations, CountdownRelation) {
  auto t = parse_relations("q/2: {A1 > A2, A2 = 0, A1 >= 1}.");
  ASSERT_EQ(t.size(), 1u);
  ConstraintStore want{{ex(0, {{"A1", 1}, {"A2", -1}}), Rel::Gt},
                       {ex(0, {{"A2", 1}}), Rel::Eq},
                       {ex(-1, {{"A1", 1}}), Rel::Ge}};
  EXPECT_EQ(t.at(kQ), want);
}

TEST(ParseRelations, Empty) { EXPECT_TRUE(parse_relations("").empty()); }

TEST(ParseRelations, PlaceholderOutOfRange) {
  try {
    parse_relations("q/2: {A3 > 0}.");
    FAIL() << "accepted A3";
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("A3"), std::string::npos);
  }
}

TEST(ParseRelations, CoefficientsAndReversedOperators) {
  auto t = parse_relations("r/2: {2*A1 - A2 + 3 <= A2}.\ns/1: {}.");
  EXPECT_EQ(t.at({"r", 2}), (ConstraintStore{{ex(-3, {{"A1", -2}, {"A2", 2}}), Rel::Ge}}));
  EXPECT_TRUE(t.at({"s", 1}).empty());
  EXPECT_THROW(parse_relations("q/2: {A1 > 0}.\nq/2: {A2 > 0}."), SyntaxError);
}

TEST(Instantiate, Examples) {
  NormSpec ts = NormSpec::term_size();
  ConstraintStore rel = parse_relations("q/2: {A1 > A2, A2 = 0, A1 >= 1}.").at(kQ);
  ConstraintStore a = instantiate(rel, parse_term("q(X,Y)"), ts);
  EXPECT_EQ(a, (ConstraintStore{{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Gt},
                                {ex(0, {{"Y", 1}}), Rel::Eq},
                                {ex(-1, {{"X", 1}}), Rel::Ge}}));
  EXPECT_TRUE(instantiate(ConstraintStore{}, parse_term("q(X,Y)"), ts).empty());

  ConstraintStore b = instantiate(rel, parse_term("q(s(X),Y)"), ts);
  ConstraintStore want{{ex(1, {{"X", 1}, {"Y", -1}}), Rel::Gt},
                       {ex(0, {{"Y", 1}}), Rel::Eq},
                       {ex(0, {{"X", 1}}), Rel::Ge}};
  EXPECT_EQ(b, want);
  // Same truth value on sampled points, by substitution A1 = X+1, A2 = Y.
  for (std::int64_t x = 0; x < 6; ++x) {
    for (std::int64_t y = 0; y < 6; ++y) {
      EXPECT_EQ(b.holds({{"X", x}, {"Y", y}}), rel.holds({{"A1", x + 1}, {"A2", y}}));
    }
  }
}

TEST(Instantiate, ArityMismatch) {
  ConstraintStore rel = parse_relations("q/2: {A1 > A2}.").at(kQ);
  EXPECT_THROW(instantiate(rel, parse_term("q(X)"), NormSpec::term_size()), std::invalid_argument);
}

TEST(Entails, Examples) {
  ConstraintStore c{{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Gt},
                    {ex(0, {{"Y", 1}}), Rel::Eq},
                    {ex(-1, {{"X", 1}}), Rel::Ge}};
  EXPECT_TRUE(entails(c, {ex(0, {{"X", 1}, {"Y", -1}}), Rel::Gt}));

  ConstraintStore chain{{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Ge},
                        {ex(0, {{"Y", 1}, {"Z", -1}}), Rel::Ge}};
  EXPECT_TRUE(entails(chain, {ex(0, {{"X", 1}, {"Z", -1}}), Rel::Ge}));

  ConstraintStore weak{{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Ge}};
  LinConstraint strict{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Gt};
  EXPECT_FALSE(entails(weak, strict));
  auto cm = countermodel(weak, strict);
  ASSERT_TRUE(cm);
  EXPECT_TRUE(satisfied_by(weak, *cm));
  EXPECT_FALSE(satisfied_by(ConstraintStore{strict}, *cm));
}

TEST(Entails, EqualityGoal) {
  ConstraintStore c{{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Ge}, {ex(0, {{"Y", 1}, {"X", -1}}), Rel::Ge}};
  EXPECT_TRUE(entails(c, {ex(0, {{"X", 1}, {"Y", -1}}), Rel::Eq}));
  EXPECT_FALSE(entails(ConstraintStore{}, {ex(0, {{"X", 1}}), Rel::Eq}));
}

TEST(Entails, NonNegativityIsImplicit) {
  EXPECT_TRUE(entails(ConstraintStore{}, {ex(0, {{"X", 1}}), Rel::Ge}));
  EXPECT_TRUE(entails(ConstraintStore{}, {ex(1, {{"X", 1}}), Rel::Gt}));
}

TEST(Satisfiable, Examples) {
  ConstraintStore contra{{ex(0, {{"X", 1}}), Rel::Gt}, {ex(0, {{"X", 1}}), Rel::Eq}};
  EXPECT_FALSE(satisfiable(contra));
  EXPECT_TRUE(satisfiable(ConstraintStore{}));
  ConstraintStore c{{ex(0, {{"X", 1}, {"Y", -1}}), Rel::Gt}, {ex(0, {{"Y", 1}}), Rel::Ge}};
  auto m = find_model(c);
  ASSERT_TRUE(m);
  EXPECT_TRUE(satisfied_by(c, *m));
}

TEST(Satisfiable, RationalRelaxation) {
  // 2X = 1 has no integer solution but a rational one.
  ConstraintStore c{{ex(-1, {{"X", 2}}), Rel::Eq}};
  EXPECT_TRUE(satisfiable(c));
}

TEST(Satisfiable, ResourceGuard) {
  ConstraintStore c;
  for (int i = 0; i < 40; ++i) c.add({ex(0, {{("V" + std::to_string(i)).c_str(), 1}}), Rel::Ge});
  EXPECT_THROW(satisfiable(c), TooComplex);
}

TEST(LinconsProperty, Monotonicity) {
  Gen g(201);
  std::vector<std::string> vars{"X", "Y", "Z"};
  int entailed = 0, cases = 0;
  for (int i = 0; cases < 500 && i < 20000; ++i) {
    ConstraintStore c = random_store(g, vars);
    LinConstraint goal{random_linear(g, vars), random_rel(g)};
    if (!entails(c, goal)) continue;
    ++entailed;
    ConstraintStore bigger = c;
    bigger.add_all(random_store(g, vars));
    if (!satisfiable(bigger)) continue;
    ++cases;
    ASSERT_TRUE(entails(bigger, goal)) << c.str() << " |= " << goal.str() << " but not from "
                                       << bigger.str();
  }
  EXPECT_GE(cases, 500);
  EXPECT_GE(entailed, cases);
}
