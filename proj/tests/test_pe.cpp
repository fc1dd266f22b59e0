#include <gtest/gtest.h>

#include "scbta/parser.hpp"
#include "scbta/pe.hpp"
#include "scbta/pipeline.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace scbta;
using namespace scbta::testing;

namespace {

constexpr Binding s = Binding::Static;
constexpr Binding d = Binding::Dynamic;

const Predicate kInc{"incList", 3}, kIl{"iList", 4}, kAdd{"add", 3};

Division inclist_division() { return {{kInc, {d, s, d}}, {kIl, {d, d, s, d}}, {kAdd, {s, d, d}}}; }

Annotation inclist_annotation() {
  return analyze(parse_program(kIncList), NormSpec::term_size(), inclist_division()).annotation;
}

std::set<std::string> answers(const Program& p, const std::string& goal) {
  Term g = parse_atom(goal);
  auto r = run_query(p, {g}, 1000);
  EXPECT_FALSE(r.cut_off) << goal;
  return oracle::answer_set(r.answers, g);
}

std::string canon(const std::string& t) { return to_string(canonical_variant(parse_term(t), "A")); }

}  // namespace

TEST(Generalize, Examples) {
  VarSupply fresh;
  NormSpec ts = NormSpec::term_size(), ll = NormSpec::list_length();
  Term g = generalize(parse_atom("incList([a|T],s(0),Z)"), inclist_division(), ts, true, fresh);
  EXPECT_TRUE(is_variant(g, parse_term("incList(F1,s(0),F2)")));
  Division ps{{{"p", 1}, {s}}}, pd{{{"p", 1}, {d}}};
  EXPECT_TRUE(is_variant(generalize(parse_atom("p([s(N),b])"), ps, ll, true, fresh), parse_term("p([X,Y])")));
  EXPECT_EQ(generalize(parse_atom("p([s(N),b])"), ps, ll, false, fresh), parse_term("p([s(N),b])"));
  Term w = generalize(parse_atom("p(W)"), pd, ts, false, fresh);
  EXPECT_TRUE(w.arg(0).is_var());
  EXPECT_NE(w.arg(0), Term::var("W"));
  EXPECT_THROW(generalize(parse_atom("r(a)"), pd, ts, false, fresh), AnalysisError);
}

TEST(UnfoldTree, AddFullyUnfolded) {
  Program p = parse_program(kIncList);
  auto rs = unfold_tree(parse_atom("add(s(s(0)),Y,Z)"), p, inclist_annotation());
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_TRUE(is_variant(rs[0].head, parse_term("add(s(s(0)),Y,s(s(Y)))")));
  EXPECT_TRUE(rs[0].leaves.empty());

  auto zero = unfold_tree(parse_atom("add(0,Y,Z)"), p, inclist_annotation());
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_TRUE(is_variant(zero[0].head, parse_term("add(0,Y,Y)")));
  EXPECT_TRUE(zero[0].leaves.empty());
}

TEST(UnfoldTree, MemoRootIsALeaf) {
  Program p = parse_program(kIncList);
  Term root = parse_atom("incList(L,s(0),R)");
  auto rs = unfold_tree(root, p, inclist_annotation());
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].head, root);
  ASSERT_EQ(rs[0].leaves.size(), 1u);
  EXPECT_EQ(rs[0].leaves[0], root);
}

TEST(UnfoldTree, ForcedRootStep) {
  Program p = parse_program(kIncList);
  auto rs = unfold_tree(parse_atom("incList(L,s(0),R)"), p, inclist_annotation(), kDefaultUnfoldBudget, true);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_TRUE(is_variant(rs[0].head, parse_term("incList([],s(0),[])")));
  EXPECT_TRUE(rs[0].leaves.empty());
  ASSERT_EQ(rs[1].leaves.size(), 1u);
  EXPECT_EQ(rs[1].leaves[0].functor(), kIl);
}

TEST(UnfoldTree, LeftmostUnfoldableSelected) {
  Program p = parse_program("r(X) :- m(X), u(X).\nm(a).\nu(a).\nu(b).\n");
  Annotation ann;
  ann.marks = {{{"r", 1}, Mark::Unfold}, {{"m", 1}, Mark::Memo}, {{"u", 1}, Mark::Unfold}};
  auto rs = unfold_tree(parse_atom("r(X)"), p, ann);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].head, parse_term("r(a)"));
  EXPECT_EQ(rs[0].leaves, std::vector<Term>{parse_term("m(a)")});
  EXPECT_EQ(rs[1].head, parse_term("r(b)"));
}

TEST(UnfoldTree, BudgetExhausted) {
  Program p = parse_program("loop(X) :- loop(s(X)).");
  Annotation ann;
  ann.marks = {{{"loop", 1}, Mark::Unfold}};
  EXPECT_THROW(unfold_tree(parse_atom("loop(0)"), p, ann, 1000), BudgetExhausted);
  Program grow = parse_program("g(X) :- g(f(X,X)).");
  ann.marks = {{{"g", 1}, Mark::Unfold}};
  EXPECT_THROW(unfold_tree(parse_atom("g(a)"), grow, ann, kDefaultUnfoldBudget, false, nullptr, 10000),
               BudgetExhausted);
}

TEST(Specialize, IncList) {
  Program p = parse_program(kIncList);
  Annotation ann = inclist_annotation();
  Term entry = parse_atom("incList(L,s(0),R)");
  auto sp = specialize(p, ann, ann.division, NormSpec::term_size(), entry);
  ASSERT_FALSE(sp.global.empty());
  for (const auto& g : sp.global) EXPECT_NE(g.atom.functor(), kAdd);
  EXPECT_LE(sp.global.size(), 2u);
  EXPECT_EQ(sp.entry_call.name(), "pred_0");
  for (const auto& c : sp.program.clauses()) {
    for (const auto& b : c.body) EXPECT_EQ(b.name().rfind("pred_", 0), 0u);
  }
  for (const auto& q : {"incList([],s(0),R)", "incList([0,s(0)],s(0),R)", "incList([s(0)],s(0),[0])"}) {
    Term qt = parse_atom(q);
    auto r = run_query(sp.program, {detail::renamed_call(sp.global[0], qt)}, 1000);
    EXPECT_EQ(oracle::answer_set(r.answers, qt), answers(p, q)) << q;
  }
}

TEST(Specialize, NonRecursiveEntryGivesFacts) {
  Program p = parse_program("q(X,Y) :- r(X), r(Y).\nr(a).\nr(b).\n");
  Division div = propagate_division(p, {"q", 2}, {d, d});
  auto r = analyze(p, NormSpec::term_size(), div);
  auto sp = specialize(p, r.annotation, r.annotation.division, NormSpec::term_size(), parse_atom("q(X,Y)"));
  EXPECT_EQ(sp.global.size(), 1u);
  EXPECT_EQ(sp.program.clauses().size(), 4u);
  for (const auto& c : sp.program.clauses()) {
    EXPECT_TRUE(c.body.empty());
    EXPECT_TRUE(is_ground(c.head));
  }
}

TEST(Specialize, ListLengthUsesMgg) {
  Program p = parse_program(kIncList);
  NormSpec ll = NormSpec::list_length();
  AnalysisOptions mm;
  mm.min_memo = true;
  auto r = analyze(p, ll, inclist_division(), mm);
  ASSERT_TRUE(r.annotation.requires_mgg);
  SpecializeOptions so;
  so.max_global = 1000;
  auto sp = specialize(p, r.annotation, r.annotation.division, ll, parse_atom("incList(L,s(0),R)"), so);
  EXPECT_TRUE(sp.used_mgg);
  EXPECT_LT(sp.global.size(), 10u);
}

TEST(Specialize, NonGroundStaticEntryRejected) {
  Program p = parse_program(kIncList);
  Annotation ann = inclist_annotation();
  EXPECT_THROW(specialize(p, ann, ann.division, NormSpec::term_size(), parse_atom("incList(L,S,R)")),
               AnalysisError);
}

TEST(Specialize, GlobalLimit) {
  Program p = parse_program("g(X) :- g(s(X)).\ng(0).\n");
  Annotation ann;
  ann.marks = {{{"g", 1}, Mark::Memo}};
  ann.division = {{{"g", 1}, {s}}};
  SpecializeOptions so;
  so.max_global = 50;
  EXPECT_THROW(specialize(p, ann, ann.division, NormSpec::term_size(), parse_atom("g(0)"), so),
               GlobalLimitExceeded);
}

TEST(RunQuery, Examples) {
  Program p = parse_program(kIncList);
  EXPECT_EQ(answers(p, "add(s(0),0,Z)"), std::set<std::string>{canon("add(s(0),0,s(0))")});
  EXPECT_EQ(answers(p, "incList([0],s(0),R)"), std::set<std::string>{canon("incList([0],s(0),[s(0)])")});
  EXPECT_TRUE(answers(p, "add(0,0,s(0))").empty());
}

TEST(RunQuery, CutOff) {
  Program p = parse_program("nat(0).\nnat(s(X)) :- nat(X).\n");
  auto r = run_query(p, {parse_atom("nat(N)")}, 5);
  EXPECT_TRUE(r.cut_off);
  EXPECT_EQ(r.answers.size(), 5u);
  EXPECT_TRUE(run_query(p, {parse_atom("nat(N)")}, 1000, 50).cut_off);
}

TEST(RunQuery, UndefinedPredicateFails) {
  auto r = run_query(parse_program("p(X) :- q(X)."), {parse_atom("p(a)")}, 100);
  EXPECT_TRUE(r.answers.empty());
  EXPECT_FALSE(r.cut_off);
}

// Global-set invariants on the hand corpus under every configuration --------

TEST(PeProperty, GlobalSetInvariants) {
  std::size_t runs = 0;
  for (const auto& subj : hand_subjects()) {
    for (const auto& cfg : all_configs()) {
      ++runs;
      auto a = analyze_with(subj, cfg);
      Specialization sp;
      ASSERT_NO_THROW(sp = specialize_with(subj, cfg, a)) << subj.name << " " << cfg.name;
      for (std::size_t i = 0; i < sp.global.size(); ++i) {
        for (std::size_t j = i + 1; j < sp.global.size(); ++j) {
          ASSERT_FALSE(is_variant(sp.global[i].atom, sp.global[j].atom)) << subj.name;
        }
      }
      // Each memo leaf of each local tree is an instance of its global entry.
      bool mgg = a.annotation.requires_mgg || cfg.force_mgg;
      for (const auto& e : sp.global) {
        for (const auto& r : unfold_tree(e.atom, subj.program, a.annotation, kDefaultUnfoldBudget, true)) {
          for (const auto& leaf : r.leaves) {
            VarSupply fresh("#t");
            Term gen = generalize(leaf, a.annotation.division, norm_for(cfg.norm), mgg, fresh);
            ASSERT_TRUE(is_instance_of(leaf, gen)) << subj.name;
            bool found = false;
            for (const auto& g : sp.global) found = found || is_variant(g.atom, gen);
            ASSERT_TRUE(found) << subj.name << ": " << to_string(gen) << " missing from the global set";
          }
        }
      }
    }
  }
  EXPECT_EQ(runs, hand_subjects().size() * all_configs().size());
}
