#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle.hpp"

using namespace kcdag;

namespace {

const Bound kInf = Bound::infinite();
constexpr std::uint32_t kVars = 8;

std::vector<Variable> scope(std::uint32_t n) {
  std::vector<Variable> out;
  for (std::uint32_t v = 1; v <= n; ++v) out.emplace_back(v);
  return out;
}

struct Small {
  DiagramStore s{VariableOrder::natural(3)};
  VertexId x1 = s.make_literal(Variable(1), true);
  VertexId x2 = s.make_literal(Variable(2), true);
  VertexId iff = s.make_decision(Variable(1), s.make_literal(Variable(2), false), x2);
};

}  // namespace

TEST(Condition, Examples) {
  Small f;
  EXPECT_EQ(condition(f.s, f.iff, {}, kInf), f.iff);
  EXPECT_EQ(condition(f.s, f.iff, {{1, true}}, kInf), f.x2);
  EXPECT_EQ(condition(f.s, f.iff, {{1, true}, {2, false}}, kInf), VertexId::bottom());
  EXPECT_EQ(condition(f.s, f.iff, {{1, false}, {2, false}}, kInf), VertexId::top());
  EXPECT_EQ(condition(f.s, f.iff, {{3, false}}, kInf), f.iff);
}

TEST(Conjoin, Examples) {
  Small f;
  EXPECT_EQ(conjoin(f.s, f.iff, VertexId::top(), kInf), f.iff);
  EXPECT_EQ(conjoin(f.s, f.iff, negate(f.s, f.iff, kInf), kInf), VertexId::bottom());
  EXPECT_EQ(conjoin(f.s, f.x1, f.x2, kInf), f.s.make_conj({f.x1, f.x2}));
  EXPECT_EQ(conjoin(f.s, f.x1, f.x2, Bound(0)),
            f.s.make_decision(Variable(1), VertexId::bottom(), f.x2));
}

TEST(Conjoin, UnitLiterals) {
  DiagramStore s(VariableOrder::natural(4));
  auto lit = [&](std::uint32_t v, bool p) { return s.make_literal(Variable(v), p); };
  // x2 <-> x3, over 2 variables so it stays a decision at bound 1
  auto iff = s.make_decision(Variable(2), lit(3, false), lit(3, true));
  auto u = s.make_conj({lit(1, true), iff});
  auto v = s.make_conj({lit(2, true), lit(4, false)});
  EXPECT_EQ(conjoin(s, u, v, Bound(1)),
            s.make_conj({lit(1, true), lit(2, true), lit(3, true), lit(4, false)}));
  auto w = s.make_conj({lit(1, false), lit(4, false)});
  EXPECT_EQ(conjoin(s, u, w, Bound(1)), VertexId::bottom());
  auto x = s.make_conj({lit(2, false), lit(4, true)});
  EXPECT_EQ(conjoin(s, u, x, Bound(1)),
            s.make_conj({lit(1, true), lit(2, false), lit(3, false), lit(4, true)}));
}

TEST(Disjoin, Examples) {
  Small f;
  EXPECT_EQ(disjoin(f.s, f.iff, VertexId::bottom(), kInf), f.iff);
  EXPECT_EQ(disjoin(f.s, f.iff, negate(f.s, f.iff, kInf), kInf), VertexId::top());
  EXPECT_EQ(disjoin(f.s, f.x1, f.x2, kInf), f.s.make_decision(Variable(1), f.x2, VertexId::top()));
}

TEST(Negate, Examples) {
  Small f;
  EXPECT_EQ(negate(f.s, VertexId::top(), kInf), VertexId::bottom());
  EXPECT_EQ(negate(f.s, negate(f.s, f.iff, kInf), kInf), f.iff);
  auto both = f.s.make_conj({f.x1, f.x2});
  EXPECT_EQ(negate(f.s, both, kInf),
            f.s.make_decision(Variable(1), VertexId::top(),
                              f.s.make_decision(Variable(2), VertexId::top(), VertexId::bottom())));
}

TEST(Forget, Examples) {
  Small f;
  EXPECT_EQ(forget(f.s, f.iff, {}, kInf), f.iff);
  auto both = f.s.make_conj({f.x1, f.x2});
  std::vector<Variable> one{Variable(1)};
  EXPECT_EQ(forget(f.s, both, one, kInf), f.x2);
  auto all = f.s.vars_of(f.iff);
  EXPECT_EQ(forget(f.s, f.iff, all, kInf), VertexId::top());
}

TEST(Queries, Examples) {
  Small f;
  EXPECT_FALSE(is_consistent(f.s, VertexId::bottom()));
  EXPECT_TRUE(is_valid(f.s, VertexId::top()));
  EXPECT_TRUE(is_consistent(f.s, f.iff));
  EXPECT_FALSE(is_valid(f.s, f.iff));
  std::vector<Literal> lits{{Variable(1), false}, {Variable(2), true}};
  Clause c(lits);
  EXPECT_TRUE(entails_clause(f.s, VertexId::bottom(), c, kInf));
  EXPECT_TRUE(entails_clause(f.s, f.iff, c, kInf));
  EXPECT_FALSE(entails_clause(f.s, f.iff, Clause({{Variable(1), true}}), kInf));
  EXPECT_TRUE(entails_clause(f.s, f.x1, Clause({{Variable(2), true}, {Variable(2), false}}),
                             kInf));
  EXPECT_TRUE(implied_by_term(f.s, f.x1, {{1, true}}, kInf));
  EXPECT_FALSE(implied_by_term(f.s, f.iff, {{1, true}}, kInf));
  EXPECT_TRUE(equivalent(f.iff, f.iff));
  EXPECT_TRUE(entails(f.s, VertexId::bottom(), f.iff, kInf));
  auto both = f.s.make_conj({f.x1, f.x2});
  EXPECT_TRUE(entails(f.s, both, f.x1, kInf));
  EXPECT_FALSE(entails(f.s, f.x1, both, kInf));
}

TEST(ModelCount, Examples) {
  Small f;
  auto sc = scope(3);
  EXPECT_EQ(model_count(f.s, VertexId::top(), sc), 8);
  EXPECT_EQ(model_count(f.s, f.iff, std::span(sc).first(2)), 2);
  EXPECT_EQ(model_count(f.s, f.iff, sc), 4);
  EXPECT_EQ(model_count(f.s, VertexId::bottom(), sc), 0);
  EXPECT_THROW(model_count(f.s, f.iff, std::span(sc).first(1)), PreconditionError);

  auto cnf = random_3cnf(12, 24, 3);
  DiagramStore s(VariableOrder::natural(12));
  for (auto i : {Bound(0), Bound(1), kInf}) {
    EXPECT_EQ(model_count(s, compile(s, cnf, i), scope(12)), oracle_count(cnf));
  }
}

TEST(Enumerate, Examples) {
  Small f;
  auto sc = scope(2);
  auto none = enumerate_models(f.s, VertexId::bottom(), sc);
  EXPECT_FALSE(none.next());
  std::vector<Variable> just1{Variable(1)};
  auto one = enumerate_models(f.s, f.x1, just1);
  auto m = one.next();
  ASSERT_TRUE(m);
  EXPECT_EQ(*m, (Assignment{{1, true}}));
  EXPECT_FALSE(one.next());
  EXPECT_FALSE(one.next());
  auto all = enumerate_models(f.s, VertexId::top(), sc);
  int n = 0;
  while (all.next()) ++n;
  EXPECT_EQ(n, 4);
}

class OpsProperty : public ::testing::TestWithParam<Bound> {};

TEST_P(OpsProperty, AgreesWithTruthTables) {
  const Bound i = GetParam();
  std::mt19937_64 rng(1234 + i.key());
  DiagramStore s(VariableOrder::natural(kVars));
  Validator validator(s);
  auto check = [&](VertexId v, const oracle::Table& want) {
    ASSERT_EQ(oracle::table(s, v, kVars), want);
    ASSERT_TRUE(validator.run(v, i).ok());
  };
  auto sc = scope(kVars);
  for (int t = 0; t < 60; ++t) {
    auto cu = random_3cnf(kVars, 4 + t % 20, rng());
    auto cv = random_3cnf(kVars, 4 + (t * 7) % 20, rng());
    auto u = compile(s, cu, i);
    auto v = compile(s, cv, i);
    auto tu = oracle::table(cu, kVars);
    auto tv = oracle::table(cv, kVars);
    check(u, tu);
    check(v, tv);

    oracle::Table both(tu.size()), either(tu.size()), not_u(tu.size());
    for (std::size_t r = 0; r < tu.size(); ++r) {
      both[r] = tu[r] && tv[r];
      either[r] = tu[r] || tv[r];
      not_u[r] = !tu[r];
    }
    check(conjoin(s, u, v, i), both);
    check(disjoin(s, u, v, i), either);
    check(negate(s, u, i), not_u);

    auto omega = oracle::random_assignment(rng, kVars, 0.3);
    check(condition(s, u, omega, i), oracle::restrict(tu, omega));

    std::vector<Variable> gone;
    std::uint64_t keep = (std::uint64_t{1} << kVars) - 1;
    for (std::uint32_t x = 1; x <= kVars; ++x) {
      if (rng() % 3 == 0) {
        gone.emplace_back(x);
        keep &= ~(std::uint64_t{1} << (x - 1));
      }
    }
    check(forget(s, u, gone, i), oracle::project(tu, keep));

    EXPECT_EQ(is_consistent(s, u), oracle::count(tu) > 0);
    EXPECT_EQ(is_valid(s, u), oracle::count(tu) == tu.size());
    EXPECT_EQ(model_count(s, u, sc), oracle::count(tu));

    auto clause = oracle::random_clause(rng, kVars, 1 + rng() % 3);
    bool ce = true;
    for (std::uint64_t r = 0; r < tu.size(); ++r) {
      bool sat = false;
      for (auto l : clause.literals()) sat |= (((r >> (l.var.index() - 1)) & 1) != 0) == l.positive;
      if (tu[r] && !sat) ce = false;
    }
    EXPECT_EQ(entails_clause(s, u, clause, i), ce);

    auto term = oracle::random_assignment(rng, kVars, 0.5);
    bool im = true;
    for (std::uint64_t r = 0; r < tu.size(); ++r) {
      if (oracle::matches(term, r) && !tu[r]) im = false;
    }
    EXPECT_EQ(implied_by_term(s, u, term, i), im);

    bool se = true;
    for (std::uint64_t r = 0; r < tu.size(); ++r) {
      if (tu[r] && !tv[r]) se = false;
    }
    EXPECT_EQ(entails(s, u, v, i), se);
    EXPECT_EQ(equivalent(u, v), tu == tv);

    std::set<std::uint64_t> rows;
    auto stream = enumerate_models(s, u, sc);
    while (auto m = stream.next()) {
      ASSERT_EQ(m->size(), kVars);
      std::uint64_t r = 0;
      for (auto [index, value] : m->values()) r |= std::uint64_t{value} << (index - 1);
      EXPECT_TRUE(tu[r]);
      EXPECT_TRUE(rows.insert(r).second);
    }
    EXPECT_EQ(rows.size(), oracle::count(tu));
  }
}

TEST_P(OpsProperty, AlgebraicLaws) {
  const Bound i = GetParam();
  std::mt19937_64 rng(99 + i.key());
  DiagramStore s(VariableOrder::natural(kVars));
  for (int t = 0; t < 40; ++t) {
    auto u = compile(s, random_3cnf(kVars, 3 + t % 15, rng()), i);
    auto v = compile(s, random_3cnf(kVars, 3 + (t * 5) % 15, rng()), i);
    auto w = compile(s, random_3cnf(kVars, 2 + (t * 3) % 10, rng()), i);
    EXPECT_EQ(conjoin(s, u, v, i), conjoin(s, v, u, i));
    EXPECT_EQ(disjoin(s, u, v, i), disjoin(s, v, u, i));
    EXPECT_EQ(conjoin(s, conjoin(s, u, v, i), w, i), conjoin(s, u, conjoin(s, v, w, i), i));
    EXPECT_EQ(disjoin(s, disjoin(s, u, v, i), w, i), disjoin(s, u, disjoin(s, v, w, i), i));
    EXPECT_EQ(negate(s, conjoin(s, u, v, i), i),
              disjoin(s, negate(s, u, i), negate(s, v, i), i));
    EXPECT_EQ(negate(s, negate(s, u, i), i), u);
    EXPECT_EQ(conjoin(s, u, VertexId::top(), i), u);
    EXPECT_EQ(conjoin(s, u, VertexId::bottom(), i), VertexId::bottom());
    EXPECT_EQ(disjoin(s, u, VertexId::bottom(), i), u);
    EXPECT_EQ(disjoin(s, u, VertexId::top(), i), VertexId::top());
    auto omega = oracle::random_assignment(rng, kVars, 0.25);
    EXPECT_EQ(condition(s, conjoin(s, u, v, i), omega, i),
              conjoin(s, condition(s, u, omega, i), condition(s, v, omega, i), i));
    auto all = scope(kVars);
    EXPECT_EQ(forget(s, u, all, i) == VertexId::top(), is_consistent(s, u));
  }
}

INSTANTIATE_TEST_SUITE_P(Bounds, OpsProperty,
                         ::testing::Values(Bound(0), Bound(1), Bound(2), Bound(3), kInf),
                         [](const auto& info) { return "bound_" + info.param.to_string(); });
