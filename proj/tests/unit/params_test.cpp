#include <gtest/gtest.h>

#include "core/error.hpp"
#include "core/params.hpp"
#include "core/reductions.hpp"

namespace deplogic {

namespace {

std::string data(const char* name) { return std::string(DEPLOGIC_TEST_DATA) + "/" + name; }

}  // namespace

TEST(ParamsTest, ReducedFourClauseCnf) {
  auto cnf = parse_dimacs("p cnf 4 4\n1 2 3 0\n-1 2 4 0\n1 -3 -4 0\n-2 3 4 0\n");
  auto instance = reduce_3sat(cnf);
  auto r = compute_parameters(instance.structure, instance.team, *instance.formula);
  EXPECT_EQ(r.syntax.splits, 2u);
  EXPECT_EQ(r.syntax.foralls, 0u);
  EXPECT_EQ(r.syntax.arity, 1u);
  EXPECT_EQ(r.syntax.free_vars, 4u);
  EXPECT_EQ(r.syntax.vars, 4u);
  EXPECT_EQ(r.team_size, 12u);
  EXPECT_EQ(r.treewidth, 0u);
  EXPECT_TRUE(r.treewidth_exact);
  EXPECT_TRUE(r.team_domain_is_free_vars);
  EXPECT_TRUE(parameter_violations(r).empty());
}

TEST(ParamsTest, Example3Treewidth) {
  auto s = parse_structure(read_file(data("example3.structure")));
  auto f = parse_formula("exists x exists y S(x, y)", s.vocabulary());
  auto r = compute_parameters(s, Team::unit(), *f);
  EXPECT_EQ(r.treewidth, 2u);
  EXPECT_TRUE(r.treewidth_exact);
  EXPECT_EQ(r.structure_size, 10u);
  EXPECT_EQ(r.syntax.free_vars, 0u);
  EXPECT_TRUE(parameter_violations(r).empty());
  EXPECT_EQ(format_parameters(r),
            "splits=0\nforalls=0\narity=0\nvars=2\nfree_vars=0\nformula_size=5\n"
            "structure_size=10\nteam_size=1\ntw=2\ntw_kind=exact\n");
}

TEST(ParamsTest, UpperBoundAboveLimit) {
  auto s = parse_structure(read_file(data("example3.structure")));
  auto f = parse_formula("S(x, y)", s.vocabulary());
  Team t({"x", "y"}, {{0, 1}});
  ParameterOptions options;
  options.exact_limit = 5;
  auto r = compute_parameters(s, t, *f, options);
  EXPECT_FALSE(r.treewidth_exact);
  EXPECT_GE(r.treewidth, 2u);
  EXPECT_NE(format_parameters(r).find("tw_kind=upper-bound"), std::string::npos);
}

TEST(ParamsTest, FunctionEdgesOptIn) {
  auto s = parse_structure("universe: a b c\nfunction f/1: a->b b->c c->a\n");
  auto f = parse_formula("f(x) = x", s.vocabulary());
  Team t({"x"}, {{0}});
  EXPECT_EQ(compute_parameters(s, t, *f).treewidth, 0u);
  ParameterOptions options;
  options.gaifman.include_functions = true;
  EXPECT_EQ(compute_parameters(s, t, *f, options).treewidth, 2u);
}

TEST(ParamsTest, TeamDomainFlag) {
  auto s = parse_structure("universe: a b\nrelation P/1: a\n");
  auto f = parse_formula("P(x)", s.vocabulary());
  EXPECT_TRUE(compute_parameters(s, Team({"x"}, {{0}}), *f).team_domain_is_free_vars);
  EXPECT_FALSE(compute_parameters(s, Team({"x", "y"}, {{0, 1}}), *f).team_domain_is_free_vars);
}

TEST(ParamsTest, ViolationsAreReported) {
  ParameterReport r;
  r.syntax.size = 3;
  r.syntax.splits = 5;
  r.syntax.vars = 2;
  r.syntax.free_vars = 3;
  r.structure_size = 2;
  r.treewidth = 2;
  r.team_size = 9;
  r.team_domain_is_free_vars = true;
  auto v = parameter_violations(r);
  EXPECT_GE(v.size(), 4u);

  ParameterReport fine;
  fine.syntax.size = 1;
  fine.structure_size = 1;
  fine.team_size = 1;
  fine.team_domain_is_free_vars = true;
  EXPECT_TRUE(parameter_violations(fine).empty());
}

}  // namespace deplogic
