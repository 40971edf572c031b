#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "deplogic/deplogic.h"

namespace {

std::string data(const char* name) { return std::string(DEPLOGIC_TEST_DATA) + "/" + name; }

std::string take(char* text) {
  std::string out = text == nullptr ? "" : text;
  dl_string_free(text);
  return out;
}

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(dl_structure_read(data("flights.structure").c_str(), &flights_), DL_OK)
        << dl_last_error();
    ASSERT_EQ(dl_team_read(flights_, data("flights.team").c_str(), &table_), DL_OK)
        << dl_last_error();
  }

  void TearDown() override {
    dl_team_free(table_);
    dl_structure_free(flights_);
  }

  dl_structure* flights_ = nullptr;
  dl_team* table_ = nullptr;
};

TEST_F(CApiTest, CheckFlightTable) {
  dl_formula* f = nullptr;
  ASSERT_EQ(dl_formula_parse(flights_, "=(Destination, Gate; Time)", &f), DL_OK);
  dl_check_options options;
  dl_check_options_init(&options);
  EXPECT_EQ(options.engine, DL_ENGINE_AUTO);
  dl_check_result result;
  ASSERT_EQ(dl_check(flights_, table_, f, &options, &result), DL_OK);
  EXPECT_EQ(result.satisfied, 0);
  EXPECT_EQ(result.engine, DL_ENGINE_OPTIMIZED);

  char* witness = nullptr;
  ASSERT_EQ(dl_dependence_witness(flights_, table_, f, &witness), DL_OK);
  std::string text = take(witness);
  EXPECT_NE(text.find("Flight=FIN-70"), std::string::npos);
  EXPECT_NE(text.find("Flight=FIN-80"), std::string::npos);
  dl_formula_free(f);

  ASSERT_EQ(dl_formula_parse(flights_, "=(Flight, Date, Time; Destination, Gate)", &f), DL_OK);
  options.engine = DL_ENGINE_NAIVE;
  ASSERT_EQ(dl_check(flights_, table_, f, &options, &result), DL_OK);
  EXPECT_EQ(result.satisfied, 1);
  EXPECT_EQ(result.engine, DL_ENGINE_NAIVE);
  ASSERT_EQ(dl_dependence_witness(flights_, table_, f, &witness), DL_OK);
  EXPECT_EQ(witness, nullptr);
  dl_formula_free(f);
}

TEST_F(CApiTest, ErrorCodes) {
  dl_formula* f = nullptr;
  EXPECT_EQ(dl_formula_parse(flights_, "R(Flight)", &f), DL_ERR_UNKNOWN_SYMBOL);
  EXPECT_NE(std::strlen(dl_last_error()), 0u);
  EXPECT_EQ(dl_formula_parse(flights_, "Flight = ", &f), DL_ERR_SYNTAX);
  EXPECT_EQ(dl_formula_parse(flights_, "!(Flight = Gate)", &f), DL_ERR_NEGATION);
  EXPECT_EQ(f, nullptr);

  ASSERT_EQ(dl_formula_parse(flights_, "=(Pilot; Gate)", &f), DL_OK);
  dl_check_result result;
  EXPECT_EQ(dl_check(flights_, table_, f, nullptr, &result), DL_ERR_DOMAIN);
  dl_formula_free(f);

  ASSERT_EQ(dl_formula_parse(flights_, "=(Flight; Gate)", &f), DL_OK);
  dl_check_options options;
  dl_check_options_init(&options);
  options.engine = DL_ENGINE_FO;
  EXPECT_EQ(dl_check(flights_, table_, f, &options, &result), DL_ERR_ENGINE);
  char* witness = nullptr;
  dl_formula* eq = nullptr;
  ASSERT_EQ(dl_formula_parse(flights_, "Flight = Gate", &eq), DL_OK);
  EXPECT_EQ(dl_dependence_witness(flights_, table_, eq, &witness), DL_ERR_INVALID);
  dl_formula_free(eq);
  dl_formula_free(f);

  dl_structure* s = nullptr;
  EXPECT_EQ(dl_structure_read("/nonexistent/file", &s), DL_ERR_IO);
  EXPECT_EQ(dl_structure_parse("universe: a\nrelation R/1: b\n", &s), DL_ERR_SYNTAX);
  EXPECT_EQ(dl_structure_parse(nullptr, &s), DL_ERR_INVALID);
  EXPECT_EQ(s, nullptr);

  dl_engine engine;
  EXPECT_EQ(dl_engine_parse("opt", &engine), DL_OK);
  EXPECT_EQ(engine, DL_ENGINE_OPTIMIZED);
  EXPECT_EQ(dl_engine_parse("quantum", &engine), DL_ERR_INVALID);
  EXPECT_STREQ(dl_engine_name(DL_ENGINE_FO), "fo");
  EXPECT_STREQ(dl_status_name(DL_ERR_BUDGET), "budget exceeded");
}

TEST_F(CApiTest, Budget) {
  dl_structure* s = nullptr;
  ASSERT_EQ(dl_structure_parse("universe: a b c d\nrelation R/1: a\n", &s), DL_OK);
  dl_team* t = nullptr;
  ASSERT_EQ(dl_team_parse(s, "x y\na a\na b\nb c\nc d\nd a\nb b\nc c\nd d\nb a\nc b\n", &t),
            DL_OK);
  dl_formula* f = nullptr;
  ASSERT_EQ(dl_formula_parse(s, "R(x) | R(y) | =(x; y)", &f), DL_OK);
  dl_check_options options;
  dl_check_options_init(&options);
  options.engine = DL_ENGINE_NAIVE;
  options.budget = 100;
  dl_check_result result;
  EXPECT_EQ(dl_check(s, t, f, &options, &result), DL_ERR_BUDGET);
  dl_formula_free(f);
  dl_team_free(t);
  dl_structure_free(s);
}

TEST_F(CApiTest, TeamsAndStructures) {
  EXPECT_EQ(dl_team_size(table_), 8u);
  EXPECT_EQ(dl_structure_size(flights_), 26u);
  char* text = nullptr;
  ASSERT_EQ(dl_team_write(flights_, table_, &text), DL_OK);
  std::string written = take(text);
  dl_team* again = nullptr;
  ASSERT_EQ(dl_team_parse(flights_, written.c_str(), &again), DL_OK);
  EXPECT_EQ(dl_team_size(again), 8u);
  dl_team_free(again);

  dl_team* unit = nullptr;
  ASSERT_EQ(dl_team_unit(&unit), DL_OK);
  EXPECT_EQ(dl_team_size(unit), 1u);
  ASSERT_EQ(dl_team_write(flights_, unit, &text), DL_OK);
  EXPECT_EQ(take(text), "-\n-\n");
  dl_team_free(unit);

  ASSERT_EQ(dl_structure_write(flights_, &text), DL_OK);
  EXPECT_EQ(take(text).rfind("universe: FIN-70 ", 0), 0u);
}

TEST(CApiStandalone, Params) {
  dl_structure* s = nullptr;
  ASSERT_EQ(dl_structure_read(data("example3.structure").c_str(), &s), DL_OK);
  dl_team* t = nullptr;
  ASSERT_EQ(dl_team_unit(&t), DL_OK);
  dl_formula* f = nullptr;
  ASSERT_EQ(dl_formula_parse(s, "forall x exists y (S(x, y) | R(x, y, y))", &f), DL_OK);
  dl_params_options options;
  dl_params_options_init(&options);
  EXPECT_EQ(options.exact_limit, 20u);
  dl_params p;
  ASSERT_EQ(dl_params_compute(s, t, f, &options, &p), DL_OK);
  EXPECT_EQ(p.treewidth, 2u);
  EXPECT_EQ(p.treewidth_exact, 1);
  EXPECT_EQ(p.splits, 1u);
  EXPECT_EQ(p.foralls, 1u);
  EXPECT_EQ(p.free_vars, 0u);
  char* text = nullptr;
  ASSERT_EQ(dl_params_format(&p, &text), DL_OK);
  EXPECT_NE(take(text).find("tw=2\ntw_kind=exact\n"), std::string::npos);
  ASSERT_EQ(dl_params_violations(&p, &text), DL_OK);
  EXPECT_EQ(take(text), "");

  char* decomposition = nullptr;
  uint64_t width = 0;
  int exact = 0;
  ASSERT_EQ(dl_decomposition_compute(s, &options, &decomposition, &width, &exact), DL_OK);
  EXPECT_EQ(width, 2u);
  EXPECT_EQ(exact, 1);
  std::string d = take(decomposition);
  int valid = 0;
  char* message = nullptr;
  ASSERT_EQ(dl_decomposition_validate(s, &options, d.c_str(), &valid, &width, &message), DL_OK);
  take(message);
  EXPECT_EQ(valid, 1);
  ASSERT_EQ(dl_decomposition_validate(s, &options, "bag 0: F7 F8\n", &valid, &width, &message),
            DL_OK);
  EXPECT_EQ(valid, 0);
  EXPECT_NE(take(message).size(), 0u);

  dl_formula_free(f);
  dl_team_free(t);
  dl_structure_free(s);
}

TEST(CApiStandalone, Reductions) {
  dl_structure* s = nullptr;
  dl_team* t = nullptr;
  dl_formula* f = nullptr;
  ASSERT_EQ(dl_reduce_3sat("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n", &s, &t, &f), DL_OK);
  dl_check_result result;
  ASSERT_EQ(dl_check(s, t, f, nullptr, &result), DL_OK);
  EXPECT_EQ(result.satisfied, 0);
  int sat = 1;
  ASSERT_EQ(dl_sat_brute("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n", &sat), DL_OK);
  EXPECT_EQ(sat, 0);
  dl_formula_free(f);
  dl_team_free(t);
  dl_structure_free(s);

  EXPECT_EQ(dl_reduce_3sat("p cnf 1 1\n1 1 0\n", &s, &t, &f), DL_ERR_INVALID);

  ASSERT_EQ(dl_reduce_pdl("p1", &s, &t, &f), DL_OK);
  char* text = nullptr;
  ASSERT_EQ(dl_formula_write(f, &text), DL_OK);
  EXPECT_EQ(take(text), "exists x1 TRUE(x1)");
  ASSERT_EQ(dl_check(s, t, f, nullptr, &result), DL_OK);
  EXPECT_EQ(result.satisfied, 1);
  ASSERT_EQ(dl_pdl_sat_brute("p1 & !p1", &sat), DL_OK);
  EXPECT_EQ(sat, 0);
  dl_formula_free(f);
  dl_team_free(t);
  dl_structure_free(s);
}

TEST(CApiStandalone, Bench) {
  char* csv = nullptr;
  ASSERT_EQ(dl_bench("team-size", 2, 3, DL_ENGINE_NAIVE, 0, 0, &csv), DL_OK);
  std::string text = take(csv);
  EXPECT_EQ(text.rfind("param,value,engine,nodes,millis\nteam-size,2,naive,11,", 0), 0u);
  EXPECT_EQ(dl_bench("formula-size", 2, 3, DL_ENGINE_NAIVE, 0, 0, &csv), DL_ERR_INVALID);
  ASSERT_EQ(dl_bench("splits", 3, 2, DL_ENGINE_OPTIMIZED, 0, 0, &csv), DL_OK);
  EXPECT_EQ(take(csv), "param,value,engine,nodes,millis\n");
}

TEST(CApiStandalone, Version) { EXPECT_STREQ(dl_version(), "1.0.0"); }

}  // namespace
