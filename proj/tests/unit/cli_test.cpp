#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string data(const char* name) { return std::string(DEPLOGIC_TEST_DATA) + "/" + name; }

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(DEPLOGIC_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("deplogic_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& contents) {
    auto p = dir_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }

  std::string flights(const char* formula) {
    return "check " + data("flights.structure") + " " + data("flights.team") + " " +
           data(formula);
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, CheckExitCodes) {
  auto sat = run(flights("flight_date_time.formula"));
  EXPECT_EQ(sat.status, 0);
  EXPECT_EQ(sat.out.rfind("SAT\nengine=opt\nnodes=", 0), 0u) << sat.out;

  auto unsat = run(flights("destination_gate.formula"));
  EXPECT_EQ(unsat.status, 1);
  EXPECT_EQ(unsat.out.rfind("UNSAT\n", 0), 0u);
  EXPECT_NE(unsat.out.find("witness: Flight=FIN-70 Destination=HEL--FI Gate=C1 "
                           "Date=04.10.2021 Time=09:55"),
            std::string::npos)
      << unsat.out;
  EXPECT_NE(unsat.out.find("witness: Flight=FIN-80 Destination=HEL--FI Gate=C1 "
                           "Date=04.10.2021 Time=19:55"),
            std::string::npos);

  auto naive = run(flights("gate_date_time.formula") + " --engine naive --threads 2");
  EXPECT_EQ(naive.status, 0);
  EXPECT_NE(naive.out.find("engine=naive"), std::string::npos);
}

TEST_F(CliTest, UsageAndParseErrors) {
  auto missing = file("missing.formula", "Departs(Flight)\n");
  auto r = run("check " + data("flights.structure") + " " + data("flights.team") + " " + missing);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("unknown symbol"), std::string::npos) << r.out;

  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run(flights("flight_date_time.formula") + " --engine quantum").status, 2);
  EXPECT_EQ(run("check /nonexistent a b").status, 2);
  EXPECT_EQ(run("--help").status, 0);

  auto fo = run(flights("flight_date_time.formula") + " --engine fo");
  EXPECT_EQ(fo.status, 2);
  auto domain = file("domain.formula", "=(Pilot; Gate)\n");
  EXPECT_EQ(run("check " + data("flights.structure") + " " + data("flights.team") + " " + domain)
                .status,
            2);
}

TEST_F(CliTest, BudgetExit) {
  auto s = file("s", "universe: a b c d\nrelation R/1: a\n");
  auto t = file("t", "x y\na a\na b\nb c\nc d\nd a\nb b\nc c\nd d\nb a\nc b\n");
  auto f = file("f", "R(x) | R(y) | =(x; y)\n");
  auto r = run("check " + s + " " + t + " " + f + " --engine naive --budget 100");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.out.find("budget"), std::string::npos);
}

TEST_F(CliTest, Params) {
  auto unit = file("unit.team", "-\n-\n");
  auto sentence = file("sentence.formula", "forall x exists y S(x, y) | exists z R(z, z, z)\n");
  auto decomposition = (dir_ / "out.decomposition").string();
  auto r = run("params " + data("example3.structure") + " " + unit + " " + sentence +
               " --write-decomposition " + decomposition + " --check-decomposition " +
               data("example3.decomposition"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("\nfree_vars=0\n"), std::string::npos);
  EXPECT_NE(r.out.find("\ntw=2\ntw_kind=exact\n"), std::string::npos);
  EXPECT_NE(r.out.find("decomposition_valid=true\ndecomposition_width=2\n"), std::string::npos);

  auto check = run("params " + data("example3.structure") + " " + unit + " " + sentence +
                   " --check-decomposition " + decomposition);
  EXPECT_NE(check.out.find("decomposition_valid=true\ndecomposition_width=2\n"),
            std::string::npos);

  auto broken = file("broken.decomposition", "bag 0: F7 F8 C1\n");
  auto bad = run("params " + data("example3.structure") + " " + unit + " " + sentence +
                 " --check-decomposition " + broken);
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("decomposition_valid=false"), std::string::npos);

  auto limited = run("params " + data("example3.structure") + " " + unit + " " + sentence +
                     " --exact-limit 4");
  EXPECT_NE(limited.out.find("tw_kind=upper-bound"), std::string::npos);
}

TEST_F(CliTest, ReduceRoundTrip) {
  auto prefix = (dir_ / "t3").string();
  auto r = run("reduce 3sat " + data("table3.cnf") + " " + prefix);
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(slurp(prefix + ".team"), "x y u v\np1 1 1 0\np2 0 1 1\np3 0 1 2\n");
  EXPECT_EQ(run("check " + prefix + ".structure " + prefix + ".team " + prefix + ".formula").status,
            0);
  auto p = run("params " + prefix + ".structure " + prefix + ".team " + prefix + ".formula");
  EXPECT_EQ(p.status, 0);
  EXPECT_NE(p.out.find("splits=2\nforalls=0\narity=1\nvars=4\nfree_vars=4\n"),
            std::string::npos)
      << p.out;

  auto u = (dir_ / "u").string();
  ASSERT_EQ(run("reduce 3sat " + data("unsat2.cnf") + " " + u).status, 0);
  EXPECT_EQ(run("check " + u + ".structure " + u + ".team " + u + ".formula").status, 1);

  auto pdl = (dir_ / "p").string();
  ASSERT_EQ(run("reduce pdl " + data("p1.pdl") + " " + pdl).status, 0);
  EXPECT_EQ(slurp(pdl + ".formula"), "exists x1 TRUE(x1)\n");
  EXPECT_EQ(run("check " + pdl + ".structure " + pdl + ".team " + pdl + ".formula").status, 0);

  auto bad = file("bad.cnf", "p cnf 2 1\n1 2 0\n");
  EXPECT_EQ(run("reduce 3sat " + bad + " " + prefix).status, 2);
  auto bad_pdl = file("bad.pdl", "p1 & (\n");
  EXPECT_EQ(run("reduce pdl " + bad_pdl + " " + prefix).status, 2);
  EXPECT_EQ(run("reduce 4sat " + data("table3.cnf") + " " + prefix).status, 2);
}

TEST_F(CliTest, Bench) {
  auto r = run("bench team-size --from 2 --to 4 --engine naive");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("param,value,engine,nodes,millis\nteam-size,2,naive,11,", 0), 0u) << r.out;
  auto empty = run("bench splits --from 4 --to 3");
  EXPECT_EQ(empty.out, "param,value,engine,nodes,millis\n");
  auto csv = (dir_ / "out.csv").string();
  ASSERT_EQ(run("bench universe-size --from 2 --to 3 --seed 9 -o " + csv).status, 0);
  EXPECT_EQ(slurp(csv).rfind("param,value,engine,nodes,millis\nuniverse-size,2,opt,", 0), 0u);
  EXPECT_EQ(run("bench cubes").status, 2);
}

}  // namespace
