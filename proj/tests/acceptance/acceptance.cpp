// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/evaluator.hpp"
#include "core/graph.hpp"
#include "core/params.hpp"
#include "core/reductions.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace {

using namespace deplogic;
using Clock = std::chrono::steady_clock;

std::string data(const char* name) { return std::string(DEPLOGIC_TEST_DATA) + "/" + name; }

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string run_cli(const std::string& args, int& status) {
  const std::string command = std::string(DEPLOGIC_CLI) + " " + args + " 2>&1";
  std::string out;
  status = -1;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return out;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
  const int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

// Parameter relations checked on every instance the other criteria evaluate.
struct ParameterAudit {
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::string first;

  void operator()(const Structure& s, const Team& t, const Formula& f) {
    ++instances;
    const ParameterReport r = compute_parameters(s, t, f);
    const SyntacticParams& p = r.syntax;
    std::vector<std::string> problems;
    for (auto [name, value] : {std::pair<const char*, std::size_t>{"splits", p.splits},
                               {"foralls", p.foralls},
                               {"arity", p.arity},
                               {"vars", p.vars},
                               {"free_vars", p.free_vars}}) {
      if (p.size < value) problems.push_back(std::string("size < ") + name);
    }
    if (s.size() > 0 && r.treewidth > s.size() - 1) problems.push_back("tw > |A| - 1");
    const auto free = free_variables(f);
    const std::set<std::string> domain(t.domain().begin(), t.domain().end());
    if (domain == free &&
        static_cast<double>(t.size()) >
            std::pow(static_cast<double>(s.size()), static_cast<double>(free.size()))) {
      problems.push_back("|T| > |A|^free_vars");
    }
    if (!parameter_violations(r).empty() && problems.empty()) {
      problems.push_back("library reports a violation the direct check does not");
    }
    if (!problems.empty()) {
      if (violations == 0) first = problems.front() + " on " + to_string(f);
      ++violations;
    }
  }
};

ParameterAudit g_audit;

void observe(const Structure& s, const Team& t, const Formula& f) { g_audit(s, t, f); }

Outcome flights() {
  Outcome out;
  const Structure s = parse_structure(read_file(data("flights.structure")));
  const Team t = parse_team(read_file(data("flights.team")), s);
  struct Case {
    const char* file;
    const char* text;
    bool expected;
  };
  for (const Case& c : {Case{"flight_date_time.formula", "=(Flight, Date, Time; Destination, Gate)", true},
                        Case{"gate_date_time.formula", "=(Gate, Date, Time; Destination, Flight)", true},
                        Case{"destination_gate.formula", "=(Destination, Gate; Time)", false}}) {
    const FormulaPtr f = parse_formula(read_file(data(c.file)), s.vocabulary());
    if (!(*f == *parse_formula(c.text, s.vocabulary()))) out.fail(std::string(c.file) + " content");
    observe(s, t, *f);
    if (check(s, t, *f).satisfied != c.expected) out.fail(std::string(c.text) + " verdict");

    int status = 0;
    const std::string printed = run_cli("check " + data("flights.structure") + " " +
                                            data("flights.team") + " " + data(c.file),
                                        status);
    if (status != (c.expected ? 0 : 1)) out.fail(std::string(c.text) + " CLI exit code");
    if (printed.rfind(c.expected ? "SAT\n" : "UNSAT\n", 0) != 0) out.fail("CLI verdict line");

    if (!c.expected) {
      const auto pair = dependence_violation(s, t, *f->as<DependenceAtom>());
      if (!pair) {
        out.fail("no witness pair");
        continue;
      }
      const Assignment a = t.assignment(pair->first);
      const Assignment b = t.assignment(pair->second);
      const std::set<std::string> flights{s.name(a.at("Flight")), s.name(b.at("Flight"))};
      if (flights != std::set<std::string>{"FIN-70", "FIN-80"}) out.fail("witness flights");
      if (printed.find("witness: Flight=FIN-70 ") == std::string::npos ||
          printed.find("witness: Flight=FIN-80 ") == std::string::npos) {
        out.fail("CLI witness lines");
      }
    }
  }
  return out;
}

Outcome example3() {
  Outcome out;
  const Structure s = parse_structure(read_file(data("example3.structure")));
  const Graph g = gaifman(s);
  std::set<std::pair<std::string, std::string>> expected;
  for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"F7", "F8"}, {"F7", "C1"}, {"F7", "09"}, {"F8", "C1"}, {"F8", "19"},
           {"19", "C1"}, {"09", "C1"}, {"S5", "S6"}, {"S5", "C3"}, {"S5", "12"},
           {"S6", "12"}, {"12", "C2"}, {"12", "C3"}, {"S6", "C2"}}) {
    expected.emplace(std::min(a, b), std::max(a, b));
  }
  std::set<std::pair<std::string, std::string>> actual;
  for (auto [u, v] : g.edges()) {
    actual.emplace(std::min(s.name(u), s.name(v)), std::max(s.name(u), s.name(v)));
  }
  if (g.vertex_count() != 10) out.fail("vertex count");
  if (g.edge_count() != 14 || actual != expected) out.fail("edge set");
  if (testing::gaifman_names(s) != expected) out.fail("oracle edge set");

  const TreewidthResult tw = treewidth_exact(g);
  if (tw.width != 2) out.fail("treewidth_exact = " + std::to_string(tw.width));
  if (testing::treewidth_dp(g) != 2) out.fail("oracle treewidth");

  const TreeDecomposition fig = parse_decomposition(read_file(data("example3.decomposition")), s);
  const ValidationReport report = validate_decomposition(g, fig);
  if (!report.valid) out.fail("decomposition rejected: " + report.message);
  if (fig.width() != 2) out.fail("decomposition width");
  std::vector<std::set<std::size_t>> bags;
  for (const auto& b : fig.bags) bags.emplace_back(b.begin(), b.end());
  if (!testing::is_tree_decomposition(g, bags, fig.tree_edges)) out.fail("oracle rejects decomposition");
  return out;
}

Outcome three_sat(std::size_t& compared) {
  Outcome out;
  std::vector<Cnf> corpus = testing::small_cnfs(3, 2);
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    corpus.push_back(testing::random_cnf(rng, testing::uniform(rng, 1, 4),
                                         testing::uniform(rng, 1, 4)));
  }
  CheckOptions options;
  options.engine = Engine::kOptimized;
  for (const Cnf& cnf : corpus) {
    const Instance instance = reduce_3sat(cnf);
    observe(instance.structure, instance.team, *instance.formula);
    const bool reduced = check(instance.structure, instance.team, *instance.formula, options).satisfied;
    const bool brute = sat_brute(cnf);
    const bool oracle = testing::dpll(cnf);
    ++compared;
    if (reduced != brute || brute != oracle) {
      out.fail("disagreement on\n" + write_dimacs(cnf));
      continue;
    }
    if (!reduced) continue;
    const auto outer = split_witness(instance.structure, instance.team, *instance.formula, options);
    const auto& left = *instance.formula->as<Disjunction>()->left;
    const auto inner = outer ? split_witness(instance.structure, outer->first, left, options)
                             : std::nullopt;
    if (!inner) {
      out.fail("no split witness on\n" + write_dimacs(cnf));
      continue;
    }
    if (!satisfies(cnf, valuation_from_part(cnf, instance.structure, inner->first))) {
      out.fail("extracted valuation fails on\n" + write_dimacs(cnf));
    }
  }
  return out;
}

Outcome pdl(std::size_t& compared) {
  Outcome out;
  testing::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const PdlPtr f = testing::random_pdl(rng, testing::uniform(rng, 1, 3), testing::uniform(rng, 0, 2));
    const Instance instance = reduce_pdl(*f);
    observe(instance.structure, instance.team, *instance.formula);
    const bool reduced = check(instance.structure, instance.team, *instance.formula).satisfied;
    const bool brute = pdl_sat_brute(*f);
    const bool exhaustive = testing::pdl_sat_exhaustive(*f);
    ++compared;
    if (reduced != brute || brute != exhaustive) out.fail("disagreement on " + to_string(*f));
  }
  return out;
}

Outcome engines(std::size_t& compared) {
  Outcome out;
  const auto exhaustive = testing::engine_equivalence_exhaustive(observe);
  const auto random = testing::engine_equivalence_random(5, 500, observe);
  compared = exhaustive.instances + random.instances;
  for (const auto& r : {exhaustive, random}) {
    if (!r.ok()) out.fail(r.name + ": " + r.first_violation);
  }
  if (random.instances != 500) out.fail("random family size");
  return out;
}

Outcome properties(std::string& counts) {
  Outcome out;
  constexpr std::size_t kCount = 1000;
  const std::vector<testing::PropertyReport> reports{
      testing::empty_team_property(61, kCount, observe),
      testing::locality_property(62, kCount, observe),
      testing::downward_closure_property(63, kCount, observe),
      testing::flatness_property(64, kCount, observe),
      testing::sentence_invariance_property(65, kCount, observe),
      testing::dependence_normalization_property(66, kCount, observe),
  };
  for (const auto& r : reports) {
    counts += (counts.empty() ? "" : ", ") + r.name + " " + std::to_string(r.instances);
    if (!r.ok()) out.fail(r.name + ": " + r.first_violation);
    if (r.instances < kCount) out.fail(r.name + " ran too few instances");
  }
  return out;
}

Outcome scaling(double& naive_ratio, double& opt_ratio) {
  Outcome out;
  auto average_ratio = [&](const char* engine) {
    int status = 0;
    const std::string csv = run_cli(std::string("bench team-size --from 2 --to 10 --engine ") + engine, status);
    if (status != 0) out.fail(std::string("bench exit code for ") + engine);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<double> nodes;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream row(line);
      for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
      if (cells.size() != 5 || cells[3] == "budget_exceeded") {
        out.fail("bad bench row: " + line);
        continue;
      }
      nodes.push_back(std::stod(cells[3]));
    }
    if (nodes.size() != 9) out.fail("expected 9 bench rows");
    double sum = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) sum += nodes[i] / nodes[i - 1];
    return nodes.size() < 2 ? 0.0 : sum / static_cast<double>(nodes.size() - 1);
  };
  naive_ratio = average_ratio("naive");
  opt_ratio = average_ratio("opt");
  if (naive_ratio < 2.5 || naive_ratio > 3.5) out.fail("naive ratio out of range");
  if (opt_ratio < 1.8 || opt_ratio > 2.2) out.fail("optimized ratio out of range");
  return out;
}

// limit_seconds <= 0 means the criterion has no time limit.
bool report(int number, const std::string& title, double limit_seconds,
            const std::function<Outcome(std::string&)>& body) {
  const auto start = Clock::now();
  Outcome out;
  std::string note;
  try {
    out = body(note);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0 && seconds >= limit_seconds) out.fail("time limit exceeded");
  char limit[32] = "no time limit";
  if (limit_seconds > 0) std::snprintf(limit, sizeof limit, "limit %.0f s", limit_seconds);
  std::printf("%s %d %s (%.3f s, %s)%s%s\n", out.ok ? "PASS" : "FAIL", number, title.c_str(),
              seconds, limit, note.empty() ? "" : ": ", note.c_str());
  if (!out.ok) std::printf("     %s\n", out.detail.c_str());
  std::fflush(stdout);
  return out.ok;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "flight table dependence checks", 1, [](std::string&) { return flights(); });
  ok &= report(2, "Gaifman graph, treewidth and decomposition of the flight structure", 1,
               [](std::string&) { return example3(); });
  ok &= report(3, "3-SAT reduction against brute force and DPLL", 300, [](std::string& note) {
    std::size_t n = 0;
    Outcome o = three_sat(n);
    note = std::to_string(n) + " CNFs";
    return o;
  });
  ok &= report(4, "PDL reduction against brute force and team enumeration", 120, [](std::string& note) {
    std::size_t n = 0;
    Outcome o = pdl(n);
    note = std::to_string(n) + " formulas";
    return o;
  });
  ok &= report(5, "naive and optimized engines agree", 600, [](std::string& note) {
    std::size_t n = 0;
    Outcome o = engines(n);
    note = std::to_string(n) + " instances";
    return o;
  });
  ok &= report(6, "team-semantic property suites", 0, [](std::string& note) { return properties(note); });
  ok &= report(7, "parameter relations on all instances above", 0, [](std::string& note) {
    Outcome o;
    note = std::to_string(g_audit.instances) + " instances";
    if (g_audit.violations != 0) {
      o.fail(std::to_string(g_audit.violations) + " violations, first: " + g_audit.first);
    }
    if (g_audit.instances == 0) o.fail("no instances observed");
    return o;
  });
  ok &= report(8, "bench node growth per added team row", 300, [](std::string& note) {
    double naive = 0, opt = 0;
    Outcome o = scaling(naive, opt);
    char buffer[96];
    std::snprintf(buffer, sizeof buffer, "naive %.3f, opt %.3f", naive, opt);
    note = buffer;
    return o;
  });
  return ok ? 0 : 1;
}
