#include "core/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>

#include "core/error.hpp"

namespace deplogic {

namespace {

// Element names a0..a{n-1} in a seed-dependent order.
std::vector<std::string> shuffled_universe(std::size_t n, std::uint64_t seed) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "a" + std::to_string(i);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(names[i - 1], names[rng() % i]);
  }
  return names;
}

Structure universe_with_empty_r(std::size_t n, std::uint64_t seed) {
  Structure s(shuffled_universe(n, seed));
  s.add_relation("R", 1, {});
  return s;
}

Team column_team(const Structure& s, std::size_t rows) {
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < rows; ++i) {
    out.push_back({*s.find("a" + std::to_string(i))});
  }
  return Team({"x"}, std::move(out));
}

FormulaPtr r_of_x() { return make_relation("R", {Term::variable("x")}); }

}  // namespace

std::string_view family_name(BenchFamily family) {
  switch (family) {
    case BenchFamily::kTeamSize: return "team-size";
    case BenchFamily::kUniverseSize: return "universe-size";
    case BenchFamily::kSplits: return "splits";
  }
  return "team-size";
}

std::optional<BenchFamily> parse_family(std::string_view name) {
  if (name == "team-size") return BenchFamily::kTeamSize;
  if (name == "universe-size") return BenchFamily::kUniverseSize;
  if (name == "splits") return BenchFamily::kSplits;
  return std::nullopt;
}

Instance bench_instance(BenchFamily family, std::size_t value, std::uint64_t seed) {
  switch (family) {
    case BenchFamily::kTeamSize: {
      Structure s = universe_with_empty_r(std::max<std::size_t>(value, 1), seed);
      Team t = column_team(s, value);
      return Instance{std::move(s), std::move(t), make_or(r_of_x(), r_of_x())};
    }
    case BenchFamily::kUniverseSize: {
      if (value < 2) {
        throw Error(ErrorCode::kInvalid, "universe-size family needs values >= 2");
      }
      Structure s(shuffled_universe(value, seed));
      Team t = column_team(s, 2);
      FormulaPtr body = make_and(make_dependence({}, {Term::variable("y")}),
                                 make_equality(Term::variable("y"), Term::variable("x")));
      return Instance{std::move(s), std::move(t), make_exists("y", std::move(body))};
    }
    case BenchFamily::kSplits: {
      Structure s = universe_with_empty_r(3, seed);
      Team t = column_team(s, 3);
      FormulaPtr f = r_of_x();
      for (std::size_t i = 0; i < value; ++i) f = make_or(std::move(f), r_of_x());
      return Instance{std::move(s), std::move(t), std::move(f)};
    }
  }
  throw Error(ErrorCode::kInvalid, "unknown bench family");
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (std::size_t v = options.from; v <= options.to && options.from <= options.to; ++v) {
    const Instance inst = bench_instance(options.family, v, options.seed);
    CheckOptions check_options;
    check_options.engine = options.engine;
    check_options.budget = options.budget;
    BenchRow row{options.family, v, options.engine, std::nullopt, 0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const CheckResult r = check(inst.structure, inst.team, *inst.formula, check_options);
      row.nodes = r.nodes;
      row.engine = r.engine;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudget) throw;
    }
    row.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    rows.push_back(row);
    if (v == options.to) break;
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "param,value,engine,nodes,millis\n";
  for (const BenchRow& r : rows) {
    char millis[32];
    std::snprintf(millis, sizeof millis, "%.3f", r.millis);
    out += std::string(family_name(r.family)) + "," + std::to_string(r.value) + "," +
           std::string(engine_name(r.engine)) + "," +
           (r.nodes ? std::to_string(*r.nodes) : std::string("budget_exceeded")) + "," +
           millis + "\n";
  }
  return out;
}

}  // namespace deplogic
