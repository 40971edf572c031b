#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/evaluator.hpp"
#include "core/reductions.hpp"

namespace deplogic {

// team-size:     n distinct values of x, formula R(x) | R(x) with R empty.
// universe-size: |A| = n, two rows of x, formula exists y (=(;y) & y = x).
// splits:        three rows of x, n splits chaining n+1 copies of R(x).
// Every instance is unsatisfiable for n >= 1, so the engines exhaust their
// search space and node counts show the raw scaling.
enum class BenchFamily { kTeamSize, kUniverseSize, kSplits };

std::string_view family_name(BenchFamily family);
std::optional<BenchFamily> parse_family(std::string_view name);

// Throws Error(kInvalid) for universe-size values below 2.
Instance bench_instance(BenchFamily family, std::size_t value, std::uint64_t seed);

struct BenchOptions {
  BenchFamily family = BenchFamily::kTeamSize;
  std::size_t from = 0;
  std::size_t to = 0;  // inclusive; from > to is an empty range
  Engine engine = Engine::kOptimized;
  std::uint64_t seed = 0;
  std::uint64_t budget = 100'000'000;
};

struct BenchRow {
  BenchFamily family;
  std::size_t value = 0;
  Engine engine = Engine::kOptimized;
  std::optional<std::uint64_t> nodes;  // nullopt: budget exceeded
  double millis = 0;
};

std::vector<BenchRow> run_bench(const BenchOptions& options);

// Header "param,value,engine,nodes,millis"; budget overruns are written as
// nodes=budget_exceeded.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace deplogic
