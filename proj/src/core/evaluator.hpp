#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "core/model.hpp"
#include "core/syntax.hpp"

namespace deplogic {

// naive:     splits range over all covers T0 ∪ T1 = T and ∃ over all
//            set-valued supplementing functions (lax semantics).
// optimized: splits range over partitions and ∃ over singleton-valued
//            functions, with memoisation of (subformula, team) results.
// fo_tarski: row-wise classical evaluation; dependence-atom-free only.
// auto:      fo_tarski for dependence-atom-free formulas, else optimized.
enum class Engine { kNaive, kOptimized, kFoTarski, kAuto };

std::string_view engine_name(Engine engine);
std::optional<Engine> parse_engine(std::string_view name);

struct CheckOptions {
  Engine engine = Engine::kAuto;
  // Node expansions allowed before the check fails with ErrorCode::kBudget.
  std::uint64_t budget = 100'000'000;
  // Workers for the outermost split/existential search.
  unsigned threads = 1;
};

struct CheckResult {
  bool satisfied = false;
  Engine engine = Engine::kAuto;  // engine actually run, never kAuto
  std::uint64_t nodes = 0;
};

// Decides (A, T) |= formula. The team domain must contain Fr(formula); extra
// columns are allowed. Throws Error with kDomain, kEngine, kBudget, or the
// symbol errors of validate().
CheckResult check(const Structure& structure, const Team& team,
                  const Formula& formula, const CheckOptions& options = {});

// Classical satisfaction of a dependence-atom-free formula under a single
// assignment. Work is bounded by |formula| * |A|^vars(formula).
bool check_fo_tarski(const Structure& structure, const Assignment& assignment,
                     const Formula& formula);

Engine choose_engine(const SyntacticParams& params, const Formula& formula);

// For a formula whose root is a split, the first cover (T0, T1) found by the
// engine's enumeration with T0 |= left and T1 |= right, or nullopt if the
// team does not satisfy the split.
std::optional<std::pair<Team, Team>> split_witness(const Structure& structure,
                                                   const Team& team,
                                                   const Formula& disjunction,
                                                   const CheckOptions& options = {});

// First pair of rows (by row order) that agree on the antecedent but differ
// on the consequent.
std::optional<std::pair<std::size_t, std::size_t>> dependence_violation(
    const Structure& structure, const Team& team, const DependenceAtom& atom);

}  // namespace deplogic
