#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/model.hpp"
#include "core/syntax.hpp"

namespace deplogic {

struct Literal {
  std::size_t variable = 1;  // 1-based
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

// 3-CNF: every clause has exactly three literals over variables 1..variables.
struct Cnf {
  std::size_t variables = 0;
  std::vector<Clause> clauses;
};

// Throws Error(kInvalid) on a variable index outside 1..variables.
void validate(const Cnf& cnf);

// DIMACS "p cnf n m" input. Clauses must have exactly three literals.
Cnf parse_dimacs(std::string_view text);
std::string write_dimacs(const Cnf& cnf);

struct Instance {
  Structure structure;
  Team team;
  FormulaPtr formula;
};

// 3-SAT reduction: empty vocabulary, universe p1..pn followed by 0..max(m,2),
// one team row (x=variable, y=parity, u=clause, v=position) per literal, and
// the fixed formula =(x;y) | =(u;v) | =(u;v).
Instance reduce_3sat(const Cnf& cnf);
FormulaPtr three_sat_formula();

inline constexpr std::size_t kSatBruteLimit = 20;

// Exhaustive over all 2^n valuations; throws Error(kLimit) above the cap.
bool sat_brute(const Cnf& cnf);

// Valuation (index j-1 for variable j) that sets p_j true iff some row of
// `part` has x = p_j and y = 1.
std::vector<bool> valuation_from_part(const Cnf& cnf, const Structure& structure,
                                      const Team& part);
bool satisfies(const Cnf& cnf, const std::vector<bool>& valuation);

// Propositional dependence logic in negation normal form.
class PdlFormula;
using PdlPtr = std::shared_ptr<const PdlFormula>;

struct PdlLiteral {
  std::string proposition;
  bool positive = true;
};

struct PdlDependence {
  std::vector<std::string> antecedent;
  std::vector<std::string> consequent;
};

struct PdlAnd {
  PdlPtr left;
  PdlPtr right;
};

struct PdlOr {
  PdlPtr left;
  PdlPtr right;
};

class PdlFormula {
 public:
  using Node = std::variant<PdlLiteral, PdlDependence, PdlAnd, PdlOr>;

  explicit PdlFormula(Node node) : node_(std::move(node)) {}
  const Node& node() const noexcept { return node_; }

 private:
  Node node_;
};

PdlPtr make_pdl_literal(std::string proposition, bool positive = true);
PdlPtr make_pdl_dependence(std::vector<std::string> antecedent,
                           std::vector<std::string> consequent);
PdlPtr make_pdl_and(PdlPtr left, PdlPtr right);
PdlPtr make_pdl_or(PdlPtr left, PdlPtr right);

// Same concrete syntax as first-order formulas, with bare propositions as
// atoms: "p1 & !p2 | =(p1;p2)". No quantifiers, equality or relations.
PdlPtr parse_pdl(std::string_view text);
std::string to_string(const PdlFormula& formula);

// Propositions of the formula in natural order (p2 before p10).
std::vector<std::string> propositions(const PdlFormula& formula);

// A set of boolean assignments; bit i of a row is the value of
// propositions[i].
struct PropTeam {
  std::vector<std::string> propositions;
  std::vector<std::uint64_t> rows;
};

// Team semantics restricted to propositional atoms. Splits range over
// partitions, which is equivalent to covers by downward closure. Throws
// Error(kDomain) if the team does not assign a proposition of the formula.
bool pdl_check(const PropTeam& team, const PdlFormula& formula);

inline constexpr std::size_t kPdlBruteLimit = 10;

// Nonempty-team satisfiability: true iff some singleton team satisfies the
// formula (2^n checks).
bool pdl_sat_brute(const PdlFormula& formula);

// Universe {0,1} with TRUE = {1}, team {∅}, and the formula
// exists x1 ... exists xn φ' where p_i becomes TRUE(x_i).
Instance reduce_pdl(const PdlFormula& formula);

}  // namespace deplogic
