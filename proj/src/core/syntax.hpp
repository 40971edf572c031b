#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace deplogic {

// Symbols a formula may mention, with their arities. Equality is built in.
struct Vocabulary {
  std::map<std::string, std::size_t, std::less<>> relations;
  std::map<std::string, std::size_t, std::less<>> functions;
  std::set<std::string, std::less<>> constants;
};

struct Term {
  enum class Kind { kVariable, kConstant, kFunction };

  Kind kind = Kind::kVariable;
  std::string symbol;
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term function(std::string name, std::vector<Term> args);

  friend bool operator==(const Term&, const Term&) = default;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Equality {
  Term lhs;
  Term rhs;
};

struct RelationAtom {
  std::string relation;
  std::vector<Term> args;
  bool negated = false;
};

// dep(antecedent; consequent). An empty antecedent is a constancy atom.
struct DependenceAtom {
  std::vector<Term> antecedent;
  std::vector<Term> consequent;
};

struct Conjunction {
  FormulaPtr left;
  FormulaPtr right;
};

// Team-semantic split.
struct Disjunction {
  FormulaPtr left;
  FormulaPtr right;
};

struct Existential {
  std::string variable;
  FormulaPtr body;
};

struct Universal {
  std::string variable;
  FormulaPtr body;
};

// Immutable dependence-logic formula in negation normal form. Children are
// shared, so subformulas can be reused freely across threads.
class Formula {
 public:
  using Node = std::variant<Equality, RelationAtom, DependenceAtom, Conjunction,
                            Disjunction, Existential, Universal>;

  explicit Formula(Node node) : node_(std::move(node)) {}

  const Node& node() const noexcept { return node_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
};

// Structural equality.
bool operator==(const Formula& a, const Formula& b);

FormulaPtr make_equality(Term lhs, Term rhs);
FormulaPtr make_relation(std::string relation, std::vector<Term> args,
                         bool negated = false);
FormulaPtr make_dependence(std::vector<Term> antecedent,
                           std::vector<Term> consequent);
FormulaPtr make_and(FormulaPtr left, FormulaPtr right);
FormulaPtr make_or(FormulaPtr left, FormulaPtr right);
FormulaPtr make_exists(std::string variable, FormulaPtr body);
FormulaPtr make_forall(std::string variable, FormulaPtr body);

// Parses the ASCII grammar:
//
//   formula := disj
//   disj    := conj ('|' conj)*
//   conj    := unit ('&' unit)*
//   unit    := atom | '!' relatom | quant | '(' formula ')'
//   quant   := ('forall'|'exists') VAR formula     (scope extends right)
//   atom    := relatom | term '=' term | depatom
//   depatom := '=(' termlist? ';' termlist ')'
//   relatom := RELNAME '(' termlist? ')'
//   term    := VAR | CONST | FUNC '(' termlist ')'
//
// Binary connectives associate left and '&' binds tighter than '|'.
// Throws SyntaxError, or Error with kUnknownSymbol / kArity / kNegation.
FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab);

// Checks that every symbol of a programmatically built formula is declared
// with the right arity.
void validate(const Formula& formula, const Vocabulary& vocab);

// Minimal-parenthesis rendering; parse_formula(to_string(f)) == f.
std::string to_string(const Term& term);
std::string to_string(const Formula& formula);

std::set<std::string> free_variables(const Formula& formula);
std::set<std::string> variables(const Formula& formula);
bool has_dependence_atoms(const Formula& formula);

struct SyntacticParams {
  std::size_t splits = 0;
  std::size_t foralls = 0;
  std::size_t arity = 0;  // max antecedent length over dependence atoms
  std::size_t vars = 0;
  std::size_t free_vars = 0;
  std::size_t size = 0;  // formula nodes plus term symbol occurrences

  friend bool operator==(const SyntacticParams&, const SyntacticParams&) = default;
};

SyntacticParams analyze(const Formula& formula);

}  // namespace deplogic
