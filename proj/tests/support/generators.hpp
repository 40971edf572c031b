#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/reductions.hpp"
#include "core/syntax.hpp"

namespace deplogic::testing {

using Rng = std::mt19937_64;

// Uniform in [lo, hi]. Avoids std::uniform_int_distribution so sequences are
// identical across standard libraries.
std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);
bool coin(Rng& rng, double p = 0.5);

struct StructureShape {
  std::size_t universe = 3;
  bool unary = true;       // P/1
  bool binary = true;      // E/2
  bool function = false;   // f/1
  bool constant = false;   // c
};

// Universe a0..a{n-1}; each candidate tuple present with probability 1/2.
Structure random_structure(Rng& rng, const StructureShape& shape);

// Rows drawn uniformly from A^|domain| until `rows` distinct ones exist (or
// the space is exhausted).
Team random_team(Rng& rng, const Structure& structure,
                 const std::vector<std::string>& domain, std::size_t rows);

// All subsets of A^|domain| with at most `max_rows` rows, in a fixed order.
std::vector<Team> all_teams(const Structure& structure,
                            const std::vector<std::string>& domain,
                            std::size_t max_rows);

struct FormulaShape {
  std::vector<std::string> variables{"x", "y", "z"};
  std::size_t max_nodes = 8;  // connectives, quantifiers and atoms
  bool dependence = true;
  bool quantifiers = true;
  bool splits = true;
  std::size_t max_dependence_arity = 2;
};

FormulaPtr random_formula(Rng& rng, const Vocabulary& vocab, const FormulaShape& shape);

// Prefixes quantifiers for every free variable.
FormulaPtr close_formula(Rng& rng, FormulaPtr formula);

// Number of formula nodes (terms not counted).
std::size_t node_count(const Formula& formula);

// Upper bounds on node expansions for the two search engines on a team of
// `rows` rows over a universe of size `universe`.
double naive_cost(const Formula& formula, double rows, double universe);
double optimized_cost(const Formula& formula, double rows, double universe);

Cnf random_cnf(Rng& rng, std::size_t variables, std::size_t clauses);

// Propositions p1..p{propositions}; depth counts connective levels, so depth
// 0 is a single literal or dependence atom.
PdlPtr random_pdl(Rng& rng, std::size_t propositions, std::size_t depth);

}  // namespace deplogic::testing
