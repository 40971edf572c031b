#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/syntax.hpp"

namespace deplogic {

// The nine parameters of a model-checking instance.
struct ParameterReport {
  SyntacticParams syntax;
  std::size_t structure_size = 0;
  std::size_t team_size = 0;
  std::size_t treewidth = 0;
  bool treewidth_exact = true;  // false: min-fill upper bound
  bool team_domain_is_free_vars = false;
};

struct ParameterOptions {
  std::size_t exact_limit = kDefaultExactLimit;
  GaifmanOptions gaifman;
};

ParameterReport compute_parameters(const Structure& structure, const Team& team,
                                   const Formula& formula,
                                   const ParameterOptions& options = {});

// Relations that must hold between the parameters: |Φ| bounds every
// syntactic parameter, free_vars <= vars, tw <= |A| - 1, and
// |T| <= |A|^free_vars when the team domain equals Fr(Φ). Returns one message
// per violated relation.
std::vector<std::string> parameter_violations(const ParameterReport& report);

// One "key=value" line per parameter.
std::string format_parameters(const ParameterReport& report);

}  // namespace deplogic
