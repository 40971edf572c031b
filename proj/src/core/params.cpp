#include "core/params.hpp"

#include <set>

namespace deplogic {

namespace {

// min(base^exp, cap) without overflow.
std::size_t saturating_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap;
    r *= base;
  }
  return r;
}

}  // namespace

ParameterReport compute_parameters(const Structure& structure, const Team& team,
                                   const Formula& formula,
                                   const ParameterOptions& options) {
  ParameterReport r;
  r.syntax = analyze(formula);
  r.structure_size = structure.size();
  r.team_size = team.size();
  const Graph g = gaifman(structure, options.gaifman);
  if (g.vertex_count() <= options.exact_limit && g.vertex_count() <= 64) {
    r.treewidth = treewidth_exact(g, options.exact_limit).width;
    r.treewidth_exact = true;
  } else {
    r.treewidth = treewidth_greedy(g).width;
    r.treewidth_exact = false;
  }
  const std::set<std::string> domain(team.domain().begin(), team.domain().end());
  r.team_domain_is_free_vars = domain == free_variables(formula);
  return r;
}

std::vector<std::string> parameter_violations(const ParameterReport& r) {
  std::vector<std::string> out;
  const SyntacticParams& s = r.syntax;
  const std::pair<const char*, std::size_t> bounded[] = {
      {"splits", s.splits}, {"foralls", s.foralls},     {"arity", s.arity},
      {"vars", s.vars},     {"free_vars", s.free_vars},
  };
  for (const auto& [name, value] : bounded) {
    if (s.size < value) {
      out.push_back("formula_size " + std::to_string(s.size) + " < " + name + " " +
                    std::to_string(value));
    }
  }
  if (s.free_vars > s.vars) out.push_back("free_vars exceeds vars");
  if (r.structure_size == 0 || r.treewidth > r.structure_size - 1) {
    out.push_back("treewidth " + std::to_string(r.treewidth) + " exceeds |A|-1");
  }
  if (r.team_domain_is_free_vars &&
      r.team_size > saturating_power(r.structure_size, s.free_vars, r.team_size)) {
    out.push_back("team_size " + std::to_string(r.team_size) + " exceeds |A|^free_vars");
  }
  return out;
}

std::string format_parameters(const ParameterReport& r) {
  std::string out;
  auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  kv("splits", std::to_string(r.syntax.splits));
  kv("foralls", std::to_string(r.syntax.foralls));
  kv("arity", std::to_string(r.syntax.arity));
  kv("vars", std::to_string(r.syntax.vars));
  kv("free_vars", std::to_string(r.syntax.free_vars));
  kv("formula_size", std::to_string(r.syntax.size));
  kv("structure_size", std::to_string(r.structure_size));
  kv("team_size", std::to_string(r.team_size));
  kv("tw", std::to_string(r.treewidth));
  kv("tw_kind", r.treewidth_exact ? "exact" : "upper-bound");
  return out;
}

}  // namespace deplogic
