#include "deplogic/deplogic.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "core/bench.hpp"
#include "core/error.hpp"
#include "core/evaluator.hpp"
#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/params.hpp"
#include "core/reductions.hpp"
#include "core/syntax.hpp"

struct dl_structure {
  deplogic::Structure value;
};

struct dl_team {
  deplogic::Team value;
};

struct dl_formula {
  deplogic::FormulaPtr value;
};

namespace {

using deplogic::Engine;
using deplogic::ErrorCode;

thread_local std::string g_last_error;

dl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return DL_ERR_SYNTAX;
    case ErrorCode::kUnknownSymbol: return DL_ERR_UNKNOWN_SYMBOL;
    case ErrorCode::kArity: return DL_ERR_ARITY;
    case ErrorCode::kNegation: return DL_ERR_NEGATION;
    case ErrorCode::kDomain: return DL_ERR_DOMAIN;
    case ErrorCode::kEngine: return DL_ERR_ENGINE;
    case ErrorCode::kBudget: return DL_ERR_BUDGET;
    case ErrorCode::kLimit: return DL_ERR_LIMIT;
    case ErrorCode::kIo: return DL_ERR_IO;
    case ErrorCode::kInvalid: return DL_ERR_INVALID;
  }
  return DL_ERR_INTERNAL;
}

dl_status fail(dl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
dl_status guarded(F&& body) {
  try {
    body();
    return DL_OK;
  } catch (const deplogic::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DL_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

Engine to_engine(dl_engine engine) {
  switch (engine) {
    case DL_ENGINE_NAIVE: return Engine::kNaive;
    case DL_ENGINE_OPTIMIZED: return Engine::kOptimized;
    case DL_ENGINE_FO: return Engine::kFoTarski;
    case DL_ENGINE_AUTO: return Engine::kAuto;
  }
  throw deplogic::Error(ErrorCode::kInvalid, "unknown engine value");
}

dl_engine from_engine(Engine engine) {
  switch (engine) {
    case Engine::kNaive: return DL_ENGINE_NAIVE;
    case Engine::kOptimized: return DL_ENGINE_OPTIMIZED;
    case Engine::kFoTarski: return DL_ENGINE_FO;
    case Engine::kAuto: return DL_ENGINE_AUTO;
  }
  return DL_ENGINE_AUTO;
}

void require(bool condition, const char* what) {
  if (!condition) {
    throw deplogic::Error(ErrorCode::kInvalid, std::string("null argument: ") + what);
  }
}

deplogic::ParameterOptions to_options(const dl_params_options* options) {
  deplogic::ParameterOptions out;
  if (options != nullptr) {
    out.exact_limit = options->exact_limit;
    out.gaifman.include_functions = options->gaifman_functions != 0;
  }
  return out;
}

deplogic::ParameterReport to_report(const dl_params& p) {
  deplogic::ParameterReport r;
  r.syntax.splits = p.splits;
  r.syntax.foralls = p.foralls;
  r.syntax.arity = p.arity;
  r.syntax.vars = p.vars;
  r.syntax.free_vars = p.free_vars;
  r.syntax.size = p.formula_size;
  r.structure_size = p.structure_size;
  r.team_size = p.team_size;
  r.treewidth = p.treewidth;
  r.treewidth_exact = p.treewidth_exact != 0;
  r.team_domain_is_free_vars = p.team_domain_is_free_vars != 0;
  return r;
}

deplogic::TreewidthResult decompose(const deplogic::Structure& structure,
                                    const deplogic::ParameterOptions& options,
                                    bool& exact) {
  deplogic::Graph graph = deplogic::gaifman(structure, options.gaifman);
  exact = graph.vertex_count() <= options.exact_limit && graph.vertex_count() <= 64;
  return exact ? deplogic::treewidth_exact(graph, options.exact_limit)
               : deplogic::treewidth_greedy(graph);
}

void emit(deplogic::Instance& instance, dl_structure** structure, dl_team** team,
          dl_formula** formula) {
  auto* s = new dl_structure{std::move(instance.structure)};
  auto* t = new (std::nothrow) dl_team{std::move(instance.team)};
  auto* f = new (std::nothrow) dl_formula{std::move(instance.formula)};
  if (t == nullptr || f == nullptr) {
    delete s;
    delete t;
    delete f;
    throw std::bad_alloc();
  }
  *structure = s;
  *team = t;
  *formula = f;
}

}  // namespace

extern "C" {

const char* dl_version(void) { return "1.0.0"; }

const char* dl_last_error(void) { return g_last_error.c_str(); }

const char* dl_status_name(dl_status status) {
  switch (status) {
    case DL_OK: return "ok";
    case DL_ERR_SYNTAX: return "syntax error";
    case DL_ERR_UNKNOWN_SYMBOL: return "unknown symbol";
    case DL_ERR_ARITY: return "arity mismatch";
    case DL_ERR_NEGATION: return "invalid negation";
    case DL_ERR_DOMAIN: return "domain error";
    case DL_ERR_ENGINE: return "engine not applicable";
    case DL_ERR_BUDGET: return "budget exceeded";
    case DL_ERR_LIMIT: return "size limit exceeded";
    case DL_ERR_IO: return "i/o error";
    case DL_ERR_INVALID: return "invalid argument";
    case DL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dl_engine_name(dl_engine engine) {
  switch (engine) {
    case DL_ENGINE_NAIVE: return "naive";
    case DL_ENGINE_OPTIMIZED: return "opt";
    case DL_ENGINE_FO: return "fo";
    case DL_ENGINE_AUTO: return "auto";
  }
  return "unknown";
}

dl_status dl_engine_parse(const char* name, dl_engine* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "name/out");
    auto engine = deplogic::parse_engine(name);
    if (!engine) {
      throw deplogic::Error(ErrorCode::kInvalid, std::string("unknown engine '") + name + "'");
    }
    *out = from_engine(*engine);
  });
}

void dl_string_free(char* text) { std::free(text); }

dl_status dl_structure_parse(const char* text, dl_structure** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text/out");
    *out = new dl_structure{deplogic::parse_structure(text)};
  });
}

dl_status dl_structure_read(const char* path, dl_structure** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path/out");
    *out = new dl_structure{deplogic::parse_structure(deplogic::read_file(path))};
  });
}

dl_status dl_structure_write(const dl_structure* structure, char** out) {
  return guarded([&] {
    require(structure != nullptr && out != nullptr, "structure/out");
    *out = dup_string(deplogic::write_structure(structure->value));
  });
}

size_t dl_structure_size(const dl_structure* structure) {
  return structure == nullptr ? 0 : structure->value.size();
}

void dl_structure_free(dl_structure* structure) { delete structure; }

dl_status dl_team_parse(const dl_structure* structure, const char* text, dl_team** out) {
  return guarded([&] {
    require(structure != nullptr && text != nullptr && out != nullptr, "structure/text/out");
    *out = new dl_team{deplogic::parse_team(text, structure->value)};
  });
}

dl_status dl_team_read(const dl_structure* structure, const char* path, dl_team** out) {
  return guarded([&] {
    require(structure != nullptr && path != nullptr && out != nullptr, "structure/path/out");
    *out = new dl_team{deplogic::parse_team(deplogic::read_file(path), structure->value)};
  });
}

dl_status dl_team_unit(dl_team** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    *out = new dl_team{deplogic::Team::unit()};
  });
}

dl_status dl_team_write(const dl_structure* structure, const dl_team* team, char** out) {
  return guarded([&] {
    require(structure != nullptr && team != nullptr && out != nullptr, "structure/team/out");
    *out = dup_string(deplogic::write_team(team->value, structure->value));
  });
}

size_t dl_team_size(const dl_team* team) { return team == nullptr ? 0 : team->value.size(); }

void dl_team_free(dl_team* team) { delete team; }

dl_status dl_formula_parse(const dl_structure* vocabulary, const char* text,
                           dl_formula** out) {
  return guarded([&] {
    require(vocabulary != nullptr && text != nullptr && out != nullptr, "vocabulary/text/out");
    *out = new dl_formula{deplogic::parse_formula(text, vocabulary->value.vocabulary())};
  });
}

dl_status dl_formula_read(const dl_structure* vocabulary, const char* path,
                          dl_formula** out) {
  return guarded([&] {
    require(vocabulary != nullptr && path != nullptr && out != nullptr, "vocabulary/path/out");
    *out = new dl_formula{
        deplogic::parse_formula(deplogic::read_file(path), vocabulary->value.vocabulary())};
  });
}

dl_status dl_formula_write(const dl_formula* formula, char** out) {
  return guarded([&] {
    require(formula != nullptr && out != nullptr, "formula/out");
    *out = dup_string(deplogic::to_string(*formula->value));
  });
}

void dl_formula_free(dl_formula* formula) { delete formula; }

void dl_check_options_init(dl_check_options* options) {
  if (options == nullptr) return;
  deplogic::CheckOptions defaults;
  options->engine = DL_ENGINE_AUTO;
  options->budget = defaults.budget;
  options->threads = defaults.threads;
}

dl_status dl_check(const dl_structure* structure, const dl_team* team,
                   const dl_formula* formula, const dl_check_options* options,
                   dl_check_result* result) {
  return guarded([&] {
    require(structure != nullptr && team != nullptr && formula != nullptr && result != nullptr,
            "structure/team/formula/result");
    deplogic::CheckOptions opts;
    if (options != nullptr) {
      opts.engine = to_engine(options->engine);
      if (options->budget != 0) opts.budget = options->budget;
      opts.threads = options->threads == 0 ? 1 : options->threads;
    }
    auto r = deplogic::check(structure->value, team->value, *formula->value, opts);
    result->satisfied = r.satisfied ? 1 : 0;
    result->engine = from_engine(r.engine);
    result->nodes = r.nodes;
  });
}

dl_status dl_dependence_witness(const dl_structure* structure, const dl_team* team,
                                const dl_formula* formula, char** out) {
  return guarded([&] {
    require(structure != nullptr && team != nullptr && formula != nullptr && out != nullptr,
            "structure/team/formula/out");
    const auto* atom = formula->value->as<deplogic::DependenceAtom>();
    if (atom == nullptr) {
      throw deplogic::Error(ErrorCode::kInvalid, "formula is not a dependence atom");
    }
    *out = nullptr;
    auto pair = deplogic::dependence_violation(structure->value, team->value, *atom);
    if (!pair) return;
    const auto& t = team->value;
    std::string text;
    for (std::size_t row : {pair->first, pair->second}) {
      for (std::size_t c = 0; c < t.domain().size(); ++c) {
        if (c > 0) text += ' ';
        text += t.domain()[c] + "=" + structure->value.name(t.rows()[row][c]);
      }
      text += '\n';
    }
    *out = dup_string(text);
  });
}

void dl_params_options_init(dl_params_options* options) {
  if (options == nullptr) return;
  options->exact_limit = deplogic::kDefaultExactLimit;
  options->gaifman_functions = 0;
}

dl_status dl_params_compute(const dl_structure* structure, const dl_team* team,
                            const dl_formula* formula, const dl_params_options* options,
                            dl_params* out) {
  return guarded([&] {
    require(structure != nullptr && team != nullptr && formula != nullptr && out != nullptr,
            "structure/team/formula/out");
    auto r = deplogic::compute_parameters(structure->value, team->value, *formula->value,
                                          to_options(options));
    out->splits = r.syntax.splits;
    out->foralls = r.syntax.foralls;
    out->arity = r.syntax.arity;
    out->vars = r.syntax.vars;
    out->free_vars = r.syntax.free_vars;
    out->formula_size = r.syntax.size;
    out->structure_size = r.structure_size;
    out->team_size = r.team_size;
    out->treewidth = r.treewidth;
    out->treewidth_exact = r.treewidth_exact ? 1 : 0;
    out->team_domain_is_free_vars = r.team_domain_is_free_vars ? 1 : 0;
  });
}

dl_status dl_params_format(const dl_params* params, char** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "params/out");
    *out = dup_string(deplogic::format_parameters(to_report(*params)));
  });
}

dl_status dl_params_violations(const dl_params* params, char** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "params/out");
    std::string text;
    for (const auto& v : deplogic::parameter_violations(to_report(*params))) text += v + "\n";
    *out = dup_string(text);
  });
}

dl_status dl_decomposition_compute(const dl_structure* structure,
                                   const dl_params_options* options, char** text,
                                   uint64_t* width, int* exact) {
  return guarded([&] {
    require(structure != nullptr && text != nullptr, "structure/text");
    bool is_exact = false;
    auto r = decompose(structure->value, to_options(options), is_exact);
    *text = dup_string(deplogic::write_decomposition(r.decomposition, structure->value));
    if (width != nullptr) *width = r.width;
    if (exact != nullptr) *exact = is_exact ? 1 : 0;
  });
}

dl_status dl_decomposition_validate(const dl_structure* structure,
                                    const dl_params_options* options, const char* text,
                                    int* valid, uint64_t* width, char** message) {
  return guarded([&] {
    require(structure != nullptr && text != nullptr && valid != nullptr, "structure/text/valid");
    auto graph = deplogic::gaifman(structure->value, to_options(options).gaifman);
    auto decomposition = deplogic::parse_decomposition(text, structure->value);
    auto report = deplogic::validate_decomposition(graph, decomposition);
    *valid = report.valid ? 1 : 0;
    if (width != nullptr) *width = decomposition.width();
    if (message != nullptr) *message = dup_string(report.message);
  });
}

dl_status dl_reduce_3sat(const char* dimacs, dl_structure** structure, dl_team** team,
                         dl_formula** formula) {
  return guarded([&] {
    require(dimacs != nullptr && structure != nullptr && team != nullptr && formula != nullptr,
            "dimacs/outputs");
    auto instance = deplogic::reduce_3sat(deplogic::parse_dimacs(dimacs));
    emit(instance, structure, team, formula);
  });
}

dl_status dl_reduce_pdl(const char* pdl, dl_structure** structure, dl_team** team,
                        dl_formula** formula) {
  return guarded([&] {
    require(pdl != nullptr && structure != nullptr && team != nullptr && formula != nullptr,
            "pdl/outputs");
    auto instance = deplogic::reduce_pdl(*deplogic::parse_pdl(pdl));
    emit(instance, structure, team, formula);
  });
}

dl_status dl_sat_brute(const char* dimacs, int* satisfiable) {
  return guarded([&] {
    require(dimacs != nullptr && satisfiable != nullptr, "dimacs/satisfiable");
    *satisfiable = deplogic::sat_brute(deplogic::parse_dimacs(dimacs)) ? 1 : 0;
  });
}

dl_status dl_pdl_sat_brute(const char* pdl, int* satisfiable) {
  return guarded([&] {
    require(pdl != nullptr && satisfiable != nullptr, "pdl/satisfiable");
    *satisfiable = deplogic::pdl_sat_brute(*deplogic::parse_pdl(pdl)) ? 1 : 0;
  });
}

dl_status dl_bench(const char* family, uint64_t from, uint64_t to, dl_engine engine,
                   uint64_t seed, uint64_t budget, char** csv) {
  return guarded([&] {
    require(family != nullptr && csv != nullptr, "family/csv");
    auto parsed = deplogic::parse_family(family);
    if (!parsed) {
      throw deplogic::Error(ErrorCode::kInvalid,
                            std::string("unknown bench family '") + family + "'");
    }
    deplogic::BenchOptions options;
    options.family = *parsed;
    options.from = from;
    options.to = to;
    options.engine = to_engine(engine);
    options.seed = seed;
    if (budget != 0) options.budget = budget;
    *csv = dup_string(deplogic::bench_csv(deplogic::run_bench(options)));
  });
}

}  // extern "C"
