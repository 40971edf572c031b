#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "deplogic/deplogic.h"

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Freer {
  void operator()(dl_structure* p) const { dl_structure_free(p); }
  void operator()(dl_team* p) const { dl_team_free(p); }
  void operator()(dl_formula* p) const { dl_formula_free(p); }
  void operator()(char* p) const { dl_string_free(p); }
};

using StructurePtr = std::unique_ptr<dl_structure, Freer>;
using TeamPtr = std::unique_ptr<dl_team, Freer>;
using FormulaPtr = std::unique_ptr<dl_formula, Freer>;
using StringPtr = std::unique_ptr<char, Freer>;

// Carries a status out of a subcommand to main's exit-code mapping.
struct Failure {
  dl_status status;
  std::string message;
};

void ok(dl_status status, const std::string& context) {
  if (status != DL_OK) {
    throw Failure{status, context + ": " + dl_status_name(status) + ": " + dl_last_error()};
  }
}

int exit_code(dl_status status) {
  return status == DL_ERR_BUDGET ? kExitBudget : kExitUsage;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{DL_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{DL_ERR_IO, "cannot write " + path};
}

struct Inputs {
  StructurePtr structure;
  TeamPtr team;
  FormulaPtr formula;
};

Inputs load(const std::string& structure_path, const std::string& team_path,
            const std::string& formula_path) {
  Inputs in;
  dl_structure* s = nullptr;
  ok(dl_structure_read(structure_path.c_str(), &s), structure_path);
  in.structure.reset(s);
  dl_team* t = nullptr;
  ok(dl_team_read(s, team_path.c_str(), &t), team_path);
  in.team.reset(t);
  dl_formula* f = nullptr;
  ok(dl_formula_read(s, formula_path.c_str(), &f), formula_path);
  in.formula.reset(f);
  return in;
}

dl_engine engine_from(const std::string& name) {
  dl_engine engine = DL_ENGINE_AUTO;
  ok(dl_engine_parse(name.c_str(), &engine), "--engine");
  return engine;
}

struct CheckArgs {
  std::string structure, team, formula;
  std::string engine = "auto";
  std::uint64_t budget = 0;
  unsigned threads = 1;
};

int run_check(const CheckArgs& args) {
  Inputs in = load(args.structure, args.team, args.formula);
  dl_check_options options;
  dl_check_options_init(&options);
  options.engine = engine_from(args.engine);
  if (args.budget != 0) options.budget = args.budget;
  options.threads = args.threads;
  dl_check_result result{};
  ok(dl_check(in.structure.get(), in.team.get(), in.formula.get(), &options, &result),
     "check");
  std::cout << (result.satisfied ? "SAT" : "UNSAT") << "\n";
  std::cout << "engine=" << dl_engine_name(result.engine) << "\n";
  std::cout << "nodes=" << result.nodes << "\n";
  if (!result.satisfied) {
    char* witness = nullptr;
    if (dl_dependence_witness(in.structure.get(), in.team.get(), in.formula.get(),
                              &witness) == DL_OK &&
        witness != nullptr) {
      StringPtr holder(witness);
      std::istringstream lines(witness);
      std::string line;
      while (std::getline(lines, line)) std::cout << "witness: " << line << "\n";
    }
  }
  return result.satisfied ? kExitSat : kExitUnsat;
}

struct ParamsArgs {
  std::string structure, team, formula;
  unsigned exact_limit = 20;
  bool gaifman_functions = false;
  std::string write_decomposition;
  std::string check_decomposition;
};

int run_params(const ParamsArgs& args) {
  Inputs in = load(args.structure, args.team, args.formula);
  dl_params_options options;
  dl_params_options_init(&options);
  options.exact_limit = args.exact_limit;
  options.gaifman_functions = args.gaifman_functions ? 1 : 0;
  dl_params params{};
  ok(dl_params_compute(in.structure.get(), in.team.get(), in.formula.get(), &options,
                       &params),
     "params");
  char* text = nullptr;
  ok(dl_params_format(&params, &text), "params");
  StringPtr formatted(text);
  std::cout << "# tw " << params.treewidth << " ("
            << (params.treewidth_exact ? "exact" : "upper bound") << ")\n";
  std::cout << formatted.get();

  char* violations = nullptr;
  ok(dl_params_violations(&params, &violations), "params");
  StringPtr v(violations);
  if (*violations != '\0') std::cerr << "parameter relation violated:\n" << violations;

  int code = *violations == '\0' ? kExitSat : kExitUnsat;
  if (!args.write_decomposition.empty()) {
    char* decomposition = nullptr;
    std::uint64_t width = 0;
    int exact = 0;
    ok(dl_decomposition_compute(in.structure.get(), &options, &decomposition, &width, &exact),
       "decomposition");
    StringPtr holder(decomposition);
    write_text(args.write_decomposition, decomposition);
  }
  if (!args.check_decomposition.empty()) {
    std::string decomposition = read_text(args.check_decomposition);
    int valid = 0;
    std::uint64_t width = 0;
    char* message = nullptr;
    ok(dl_decomposition_validate(in.structure.get(), &options, decomposition.c_str(), &valid,
                                 &width, &message),
       args.check_decomposition);
    StringPtr holder(message);
    std::cout << "decomposition_valid=" << (valid ? "true" : "false") << "\n";
    std::cout << "decomposition_width=" << width << "\n";
    if (!valid) {
      std::cerr << "invalid decomposition: " << message << "\n";
      code = kExitUnsat;
    }
  }
  return code;
}

struct ReduceArgs {
  std::string kind, input, prefix;
};

int run_reduce(const ReduceArgs& args) {
  std::string text = read_text(args.input);
  dl_structure* s = nullptr;
  dl_team* t = nullptr;
  dl_formula* f = nullptr;
  ok(args.kind == "3sat" ? dl_reduce_3sat(text.c_str(), &s, &t, &f)
                         : dl_reduce_pdl(text.c_str(), &s, &t, &f),
     args.input);
  StructurePtr structure(s);
  TeamPtr team(t);
  FormulaPtr formula(f);

  char* out = nullptr;
  ok(dl_structure_write(s, &out), "structure");
  StringPtr structure_text(out);
  ok(dl_team_write(s, t, &out), "team");
  StringPtr team_text(out);
  ok(dl_formula_write(f, &out), "formula");
  StringPtr formula_text(out);

  write_text(args.prefix + ".structure", structure_text.get());
  write_text(args.prefix + ".team", team_text.get());
  write_text(args.prefix + ".formula", std::string(formula_text.get()) + "\n");
  std::cout << "wrote " << args.prefix << ".structure " << args.prefix << ".team "
            << args.prefix << ".formula\n";
  return kExitSat;
}

struct BenchArgs {
  std::string family;
  std::uint64_t from = 2;
  std::uint64_t to = 10;
  std::string engine = "opt";
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::string output;
};

int run_bench(const BenchArgs& args) {
  char* csv = nullptr;
  ok(dl_bench(args.family.c_str(), args.from, args.to, engine_from(args.engine), args.seed,
              args.budget, &csv),
     "bench");
  StringPtr holder(csv);
  if (args.output.empty()) {
    std::cout << csv;
  } else {
    write_text(args.output, csv);
  }
  return kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checker for dependence logic under team semantics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dl_version()));

  const char* engine_help = "naive, opt, fo or auto";

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Decide whether a team satisfies a formula");
  check_cmd->add_option("structure", check.structure, "Structure file")->required();
  check_cmd->add_option("team", check.team, "Team file")->required();
  check_cmd->add_option("formula", check.formula, "Formula file")->required();
  check_cmd->add_option("--engine", check.engine, engine_help)
      ->check(CLI::IsMember({"naive", "opt", "fo", "auto"}));
  check_cmd->add_option("--budget", check.budget, "Node expansion budget");
  check_cmd->add_option("--threads", check.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u));

  ParamsArgs params;
  auto* params_cmd = app.add_subcommand("params", "Report the instance parameters");
  params_cmd->add_option("structure", params.structure, "Structure file")->required();
  params_cmd->add_option("team", params.team, "Team file")->required();
  params_cmd->add_option("formula", params.formula, "Formula file")->required();
  params_cmd->add_option("--exact-limit", params.exact_limit,
                         "Largest Gaifman graph solved exactly");
  params_cmd->add_flag("--gaifman-functions", params.gaifman_functions,
                       "Let function graphs contribute Gaifman edges");
  params_cmd->add_option("--write-decomposition", params.write_decomposition,
                         "Write a tree decomposition of the Gaifman graph");
  params_cmd->add_option("--check-decomposition", params.check_decomposition,
                         "Validate a tree decomposition against the Gaifman graph");

  ReduceArgs reduce;
  auto* reduce_cmd = app.add_subcommand("reduce", "Emit a model-checking instance");
  reduce_cmd->add_option("kind", reduce.kind, "3sat or pdl")
      ->required()
      ->check(CLI::IsMember({"3sat", "pdl"}));
  reduce_cmd->add_option("input", reduce.input, "DIMACS or PDL input")->required();
  reduce_cmd->add_option("prefix", reduce.prefix,
                         "Output prefix for .structure, .team and .formula")
      ->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a scaling benchmark family");
  bench_cmd->add_option("family", bench.family, "team-size, universe-size or splits")
      ->required()
      ->check(CLI::IsMember({"team-size", "universe-size", "splits"}));
  bench_cmd->add_option("--from", bench.from, "First parameter value");
  bench_cmd->add_option("--to", bench.to, "Last parameter value (inclusive)");
  bench_cmd->add_option("--engine", bench.engine, engine_help)
      ->check(CLI::IsMember({"naive", "opt", "fo", "auto"}));
  bench_cmd->add_option("--seed", bench.seed, "Instance generation seed");
  bench_cmd->add_option("--budget", bench.budget, "Node expansion budget per row");
  bench_cmd->add_option("-o,--output", bench.output, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check_cmd) return run_check(check);
    if (*params_cmd) return run_params(params);
    if (*reduce_cmd) return run_reduce(reduce);
    if (*bench_cmd) return run_bench(bench);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code(f.status);
  }
  return kExitUsage;
}
