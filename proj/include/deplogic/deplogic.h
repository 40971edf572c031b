/*
 * deplogic: model checking for first-order dependence logic under team
 * semantics.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return a dl_status; on failure the
 * message for the calling thread is available from dl_last_error() until
 * the next failing call on that thread. Strings returned through char**
 * out-parameters are heap allocated and released with dl_string_free().
 */
#ifndef DEPLOGIC_DEPLOGIC_H
#define DEPLOGIC_DEPLOGIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DEPLOGIC_BUILDING)
#    define DL_API __declspec(dllexport)
#  else
#    define DL_API __declspec(dllimport)
#  endif
#else
#  define DL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dl_structure dl_structure;
typedef struct dl_team dl_team;
typedef struct dl_formula dl_formula;

typedef enum dl_status {
  DL_OK = 0,
  DL_ERR_SYNTAX = 1,         /* malformed input text */
  DL_ERR_UNKNOWN_SYMBOL = 2, /* symbol missing from the vocabulary */
  DL_ERR_ARITY = 3,
  DL_ERR_NEGATION = 4,       /* '!' on something other than a relation atom */
  DL_ERR_DOMAIN = 5,         /* free variable outside the team domain */
  DL_ERR_ENGINE = 6,         /* fo engine asked to handle dependence atoms */
  DL_ERR_BUDGET = 7,         /* work budget exceeded */
  DL_ERR_LIMIT = 8,          /* instance above a hard size cap */
  DL_ERR_IO = 9,
  DL_ERR_INVALID = 10,       /* bad argument or ill-formed value */
  DL_ERR_INTERNAL = 11
} dl_status;

typedef enum dl_engine {
  DL_ENGINE_AUTO = 0,
  DL_ENGINE_NAIVE = 1,
  DL_ENGINE_OPTIMIZED = 2,
  DL_ENGINE_FO = 3
} dl_engine;

DL_API const char* dl_version(void);
DL_API const char* dl_last_error(void);
DL_API const char* dl_status_name(dl_status status);
DL_API const char* dl_engine_name(dl_engine engine);
/* Accepts naive, opt, fo, auto. */
DL_API dl_status dl_engine_parse(const char* name, dl_engine* out);
DL_API void dl_string_free(char* text);

/* Structures */
DL_API dl_status dl_structure_parse(const char* text, dl_structure** out);
DL_API dl_status dl_structure_read(const char* path, dl_structure** out);
DL_API dl_status dl_structure_write(const dl_structure* structure, char** out);
DL_API size_t dl_structure_size(const dl_structure* structure);
DL_API void dl_structure_free(dl_structure* structure);

/* Teams; values are resolved against the structure's universe. */
DL_API dl_status dl_team_parse(const dl_structure* structure, const char* text,
                               dl_team** out);
DL_API dl_status dl_team_read(const dl_structure* structure, const char* path,
                              dl_team** out);
/* The team {∅} holding only the empty assignment. */
DL_API dl_status dl_team_unit(dl_team** out);
DL_API dl_status dl_team_write(const dl_structure* structure, const dl_team* team,
                               char** out);
DL_API size_t dl_team_size(const dl_team* team);
DL_API void dl_team_free(dl_team* team);

/* Formulas; symbols are resolved against the structure's vocabulary. */
DL_API dl_status dl_formula_parse(const dl_structure* vocabulary, const char* text,
                                  dl_formula** out);
DL_API dl_status dl_formula_read(const dl_structure* vocabulary, const char* path,
                                 dl_formula** out);
DL_API dl_status dl_formula_write(const dl_formula* formula, char** out);
DL_API void dl_formula_free(dl_formula* formula);

/* Model checking */
typedef struct dl_check_options {
  dl_engine engine;
  uint64_t budget;  /* node expansions; 0 selects the default */
  unsigned threads; /* 0 or 1: sequential */
} dl_check_options;

typedef struct dl_check_result {
  int satisfied;
  dl_engine engine; /* engine actually run */
  uint64_t nodes;
} dl_check_result;

DL_API void dl_check_options_init(dl_check_options* options);
DL_API dl_status dl_check(const dl_structure* structure, const dl_team* team,
                          const dl_formula* formula, const dl_check_options* options,
                          dl_check_result* result);

/* For a formula that is a single dependence atom: *out receives the first
 * violating row pair as two "var=value ..." lines, or NULL when the team
 * satisfies the atom. DL_ERR_INVALID for any other formula shape. */
DL_API dl_status dl_dependence_witness(const dl_structure* structure,
                                       const dl_team* team,
                                       const dl_formula* formula, char** out);

/* Parameters */
typedef struct dl_params_options {
  unsigned exact_limit;      /* exact treewidth up to this many vertices */
  int gaifman_functions;     /* nonzero: function graphs add Gaifman edges */
} dl_params_options;

typedef struct dl_params {
  uint64_t splits;
  uint64_t foralls;
  uint64_t arity;
  uint64_t vars;
  uint64_t free_vars;
  uint64_t formula_size;
  uint64_t structure_size;
  uint64_t team_size;
  uint64_t treewidth;
  int treewidth_exact;
  int team_domain_is_free_vars;
} dl_params;

DL_API void dl_params_options_init(dl_params_options* options);
DL_API dl_status dl_params_compute(const dl_structure* structure, const dl_team* team,
                                   const dl_formula* formula,
                                   const dl_params_options* options, dl_params* out);
/* "key=value" lines. */
DL_API dl_status dl_params_format(const dl_params* params, char** out);
/* One line per violated parameter relation; empty string when none. */
DL_API dl_status dl_params_violations(const dl_params* params, char** out);

/* Tree decompositions of the Gaifman graph */
DL_API dl_status dl_decomposition_compute(const dl_structure* structure,
                                          const dl_params_options* options,
                                          char** text, uint64_t* width,
                                          int* exact);
DL_API dl_status dl_decomposition_validate(const dl_structure* structure,
                                           const dl_params_options* options,
                                           const char* text, int* valid,
                                           uint64_t* width, char** message);

/* Reductions */
DL_API dl_status dl_reduce_3sat(const char* dimacs, dl_structure** structure,
                                dl_team** team, dl_formula** formula);
DL_API dl_status dl_reduce_pdl(const char* pdl, dl_structure** structure,
                               dl_team** team, dl_formula** formula);
DL_API dl_status dl_sat_brute(const char* dimacs, int* satisfiable);
DL_API dl_status dl_pdl_sat_brute(const char* pdl, int* satisfiable);

/* Scaling benchmark; family is team-size, universe-size or splits. Writes
 * CSV with header param,value,engine,nodes,millis. */
DL_API dl_status dl_bench(const char* family, uint64_t from, uint64_t to,
                          dl_engine engine, uint64_t seed, uint64_t budget,
                          char** csv);

#ifdef __cplusplus
}
#endif

#endif /* DEPLOGIC_DEPLOGIC_H */
