#include "core/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "core/error.hpp"

namespace deplogic {

namespace {

using Rows = std::vector<Tuple>;
using NodeId = std::uint32_t;

constexpr Element kUnset = std::numeric_limits<Element>::max();
constexpr std::size_t kMemoCap = 1u << 22;

struct CTerm {
  enum class Kind { kSlot, kElement, kFunction };
  Kind kind = Kind::kSlot;
  std::uint32_t value = 0;  // slot or element
  const Function* function = nullptr;
  std::vector<CTerm> args;
};

struct CNode {
  enum class Kind { kEquality, kRelation, kDependence, kAnd, kOr, kExists, kForall };
  Kind kind = Kind::kEquality;
  std::vector<CTerm> terms;       // equality: lhs, rhs; dependence: ante ++ cons
  std::size_t antecedent = 0;     // dependence: length of the antecedent
  const Relation* relation = nullptr;
  bool negated = false;
  NodeId left = 0;
  NodeId right = 0;               // also the body of quantifiers
  std::uint32_t slot = 0;         // bound variable
};

// A formula compiled against a structure and a team domain. Team columns map
// to the first slots; quantified variables not in the domain get the rest.
class Program {
 public:
  Program(const Structure& structure, const Team& team, const Formula& formula)
      : structure_(structure), domain_width_(team.domain().size()) {
    for (std::size_t i = 0; i < team.domain().size(); ++i) {
      slots_.emplace(team.domain()[i], static_cast<std::uint32_t>(i));
    }
    width_ = domain_width_;
    root_ = compile(formula);
  }

  const Structure& structure() const { return structure_; }
  const CNode& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return root_; }
  std::size_t width() const { return width_; }
  std::size_t domain_width() const { return domain_width_; }

  Element eval(const CTerm& t, const Tuple& row) const {
    switch (t.kind) {
      case CTerm::Kind::kSlot:
        return row[t.value];
      case CTerm::Kind::kElement:
        return t.value;
      case CTerm::Kind::kFunction: {
        std::size_t idx = 0;
        for (const CTerm& a : t.args) idx = idx * structure_.size() + eval(a, row);
        return t.function->table[idx];
      }
    }
    return 0;
  }

  Rows initial_rows(const Team& team) const {
    Rows rows;
    rows.reserve(team.size());
    for (const Tuple& r : team.rows()) {
      Tuple t(width_, kUnset);
      std::copy(r.begin(), r.end(), t.begin());
      rows.push_back(std::move(t));
    }
    return rows;
  }

 private:
  std::uint32_t slot_for(const std::string& var) {
    auto [it, inserted] = slots_.emplace(var, static_cast<std::uint32_t>(width_));
    if (inserted) ++width_;
    return it->second;
  }

  CTerm compile(const Term& t) {
    CTerm c;
    switch (t.kind) {
      case Term::Kind::kVariable: {
        auto it = slots_.find(t.symbol);
        if (it == slots_.end()) {
          throw Error(ErrorCode::kDomain, "variable '" + t.symbol +
                                              "' is neither bound nor in the team domain");
        }
        c.kind = CTerm::Kind::kSlot;
        c.value = it->second;
        break;
      }
      case Term::Kind::kConstant:
        c.kind = CTerm::Kind::kElement;
        c.value = structure_.constants().find(t.symbol)->second;
        break;
      case Term::Kind::kFunction:
        c.kind = CTerm::Kind::kFunction;
        c.function = &structure_.functions().find(t.symbol)->second;
        for (const Term& a : t.args) c.args.push_back(compile(a));
        break;
    }
    return c;
  }

  NodeId push(CNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  NodeId compile(const Formula& f) {
    if (const auto* e = f.as<Equality>()) {
      CNode n;
      n.kind = CNode::Kind::kEquality;
      n.terms = {compile(e->lhs), compile(e->rhs)};
      return push(std::move(n));
    }
    if (const auto* r = f.as<RelationAtom>()) {
      CNode n;
      n.kind = CNode::Kind::kRelation;
      for (const Term& t : r->args) n.terms.push_back(compile(t));
      n.relation = &structure_.relations().find(r->relation)->second;
      n.negated = r->negated;
      return push(std::move(n));
    }
    if (const auto* d = f.as<DependenceAtom>()) {
      CNode n;
      n.kind = CNode::Kind::kDependence;
      for (const Term& t : d->antecedent) n.terms.push_back(compile(t));
      for (const Term& t : d->consequent) n.terms.push_back(compile(t));
      n.antecedent = d->antecedent.size();
      return push(std::move(n));
    }
    if (const auto* c = f.as<Conjunction>()) {
      CNode n;
      n.kind = CNode::Kind::kAnd;
      n.left = compile(*c->left);
      n.right = compile(*c->right);
      return push(std::move(n));
    }
    if (const auto* d = f.as<Disjunction>()) {
      CNode n;
      n.kind = CNode::Kind::kOr;
      n.left = compile(*d->left);
      n.right = compile(*d->right);
      return push(std::move(n));
    }
    const bool exists = f.as<Existential>() != nullptr;
    const std::string& var =
        exists ? f.as<Existential>()->variable : f.as<Universal>()->variable;
    const Formula& body = exists ? *f.as<Existential>()->body : *f.as<Universal>()->body;
    CNode n;
    n.kind = exists ? CNode::Kind::kExists : CNode::Kind::kForall;
    // Shadowing reuses the slot; s^x_a overwrites the old value.
    n.slot = slot_for(var);
    n.right = compile(body);
    return push(std::move(n));
  }

  const Structure& structure_;
  std::size_t domain_width_;
  std::size_t width_ = 0;
  std::map<std::string, std::uint32_t> slots_;
  std::vector<CNode> nodes_;
  NodeId root_ = 0;
};

struct Shared {
  std::uint64_t budget = 0;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
};

std::uint64_t checked_power(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw Error(ErrorCode::kBudget, "search space too large to enumerate");
    }
    r *= base;
  }
  return r;
}

void normalize(Rows& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

class Search {
 public:
  Search(const Program& program, Engine engine, Shared& shared)
      : program_(program), engine_(engine), shared_(shared) {}

  bool eval(NodeId id, const Rows& team) {
    const bool memo = engine_ == Engine::kOptimized;
    const CNode& n = program_.node(id);
    const bool composite = n.kind != CNode::Kind::kEquality &&
                           n.kind != CNode::Kind::kRelation &&
                           n.kind != CNode::Kind::kDependence;
    std::string key;
    if (memo && composite) {
      key = memo_key(id, team);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    expand();
    const bool result = eval_node(id, n, team);
    if (memo && composite && memo_.size() < kMemoCap &&
        !shared_.stop.load(std::memory_order_relaxed)) {
      memo_.emplace(std::move(key), result);
    }
    return result;
  }

  // Number of choices the split / existential at `id` ranges over.
  std::uint64_t choice_count(NodeId id, std::size_t rows) const {
    const CNode& n = program_.node(id);
    if (n.kind == CNode::Kind::kOr) {
      if (engine_ == Engine::kNaive) return checked_power(3, rows);
      if (rows >= 64) throw Error(ErrorCode::kBudget, "search space too large to enumerate");
      return std::uint64_t{1} << rows;
    }
    const std::uint64_t universe = program_.structure().size();
    if (engine_ == Engine::kNaive) {
      if (universe >= 64) throw Error(ErrorCode::kBudget, "search space too large to enumerate");
      return checked_power((std::uint64_t{1} << universe) - 1, rows);
    }
    return checked_power(universe, rows);
  }

  // Tries choices [begin, end) of the split at `id`; on success optionally
  // reports the cover.
  bool split_range(NodeId id, const Rows& team, std::uint64_t begin,
                   std::uint64_t end, std::pair<Rows, Rows>* witness = nullptr) {
    const CNode& n = program_.node(id);
    const std::size_t size = team.size();
    std::vector<std::uint8_t> digits = decode(begin, 3, size);
    Rows part0, part1;
    for (std::uint64_t i = begin; i < end; ++i) {
      if (shared_.stop.load(std::memory_order_relaxed)) return false;
      part0.clear();
      part1.clear();
      if (engine_ == Engine::kNaive) {
        // 0: T0 only, 1: T1 only, 2: both.
        for (std::size_t r = 0; r < size; ++r) {
          if (digits[r] != 1) part0.push_back(team[r]);
          if (digits[r] != 0) part1.push_back(team[r]);
        }
        increment(digits, 3);
      } else {
        const std::uint64_t gray = i ^ (i >> 1);
        for (std::size_t r = 0; r < size; ++r) {
          ((gray >> r) & 1 ? part0 : part1).push_back(team[r]);
        }
      }
      if (eval(n.left, part0) && eval(n.right, part1)) {
        if (witness) *witness = {part0, part1};
        return true;
      }
    }
    return false;
  }

  bool exists_range(NodeId id, const Rows& team, std::uint64_t begin,
                    std::uint64_t end) {
    const CNode& n = program_.node(id);
    const std::size_t universe = program_.structure().size();
    const bool naive = engine_ == Engine::kNaive;
    const std::uint64_t radix = naive ? (std::uint64_t{1} << universe) - 1 : universe;
    std::vector<std::uint64_t> digits = decode_wide(begin, radix, team.size());
    Rows extended;
    for (std::uint64_t i = begin; i < end; ++i) {
      if (shared_.stop.load(std::memory_order_relaxed)) return false;
      extended.clear();
      for (std::size_t r = 0; r < team.size(); ++r) {
        if (naive) {
          // digit + 1 is the nonempty subset of A chosen for this row.
          const std::uint64_t subset = digits[r] + 1;
          for (std::size_t a = 0; a < universe; ++a) {
            if ((subset >> a) & 1) {
              extended.push_back(team[r]);
              extended.back()[n.slot] = static_cast<Element>(a);
            }
          }
        } else {
          extended.push_back(team[r]);
          extended.back()[n.slot] = static_cast<Element>(digits[r]);
        }
      }
      normalize(extended);
      if (eval(n.right, extended)) return true;
      increment_wide(digits, radix);
    }
    return false;
  }

  bool tarski(NodeId id, Tuple& row) {
    expand();
    const CNode& n = program_.node(id);
    switch (n.kind) {
      case CNode::Kind::kEquality:
        return program_.eval(n.terms[0], row) == program_.eval(n.terms[1], row);
      case CNode::Kind::kRelation:
        return relation_holds(n, row);
      case CNode::Kind::kDependence:
        throw Error(ErrorCode::kEngine, "dependence atom in a first-order evaluation");
      case CNode::Kind::kAnd:
        return tarski(n.left, row) && tarski(n.right, row);
      case CNode::Kind::kOr:
        return tarski(n.left, row) || tarski(n.right, row);
      case CNode::Kind::kExists:
      case CNode::Kind::kForall: {
        const bool want = n.kind == CNode::Kind::kExists;
        const Element saved = row[n.slot];
        bool result = !want;
        for (std::size_t a = 0; a < program_.structure().size(); ++a) {
          row[n.slot] = static_cast<Element>(a);
          if (tarski(n.right, row) == want) {
            result = want;
            break;
          }
        }
        row[n.slot] = saved;
        return result;
      }
    }
    return false;
  }

 private:
  void expand() {
    const auto used = shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (used > shared_.budget) {
      throw Error(ErrorCode::kBudget,
                  "work budget of " + std::to_string(shared_.budget) +
                      " node expansions exceeded");
    }
  }

  bool relation_holds(const CNode& n, const Tuple& row) const {
    Tuple args;
    args.reserve(n.terms.size());
    for (const CTerm& t : n.terms) args.push_back(program_.eval(t, row));
    return n.relation->contains(args) != n.negated;
  }

  bool eval_node(NodeId id, const CNode& n, const Rows& team) {
    switch (n.kind) {
      case CNode::Kind::kEquality:
        return std::all_of(team.begin(), team.end(), [&](const Tuple& row) {
          return program_.eval(n.terms[0], row) == program_.eval(n.terms[1], row);
        });
      case CNode::Kind::kRelation:
        return std::all_of(team.begin(), team.end(),
                           [&](const Tuple& row) { return relation_holds(n, row); });
      case CNode::Kind::kDependence: {
        std::map<Tuple, Tuple> seen;
        for (const Tuple& row : team) {
          Tuple ante, cons;
          for (std::size_t i = 0; i < n.terms.size(); ++i) {
            (i < n.antecedent ? ante : cons).push_back(program_.eval(n.terms[i], row));
          }
          auto [it, inserted] = seen.emplace(std::move(ante), cons);
          if (!inserted && it->second != cons) return false;
        }
        return true;
      }
      case CNode::Kind::kAnd:
        return eval(n.left, team) && eval(n.right, team);
      case CNode::Kind::kOr:
        return split_range(id, team, 0, choice_count(id, team.size()));
      case CNode::Kind::kExists:
        return exists_range(id, team, 0, choice_count(id, team.size()));
      case CNode::Kind::kForall: {
        Rows extended;
        extended.reserve(team.size() * program_.structure().size());
        for (const Tuple& row : team) {
          for (std::size_t a = 0; a < program_.structure().size(); ++a) {
            extended.push_back(row);
            extended.back()[n.slot] = static_cast<Element>(a);
          }
        }
        normalize(extended);
        return eval(n.right, extended);
      }
    }
    return false;
  }

  static std::string memo_key(NodeId id, const Rows& team) {
    std::string key(reinterpret_cast<const char*>(&id), sizeof id);
    for (const Tuple& row : team) {
      key.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(Element));
    }
    return key;
  }

  static std::vector<std::uint8_t> decode(std::uint64_t index, std::uint64_t radix,
                                          std::size_t n) {
    std::vector<std::uint8_t> digits(n);
    for (std::size_t i = 0; i < n; ++i) {
      digits[i] = static_cast<std::uint8_t>(index % radix);
      index /= radix;
    }
    return digits;
  }

  static void increment(std::vector<std::uint8_t>& digits, std::uint8_t radix) {
    for (auto& d : digits) {
      if (++d < radix) return;
      d = 0;
    }
  }

  static std::vector<std::uint64_t> decode_wide(std::uint64_t index, std::uint64_t radix,
                                                std::size_t n) {
    std::vector<std::uint64_t> digits(n);
    for (std::size_t i = 0; i < n; ++i) {
      digits[i] = index % radix;
      index /= radix;
    }
    return digits;
  }

  static void increment_wide(std::vector<std::uint64_t>& digits, std::uint64_t radix) {
    for (auto& d : digits) {
      if (++d < radix) return;
      d = 0;
    }
  }

  const Program& program_;
  Engine engine_;
  Shared& shared_;
  std::unordered_map<std::string, bool> memo_;
};

void check_preconditions(const Structure& structure, const Team& team,
                         const Formula& formula) {
  validate(formula, structure.vocabulary());
  for (const auto& v : free_variables(formula)) {
    if (!team.column(v)) {
      throw Error(ErrorCode::kDomain,
                  "free variable '" + v + "' is not in the team domain");
    }
  }
  for (const Tuple& row : team.rows()) {
    for (Element e : row) {
      if (e >= structure.size()) {
        throw Error(ErrorCode::kInvalid, "team value outside the universe");
      }
    }
  }
}

Engine resolve_engine(Engine requested, const Formula& formula) {
  if (requested == Engine::kAuto) return choose_engine(analyze(formula), formula);
  if (requested == Engine::kFoTarski && has_dependence_atoms(formula)) {
    throw Error(ErrorCode::kEngine,
                "the fo engine requires a formula without dependence atoms");
  }
  return requested;
}

// Runs the outermost split/existential over `threads` workers, each taking a
// contiguous slice of the choice space.
bool parallel_root(const Program& program, Engine engine, Shared& shared,
                   const Rows& rows, unsigned threads) {
  const NodeId root = program.root();
  const CNode::Kind kind = program.node(root).kind;
  Search probe(program, engine, shared);
  const std::uint64_t total = probe.choice_count(root, rows.size());
  shared.nodes.fetch_add(1, std::memory_order_relaxed);

  const std::uint64_t workers = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1));
  std::vector<char> found(workers, 0);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = total / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = w + 1 == workers ? total : begin + chunk;
    pool.emplace_back([&, w, begin, end] {
      try {
        Search search(program, engine, shared);
        const bool ok = kind == CNode::Kind::kOr
                            ? search.split_range(root, rows, begin, end)
                            : search.exists_range(root, rows, begin, end);
        if (ok) {
          found[w] = 1;
          shared.stop.store(true, std::memory_order_relaxed);
        }
      } catch (...) {
        errors[w] = std::current_exception();
        shared.stop.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (auto& t : pool) t.join();
  if (std::find(found.begin(), found.end(), 1) != found.end()) return true;
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return false;
}

Rows truncate_rows(const Rows& rows, std::size_t width) {
  Rows out;
  out.reserve(rows.size());
  for (const Tuple& r : rows) out.emplace_back(r.begin(), r.begin() + width);
  return out;
}

}  // namespace

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::kNaive: return "naive";
    case Engine::kOptimized: return "opt";
    case Engine::kFoTarski: return "fo";
    case Engine::kAuto: return "auto";
  }
  return "auto";
}

std::optional<Engine> parse_engine(std::string_view name) {
  if (name == "naive") return Engine::kNaive;
  if (name == "opt" || name == "optimized") return Engine::kOptimized;
  if (name == "fo" || name == "fo_tarski") return Engine::kFoTarski;
  if (name == "auto") return Engine::kAuto;
  return std::nullopt;
}

Engine choose_engine(const SyntacticParams& params, const Formula& formula) {
  if (params.arity == 0 && !has_dependence_atoms(formula)) return Engine::kFoTarski;
  return Engine::kOptimized;
}

CheckResult check(const Structure& structure, const Team& team,
                  const Formula& formula, const CheckOptions& options) {
  check_preconditions(structure, team, formula);
  const Engine engine = resolve_engine(options.engine, formula);
  const Program program(structure, team, formula);
  Shared shared;
  shared.budget = options.budget;
  Rows rows = program.initial_rows(team);

  CheckResult result;
  result.engine = engine;
  if (engine == Engine::kFoTarski) {
    Search search(program, engine, shared);
    result.satisfied = std::all_of(rows.begin(), rows.end(), [&](Tuple& row) {
      return search.tarski(program.root(), row);
    });
  } else {
    const CNode::Kind kind = program.node(program.root()).kind;
    const bool searchable = kind == CNode::Kind::kOr || kind == CNode::Kind::kExists;
    if (options.threads > 1 && searchable) {
      result.satisfied = parallel_root(program, engine, shared, rows, options.threads);
    } else {
      Search search(program, engine, shared);
      result.satisfied = search.eval(program.root(), rows);
    }
  }
  result.nodes = shared.nodes.load();
  return result;
}

bool check_fo_tarski(const Structure& structure, const Assignment& assignment,
                     const Formula& formula) {
  if (has_dependence_atoms(formula)) {
    throw Error(ErrorCode::kEngine, "dependence atom in a first-order evaluation");
  }
  const Team single(assignment.domain, {assignment.values});
  check_preconditions(structure, single, formula);
  const Program program(structure, single, formula);
  Shared shared;
  shared.budget = std::numeric_limits<std::uint64_t>::max();
  Search search(program, Engine::kFoTarski, shared);
  Tuple row = program.initial_rows(single).front();
  return search.tarski(program.root(), row);
}

std::optional<std::pair<Team, Team>> split_witness(const Structure& structure,
                                                   const Team& team,
                                                   const Formula& disjunction,
                                                   const CheckOptions& options) {
  if (!disjunction.as<Disjunction>()) {
    throw Error(ErrorCode::kInvalid, "split witness requires a disjunction at the root");
  }
  check_preconditions(structure, team, disjunction);
  Engine engine = options.engine;
  if (engine == Engine::kAuto || engine == Engine::kFoTarski) engine = Engine::kOptimized;
  const Program program(structure, team, disjunction);
  Shared shared;
  shared.budget = options.budget;
  Search search(program, engine, shared);
  const Rows rows = program.initial_rows(team);
  std::pair<Rows, Rows> cover;
  if (!search.split_range(program.root(), rows, 0,
                          search.choice_count(program.root(), rows.size()), &cover)) {
    return std::nullopt;
  }
  const std::size_t width = program.domain_width();
  return std::make_pair(Team(team.domain(), truncate_rows(cover.first, width)),
                        Team(team.domain(), truncate_rows(cover.second, width)));
}

std::optional<std::pair<std::size_t, std::size_t>> dependence_violation(
    const Structure& structure, const Team& team, const DependenceAtom& atom) {
  std::vector<Tuple> ante(team.size()), cons(team.size());
  for (std::size_t r = 0; r < team.size(); ++r) {
    const Assignment s = team.assignment(r);
    for (const Term& t : atom.antecedent) ante[r].push_back(eval_term(t, structure, s));
    for (const Term& t : atom.consequent) cons[r].push_back(eval_term(t, structure, s));
  }
  for (std::size_t i = 0; i < team.size(); ++i) {
    for (std::size_t j = i + 1; j < team.size(); ++j) {
      if (ante[i] == ante[j] && cons[i] != cons[j]) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

}  // namespace deplogic
