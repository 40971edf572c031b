#include "core/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/lexer.hpp"

namespace deplogic {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string element_for_variable(std::size_t j) { return "p" + std::to_string(j); }

// Compares embedded digit runs numerically.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view na(a.data() + i, ie - i), nb(b.data() + j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
  return a < b;
}

class PdlParser {
 public:
  explicit PdlParser(std::string_view text) : tokens_(detail::tokenize(text)) {}

  PdlPtr parse() {
    using detail::TokenKind;
    if (tokens_.peek().kind == TokenKind::kEnd) tokens_.fail(tokens_.peek(), "empty formula");
    PdlPtr f = disjunction();
    if (tokens_.peek().kind != TokenKind::kEnd) {
      tokens_.fail(tokens_.peek(), "unexpected " + detail::describe(tokens_.peek()));
    }
    return f;
  }

 private:
  PdlPtr disjunction() {
    PdlPtr left = conjunction();
    while (tokens_.accept(detail::TokenKind::kPipe)) left = make_pdl_or(left, conjunction());
    return left;
  }

  PdlPtr conjunction() {
    PdlPtr left = unit();
    while (tokens_.accept(detail::TokenKind::kAmp)) left = make_pdl_and(left, unit());
    return left;
  }

  PdlPtr unit() {
    using detail::TokenKind;
    const detail::Token tok = tokens_.peek();
    switch (tok.kind) {
      case TokenKind::kLParen: {
        tokens_.next();
        PdlPtr inner = disjunction();
        tokens_.expect(TokenKind::kRParen, "')'");
        return inner;
      }
      case TokenKind::kBang: {
        tokens_.next();
        if (tokens_.peek().kind != TokenKind::kIdent) {
          throw Error(ErrorCode::kNegation, std::to_string(tok.line) + ":" +
                                                std::to_string(tok.column) +
                                                ": negation applies only to propositions");
        }
        return make_pdl_literal(proposition(), false);
      }
      case TokenKind::kEquals: {
        tokens_.next();
        tokens_.expect(TokenKind::kLParen, "'(' after '='");
        std::vector<std::string> antecedent;
        if (tokens_.peek().kind != TokenKind::kSemicolon) antecedent = list();
        tokens_.expect(TokenKind::kSemicolon, "';' in dependence atom");
        std::vector<std::string> consequent = list();
        tokens_.expect(TokenKind::kRParen, "')'");
        return make_pdl_dependence(std::move(antecedent), std::move(consequent));
      }
      case TokenKind::kIdent:
        return make_pdl_literal(proposition(), true);
      default:
        tokens_.fail(tok, "expected formula, found " + detail::describe(tok));
    }
  }

  std::vector<std::string> list() {
    std::vector<std::string> out{proposition()};
    while (tokens_.accept(detail::TokenKind::kComma)) out.push_back(proposition());
    return out;
  }

  std::string proposition() {
    const detail::Token& tok = tokens_.expect(detail::TokenKind::kIdent, "proposition");
    if (tok.text == "forall" || tok.text == "exists") {
      tokens_.fail(tok, "quantifiers are not propositional");
    }
    if (tokens_.peek().kind == detail::TokenKind::kLParen) {
      tokens_.fail(tokens_.peek(), "propositions take no arguments");
    }
    return tok.text;
  }

  detail::TokenStream tokens_;
};

void collect_props(const PdlFormula& f, std::set<std::string>& out) {
  std::visit(Overloaded{
                 [&](const PdlLiteral& l) { out.insert(l.proposition); },
                 [&](const PdlDependence& d) {
                   out.insert(d.antecedent.begin(), d.antecedent.end());
                   out.insert(d.consequent.begin(), d.consequent.end());
                 },
                 [&](const PdlAnd& a) {
                   collect_props(*a.left, out);
                   collect_props(*a.right, out);
                 },
                 [&](const PdlOr& o) {
                   collect_props(*o.left, out);
                   collect_props(*o.right, out);
                 },
             },
             f.node());
}

void print_pdl(const PdlFormula& f, int ctx, std::string& out) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += v[i];
    }
    return s;
  };
  std::visit(Overloaded{
                 [&](const PdlLiteral& l) {
                   if (!l.positive) out += '!';
                   out += l.proposition;
                 },
                 [&](const PdlDependence& d) {
                   out += "=(" + join(d.antecedent) + ";" + join(d.consequent) + ")";
                 },
                 [&](const PdlAnd& a) {
                   if (ctx > 1) out += '(';
                   print_pdl(*a.left, 1, out);
                   out += " & ";
                   print_pdl(*a.right, 2, out);
                   if (ctx > 1) out += ')';
                 },
                 [&](const PdlOr& o) {
                   if (ctx > 0) out += '(';
                   print_pdl(*o.left, 0, out);
                   out += " | ";
                   print_pdl(*o.right, 1, out);
                   if (ctx > 0) out += ')';
                 },
             },
             f.node());
}

// Formula over proposition indices for fast team evaluation.
struct CompiledPdl {
  enum class Kind { kLiteral, kDependence, kAnd, kOr };
  Kind kind;
  std::uint64_t antecedent_mask = 0;  // literal: the proposition bit
  std::uint64_t consequent_mask = 0;
  bool positive = true;
  std::unique_ptr<CompiledPdl> left, right;
};

std::unique_ptr<CompiledPdl> compile_pdl(const PdlFormula& f,
                                         const std::map<std::string, std::size_t>& index) {
  auto bit = [&](const std::string& p) -> std::uint64_t {
    auto it = index.find(p);
    if (it == index.end()) {
      throw Error(ErrorCode::kDomain, "team does not assign proposition '" + p + "'");
    }
    return std::uint64_t{1} << it->second;
  };
  auto c = std::make_unique<CompiledPdl>();
  std::visit(Overloaded{
                 [&](const PdlLiteral& l) {
                   c->kind = CompiledPdl::Kind::kLiteral;
                   c->antecedent_mask = bit(l.proposition);
                   c->positive = l.positive;
                 },
                 [&](const PdlDependence& d) {
                   c->kind = CompiledPdl::Kind::kDependence;
                   for (const auto& p : d.antecedent) c->antecedent_mask |= bit(p);
                   for (const auto& p : d.consequent) c->consequent_mask |= bit(p);
                 },
                 [&](const PdlAnd& a) {
                   c->kind = CompiledPdl::Kind::kAnd;
                   c->left = compile_pdl(*a.left, index);
                   c->right = compile_pdl(*a.right, index);
                 },
                 [&](const PdlOr& o) {
                   c->kind = CompiledPdl::Kind::kOr;
                   c->left = compile_pdl(*o.left, index);
                   c->right = compile_pdl(*o.right, index);
                 },
             },
             f.node());
  return c;
}

bool eval_pdl(const CompiledPdl& f, const std::vector<std::uint64_t>& team) {
  switch (f.kind) {
    case CompiledPdl::Kind::kLiteral:
      return std::all_of(team.begin(), team.end(), [&](std::uint64_t s) {
        return ((s & f.antecedent_mask) != 0) == f.positive;
      });
    case CompiledPdl::Kind::kDependence:
      for (std::size_t i = 0; i < team.size(); ++i) {
        for (std::size_t j = i + 1; j < team.size(); ++j) {
          if ((team[i] & f.antecedent_mask) == (team[j] & f.antecedent_mask) &&
              (team[i] & f.consequent_mask) != (team[j] & f.consequent_mask)) {
            return false;
          }
        }
      }
      return true;
    case CompiledPdl::Kind::kAnd:
      return eval_pdl(*f.left, team) && eval_pdl(*f.right, team);
    case CompiledPdl::Kind::kOr: {
      if (team.size() >= 64) throw Error(ErrorCode::kLimit, "team too large for split search");
      std::vector<std::uint64_t> part0, part1;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << team.size()); ++mask) {
        part0.clear();
        part1.clear();
        for (std::size_t r = 0; r < team.size(); ++r) {
          ((mask >> r) & 1 ? part0 : part1).push_back(team[r]);
        }
        if (eval_pdl(*f.left, part0) && eval_pdl(*f.right, part1)) return true;
      }
      return false;
    }
  }
  return false;
}

FormulaPtr translate_pdl(const PdlFormula& f, const std::map<std::string, std::string>& var) {
  auto vars = [&](const std::vector<std::string>& props) {
    std::vector<Term> terms;
    for (const auto& p : props) terms.push_back(Term::variable(var.at(p)));
    return terms;
  };
  return std::visit(
      Overloaded{
          [&](const PdlLiteral& l) {
            return make_relation("TRUE", {Term::variable(var.at(l.proposition))}, !l.positive);
          },
          [&](const PdlDependence& d) {
            return make_dependence(vars(d.antecedent), vars(d.consequent));
          },
          [&](const PdlAnd& a) {
            return make_and(translate_pdl(*a.left, var), translate_pdl(*a.right, var));
          },
          [&](const PdlOr& o) {
            return make_or(translate_pdl(*o.left, var), translate_pdl(*o.right, var));
          },
      },
      f.node());
}

}  // namespace

void validate(const Cnf& cnf) {
  for (const Clause& c : cnf.clauses) {
    for (const Literal& l : c) {
      if (l.variable < 1 || l.variable > cnf.variables) {
        throw Error(ErrorCode::kInvalid,
                    "literal on variable " + std::to_string(l.variable) +
                        " outside 1.." + std::to_string(cnf.variables));
      }
    }
  }
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  bool header = false;
  std::size_t expected = 0;
  std::vector<Literal> pending;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string tok;
    if (!(fields >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "%") break;
    if (tok == "p") {
      std::string format;
      long long n = -1, m = -1;
      if (header || !(fields >> format >> n >> m) || format != "cnf" || n < 0 || m < 0) {
        throw SyntaxError(number, 1, "expected a single 'p cnf <vars> <clauses>' header");
      }
      header = true;
      cnf.variables = static_cast<std::size_t>(n);
      expected = static_cast<std::size_t>(m);
      continue;
    }
    if (!header) throw SyntaxError(number, 1, "clause before 'p cnf' header");
    do {
      long long lit = 0;
      std::size_t used = 0;
      try {
        lit = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || used == 0) {
        throw SyntaxError(number, 1, "bad literal '" + tok + "'");
      }
      if (lit == 0) {
        if (pending.size() != 3) {
          throw Error(ErrorCode::kInvalid,
                      "line " + std::to_string(number) + ": clause has " +
                          std::to_string(pending.size()) + " literals, exactly 3 required");
        }
        cnf.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
        if (var > cnf.variables) {
          throw SyntaxError(number, 1, "variable " + std::to_string(var) + " exceeds header");
        }
        pending.push_back({var, lit > 0});
      }
    } while (fields >> tok);
  }
  if (!header) throw SyntaxError(1, 1, "missing 'p cnf' header");
  if (!pending.empty()) throw SyntaxError(number, 1, "last clause is not terminated by 0");
  if (cnf.clauses.size() != expected) {
    throw Error(ErrorCode::kInvalid, "header announces " + std::to_string(expected) +
                                         " clauses, found " +
                                         std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::string write_dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.variables) + " " +
                    std::to_string(cnf.clauses.size()) + "\n";
  for (const Clause& c : cnf.clauses) {
    for (const Literal& l : c) {
      out += (l.positive ? "" : "-") + std::to_string(l.variable) + " ";
    }
    out += "0\n";
  }
  return out;
}

FormulaPtr three_sat_formula() {
  auto dep = [](const char* a, const char* b) {
    return make_dependence({Term::variable(a)}, {Term::variable(b)});
  };
  return make_or(make_or(dep("x", "y"), dep("u", "v")), dep("u", "v"));
}

Instance reduce_3sat(const Cnf& cnf) {
  validate(cnf);
  const std::size_t n = cnf.variables;
  const std::size_t m = cnf.clauses.size();
  // Positions run up to 2, so the number block is 0..max(m, 2).
  const std::size_t top = std::max<std::size_t>(m, 2);
  std::vector<std::string> universe;
  universe.reserve(n + top + 1);
  for (std::size_t j = 1; j <= n; ++j) universe.push_back(element_for_variable(j));
  for (std::size_t i = 0; i <= top; ++i) universe.push_back(std::to_string(i));
  Structure structure(std::move(universe));

  // Integer k of the 0..m block sits at position n + k.
  auto number = [&](std::size_t k) { return static_cast<Element>(n + k); };
  std::vector<Tuple> rows;
  rows.reserve(3 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const Literal& l = cnf.clauses[i][j];
      rows.push_back({static_cast<Element>(l.variable - 1), number(l.positive ? 1 : 0),
                      number(i + 1), number(j)});
    }
  }
  Team team({"x", "y", "u", "v"}, std::move(rows));
  return Instance{std::move(structure), std::move(team), three_sat_formula()};
}

bool sat_brute(const Cnf& cnf) {
  validate(cnf);
  if (cnf.variables > kSatBruteLimit) {
    throw Error(ErrorCode::kLimit, "brute-force SAT limited to " +
                                       std::to_string(kSatBruteLimit) + " variables");
  }
  std::vector<bool> valuation(cnf.variables);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cnf.variables); ++bits) {
    for (std::size_t j = 0; j < cnf.variables; ++j) valuation[j] = (bits >> j) & 1;
    if (satisfies(cnf, valuation)) return true;
  }
  return false;
}

std::vector<bool> valuation_from_part(const Cnf& cnf, const Structure& structure,
                                      const Team& part) {
  std::vector<bool> valuation(cnf.variables, false);
  const auto x = part.column("x");
  const auto y = part.column("y");
  if (!x || !y) throw Error(ErrorCode::kDomain, "part must assign x and y");
  const auto one = structure.find("1");
  for (const Tuple& row : part.rows()) {
    if (one && row[*y] == *one && row[*x] < cnf.variables) valuation[row[*x]] = true;
  }
  return valuation;
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& valuation) {
  return std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](const Literal& l) {
      return valuation.at(l.variable - 1) == l.positive;
    });
  });
}

PdlPtr make_pdl_literal(std::string proposition, bool positive) {
  return std::make_shared<const PdlFormula>(PdlLiteral{std::move(proposition), positive});
}

PdlPtr make_pdl_dependence(std::vector<std::string> antecedent,
                           std::vector<std::string> consequent) {
  return std::make_shared<const PdlFormula>(
      PdlDependence{std::move(antecedent), std::move(consequent)});
}

PdlPtr make_pdl_and(PdlPtr left, PdlPtr right) {
  return std::make_shared<const PdlFormula>(PdlAnd{std::move(left), std::move(right)});
}

PdlPtr make_pdl_or(PdlPtr left, PdlPtr right) {
  return std::make_shared<const PdlFormula>(PdlOr{std::move(left), std::move(right)});
}

PdlPtr parse_pdl(std::string_view text) { return PdlParser(text).parse(); }

std::string to_string(const PdlFormula& formula) {
  std::string out;
  print_pdl(formula, 0, out);
  return out;
}

std::vector<std::string> propositions(const PdlFormula& formula) {
  std::set<std::string> props;
  collect_props(formula, props);
  std::vector<std::string> out(props.begin(), props.end());
  std::sort(out.begin(), out.end(), natural_less);
  return out;
}

bool pdl_check(const PropTeam& team, const PdlFormula& formula) {
  if (team.propositions.size() > 64) throw Error(ErrorCode::kLimit, "too many propositions");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < team.propositions.size(); ++i) {
    index.emplace(team.propositions[i], i);
  }
  const auto compiled = compile_pdl(formula, index);
  std::vector<std::uint64_t> rows = team.rows;
  const std::uint64_t used = team.propositions.size() == 64
                                 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << team.propositions.size()) - 1;
  for (auto& r : rows) r &= used;
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return eval_pdl(*compiled, rows);
}

bool pdl_sat_brute(const PdlFormula& formula) {
  PropTeam team;
  team.propositions = propositions(formula);
  const std::size_t n = team.propositions.size();
  if (n > kPdlBruteLimit) {
    throw Error(ErrorCode::kLimit, "brute-force PDL satisfiability limited to " +
                                       std::to_string(kPdlBruteLimit) + " propositions");
  }
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    team.rows = {s};
    if (pdl_check(team, formula)) return true;
  }
  return false;
}

Instance reduce_pdl(const PdlFormula& formula) {
  const std::vector<std::string> props = propositions(formula);
  std::map<std::string, std::string> var;
  for (std::size_t i = 0; i < props.size(); ++i) {
    var.emplace(props[i], "x" + std::to_string(i + 1));
  }
  Structure structure({"0", "1"});
  structure.add_relation("TRUE", 1, {Tuple{1}});
  FormulaPtr body = translate_pdl(formula, var);
  for (std::size_t i = props.size(); i-- > 0;) {
    body = make_exists("x" + std::to_string(i + 1), std::move(body));
  }
  return Instance{std::move(structure), Team::unit(), std::move(body)};
}

}  // namespace deplogic
