#include "core/syntax.hpp"

#include <algorithm>
#include <type_traits>
#include <utility>

#include "core/error.hpp"
#include "core/lexer.hpp"

namespace deplogic {

namespace {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_keyword(std::string_view word) {
  return word == "forall" || word == "exists";
}

std::string at(const Token& tok) {
  return std::to_string(tok.line) + ":" + std::to_string(tok.column) + ": ";
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab)
      : tokens_(detail::tokenize(text)), vocab_(vocab) {}

  FormulaPtr parse() {
    if (tokens_.peek().kind == TokenKind::kEnd) {
      tokens_.fail(tokens_.peek(), "empty formula");
    }
    FormulaPtr f = disjunction();
    if (tokens_.peek().kind != TokenKind::kEnd) {
      tokens_.fail(tokens_.peek(),
                   "unexpected " + detail::describe(tokens_.peek()));
    }
    return f;
  }

 private:
  FormulaPtr disjunction() {
    FormulaPtr left = conjunction();
    while (tokens_.accept(TokenKind::kPipe)) {
      left = make_or(std::move(left), conjunction());
    }
    return left;
  }

  FormulaPtr conjunction() {
    FormulaPtr left = unit();
    while (tokens_.accept(TokenKind::kAmp)) {
      left = make_and(std::move(left), unit());
    }
    return left;
  }

  FormulaPtr unit() {
    const Token& tok = tokens_.peek();
    switch (tok.kind) {
      case TokenKind::kLParen: {
        tokens_.next();
        FormulaPtr inner = disjunction();
        tokens_.expect(TokenKind::kRParen, "')'");
        return inner;
      }
      case TokenKind::kBang:
        return negated_atom();
      case TokenKind::kEquals:
        if (tokens_.peek(1).kind == TokenKind::kLParen) return dependence_atom();
        tokens_.fail(tok, "expected formula, found '='");
      case TokenKind::kIdent:
        if (is_keyword(tok.text)) return quantifier();
        if (tokens_.peek(1).kind == TokenKind::kLParen &&
            vocab_.relations.contains(tok.text)) {
          return relation_atom(false);
        }
        return equality();
      default:
        tokens_.fail(tok, "expected formula, found " + detail::describe(tok));
    }
  }

  FormulaPtr negated_atom() {
    const Token bang = tokens_.next();
    const Token& tok = tokens_.peek();
    if (tok.kind == TokenKind::kIdent && !is_keyword(tok.text) &&
        tokens_.peek(1).kind == TokenKind::kLParen &&
        vocab_.relations.contains(tok.text)) {
      return relation_atom(true);
    }
    if (tok.kind == TokenKind::kIdent && !is_keyword(tok.text) &&
        tokens_.peek(1).kind == TokenKind::kLParen &&
        !vocab_.functions.contains(tok.text)) {
      throw Error(ErrorCode::kUnknownSymbol,
                  at(tok) + "unknown relation symbol '" + tok.text + "'");
    }
    throw Error(ErrorCode::kNegation,
                at(bang) + "negation applies only to relational atoms");
  }

  FormulaPtr quantifier() {
    const Token kw = tokens_.next();
    const Token& var = tokens_.expect(TokenKind::kIdent, "variable");
    if (is_keyword(var.text) || vocab_.constants.contains(var.text)) {
      tokens_.fail(var, "'" + var.text + "' cannot be bound");
    }
    std::string name = var.text;
    FormulaPtr body = disjunction();
    return kw.text == "forall" ? make_forall(std::move(name), std::move(body))
                               : make_exists(std::move(name), std::move(body));
  }

  FormulaPtr dependence_atom() {
    tokens_.next();  // '='
    tokens_.next();  // '('
    std::vector<Term> antecedent;
    if (tokens_.peek().kind != TokenKind::kSemicolon) antecedent = term_list();
    tokens_.expect(TokenKind::kSemicolon, "';' in dependence atom");
    std::vector<Term> consequent = term_list();
    tokens_.expect(TokenKind::kRParen, "')'");
    return make_dependence(std::move(antecedent), std::move(consequent));
  }

  FormulaPtr relation_atom(bool negated) {
    const Token name = tokens_.next();
    tokens_.expect(TokenKind::kLParen, "'('");
    std::vector<Term> args;
    if (tokens_.peek().kind != TokenKind::kRParen) args = term_list();
    tokens_.expect(TokenKind::kRParen, "')'");
    const std::size_t arity = vocab_.relations.find(name.text)->second;
    if (args.size() != arity) {
      throw Error(ErrorCode::kArity, at(name) + "relation '" + name.text +
                                         "' expects " + std::to_string(arity) +
                                         " arguments, got " +
                                         std::to_string(args.size()));
    }
    return make_relation(name.text, std::move(args), negated);
  }

  FormulaPtr equality() {
    Term lhs = term();
    const Token& tok = tokens_.peek();
    if (tok.kind != TokenKind::kEquals) {
      tokens_.fail(tok, "expected '=' after term, found " + detail::describe(tok));
    }
    tokens_.next();
    Term rhs = term();
    return make_equality(std::move(lhs), std::move(rhs));
  }

  std::vector<Term> term_list() {
    std::vector<Term> terms;
    terms.push_back(term());
    while (tokens_.accept(TokenKind::kComma)) terms.push_back(term());
    return terms;
  }

  Term term() {
    const Token tok = tokens_.peek();
    if (tok.kind != TokenKind::kIdent) {
      tokens_.fail(tok, "expected term, found " + detail::describe(tok));
    }
    if (is_keyword(tok.text)) tokens_.fail(tok, "quantifier where term expected");
    tokens_.next();
    if (tokens_.peek().kind == TokenKind::kLParen) {
      auto fn = vocab_.functions.find(tok.text);
      if (fn == vocab_.functions.end()) {
        if (vocab_.relations.contains(tok.text)) {
          throw Error(ErrorCode::kUnknownSymbol,
                      at(tok) + "relation '" + tok.text + "' used as a term");
        }
        throw Error(ErrorCode::kUnknownSymbol,
                    at(tok) + "unknown symbol '" + tok.text + "'");
      }
      tokens_.next();
      std::vector<Term> args = term_list();
      tokens_.expect(TokenKind::kRParen, "')'");
      if (args.size() != fn->second) {
        throw Error(ErrorCode::kArity, at(tok) + "function '" + tok.text +
                                           "' expects " +
                                           std::to_string(fn->second) +
                                           " arguments, got " +
                                           std::to_string(args.size()));
      }
      return Term::function(tok.text, std::move(args));
    }
    if (vocab_.functions.contains(tok.text)) {
      throw Error(ErrorCode::kArity,
                  at(tok) + "function '" + tok.text + "' used without arguments");
    }
    if (vocab_.constants.contains(tok.text)) return Term::constant(tok.text);
    return Term::variable(tok.text);
  }

  TokenStream tokens_;
  const Vocabulary& vocab_;
};

void validate_term(const Term& t, const Vocabulary& vocab) {
  switch (t.kind) {
    case Term::Kind::kVariable:
      return;
    case Term::Kind::kConstant:
      if (!vocab.constants.contains(t.symbol)) {
        throw Error(ErrorCode::kUnknownSymbol,
                    "unknown constant '" + t.symbol + "'");
      }
      return;
    case Term::Kind::kFunction: {
      auto fn = vocab.functions.find(t.symbol);
      if (fn == vocab.functions.end()) {
        throw Error(ErrorCode::kUnknownSymbol,
                    "unknown function '" + t.symbol + "'");
      }
      if (fn->second != t.args.size()) {
        throw Error(ErrorCode::kArity, "function '" + t.symbol +
                                           "' applied to wrong number of "
                                           "arguments");
      }
      for (const Term& a : t.args) validate_term(a, vocab);
      return;
    }
  }
}

void term_variables(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::kVariable) out.insert(t.symbol);
  for (const Term& a : t.args) term_variables(a, out);
}

std::size_t term_symbols(const Term& t) {
  std::size_t n = 1;
  for (const Term& a : t.args) n += term_symbols(a);
  return n;
}

std::size_t term_symbols(const std::vector<Term>& ts) {
  std::size_t n = 0;
  for (const Term& t : ts) n += term_symbols(t);
  return n;
}

void free_vars_into(const Formula& f, std::set<std::string>& bound,
                    std::set<std::string>& out) {
  auto add_terms = [&](const std::vector<Term>& ts) {
    std::set<std::string> vs;
    for (const Term& t : ts) term_variables(t, vs);
    for (const auto& v : vs) {
      if (!bound.contains(v)) out.insert(v);
    }
  };
  auto quantified = [&](const std::string& var, const Formula& body) {
    const bool fresh = bound.insert(var).second;
    free_vars_into(body, bound, out);
    if (fresh) bound.erase(var);
  };
  std::visit(
      Overloaded{
          [&](const Equality& e) { add_terms({e.lhs, e.rhs}); },
          [&](const RelationAtom& r) { add_terms(r.args); },
          [&](const DependenceAtom& d) {
            add_terms(d.antecedent);
            add_terms(d.consequent);
          },
          [&](const Conjunction& c) {
            free_vars_into(*c.left, bound, out);
            free_vars_into(*c.right, bound, out);
          },
          [&](const Disjunction& d) {
            free_vars_into(*d.left, bound, out);
            free_vars_into(*d.right, bound, out);
          },
          [&](const Existential& q) { quantified(q.variable, *q.body); },
          [&](const Universal& q) { quantified(q.variable, *q.body); },
      },
      f.node());
}

// Binding strength used by the printer.
enum Prec { kOr = 0, kAnd = 1, kUnit = 2 };

void print_terms(const std::vector<Term>& ts, std::string& out) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ',';
    out += to_string(ts[i]);
  }
}

// `open_right` is true when nothing follows this subformula inside the
// current parenthesised scope, which is the only place a quantifier may
// appear bare since its scope extends maximally to the right.
void print(const Formula& f, Prec ctx, bool open_right, std::string& out) {
  std::visit(
      Overloaded{
          [&](const Equality& e) {
            out += to_string(e.lhs);
            out += " = ";
            out += to_string(e.rhs);
          },
          [&](const RelationAtom& r) {
            if (r.negated) out += '!';
            out += r.relation;
            out += '(';
            print_terms(r.args, out);
            out += ')';
          },
          [&](const DependenceAtom& d) {
            out += "=(";
            print_terms(d.antecedent, out);
            out += ';';
            print_terms(d.consequent, out);
            out += ')';
          },
          [&](const Conjunction& c) {
            const bool parens = ctx > kAnd;
            const bool inner_open = parens || open_right;
            if (parens) out += '(';
            print(*c.left, kAnd, false, out);
            out += " & ";
            print(*c.right, kUnit, inner_open, out);
            if (parens) out += ')';
          },
          [&](const Disjunction& d) {
            const bool parens = ctx > kOr;
            const bool inner_open = parens || open_right;
            if (parens) out += '(';
            print(*d.left, kOr, false, out);
            out += " | ";
            print(*d.right, kAnd, inner_open, out);
            if (parens) out += ')';
          },
          [&](const Existential& q) {
            if (!open_right) out += '(';
            out += "exists ";
            out += q.variable;
            out += ' ';
            print(*q.body, kOr, true, out);
            if (!open_right) out += ')';
          },
          [&](const Universal& q) {
            if (!open_right) out += '(';
            out += "forall ";
            out += q.variable;
            out += ' ';
            print(*q.body, kOr, true, out);
            if (!open_right) out += ')';
          },
      },
      f.node());
}

void analyze_into(const Formula& f, SyntacticParams& p) {
  ++p.size;
  std::visit(
      Overloaded{
          [&](const Equality& e) {
            p.size += term_symbols(e.lhs) + term_symbols(e.rhs);
          },
          [&](const RelationAtom& r) { p.size += term_symbols(r.args); },
          [&](const DependenceAtom& d) {
            p.size += term_symbols(d.antecedent) + term_symbols(d.consequent);
            p.arity = std::max(p.arity, d.antecedent.size());
          },
          [&](const Conjunction& c) {
            analyze_into(*c.left, p);
            analyze_into(*c.right, p);
          },
          [&](const Disjunction& d) {
            ++p.splits;
            analyze_into(*d.left, p);
            analyze_into(*d.right, p);
          },
          [&](const Existential& q) { analyze_into(*q.body, p); },
          [&](const Universal& q) {
            ++p.foralls;
            analyze_into(*q.body, p);
          },
      },
      f.node());
}

}  // namespace

Term Term::variable(std::string name) {
  return Term{Kind::kVariable, std::move(name), {}};
}

Term Term::constant(std::string name) {
  return Term{Kind::kConstant, std::move(name), {}};
}

Term Term::function(std::string name, std::vector<Term> args) {
  return Term{Kind::kFunction, std::move(name), std::move(args)};
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Equality>) {
          return x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, RelationAtom>) {
          return x.relation == y.relation && x.negated == y.negated &&
                 x.args == y.args;
        } else if constexpr (std::is_same_v<T, DependenceAtom>) {
          return x.antecedent == y.antecedent && x.consequent == y.consequent;
        } else if constexpr (std::is_same_v<T, Conjunction> ||
                             std::is_same_v<T, Disjunction>) {
          return *x.left == *y.left && *x.right == *y.right;
        } else {
          return x.variable == y.variable && *x.body == *y.body;
        }
      },
      a.node());
}

FormulaPtr make_equality(Term lhs, Term rhs) {
  return std::make_shared<const Formula>(Equality{std::move(lhs), std::move(rhs)});
}

FormulaPtr make_relation(std::string relation, std::vector<Term> args,
                         bool negated) {
  return std::make_shared<const Formula>(
      RelationAtom{std::move(relation), std::move(args), negated});
}

FormulaPtr make_dependence(std::vector<Term> antecedent,
                           std::vector<Term> consequent) {
  return std::make_shared<const Formula>(
      DependenceAtom{std::move(antecedent), std::move(consequent)});
}

FormulaPtr make_and(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<const Formula>(
      Conjunction{std::move(left), std::move(right)});
}

FormulaPtr make_or(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<const Formula>(
      Disjunction{std::move(left), std::move(right)});
}

FormulaPtr make_exists(std::string variable, FormulaPtr body) {
  return std::make_shared<const Formula>(
      Existential{std::move(variable), std::move(body)});
}

FormulaPtr make_forall(std::string variable, FormulaPtr body) {
  return std::make_shared<const Formula>(
      Universal{std::move(variable), std::move(body)});
}

FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab) {
  return Parser(text, vocab).parse();
}

void validate(const Formula& formula, const Vocabulary& vocab) {
  std::visit(
      Overloaded{
          [&](const Equality& e) {
            validate_term(e.lhs, vocab);
            validate_term(e.rhs, vocab);
          },
          [&](const RelationAtom& r) {
            auto rel = vocab.relations.find(r.relation);
            if (rel == vocab.relations.end()) {
              throw Error(ErrorCode::kUnknownSymbol,
                          "unknown relation '" + r.relation + "'");
            }
            if (rel->second != r.args.size()) {
              throw Error(ErrorCode::kArity,
                          "relation '" + r.relation +
                              "' applied to wrong number of arguments");
            }
            for (const Term& t : r.args) validate_term(t, vocab);
          },
          [&](const DependenceAtom& d) {
            for (const Term& t : d.antecedent) validate_term(t, vocab);
            for (const Term& t : d.consequent) validate_term(t, vocab);
          },
          [&](const Conjunction& c) {
            validate(*c.left, vocab);
            validate(*c.right, vocab);
          },
          [&](const Disjunction& d) {
            validate(*d.left, vocab);
            validate(*d.right, vocab);
          },
          [&](const Existential& q) { validate(*q.body, vocab); },
          [&](const Universal& q) { validate(*q.body, vocab); },
      },
      formula.node());
}

std::string to_string(const Term& term) {
  std::string out = term.symbol;
  if (term.kind == Term::Kind::kFunction) {
    out += '(';
    print_terms(term.args, out);
    out += ')';
  }
  return out;
}

std::string to_string(const Formula& formula) {
  std::string out;
  print(formula, kOr, true, out);
  return out;
}

std::set<std::string> free_variables(const Formula& formula) {
  std::set<std::string> bound;
  std::set<std::string> out;
  free_vars_into(formula, bound, out);
  return out;
}

std::set<std::string> variables(const Formula& formula) {
  std::set<std::string> out;
  std::visit(
      Overloaded{
          [&](const Equality& e) {
            term_variables(e.lhs, out);
            term_variables(e.rhs, out);
          },
          [&](const RelationAtom& r) {
            for (const Term& t : r.args) term_variables(t, out);
          },
          [&](const DependenceAtom& d) {
            for (const Term& t : d.antecedent) term_variables(t, out);
            for (const Term& t : d.consequent) term_variables(t, out);
          },
          [&](const Conjunction& c) {
            out.merge(variables(*c.left));
            out.merge(variables(*c.right));
          },
          [&](const Disjunction& d) {
            out.merge(variables(*d.left));
            out.merge(variables(*d.right));
          },
          [&](const Existential& q) {
            out.insert(q.variable);
            out.merge(variables(*q.body));
          },
          [&](const Universal& q) {
            out.insert(q.variable);
            out.merge(variables(*q.body));
          },
      },
      formula.node());
  return out;
}

bool has_dependence_atoms(const Formula& formula) {
  return std::visit(
      Overloaded{
          [](const DependenceAtom&) { return true; },
          [](const Conjunction& c) {
            return has_dependence_atoms(*c.left) || has_dependence_atoms(*c.right);
          },
          [](const Disjunction& d) {
            return has_dependence_atoms(*d.left) || has_dependence_atoms(*d.right);
          },
          [](const Existential& q) { return has_dependence_atoms(*q.body); },
          [](const Universal& q) { return has_dependence_atoms(*q.body); },
          [](const auto&) { return false; },
      },
      formula.node());
}

SyntacticParams analyze(const Formula& formula) {
  SyntacticParams p;
  analyze_into(formula, p);
  p.vars = variables(formula).size();
  p.free_vars = free_variables(formula).size();
  return p;
}

}  // namespace deplogic
