#include "core/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace deplogic {

namespace {

void sort_unique(std::vector<Tuple>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

bool valid_element_name(std::string_view name) {
  if (name.empty() || name == "-") return false;
  if (name.find("->") != std::string_view::npos) return false;
  return name.find_first_of("(),#= \t\r\n") == std::string_view::npos;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& message) {
  throw SyntaxError(line, 1, message);
}

// Parses "name/arity: rest" after the keyword.
struct Declaration {
  std::string symbol;
  std::size_t arity;
  std::string_view body;
};

Declaration parse_declaration(std::string_view rest, std::size_t line) {
  const auto colon = rest.find(':');
  if (colon == std::string_view::npos) fail_line(line, "missing ':'");
  const std::string_view head = trim(rest.substr(0, colon));
  const auto slash = head.find('/');
  if (slash == std::string_view::npos) fail_line(line, "missing '/arity'");
  Declaration d;
  d.symbol = std::string(trim(head.substr(0, slash)));
  const std::string arity_text(trim(head.substr(slash + 1)));
  if (d.symbol.empty()) fail_line(line, "missing symbol name");
  try {
    std::size_t used = 0;
    d.arity = std::stoul(arity_text, &used);
    if (used != arity_text.size()) throw std::invalid_argument(arity_text);
  } catch (const std::exception&) {
    fail_line(line, "bad arity '" + arity_text + "'");
  }
  d.body = rest.substr(colon + 1);
  return d;
}

// Splits "(a,b) (c,d) e" into element-name groups; bare names are unary.
std::vector<std::vector<std::string>> parse_groups(std::string_view body,
                                                   std::size_t line) {
  std::vector<std::vector<std::string>> groups;
  std::size_t i = 0;
  while (i < body.size()) {
    if (std::isspace(static_cast<unsigned char>(body[i]))) {
      ++i;
      continue;
    }
    if (body[i] == '(') {
      const auto close = body.find(')', i);
      if (close == std::string_view::npos) fail_line(line, "unclosed '('");
      std::vector<std::string> group;
      std::string_view inner = trim(body.substr(i + 1, close - i - 1));
      if (!inner.empty()) {
        std::size_t start = 0;
        while (true) {
          const auto comma = inner.find(',', start);
          group.emplace_back(trim(inner.substr(
              start, comma == std::string_view::npos ? comma : comma - start)));
          if (comma == std::string_view::npos) break;
          start = comma + 1;
        }
      }
      groups.push_back(std::move(group));
      i = close + 1;
    } else {
      std::size_t end = i;
      while (end < body.size() &&
             !std::isspace(static_cast<unsigned char>(body[end]))) {
        ++end;
      }
      groups.push_back({std::string(body.substr(i, end - i))});
      i = end;
    }
  }
  return groups;
}

Tuple resolve(const Structure& s, const std::vector<std::string>& names,
              std::size_t line) {
  Tuple t;
  t.reserve(names.size());
  for (const auto& n : names) {
    auto e = s.find(n);
    if (!e) fail_line(line, "unknown element '" + n + "'");
    t.push_back(*e);
  }
  return t;
}

std::size_t table_size(std::size_t universe, std::size_t arity) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (universe != 0 && n > (std::size_t{1} << 26) / universe) {
      throw Error(ErrorCode::kLimit, "function table too large");
    }
    n *= universe;
  }
  return n;
}

std::size_t table_index(std::span<const Element> args, std::size_t universe) {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * universe + a;
  return idx;
}

}  // namespace

bool Relation::contains(std::span<const Element> tuple) const {
  return std::binary_search(
      tuples.begin(), tuples.end(), tuple, [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                            b.end());
      });
}

Element Function::apply(std::span<const Element> args,
                        std::size_t universe_size) const {
  return table[table_index(args, universe_size)];
}

Structure::Structure(std::vector<std::string> universe)
    : universe_(std::move(universe)) {
  if (universe_.empty()) {
    throw Error(ErrorCode::kInvalid, "universe must be nonempty");
  }
  for (std::size_t i = 0; i < universe_.size(); ++i) {
    if (!valid_element_name(universe_[i])) {
      throw Error(ErrorCode::kInvalid,
                  "invalid element name '" + universe_[i] + "'");
    }
    if (!index_.emplace(universe_[i], static_cast<Element>(i)).second) {
      throw Error(ErrorCode::kInvalid,
                  "duplicate universe element '" + universe_[i] + "'");
    }
  }
}

std::optional<Element> Structure::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Structure::check_fresh(const std::string& symbol) const {
  if (relations_.contains(symbol) || functions_.contains(symbol) ||
      constants_.contains(symbol)) {
    throw Error(ErrorCode::kInvalid, "symbol '" + symbol + "' declared twice");
  }
}

void Structure::add_relation(std::string symbol, std::size_t arity,
                             std::vector<Tuple> tuples) {
  check_fresh(symbol);
  for (const Tuple& t : tuples) {
    if (t.size() != arity) {
      throw Error(ErrorCode::kArity, "tuple of wrong arity in '" + symbol + "'");
    }
    for (Element e : t) {
      if (e >= size()) {
        throw Error(ErrorCode::kInvalid, "tuple outside universe in '" + symbol + "'");
      }
    }
  }
  sort_unique(tuples);
  relations_.emplace(std::move(symbol), Relation{arity, std::move(tuples)});
}

void Structure::add_function(std::string symbol, std::size_t arity,
                             std::vector<Element> table) {
  check_fresh(symbol);
  if (arity == 0) {
    throw Error(ErrorCode::kArity, "function '" + symbol + "' must have arity >= 1");
  }
  if (table.size() != table_size(size(), arity)) {
    throw Error(ErrorCode::kInvalid, "function '" + symbol + "' is not total");
  }
  for (Element e : table) {
    if (e >= size()) {
      throw Error(ErrorCode::kInvalid, "function '" + symbol + "' leaves the universe");
    }
  }
  functions_.emplace(std::move(symbol), Function{arity, std::move(table)});
}

void Structure::add_constant(std::string symbol, Element value) {
  check_fresh(symbol);
  if (value >= size()) {
    throw Error(ErrorCode::kInvalid, "constant '" + symbol + "' outside universe");
  }
  constants_.emplace(std::move(symbol), value);
}

Vocabulary Structure::vocabulary() const {
  Vocabulary v;
  for (const auto& [name, rel] : relations_) v.relations.emplace(name, rel.arity);
  for (const auto& [name, fn] : functions_) v.functions.emplace(name, fn.arity);
  for (const auto& [name, _] : constants_) v.constants.insert(name);
  return v;
}

Element Assignment::at(std::string_view variable) const {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == variable) return values[i];
  }
  throw Error(ErrorCode::kDomain,
              "variable '" + std::string(variable) + "' is not assigned");
}

Team::Team(std::vector<std::string> domain, std::vector<Tuple> rows)
    : domain_(std::move(domain)), rows_(std::move(rows)) {
  std::set<std::string_view> seen;
  for (const auto& v : domain_) {
    if (!seen.insert(v).second) {
      throw Error(ErrorCode::kInvalid, "variable '" + v + "' repeated in team domain");
    }
  }
  for (const Tuple& r : rows_) {
    if (r.size() != domain_.size()) {
      throw Error(ErrorCode::kInvalid, "team row does not match its domain");
    }
  }
  sort_unique(rows_);
}

std::optional<std::size_t> Team::column(std::string_view variable) const {
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (domain_[i] == variable) return i;
  }
  return std::nullopt;
}

Assignment Team::assignment(std::size_t row) const {
  return Assignment{domain_, rows_.at(row)};
}

bool operator==(const Team& a, const Team& b) {
  if (a.domain_.size() != b.domain_.size() || a.size() != b.size()) return false;
  std::vector<std::size_t> perm;
  perm.reserve(a.domain_.size());
  for (const auto& v : a.domain_) {
    auto col = b.column(v);
    if (!col) return false;
    perm.push_back(*col);
  }
  std::vector<Tuple> mapped;
  mapped.reserve(b.size());
  for (const Tuple& r : b.rows_) {
    Tuple t(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) t[i] = r[perm[i]];
    mapped.push_back(std::move(t));
  }
  sort_unique(mapped);
  return mapped == a.rows_;
}

Element eval_term(const Term& term, const Structure& structure,
                  const Assignment& assignment) {
  switch (term.kind) {
    case Term::Kind::kVariable:
      return assignment.at(term.symbol);
    case Term::Kind::kConstant: {
      auto it = structure.constants().find(term.symbol);
      if (it == structure.constants().end()) {
        throw Error(ErrorCode::kUnknownSymbol, "unknown constant '" + term.symbol + "'");
      }
      return it->second;
    }
    case Term::Kind::kFunction: {
      auto it = structure.functions().find(term.symbol);
      if (it == structure.functions().end()) {
        throw Error(ErrorCode::kUnknownSymbol, "unknown function '" + term.symbol + "'");
      }
      if (it->second.arity != term.args.size()) {
        throw Error(ErrorCode::kArity, "function '" + term.symbol + "' arity mismatch");
      }
      Tuple args;
      args.reserve(term.args.size());
      for (const Term& a : term.args) args.push_back(eval_term(a, structure, assignment));
      return it->second.apply(args, structure.size());
    }
  }
  return 0;
}

Team restrict(const Team& team, const std::set<std::string>& variables) {
  std::vector<std::size_t> keep;
  std::vector<std::string> domain;
  for (std::size_t i = 0; i < team.domain().size(); ++i) {
    if (variables.contains(team.domain()[i])) {
      keep.push_back(i);
      domain.push_back(team.domain()[i]);
    }
  }
  if (domain.size() != variables.size()) {
    throw Error(ErrorCode::kDomain, "restriction to variables outside the team domain");
  }
  std::vector<Tuple> rows;
  rows.reserve(team.size());
  for (const Tuple& r : team.rows()) {
    Tuple t;
    t.reserve(keep.size());
    for (std::size_t i : keep) t.push_back(r[i]);
    rows.push_back(std::move(t));
  }
  return Team(std::move(domain), std::move(rows));
}

Team supplement(const Team& team, const std::string& variable,
                std::span<const std::vector<Element>> choices) {
  if (choices.size() != team.size()) {
    throw Error(ErrorCode::kInvalid, "supplementing function must cover every row");
  }
  std::vector<std::string> domain = team.domain();
  const auto existing = team.column(variable);
  const std::size_t col = existing ? *existing : domain.size();
  if (!existing) domain.push_back(variable);
  std::vector<Tuple> rows;
  for (std::size_t i = 0; i < team.size(); ++i) {
    if (choices[i].empty()) {
      throw Error(ErrorCode::kInvalid, "supplementing function yields an empty set");
    }
    for (Element a : choices[i]) {
      Tuple t = team.rows()[i];
      if (existing) {
        t[col] = a;
      } else {
        t.push_back(a);
      }
      rows.push_back(std::move(t));
    }
  }
  return Team(std::move(domain), std::move(rows));
}

Team duplicate(const Team& team, const std::string& variable,
               const Structure& structure) {
  std::vector<Element> all(structure.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Element>(i);
  const std::vector<std::vector<Element>> choices(team.size(), all);
  return supplement(team, variable, choices);
}

Structure parse_structure(std::string_view text) {
  std::optional<Structure> s;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line = n + 1;
    const std::string_view content = strip_comment(lines[n]);
    if (content.empty()) continue;
    const auto space = content.find_first_of(" \t:");
    const std::string_view keyword = content.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : content.substr(space);

    if (keyword == "universe") {
      if (s) fail_line(line, "universe declared twice");
      const auto colon = rest.find(':');
      if (colon == std::string_view::npos || !trim(rest.substr(0, colon)).empty()) {
        fail_line(line, "expected 'universe: ...'");
      }
      try {
        s.emplace(split_ws(rest.substr(colon + 1)));
      } catch (const Error& e) {
        fail_line(line, e.what());
      }
      continue;
    }
    if (!s) fail_line(line, "universe must be declared first");

    try {
      if (keyword == "relation") {
        Declaration d = parse_declaration(rest, line);
        std::vector<Tuple> tuples;
        for (const auto& g : parse_groups(d.body, line)) {
          if (g.size() != d.arity) {
            fail_line(line, "tuple of wrong arity in relation '" + d.symbol + "'");
          }
          tuples.push_back(resolve(*s, g, line));
        }
        s->add_relation(d.symbol, d.arity, std::move(tuples));
      } else if (keyword == "function") {
        Declaration d = parse_declaration(rest, line);
        const std::size_t n_entries = table_size(s->size(), d.arity);
        std::vector<Element> table(n_entries);
        std::vector<bool> filled(n_entries, false);
        // Entries are "args->value"; args may be parenthesised.
        std::string_view body = d.body;
        std::size_t pos = 0;
        while (true) {
          const auto arrow = body.find("->", pos);
          if (arrow == std::string_view::npos) {
            if (!trim(body.substr(pos)).empty()) fail_line(line, "expected 'args->value'");
            break;
          }
          const auto groups = parse_groups(body.substr(pos, arrow - pos), line);
          if (groups.size() != 1 || groups[0].size() != d.arity) {
            fail_line(line, "bad argument tuple in function '" + d.symbol + "'");
          }
          std::size_t vstart = arrow + 2;
          while (vstart < body.size() &&
                 std::isspace(static_cast<unsigned char>(body[vstart]))) {
            ++vstart;
          }
          std::size_t vend = vstart;
          while (vend < body.size() &&
                 !std::isspace(static_cast<unsigned char>(body[vend]))) {
            ++vend;
          }
          const Tuple args = resolve(*s, groups[0], line);
          const Tuple value =
              resolve(*s, {std::string(body.substr(vstart, vend - vstart))}, line);
          const std::size_t idx = table_index(args, s->size());
          if (filled[idx] && table[idx] != value[0]) {
            fail_line(line, "function '" + d.symbol + "' defined twice on an input");
          }
          filled[idx] = true;
          table[idx] = value[0];
          pos = vend;
        }
        if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
          fail_line(line, "function '" + d.symbol + "' is not total");
        }
        s->add_function(d.symbol, d.arity, std::move(table));
      } else if (keyword == "constant") {
        const auto eq = rest.find('=');
        if (eq == std::string_view::npos) fail_line(line, "expected 'constant c = e'");
        const std::string symbol(trim(rest.substr(0, eq)));
        const std::string value(trim(rest.substr(eq + 1)));
        if (symbol.empty()) fail_line(line, "missing constant name");
        s->add_constant(symbol, resolve(*s, {value}, line)[0]);
      } else {
        fail_line(line, "unknown declaration '" + std::string(keyword) + "'");
      }
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      fail_line(line, e.what());
    }
  }
  if (!s) throw SyntaxError(1, 1, "missing universe declaration");
  return std::move(*s);
}

std::string write_structure(const Structure& structure) {
  std::string out = "universe:";
  for (const auto& e : structure.universe()) out += " " + e;
  out += '\n';
  for (const auto& [name, rel] : structure.relations()) {
    out += "relation " + name + "/" + std::to_string(rel.arity) + ":";
    for (const Tuple& t : rel.tuples) {
      out += " (";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += structure.name(t[i]);
      }
      out += ')';
    }
    out += '\n';
  }
  for (const auto& [name, fn] : structure.functions()) {
    out += "function " + name + "/" + std::to_string(fn.arity) + ":";
    Tuple args(fn.arity, 0);
    for (std::size_t idx = 0; idx < fn.table.size(); ++idx) {
      out += ' ';
      if (fn.arity > 1) out += '(';
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += structure.name(args[i]);
      }
      if (fn.arity > 1) out += ')';
      out += "->" + structure.name(fn.table[idx]);
      for (std::size_t i = args.size(); i-- > 0;) {
        if (++args[i] < structure.size()) break;
        args[i] = 0;
      }
    }
    out += '\n';
  }
  for (const auto& [name, value] : structure.constants()) {
    out += "constant " + name + " = " + structure.name(value) + "\n";
  }
  return out;
}

Team parse_team(std::string_view text, const Structure& structure) {
  std::optional<std::vector<std::string>> domain;
  std::vector<Tuple> rows;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line = n + 1;
    const std::string_view content = strip_comment(lines[n]);
    if (content.empty()) continue;
    std::vector<std::string> fields = split_ws(content);
    const bool dash = fields.size() == 1 && fields[0] == "-";
    if (!domain) {
      domain.emplace(dash ? std::vector<std::string>{} : std::move(fields));
      continue;
    }
    if (dash) fields.clear();
    if (fields.size() != domain->size()) {
      fail_line(line, "row has " + std::to_string(fields.size()) +
                          " values, header has " + std::to_string(domain->size()));
    }
    rows.push_back(resolve(structure, fields, line));
  }
  if (!domain) throw SyntaxError(1, 1, "missing team header");
  try {
    return Team(std::move(*domain), std::move(rows));
  } catch (const Error& e) {
    throw SyntaxError(1, 1, e.what());
  }
}

std::string write_team(const Team& team, const Structure& structure) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& fields) {
    if (fields.empty()) {
      out += "-\n";
      return;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ' ';
      out += fields[i];
    }
    out += '\n';
  };
  emit(team.domain());
  for (const Tuple& r : team.rows()) {
    std::vector<std::string> fields;
    for (Element e : r) fields.push_back(structure.name(e));
    emit(fields);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace deplogic
