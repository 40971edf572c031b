#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/syntax.hpp"

namespace deplogic {

// Universe elements are interned to their position in the universe.
using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Relation {
  std::size_t arity = 0;
  std::vector<Tuple> tuples;  // sorted, deduplicated

  bool contains(std::span<const Element> tuple) const;
};

// Total function table; arguments index the table in mixed radix with the
// first argument most significant.
struct Function {
  std::size_t arity = 0;
  std::vector<Element> table;

  Element apply(std::span<const Element> args, std::size_t universe_size) const;
};

class Structure {
 public:
  explicit Structure(std::vector<std::string> universe);

  std::size_t size() const noexcept { return universe_.size(); }
  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::string& name(Element e) const { return universe_.at(e); }
  std::optional<Element> find(std::string_view name) const;

  void add_relation(std::string symbol, std::size_t arity,
                    std::vector<Tuple> tuples);
  void add_function(std::string symbol, std::size_t arity,
                    std::vector<Element> table);
  void add_constant(std::string symbol, Element value);

  const std::map<std::string, Relation, std::less<>>& relations() const noexcept {
    return relations_;
  }
  const std::map<std::string, Function, std::less<>>& functions() const noexcept {
    return functions_;
  }
  const std::map<std::string, Element, std::less<>>& constants() const noexcept {
    return constants_;
  }

  Vocabulary vocabulary() const;

 private:
  void check_fresh(const std::string& symbol) const;

  std::vector<std::string> universe_;
  std::map<std::string, Element, std::less<>> index_;
  std::map<std::string, Relation, std::less<>> relations_;
  std::map<std::string, Function, std::less<>> functions_;
  std::map<std::string, Element, std::less<>> constants_;
};

struct Assignment {
  std::vector<std::string> domain;
  std::vector<Element> values;

  Element at(std::string_view variable) const;
};

// A set of assignments over a common, ordered variable domain. Rows are kept
// sorted and deduplicated, so the empty team {} and the team {∅} holding the
// single empty assignment are distinct values.
class Team {
 public:
  Team(std::vector<std::string> domain, std::vector<Tuple> rows);

  static Team unit() { return Team({}, {Tuple{}}); }

  const std::vector<std::string>& domain() const noexcept { return domain_; }
  const std::vector<Tuple>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  std::optional<std::size_t> column(std::string_view variable) const;
  Assignment assignment(std::size_t row) const;

  // Equal domains as sets and equal assignment sets.
  friend bool operator==(const Team& a, const Team& b);

 private:
  std::vector<std::string> domain_;
  std::vector<Tuple> rows_;
};

Element eval_term(const Term& term, const Structure& structure,
                  const Assignment& assignment);

// T restricted to `variables`, which must be a subset of the domain. The
// result keeps the original column order.
Team restrict(const Team& team, const std::set<std::string>& variables);

// T^x_f, where choices[i] is f applied to team.rows()[i]. Every choice set
// must be nonempty. If x is already in the domain its values are overwritten.
Team supplement(const Team& team, const std::string& variable,
                std::span<const std::vector<Element>> choices);

// T^x_A: supplement with the whole universe for every row.
Team duplicate(const Team& team, const std::string& variable,
               const Structure& structure);

// Line-based text formats:
//   universe: a b c
//   relation R/2: (a,b) (b,c)
//   function f/1: a->b b->c c->a        (k-ary: (a,b)->c)
//   constant one = b
Structure parse_structure(std::string_view text);
std::string write_structure(const Structure& structure);

// First line is the variable header, then one whitespace-separated row per
// line. A lone '-' stands for the empty header or the empty assignment.
Team parse_team(std::string_view text, const Structure& structure);
std::string write_team(const Team& team, const Structure& structure);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace deplogic
