#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "termcoding/error.hpp"

namespace termcoding {

struct SortDecl {
  std::string name;
  bool operator==(const SortDecl&) const = default;
};

struct FuncSymbol {
  std::string name;
  std::vector<std::string> arg_sorts;  // empty for constants
  std::string result_sort;
  std::size_t arity() const { return arg_sorts.size(); }
  bool operator==(const FuncSymbol&) const = default;
};

struct VarDecl {
  std::string name;
  std::string sort;
  bool operator==(const VarDecl&) const = default;
};

struct Term {
  enum class Kind : std::uint8_t { Var, App };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string n) { return Term{Kind::Var, std::move(n), {}}; }
  static Term app(std::string f, std::vector<Term> a = {}) {
    return Term{Kind::App, std::move(f), std::move(a)};
  }
  bool is_var() const { return kind == Kind::Var; }
  bool is_app() const { return kind == Kind::App; }

  bool operator==(const Term&) const = default;
  auto operator<=>(const Term& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = name <=> o.name; c != 0) return c;
    return args <=> o.args;
  }
};

std::string to_string(const Term& t);

struct Constraint {
  enum class Kind : std::uint8_t { Eq, Neq };
  Kind kind = Kind::Eq;
  Term lhs;
  Term rhs;

  static Constraint eq(Term l, Term r) { return {Kind::Eq, std::move(l), std::move(r)}; }
  static Constraint neq(Term l, Term r) { return {Kind::Neq, std::move(l), std::move(r)}; }
  bool operator==(const Constraint&) const = default;
};

std::string to_string(const Constraint& c);

struct System {
  std::vector<SortDecl> sorts;
  std::vector<FuncSymbol> funcs;
  std::vector<VarDecl> vars;
  std::vector<Constraint> equations;
  std::vector<Constraint> disequalities;
  std::vector<Term> outputs;

  bool operator==(const System&) const = default;

  const FuncSymbol* find_func(const std::string& name) const;
  const VarDecl* find_var(const std::string& name) const;
  bool has_sort(const std::string& name) const;
  std::optional<std::size_t> func_index(const std::string& name) const;
  std::optional<std::size_t> var_index(const std::string& name) const;
  std::optional<std::size_t> sort_index(const std::string& name) const;
  bool is_dispersion() const { return !outputs.empty(); }
};

// Per-sort domain sizes n_s.
using DomainSizes = std::map<std::string, std::uint64_t>;

DomainSizes uniform_sizes(const System& sys, std::uint64_t n);

// Throws Error if a sort is missing or a size is zero.
void check_sizes(const System& sys, const DomainSizes& sizes);

ValidationReport validate_system(const System& sys);

// Throws ValidationError when the report is not ok.
void require_valid(const System& sys);

// As require_valid, but accepts x != x. Normalising a valid system can
// produce one (the equations force both sides equal), and the count is then 0.
void require_well_formed(const System& sys);

// Throws Error if t is not well-typed in sys.
std::string term_sort(const Term& t, const System& sys);

std::vector<std::string> free_vars(const Term& t);

// Number of function applications in t.
std::size_t term_size(const Term& t);

// Replace variables by name; names absent from the map are kept.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);

// A name not present among sorts, funcs or vars of sys nor in `taken`.
std::string fresh_name(const System& sys, const std::string& stem,
                       const std::vector<std::string>& taken = {});

}  // namespace termcoding
