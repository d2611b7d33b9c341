#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "termcoding/ir.hpp"
#include "termcoding/search.hpp"

namespace termcoding::fo {

struct RelSymbol {
  std::string name;
  std::vector<std::string> arg_sorts;
  bool operator==(const RelSymbol&) const = default;
};

struct Signature {
  std::vector<std::string> sorts;
  std::vector<RelSymbol> rels;
  std::vector<FuncSymbol> funcs;

  const RelSymbol* find_rel(const std::string& n) const;
  const FuncSymbol* find_func(const std::string& n) const;
  bool has_sort(const std::string& n) const;
  bool operator==(const Signature&) const = default;
};

struct Formula {
  enum class Kind : std::uint8_t { Atom, Eq, Not, And, Or, Implies, Forall, Exists };
  Kind kind = Kind::Atom;
  std::string name;          // relation name, or the bound variable
  std::string sort;          // sort of the bound variable
  std::vector<Term> args;    // atom arguments, or the two sides of an equality
  std::vector<Formula> kids;

  static Formula atom(std::string rel, std::vector<Term> args);
  static Formula equal(Term l, Term r);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula forall(std::string var, std::string sort, Formula body);
  static Formula exists(std::string var, std::string sort, Formula body);

  bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }
  bool operator==(const Formula&) const = default;
};

std::string to_string(const Formula& f);

struct Sentence {
  Signature sig;
  Formula formula;
};

// `.fo` text: sort/rel/fun declarations, then `sentence <formula>`.
Sentence parse(std::string_view text);
Sentence parse_file(const std::string& path);

// Throws Error when f is ill-typed or has free variables.
void check_sentence(const Signature& sig, const Formula& f);

// Renames bound variables apart, then pulls quantifiers outwards.
Formula to_prenex(const Formula& f, const Signature& sig);

struct Skolemized {
  Formula formula;  // universal prefix over a quantifier-free matrix
  std::vector<FuncSymbol> added;
};

Skolemized skolemize(const Formula& prenex, const Signature& sig);

struct Literal {
  bool positive = true;
  bool is_eq = false;
  std::string rel;  // empty for equalities
  std::vector<Term> args;
  bool operator==(const Literal&) const = default;
};
using Clause = std::vector<Literal>;

std::string to_string(const Literal& l);
std::string to_string(const Clause& c);

class ClauseLimitExceeded : public Error {
 public:
  using Error::Error;
};

struct Matrix {
  std::vector<VarDecl> vars;  // the universal prefix
  Formula body;
};

// Splits off the universal prefix; throws if an existential remains.
Matrix strip_universals(const Formula& universal);

// NNF followed by distribution. Throws ClauseLimitExceeded above `cap` clauses.
std::vector<Clause> to_cnf(const Formula& matrix, std::size_t cap = 10000);

struct EqualityExpansion {
  std::vector<Clause> clauses;     // the input clauses, equality atoms replaced
  std::vector<Clause> axioms;      // reflexivity, symmetry, transitivity, congruences
  std::vector<RelSymbol> added;    // one E relation per expanded sort
  std::vector<VarDecl> axiom_vars; // variables used by the axioms
};

// `vars` gives the sorts of the variables occurring in `clauses`.
EqualityExpansion expand_equality(const std::vector<Clause>& clauses, const Signature& sig,
                                  const std::vector<VarDecl>& vars);

struct Trace {
  std::string prenex;
  std::string skolemized;
  std::vector<std::string> skolem_functions;
  std::vector<std::string> cnf;
  std::vector<std::string> congruence;
  std::vector<std::string> clause_equations;
  std::string to_json() const;
};

struct CompileOptions {
  std::size_t clause_cap = 10000;
};

struct CompileOutput {
  System system;
  std::string bool_sort;
  std::vector<std::string> object_sorts;
  std::size_t first_clause_equation = 0;  // equations before this index are the Boolean tables
  Trace trace;
};

CompileOutput compile(const Sentence& s, const CompileOptions& opt = {});

// Every object sort of size n, the Boolean sort of size 2.
DomainSizes model_sizes(const CompileOutput& out, std::uint64_t n);

// Product of the domain sizes of all variables: the count of a model.
std::uint64_t model_target(const System& sys, const DomainSizes& sizes);

// An interpretation satisfying every equation at every assignment, if one exists.
std::optional<Interpretation> find_model(const CompileOutput& out, std::uint64_t n,
                                         const SearchParams& params = {});

}  // namespace termcoding::fo
