#pragma once

#include <map>
#include <string>
#include <utility>

#include "termcoding/ir.hpp"

namespace termcoding {

struct VarMap {
  std::map<std::string, Term> aux;           // aux variable -> defining flat application
  std::map<std::string, std::string> merged;  // merged variable -> surviving variable
  bool operator==(const VarMap&) const = default;
};

struct SymbolOrigin {
  std::string original;
  std::size_t equation;  // index into the diversified system's equations
  bool operator==(const SymbolOrigin&) const = default;
};

using SymbolMap = std::map<std::string, SymbolOrigin>;

struct Normalized {
  System system;
  VarMap map;
};

struct Diversified {
  System system;
  SymbolMap symbols;
  // Variables merged while deduplicating equal left-hand sides.
  std::map<std::string, std::string> merged;
};

// Flattens every equation to f(x..) = y (or c = y) and every disequality to
// x != y. Identical compound subterms share one aux variable across the whole
// system; trivial equalities merge the later-declared variable into the
// earlier one.
Normalized normalize(const System& sys);

bool is_flat(const System& sys);

// Requires is_flat(sys); throws Error otherwise.
Diversified diversify(const System& sys);

// normalize followed by diversify.
Diversified normalize_diversify(const System& sys);

}  // namespace termcoding
