#pragma once

// Brute-force reference implementations used as test oracles. Nothing here
// calls into the library's evaluators or search; only its data types are
// shared.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "termcoding/fo.hpp"
#include "termcoding/ir.hpp"
#include "termcoding/semantics.hpp"

namespace oracle {

using termcoding::DomainSizes;
using termcoding::Interpretation;
using termcoding::System;
using termcoding::Term;

// Calls fn on every assignment (declaration order, last variable fastest).
void for_each_assignment(const System& sys, const DomainSizes& sizes,
                         const std::function<void(const std::vector<std::uint32_t>&)>& fn);

std::uint32_t eval(const Term& t, const System& sys, const Interpretation& I, const std::vector<std::uint32_t>& a);

bool satisfies(const System& sys, const Interpretation& I, const std::vector<std::uint32_t>& a);

std::uint64_t count(const System& sys, const Interpretation& I);

// Distinct output tuples over satisfying assignments.
std::uint64_t image(const System& sys, const Interpretation& I);

// Number of interpretations of sys at the given sizes, or nullopt above 2^62.
std::optional<std::uint64_t> interpretation_space(const System& sys, const DomainSizes& sizes);

struct Max {
  std::uint64_t best = 0;
  Interpretation witness;        // lexicographically least maximiser
  std::uint64_t maximisers = 0;  // how many interpretations attain best
};

// Enumerates every interpretation. Throws std::runtime_error when the space
// exceeds `cap` interpretations.
Max brute_max(const System& sys, const DomainSizes& sizes, bool image_objective = false,
              std::uint64_t cap = 1u << 22);

// Maximum over LPs in the library's form (maximize c.x, Ax <= b, x >= 0) by
// enumerating basic solutions. Returns nullopt when unbounded. Small programs only.
std::optional<mpq_class> lp_vertex_max(std::size_t n_vars, const std::vector<mpq_class>& c,
                                       const std::vector<std::vector<mpq_class>>& A,
                                       const std::vector<mpq_class>& b);

// Smallest set of output DAG nodes meeting every path from an input variable
// to an output term. Nodes are distinct subterms of the outputs.
std::size_t min_vertex_cut(const System& sys);

// Does the sentence hold in some structure whose sorts all have size m?
bool fo_has_model(const termcoding::fo::Sentence& s, std::uint32_t m, std::uint64_t cap = 1u << 22);

// Truth of f in a given structure (rels: name -> truth table over argument tuples).
struct Structure {
  std::uint32_t size = 1;
  std::map<std::string, std::vector<std::uint8_t>> rels;
  std::map<std::string, std::vector<std::uint32_t>> funcs;
};
bool fo_holds(const termcoding::fo::Formula& f, const termcoding::fo::Signature& sig, const Structure& S,
              std::map<std::string, std::uint32_t>& env);

}  // namespace oracle
