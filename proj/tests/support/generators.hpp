#pragma once

// Hand-rolled random generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "termcoding/fo.hpp"
#include "termcoding/ir.hpp"
#include "termcoding/semantics.hpp"

namespace gen {

using Rng = std::mt19937_64;

struct SystemShape {
  int max_vars = 3;
  int max_funcs = 2;
  std::vector<int> arities = {0, 1, 2};
  int max_equations = 3;
  int max_disequalities = 1;
  int max_depth = 2;
  int n_sorts = 1;
  int max_outputs = 0;  // > 0 makes a dispersion system
};

// Always valid. Every symbol occurs in some constraint or output.
termcoding::System system(Rng& rng, const SystemShape& shape = {});

// Uniform random tables.
termcoding::Interpretation interpretation(Rng& rng, const termcoding::System& sys,
                                          const termcoding::DomainSizes& sizes);

termcoding::Term term(Rng& rng, const termcoding::System& sys, const std::string& sort, int depth);

struct SentenceShape {
  int max_quantifiers = 2;
  int max_relations = 2;
  bool allow_function = true;
  bool allow_equality = true;
};

// A closed, well-typed sentence over one sort.
termcoding::fo::Sentence sentence(Rng& rng, const SentenceShape& shape = {});

}  // namespace gen
