#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "termcoding/depgraph.hpp"
#include "termcoding/ir.hpp"
#include "termcoding/rational_lp.hpp"

namespace termcoding {

// Shannon LP over one weakly connected component. Unknowns are h(C) for the
// sets C closed under the functional dependencies (h(S) = h(cl S) holds on
// the whole feasible region, so nothing is lost); cl(empty) has entropy 0.
struct EntropyLP {
  std::vector<std::string> vertices;
  std::vector<std::uint32_t> closed_sets;  // bitmasks over vertices, one per LP variable
  std::size_t objective_var = 0;           // index of cl(V), or npos when h(V) = 0
  LinearProgram program;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct BoundResult {
  // Optimal h(V) in units of log(unit_base); in bits this is units * log2(unit_base).
  mpq_class max_joint_units;
  std::uint64_t unit_base = 2;
  // max_joint / log(M), M the weighted geometric mean of vertex alphabet sizes.
  mpq_class normalised_bound;
  // Optimal values of h over each component's closed sets (units of log(unit_base)).
  std::vector<std::pair<std::vector<std::string>, mpq_class>> certificate;

  double max_joint_entropy_bits() const;
  std::string certificate_json() const;
};

struct EntropyOptions {
  std::size_t vertex_cap = 12;  // per weakly connected component
};

// Capacities are 1 per vertex for uniform sizes; for mixed sizes every size
// must be a power of one common base. Throws Error otherwise, on size < 2,
// or when a component exceeds the vertex cap.
BoundResult shannon_bound(const DepGraph& g, const DomainSizes& sizes, const EntropyOptions& opt = {});

// Builds the LP of the component `members` (vertex indices of g) with the given capacities.
EntropyLP build_entropy_lp(const DepGraph& g, const std::vector<std::size_t>& members,
                           const std::vector<std::uint64_t>& capacity);

LpSolution lp_maximize(const EntropyLP& program);

// Largest integer c with c <= unit_base^max_joint_units: a bound on the
// diversified code size implied by the LP.
std::uint64_t count_ceiling(const BoundResult& b);

// Common base b and exponents k_i with sizes[i] = b^k_i, or throws Error.
std::pair<std::uint64_t, std::vector<std::uint64_t>> common_base(const std::vector<std::uint64_t>& sizes);

}  // namespace termcoding
