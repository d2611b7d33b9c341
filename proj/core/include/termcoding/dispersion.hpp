#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termcoding/ir.hpp"
#include "termcoding/search.hpp"

namespace termcoding {

// Output terms flattened into a DAG with structural sharing.
struct TermDag {
  struct Node {
    std::string id;  // variable name, or the rendered term
    bool is_input = false;
    std::vector<std::size_t> kids;
  };
  std::vector<Node> nodes;          // inputs first, in declaration order
  std::vector<std::size_t> sinks;   // one per distinct output term
  std::size_t n_inputs = 0;
};

TermDag build_term_dag(const System& sys);

struct ExponentResult {
  std::uint64_t D = 0;
  std::vector<std::string> cut;  // minimum vertex cut, node identifiers
  bool oracle_checked = false;
  std::string cut_json() const;
};

// Maximum number of vertex-disjoint paths from input variables to output
// terms (node-split max flow). Disequalities are ignored after validation.
ExponentResult integer_exponent(const System& sys);

bool decide_threshold(const System& sys, std::uint64_t d);

struct GrowthPoint {
  std::uint64_t n = 0;
  std::uint64_t value = 0;
  bool exact = false;
};

// Dispersion maxima with every sort of size n.
std::vector<GrowthPoint> growth_oracle(const System& sys, const std::vector<std::uint64_t>& n_list,
                                       const SearchParams& params = {});

// True when every value is at most n^D.
bool oracle_consistent(std::uint64_t D, const std::vector<GrowthPoint>& points);

// integer_exponent plus the growth oracle; oracle_checked reports agreement.
ExponentResult integer_exponent_checked(const System& sys, const std::vector<std::uint64_t>& n_list,
                                        const SearchParams& params = {});

struct Reduction {
  System system;
  std::vector<std::string> projection;  // the y variables, one per output term
};

Reduction reduce_to_termcoding(const System& sys);

// The reduced system with its projection variables declared as outputs, so
// that dispersion search counts distinct projections of solutions.
System projection_system(const Reduction& r);

}  // namespace termcoding
