#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "termcoding/ir.hpp"
#include "termcoding/normalize.hpp"

namespace termcoding {

struct Interpretation {
  DomainSizes sizes;
  // Row-major tables over argument tuples, first argument most significant.
  std::map<std::string, std::vector<std::uint32_t>> tables;
  bool operator==(const Interpretation&) const = default;
};

// Number of entries in f's table under the given sizes.
std::uint64_t table_size(const FuncSymbol& f, const DomainSizes& sizes);

// All tables filled with 0.
Interpretation zero_interpretation(const System& sys, const DomainSizes& sizes);

// Throws Error unless every symbol of sys has a complete in-range table.
void check_interpretation(const System& sys, const Interpretation& interp);

// Row-major index of an argument tuple.
std::uint64_t table_index(const FuncSymbol& f, const DomainSizes& sizes,
                          const std::vector<std::uint32_t>& args);

// Concatenated tables in declaration order (the canonical witness encoding).
std::vector<std::uint32_t> flatten_tables(const System& sys, const Interpretation& interp);
Interpretation unflatten_tables(const System& sys, const DomainSizes& sizes,
                                const std::vector<std::uint32_t>& flat);

using Assignment = std::map<std::string, std::uint32_t>;

std::uint32_t eval(const Term& t, const System& sys, const Interpretation& interp,
                   const Assignment& assignment);

struct SolutionReport {
  std::uint64_t count = 0;
  // Up to sample_cap solutions, each a tuple in variable declaration order.
  std::vector<std::vector<std::uint32_t>> sample;
  std::string witness_hash;
};

SolutionReport count_solutions(const System& sys, const Interpretation& interp,
                               std::size_t sample_cap = 16);

// Distinct output tuples over assignments satisfying every equation and disequality.
std::uint64_t dispersion_image(const System& sys, const Interpretation& interp);

// count_solutions for term-coding systems, dispersion_image for dispersion systems.
std::uint64_t objective_value(const System& sys, const Interpretation& interp);

// Componentwise product: element (a, b) of sort s is encoded a * n_s(b) + b.
Interpretation product(const System& sys, const Interpretation& a, const Interpretation& b);

// Lifts a witness of the diversified system (sizes m) to the flat base system
// over sizes k_s * m_s, k_s = number of base variables of sort s. Variable i
// of sort s lives in block i (values block * m_s + value).
Interpretation partition_lift(const System& diversified, const Interpretation& witness,
                              const System& base, const Diversified& maps);

// Block index of each base variable used by partition_lift.
std::map<std::string, std::uint32_t> partition_blocks(const System& base, const Diversified& maps);

bool verify_witness(const System& sys, const Interpretation& interp, std::uint64_t claimed);

// Hex SHA-256 of the canonical table encoding.
std::string interpretation_digest(const System& sys, const Interpretation& interp);

}  // namespace termcoding
