#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "termcoding/ir.hpp"
#include "termcoding/normalize.hpp"
#include "termcoding/semantics.hpp"

namespace termcoding::examples {

using Params = std::map<std::string, std::int64_t>;

// Known example names, in catalogue order.
const std::vector<std::string>& names();

// Throws Error on an unknown name or invalid parameters. steiner-t takes
// "t" (default 2, at least 2); the other examples take no parameters.
System gen(const std::string& name, const Params& params = {});

// The cycle part of diversified c5: five equations over x, y, z and the two
// aux variables, no disequalities.
System c5_core();

// Each of the five core symbols reads (a, b) -> (a mod m) * m + b / m over
// a domain of size m^2; exactly m^5 assignments solve c5_core.
Interpretation c5_core_witness(std::uint64_t m);

// The near-miss operation on four points for steiner-quasigroup (13 pairs).
Interpretation steiner_n4_witness();

// f = the square, decoders derived from it; the square must be a
// self-orthogonal Latin square (throws Error otherwise).
Interpretation sols_witness(const std::vector<std::vector<std::uint32_t>>& square);

// A self-orthogonal Latin square of order 4.
std::vector<std::vector<std::uint32_t>> sols_order4();

// f(x, y) = x + y mod n with the matching decoders.
Interpretation network_coding_witness(std::uint64_t n);

// For a flat system whose variables each copy one of a few source variables:
// each symbol returns the argument copying the same source as the defined
// variable. Throws Error if some equation has no such argument.
Interpretation projection_witness(const System& flat, const std::map<std::string, std::string>& source,
                                  std::uint64_t n);

// Diversified unsolvable-v1 with the z = x, w = y projection strategy.
Interpretation unsolvable_projection_witness(const Diversified& d, std::uint64_t n);

// The NAND table for nand-dispersion (c = 1).
Interpretation nand_witness();

}  // namespace termcoding::examples
