#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

namespace termcoding {

// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0 (so x = 0 is feasible).
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, mpq_class>> coeffs;  // (variable, coefficient)
    mpq_class rhs;
  };
  std::size_t n_vars = 0;
  std::vector<mpq_class> objective;
  std::vector<Row> rows;
};

struct LpSolution {
  mpq_class value;
  std::vector<mpq_class> x;
  std::size_t pivots = 0;
};

// Exact simplex over rationals with Bland's rule. Throws Error when the
// program is unbounded or malformed (negative right-hand side).
LpSolution lp_maximize(const LinearProgram& lp);

}  // namespace termcoding
