#include "termcoding/rational_lp.hpp"

#include <string>

#include "termcoding/error.hpp"

namespace termcoding {

LpSolution lp_maximize(const LinearProgram& lp) {
  const std::size_t n = lp.n_vars;
  const std::size_t m = lp.rows.size();
  if (lp.objective.size() != n) throw Error("objective length does not match the variable count");

  // Tucker tableau: row i reads  basic_i + sum_j T[i][j] x_j = T[i][n].
  // The last row holds the objective as  z - sum_j c_j x_j = value.
  std::vector<std::vector<mpq_class>> T(m + 1, std::vector<mpq_class>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (row.rhs < 0) throw Error("linear program has a negative right-hand side");
    for (const auto& [j, a] : row.coeffs) {
      if (j >= n) throw Error("constraint refers to an unknown variable");
      T[i][j] += a;
    }
    T[i][n] = row.rhs;
  }
  for (std::size_t j = 0; j < n; ++j) T[m][j] = -lp.objective[j];

  // Variable ids: 0..n-1 structural, n..n+m-1 slack.
  std::vector<std::size_t> col_var(n), row_var(m);
  for (std::size_t j = 0; j < n; ++j) col_var[j] = j;
  for (std::size_t i = 0; i < m; ++i) row_var[i] = n + i;

  LpSolution sol;
  mpq_class ratio, best_ratio, f;
  for (;;) {
    // Bland: entering variable with the smallest id among improving columns.
    std::size_t s = n;
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(T[m][j]) < 0 && (s == n || col_var[j] < col_var[s])) s = j;
    if (s == n) break;

    std::size_t r = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(T[i][s]) <= 0) continue;
      ratio = T[i][n] / T[i][s];
      if (r == m || ratio < best_ratio || (ratio == best_ratio && row_var[i] < row_var[r])) {
        r = i;
        best_ratio = ratio;
      }
    }
    if (r == m) throw Error("linear program is unbounded");

    mpq_class p = T[r][s];
    for (std::size_t j = 0; j <= n; ++j)
      if (j != s) T[r][j] /= p;
    T[r][s] = 1 / p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || sgn(T[i][s]) == 0) continue;
      f = T[i][s];
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == s || sgn(T[r][j]) == 0) continue;
        T[i][j] -= f * T[r][j];
      }
      T[i][s] = -f / p;
    }
    std::swap(row_var[r], col_var[s]);
    ++sol.pivots;
  }

  sol.value = T[m][n];
  sol.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (row_var[i] < n) sol.x[row_var[i]] = T[i][n];
  return sol;
}

}  // namespace termcoding
