#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "termcoding/error.hpp"
#include "termcoding/rational_lp.hpp"

using namespace termcoding;

namespace {

mpq_class q(long a, long b = 1) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}

void check_feasible(const LinearProgram& lp, const LpSolution& s) {
  ASSERT_EQ(s.x.size(), lp.n_vars);
  mpq_class obj = 0;
  for (std::size_t j = 0; j < lp.n_vars; ++j) {
    EXPECT_GE(s.x[j], 0);
    obj += lp.objective[j] * s.x[j];
  }
  EXPECT_EQ(obj, s.value);
  for (const auto& row : lp.rows) {
    mpq_class lhs = 0;
    for (const auto& [j, a] : row.coeffs) lhs += a * s.x[j];
    EXPECT_LE(lhs, row.rhs);
  }
}

}  // namespace

TEST(Simplex, SingleVariable) {
  LinearProgram lp;
  lp.n_vars = 1;
  lp.objective = {q(1)};
  lp.rows.push_back({{{0, q(1)}}, q(1)});
  auto s = lp_maximize(lp);
  EXPECT_EQ(s.value, 1);
  EXPECT_EQ(s.x[0], 1);
}

TEST(Simplex, FractionalOptimum) {
  // max x + y, 2x + y <= 2, x + 2y <= 2  ->  4/3 at (2/3, 2/3)
  LinearProgram lp;
  lp.n_vars = 2;
  lp.objective = {q(1), q(1)};
  lp.rows.push_back({{{0, q(2)}, {1, q(1)}}, q(2)});
  lp.rows.push_back({{{0, q(1)}, {1, q(2)}}, q(2)});
  auto s = lp_maximize(lp);
  EXPECT_EQ(s.value, q(4, 3));
  EXPECT_EQ(s.x[0], q(2, 3));
  check_feasible(lp, s);
}

TEST(Simplex, ZeroObjective) {
  LinearProgram lp;
  lp.n_vars = 2;
  lp.objective = {q(0), q(0)};
  lp.rows.push_back({{{0, q(1)}}, q(3)});
  EXPECT_EQ(lp_maximize(lp).value, 0);
}

TEST(Simplex, Errors) {
  LinearProgram unbounded;
  unbounded.n_vars = 2;
  unbounded.objective = {q(1), q(0)};
  unbounded.rows.push_back({{{1, q(1)}}, q(1)});
  EXPECT_THROW(lp_maximize(unbounded), Error);

  LinearProgram negative;
  negative.n_vars = 1;
  negative.objective = {q(1)};
  negative.rows.push_back({{{0, q(1)}}, q(-1)});
  EXPECT_THROW(lp_maximize(negative), Error);

  LinearProgram bad_index;
  bad_index.n_vars = 1;
  bad_index.objective = {q(1)};
  bad_index.rows.push_back({{{4, q(1)}}, q(1)});
  EXPECT_THROW(lp_maximize(bad_index), Error);
}

TEST(SimplexProperty, MatchesVertexEnumeration) {
  std::mt19937_64 rng(7);
  auto small = [&](long lo, long hi) { return lo + static_cast<long>(rng() % (hi - lo + 1)); };
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + rng() % 4, m = 1 + rng() % 4;
    LinearProgram lp;
    lp.n_vars = n;
    std::vector<mpq_class> c(n), b;
    std::vector<std::vector<mpq_class>> A;
    for (auto& cj : c) cj = q(small(-3, 5));
    lp.objective = c;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<mpq_class> row(n);
      LinearProgram::Row r;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = q(small(-2, 4), small(1, 3));
        if (row[j] != 0) r.coeffs.push_back({j, row[j]});
      }
      r.rhs = q(small(0, 6));
      A.push_back(row);
      b.push_back(r.rhs);
      lp.rows.push_back(r);
    }
    if (t % 2 == 0) {  // a box keeps half of the programs bounded
      std::vector<mpq_class> row(n, q(1));
      LinearProgram::Row r;
      for (std::size_t j = 0; j < n; ++j) r.coeffs.push_back({j, q(1)});
      r.rhs = q(small(1, 5));
      A.push_back(row);
      b.push_back(r.rhs);
      lp.rows.push_back(r);
    }
    auto want = oracle::lp_vertex_max(n, c, A, b);
    if (!want) {
      EXPECT_THROW(lp_maximize(lp), Error);
      continue;
    }
    LpSolution got;
    try {
      got = lp_maximize(lp);
    } catch (const Error& e) {
      std::string dump;
      for (std::size_t i = 0; i < A.size(); ++i) {
        for (auto& a : A[i]) dump += a.get_str() + " ";
        dump += "<= " + b[i].get_str() + "\n";
      }
      for (auto& cj : c) dump += cj.get_str() + " ";
      ADD_FAILURE() << e.what() << " oracle " << want->get_str() << "\n" << dump;
      continue;
    }
    EXPECT_EQ(got.value, *want);
    check_feasible(lp, got);
  }
}
