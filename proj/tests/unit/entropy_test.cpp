#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "oracle.hpp"
#include "termcoding/depgraph.hpp"
#include "termcoding/dsl.hpp"
#include "termcoding/entropy.hpp"
#include "termcoding/examples.hpp"
#include "termcoding/normalize.hpp"

using namespace termcoding;

namespace {

BoundResult bound_of(const System& sys, std::uint64_t n) {
  Diversified d = normalize_diversify(sys);
  return shannon_bound(build_graph(d.system), uniform_sizes(d.system, n));
}

}  // namespace

TEST(Bound, UnsolvableVariants) {
  EXPECT_EQ(bound_of(examples::gen("unsolvable-v1"), 2).normalised_bound, 2);
  EXPECT_EQ(bound_of(examples::gen("unsolvable-v2"), 2).normalised_bound, 8);
}

TEST(Bound, C5) {
  BoundResult full = bound_of(examples::gen("c5"), 2);
  EXPECT_EQ(full.normalised_bound, mpq_class(5, 2));
  System core = examples::c5_core();
  BoundResult b = shannon_bound(build_graph(core), uniform_sizes(core, 4));
  EXPECT_EQ(b.normalised_bound, mpq_class(5, 2));
  EXPECT_EQ(count_ceiling(b), 32u);
  EXPECT_NEAR(b.max_joint_entropy_bits(), 5.0, 1e-12);
}

TEST(Bound, SingleVertex) {
  System s = parse("sort A\nfun f : A -> A\nvar x : A\neq f(x) = x\n");
  BoundResult b = shannon_bound(build_graph(s), uniform_sizes(s, 3));
  EXPECT_EQ(b.normalised_bound, 1);
  EXPECT_EQ(count_ceiling(b), 3u);
}

TEST(Bound, TwoNodeMixedSizes) {
  System s = examples::gen("two-node-multisort");
  BoundResult b = shannon_bound(build_graph(s), {{"S1", 4}, {"S2", 16}});
  EXPECT_EQ(b.normalised_bound, mpq_class(2, 3));
  EXPECT_NEAR(b.max_joint_entropy_bits(), 2.0, 1e-12);
  EXPECT_EQ(count_ceiling(b), 4u);
  EXPECT_THROW(shannon_bound(build_graph(s), {{"S1", 4}, {"S2", 6}}), Error);
}

TEST(Bound, RejectsBadInput) {
  System s = examples::c5_core();
  EXPECT_THROW(shannon_bound(build_graph(s), uniform_sizes(s, 1)), Error);
  EntropyOptions tight;
  tight.vertex_cap = 3;
  EXPECT_THROW(shannon_bound(build_graph(s), uniform_sizes(s, 2), tight), Error);
}

TEST(Bound, CertificateJson) {
  System s = examples::c5_core();
  BoundResult b = shannon_bound(build_graph(s), uniform_sizes(s, 2));
  EXPECT_FALSE(b.certificate.empty());
  EXPECT_NE(b.certificate_json().find("x"), std::string::npos);
}

TEST(CommonBase, Examples) {
  auto [b, k] = common_base({4, 16, 2});
  EXPECT_EQ(b, 2u);
  EXPECT_EQ(k, (std::vector<std::uint64_t>{2, 4, 1}));
  auto [b9, k9] = common_base({9, 27});
  EXPECT_EQ(b9, 3u);
  EXPECT_EQ(k9, (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(common_base({5, 5}).first, 5u);
  EXPECT_THROW(common_base({2, 3}), Error);
  EXPECT_THROW(common_base({1}), Error);
}

TEST(BoundProperty, RelabellingVariablesKeepsTheBound) {
  gen::Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    System flat = normalize(gen::system(rng)).system;
    System d = diversify(flat).system;
    System rev = d;
    std::reverse(rev.vars.begin(), rev.vars.end());
    std::reverse(rev.equations.begin(), rev.equations.end());
    auto a = shannon_bound(build_graph(d), uniform_sizes(d, 2));
    auto b = shannon_bound(build_graph(rev), uniform_sizes(rev, 2));
    EXPECT_EQ(a.normalised_bound, b.normalised_bound) << render(d);
  }
}

TEST(BoundProperty, NeverBelowTheBruteForceMaximum) {
  gen::Rng rng(67);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 80; ++i) {
    System d = diversify(normalize(gen::system(rng)).system).system;
    for (std::uint64_t n : {2, 3}) {
      auto sz = uniform_sizes(d, n);
      auto space = oracle::interpretation_space(d, sz);
      if (!space || *space > 50000) continue;
      ++checked;
      auto b = shannon_bound(build_graph(d), sz);
      auto best = oracle::brute_max(d, sz).best;
      EXPECT_LE(best, count_ceiling(b)) << render(d);
      if (best > 0)
        EXPECT_LE(std::log(double(best)) / std::log(double(n)), b.normalised_bound.get_d() + 1e-9) << render(d);
    }
  }
  EXPECT_GE(checked, 40);
}
