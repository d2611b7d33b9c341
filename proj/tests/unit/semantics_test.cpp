#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "termcoding/dsl.hpp"
#include "termcoding/examples.hpp"
#include "termcoding/normalize.hpp"
#include "termcoding/search.hpp"
#include "termcoding/semantics.hpp"

using namespace termcoding;

namespace {

// The printed n=3 Steiner operation, shifted to 0-based elements.
Interpretation steiner3() {
  System s = examples::gen("steiner-quasigroup");
  Interpretation I = zero_interpretation(s, uniform_sizes(s, 3));
  I.tables["f"] = {0, 2, 1, 2, 1, 0, 1, 0, 2};
  return I;
}

Interpretation add_mod(const System& s, std::uint32_t n) {
  Interpretation I = zero_interpretation(s, uniform_sizes(s, n));
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) I.tables["f"][a * n + b] = (a + b) % n;
  return I;
}

// Solutions of sys under I with variable i confined to block blocks[i] of width m.
std::uint64_t in_block_solutions(const System& sys, const Interpretation& I,
                                 const std::map<std::string, std::uint32_t>& blocks, std::uint32_t m) {
  std::uint64_t n = 0;
  oracle::for_each_assignment(sys, I.sizes, [&](const std::vector<std::uint32_t>& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] / m != blocks.at(sys.vars[i].name)) return;
    if (oracle::satisfies(sys, I, a)) ++n;
  });
  return n;
}

}  // namespace

TEST(Eval, Examples) {
  System s = parse("sort A\nfun f : A A -> A\nfun c : -> A\nvar x y : A\n");
  Interpretation I = add_mod(s, 3);
  I.tables["c"] = {2};
  auto fxy = Term::app("f", {Term::var("x"), Term::var("y")});
  EXPECT_EQ(eval(fxy, s, I, {{"x", 1}, {"y", 2}}), 0u);
  EXPECT_EQ(eval(Term::app("c"), s, I, {}), 2u);
  EXPECT_THROW(eval(fxy, s, I, {{"x", 1}}), Error);
  EXPECT_THROW(eval(fxy, s, I, {{"x", 1}, {"y", 7}}), Error);

  System st = examples::gen("steiner-quasigroup");
  auto inv = Term::app("f", {Term::var("x"), Term::app("f", {Term::var("x"), Term::var("y")})});
  EXPECT_EQ(eval(inv, st, steiner3(), {{"x", 1}, {"y", 2}}), 2u);
}

TEST(Count, PrintedTables) {
  System st = examples::gen("steiner-quasigroup");
  EXPECT_EQ(count_solutions(st, steiner3()).count, 9u);
  auto r = count_solutions(st, examples::steiner_n4_witness(), 100);
  EXPECT_EQ(r.count, 13u);
  ASSERT_EQ(r.sample.size(), 13u);
  // Inversion fails exactly at (1,2), (1,3), (1,4) in the printed numbering.
  for (const auto& sol : r.sample) EXPECT_FALSE(sol[0] == 0 && sol[1] != 0);
  EXPECT_EQ(count_solutions(examples::gen("network-coding"), examples::network_coding_witness(3)).count, 9u);
}

TEST(Count, SampleIsConsistent) {
  System st = examples::gen("steiner-quasigroup");
  auto r = count_solutions(st, steiner3(), 4);
  EXPECT_EQ(r.count, 9u);
  EXPECT_EQ(r.sample.size(), 4u);
  EXPECT_EQ(r.sample[0], (std::vector<std::uint32_t>{0, 0}));
  EXPECT_FALSE(r.witness_hash.empty());
}

TEST(Count, RejectsBadInterpretations) {
  System st = examples::gen("steiner-quasigroup");
  Interpretation I = steiner3();
  I.tables["f"].pop_back();
  EXPECT_THROW(count_solutions(st, I), Error);
  I = steiner3();
  I.tables["f"][0] = 3;
  EXPECT_THROW(check_interpretation(st, I), Error);
  I = steiner3();
  I.tables.erase("f");
  EXPECT_THROW(check_interpretation(st, I), Error);
}

TEST(Image, Examples) {
  System xy = parse("sort A\nvar x y : A\nout x y\n");
  EXPECT_EQ(dispersion_image(xy, zero_interpretation(xy, uniform_sizes(xy, 2))), 4u);

  System ff = parse("sort A\nfun f : A -> A\nvar x : A\nout f(x) f(x)\n");
  gen::Rng rng(5);
  for (int i = 0; i < 20; ++i) EXPECT_LE(dispersion_image(ff, gen::interpretation(rng, ff, uniform_sizes(ff, 3))), 3u);

  System neq = parse("sort A\nvar x y : A\nneq x != y\nout x y\n");
  EXPECT_EQ(dispersion_image(neq, zero_interpretation(neq, uniform_sizes(neq, 3))), 6u);
  EXPECT_EQ(dispersion_image(examples::gen("nand-dispersion"), examples::nand_witness()), 8u);
  EXPECT_THROW(dispersion_image(examples::gen("c5"), zero_interpretation(examples::gen("c5"), uniform_sizes(examples::gen("c5"), 2))), Error);
}

TEST(Image, SingleRelayMaximumByBruteForce) {
  System s = examples::gen("single-relay");
  auto sz = uniform_sizes(s, 2);
  auto b = oracle::brute_max(s, sz, true);
  EXPECT_GE(b.best, 4u);
  EXPECT_LE(b.best, 16u);
  EXPECT_EQ(dispersion_image(s, b.witness), b.best);
}

TEST(Product, SteinerSquares) {
  System st = examples::gen("steiner-quasigroup");
  Interpretation p = product(st, steiner3(), steiner3());
  EXPECT_EQ(p.sizes.at("A"), 9u);
  EXPECT_GE(count_solutions(st, p).count, 81u);
}

TEST(Product, TrivialFactor) {
  System st = examples::gen("steiner-quasigroup");
  Interpretation one = zero_interpretation(st, uniform_sizes(st, 1));
  EXPECT_EQ(count_solutions(st, product(st, steiner3(), one)).count, 9u);
  EXPECT_EQ(count_solutions(st, product(st, one, examples::steiner_n4_witness())).count, 13u);
}

TEST(Product, FormulationOneWitnesses) {
  System s = examples::gen("unsolvable-v1");
  auto a = exhaustive_max(s, uniform_sizes(s, 2));
  auto b = exhaustive_max(s, uniform_sizes(s, 3));
  ASSERT_EQ(a.best_count, oracle::brute_max(s, uniform_sizes(s, 2)).best);
  ASSERT_EQ(b.best_count, oracle::brute_max(s, uniform_sizes(s, 3)).best);
  Interpretation p = product(s, a.witness, b.witness);
  EXPECT_EQ(p.sizes.at("A"), 6u);
  EXPECT_GE(count_solutions(s, p).count, a.best_count * b.best_count);
}

TEST(Product, MismatchedSystems) {
  System st = examples::gen("steiner-quasigroup");
  Interpretation bad = steiner3();
  bad.tables["g"] = {0};
  EXPECT_THROW(product(st, steiner3(), bad), Error);
}

TEST(PartitionLift, UnsolvableVariant) {
  System base = normalize(examples::gen("unsolvable-v1")).system;
  Diversified d = diversify(base);
  Interpretation w = examples::unsolvable_projection_witness(d, 2);
  std::uint64_t dcount = count_solutions(d.system, w).count;
  EXPECT_EQ(dcount, 4u);
  Interpretation lifted = partition_lift(d.system, w, base, d);
  EXPECT_EQ(lifted.sizes.at("A"), 8u);
  EXPECT_GE(count_solutions(base, lifted).count, dcount);
  // The constructed solutions are exactly those with every variable in its own block.
  EXPECT_EQ(in_block_solutions(base, lifted, partition_blocks(base, d), 2), dcount);
}

TEST(PartitionLift, SingleEquation) {
  System base = parse("sort A\nfun f : A A -> A\nvar x y z : A\neq f(x,y) = z\n");
  Diversified d = diversify(base);
  auto blocks = partition_blocks(base, d);
  gen::Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    Interpretation w = gen::interpretation(rng, d.system, uniform_sizes(d.system, 2));
    Interpretation lifted = partition_lift(d.system, w, base, d);
    EXPECT_EQ(in_block_solutions(base, lifted, blocks, 2), count_solutions(d.system, w).count);
  }
}

TEST(PartitionLift, C5AtTwentyEight) {
  System base = normalize(examples::gen("c5")).system;
  Diversified d = diversify(base);
  ASSERT_EQ(base.vars.size(), 7u);
  Interpretation core = examples::c5_core_witness(2);
  Interpretation w = zero_interpretation(d.system, uniform_sizes(d.system, 4));
  for (const auto& [name, table] : core.tables) w.tables[name] = table;
  w.tables["f_7"].assign(16, 1);  // keeps the two sink values apart
  std::uint64_t dcount = count_solutions(d.system, w).count;
  EXPECT_GT(dcount, 0u);
  EXPECT_EQ(count_solutions(examples::c5_core(), core).count, 32u);
  Interpretation lifted = partition_lift(d.system, w, base, d);
  EXPECT_EQ(lifted.sizes.at("A"), 28u);
  EXPECT_GE(count_solutions(base, lifted, 0).count, dcount);
}

TEST(Verify, Examples) {
  System st = examples::gen("steiner-quasigroup");
  EXPECT_TRUE(verify_witness(st, steiner3(), 9));
  EXPECT_FALSE(verify_witness(st, steiner3(), 8));
  EXPECT_TRUE(verify_witness(examples::gen("nand-dispersion"), examples::nand_witness(), 8));
}

TEST(Tables, EncodingHelpers) {
  System s = parse("sort A\nsort B\nfun f : A B -> A\nfun c : -> B\nvar x : A\n");
  DomainSizes sz{{"A", 2}, {"B", 3}};
  EXPECT_EQ(table_size(*s.find_func("f"), sz), 6u);
  EXPECT_EQ(table_index(*s.find_func("f"), sz, {1, 2}), 5u);
  gen::Rng rng(1);
  Interpretation I = gen::interpretation(rng, s, sz);
  auto flat = flatten_tables(s, I);
  EXPECT_EQ(flat.size(), 7u);
  EXPECT_EQ(unflatten_tables(s, sz, flat), I);
  EXPECT_EQ(interpretation_digest(s, I), interpretation_digest(s, I));
  EXPECT_EQ(interpretation_digest(s, I).size(), 64u);
}

TEST(CountProperty, AgreesWithOracle) {
  gen::Rng rng(23);
  for (int i = 0; i < 400; ++i) {
    gen::SystemShape shape;
    shape.n_sorts = 1 + i % 2;
    shape.max_disequalities = 2;
    if (i % 5 == 0) shape.max_outputs = 3;
    System s = gen::system(rng, shape);
    DomainSizes sz;
    for (const auto& so : s.sorts) sz[so.name] = 1 + rng() % 3;
    Interpretation I = gen::interpretation(rng, s, sz);
    EXPECT_EQ(count_solutions(s, I, 0).count, oracle::count(s, I)) << render(s);
    if (s.is_dispersion()) EXPECT_EQ(dispersion_image(s, I), oracle::image(s, I)) << render(s);
  }
}

TEST(CountProperty, BoundedAndMonotoneInDisequalities) {
  gen::Rng rng(29);
  for (int i = 0; i < 300; ++i) {
    gen::SystemShape shape;
    shape.max_disequalities = 2;
    System s = gen::system(rng, shape);
    std::uint64_t n = 2 + i % 2;
    Interpretation I = gen::interpretation(rng, s, uniform_sizes(s, n));
    std::uint64_t all = 1;
    for (std::size_t k = 0; k < s.vars.size(); ++k) all *= n;
    std::uint64_t c = count_solutions(s, I, 0).count;
    EXPECT_LE(c, all);
    System relaxed = s;
    relaxed.disequalities.clear();
    EXPECT_GE(count_solutions(relaxed, I, 0).count, c);
  }
}

TEST(CountProperty, ProductIsSupermultiplicative) {
  gen::Rng rng(31);
  for (int i = 0; i < 150; ++i) {
    System s = gen::system(rng);
    Interpretation a = gen::interpretation(rng, s, uniform_sizes(s, 2));
    Interpretation b = gen::interpretation(rng, s, uniform_sizes(s, 1 + rng() % 3));
    EXPECT_GE(oracle::count(s, product(s, a, b)), oracle::count(s, a) * oracle::count(s, b)) << render(s);
  }
}
