#include <gtest/gtest.h>

#include "generators.hpp"
#include "termcoding/dsl.hpp"
#include "termcoding/examples.hpp"

using namespace termcoding;

TEST(Parse, SmallSystem) {
  System s = parse("sort P\nfun f : P P -> P\nvar x y : P\neq f(x,y) = f(y,x)");
  EXPECT_EQ(s.equations.size(), 1u);
  EXPECT_EQ(s.vars.size(), 2u);
  EXPECT_EQ(to_string(s.equations[0]), "f(x,y) = f(y,x)");
}

TEST(Parse, SteinerFileMatchesGenerator) {
  const char* text =
      "# idempotent, commutative, self-inverting\n"
      "sort A\n"
      "fun f : A A -> A\n"
      "var x y : A\n"
      "eq f(x,x) = x\n"
      "eq f(x,y) = f(y,x)\n"
      "eq f(x,f(x,y)) = y\n";
  EXPECT_EQ(parse(text), examples::gen("steiner-quasigroup"));
}

TEST(Parse, UnclosedParenthesisHasSpan) {
  try {
    parse("sort P\nfun f : P P -> P\nvar x y : P\neq f(x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 4);
    EXPECT_GE(e.span().length, 1);
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("sort A\nvar _x : A\n"), ParseError);
  EXPECT_THROW(parse("sort A\nvar x : A\nneq x != x\n"), ValidationError);
  EXPECT_THROW(parse("sort A\nfun f : A -> A\nvar x : A\neq f(x,x) = x\n"), ValidationError);
  EXPECT_THROW(parse("sort A\nbogus line\n"), ParseError);
  EXPECT_THROW(parse("sort A\nvar x : A\neq x = $\n"), ParseError);
}

TEST(Parse, ConstantsAndOutputs) {
  System s = parse("sort B\nfun c : -> B\nfun S : B B -> B\nvar x : B\nneq S(c,c) != c\nout S(x,x) c\n");
  ASSERT_EQ(s.outputs.size(), 2u);
  EXPECT_EQ(s.outputs[1], Term::app("c"));
  EXPECT_TRUE(s.is_dispersion());
}

TEST(Render, C5ContainsItsEquations) {
  std::string text = render(examples::gen("c5"));
  EXPECT_NE(text.find("eq f(f(z,x),y) = x"), std::string::npos);
  EXPECT_NE(text.find("eq f(x,f(y,z)) = y"), std::string::npos);
  EXPECT_NE(text.find("eq f(f(y,z),f(z,x)) = z"), std::string::npos);
}

TEST(Render, DeclarationsOnly) {
  System s = parse("sort A\nfun f : A -> A\nvar x : A\n");
  std::string text = render(s);
  EXPECT_EQ(text.find("eq "), std::string::npos);
  EXPECT_EQ(parse(text), s);
}

TEST(Render, Canonical) {
  System a = parse("sort A\nvar x : A\nfun f : A -> A\neq f(x) = x\n");
  System b = parse(render(a));
  EXPECT_EQ(render(a), render(b));
}

TEST(RoundTrip, RandomSystems) {
  gen::Rng rng(3);
  for (int i = 0; i < 400; ++i) {
    gen::SystemShape shape;
    shape.n_sorts = 1 + i % 3;
    shape.max_outputs = i % 4 == 0 ? 3 : 0;
    System s = gen::system(rng, shape);
    EXPECT_EQ(parse(render(s)), s) << render(s);
  }
}

TEST(RoundTrip, Examples) {
  for (const auto& name : examples::names()) {
    System s = examples::gen(name);
    EXPECT_EQ(parse(render(s)), s) << name;
  }
}

TEST(Files, ReadMissingThrows) { EXPECT_THROW(parse_file("/nonexistent/file.tc"), Error); }
