#include <doctest.h>

#include <random>

#include "nfw/formula.hpp"
#include "nfw/stratify.hpp"
#include "support/oracles.hpp"

using namespace nfw;

namespace {
Var v(const char* name) { return Var{name, std::nullopt}; }
Var v(const char* name, int type) { return Var{name, type}; }
}  // namespace

TEST_CASE("parse: atomic and quantified forms") {
  CHECK(parse("x in y") == Formula::member(v("x"), v("y")));
  CHECK(parse("forall x^0. x = x") ==
        Formula::forall(v("x", 0), Formula::equal(v("x", 0), v("x", 0))));
  CHECK(parse("forall x. (x in y <-> x in z)") ==
        Formula::forall(v("x"), make_iff(Formula::member(v("x"), v("y")),
                                          Formula::member(v("x"), v("z")))));
}

TEST_CASE("parse: precedence and associativity") {
  auto a = Formula::member(v("a"), v("b"));
  auto b = Formula::member(v("b"), v("c"));
  auto c = Formula::equal(v("c"), v("d"));
  CHECK(parse("a in b & b in c | c = d") == make_or(make_and(a, b), c));
  CHECK(parse("a in b -> b in c -> c = d") == make_implies(a, make_implies(b, c)));
  CHECK(parse("a in b <-> b in c -> c = d") == make_iff(a, make_implies(b, c)));
  CHECK(parse("~a in b & b in c") == make_and(make_not(a), b));
  // quantifiers scope to the end of the enclosing parenthesis
  CHECK(parse("exists a. a in b & b in c") ==
        Formula::exists(v("a"), make_and(a, b)));
  CHECK(parse("(exists a. a in b) & b in c") ==
        make_and(Formula::exists(v("a"), a), b));
}

TEST_CASE("parse: chained quantifiers without dots, comments") {
  Formula f = parse("exists x^0 exists y^0. ~(x=y)  # two atoms");
  CHECK(f == Formula::exists(v("x", 0), Formula::exists(v("y", 0),
                 make_not(Formula::equal(v("x", 0), v("y", 0))))));
}

TEST_CASE("parse: syntax errors carry byte offsets") {
  try {
    parse("x in & y");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(parse("forall x x = y"), SyntaxError);
  CHECK_THROWS_AS(parse("(x in y"), SyntaxError);
  CHECK_THROWS_AS(parse("x in y)"), SyntaxError);
  CHECK_THROWS_AS(parse("x @ y"), SyntaxError);
  CHECK_THROWS_AS(parse("forall x^0. x^1 = x"), SyntaxError);
}

TEST_CASE("normalize: shadowing is alpha-renamed, types follow binders") {
  Formula f = parse("forall x. (x in y & exists x. x = y)");
  CHECK(pretty(f) == "forall x. x in y & (exists x_1. x_1 = y)");
  Formula g = parse("x in y & forall x. x = x");
  CHECK(pretty(g) == "x in y & (forall x_1. x_1 = x_1)");
  Formula h = parse("exists x^2. x = x");
  CHECK(h.body().lhs().type == 2);
}

TEST_CASE("pretty/parse round trip on random normalized ASTs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Formula f = normalize(testing::random_formula(rng, 6, {"x", "y", "z", "w"}, i % 2 == 0));
    INFO(pretty(f));
    CHECK(parse(pretty(f)) == f);
  }
}

TEST_CASE("raise") {
  CHECK(raise(parse("x^0 in y^1")) == parse("x^1 in y^2"));
  CHECK(raise(parse("forall x^2. x = x")) == parse("forall x^3. x = x"));
  Formula phi = parse("forall x^0. exists y^1. x in y");
  CHECK(raise(raise(phi)) == raise(phi, 2));
  CHECK_THROWS_AS(raise(parse("x in y^1")), Error);
  try {
    raise(parse("x in y^1"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingTypes);
  }
}

TEST_CASE("raise preserves well-typedness") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Formula f = normalize(testing::random_formula(rng, 4, {"x", "y", "z"}, true));
    CHECK(check_typed(f, Mode::TST) == check_typed(raise(f), Mode::TST));
  }
}

TEST_CASE("translate_s") {
  std::vector<int> s{2, 5};
  CHECK(translate_s(parse("x^0 in y^1"), s) == parse("x^2 in y^5"));
  std::vector<int> id{0, 1, 2};
  Formula phi = parse("forall x^0. exists y^1. forall z^2. x in y & y in z");
  CHECK(translate_s(phi, id) == phi);
  std::vector<int> s2{3, 7};
  CHECK(translate_s(parse("x^0 = z^0"), s2) == parse("x^3 = z^3"));

  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  std::vector<int> shortseq{4};
  CHECK(kind_of([&] { translate_s(parse("x^0 in y^1"), shortseq); }) ==
        ErrorKind::TypeOutOfRange);
  std::vector<int> flat{1, 1};
  CHECK(kind_of([&] { translate_s(parse("x^0 in y^1"), flat); }) ==
        ErrorKind::NotIncreasing);
}

TEST_CASE("translate_s output is TTT-typed for TST-typed input") {
  std::mt19937_64 rng(3);
  std::vector<int> s{1, 4, 6, 9};
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    Formula f = normalize(testing::random_formula(rng, 4, {"x", "y", "z"}, true));
    if (!check_typed(f, Mode::TST)) continue;
    ++checked;
    CHECK(check_typed(translate_s(f, s), Mode::TTT));
  }
  CHECK(checked > 10);
}

TEST_CASE("ambiguity_instance") {
  Sentence phi(parse("exists x^0. x=x"), Mode::TST);
  Sentence amb = ambiguity_instance(phi);
  CHECK(amb.formula() == parse("(exists x^0. x=x) <-> (exists x^1. x=x)"));
  Sentence twice = ambiguity_instance(amb);
  CHECK(twice.formula() ==
        parse("((exists x^0. x=x) <-> (exists x^1. x=x)) <-> "
              "((exists x^1. x=x) <-> (exists x^2. x=x))"));
  CHECK_THROWS_AS(Sentence(parse("x^0 = y^0"), Mode::TST), Error);
}

TEST_CASE("comprehension_instance") {
  Formula inst = comprehension_instance(parse("x^0 = x^0"), v("x", 0), v("A", 1));
  CHECK(inst == parse("exists A^1. forall x^0. x in A <-> x = x"));
  CHECK(is_comprehension_instance(inst));

  // Russell: not a capture error, but untypable
  Formula russell = comprehension_instance(parse("~(x in x)"), v("x"), v("A"));
  CHECK(!is_stratified(russell));

  try {
    comprehension_instance(parse("x in A"), v("x"), v("A"));
    FAIL("expected capture error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capture);
  }
}

TEST_CASE("raise maps comprehension instances to comprehension instances") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Formula body = normalize(testing::random_formula(rng, 3, {"x", "y", "z"}));
    auto strat = infer(comprehension_instance(body, v("x"), v("A")));
    if (!std::holds_alternative<Stratification>(strat)) continue;
    Formula typed = apply_stratification(
        comprehension_instance(body, v("x"), v("A")), std::get<Stratification>(strat));
    CHECK(is_comprehension_instance(typed));
    CHECK(is_comprehension_instance(raise(typed)));
  }
}
