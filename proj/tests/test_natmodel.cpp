#include <doctest.h>

#include "nfw/corpus.hpp"
#include "nfw/error.hpp"
#include "nfw/natmodel.hpp"
#include "nfw/stratify.hpp"
#include "support/naive_model.hpp"

using namespace nfw;

namespace {
ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidInput;
}

bool tst(const NaturalModel& m, const char* text) { return eval(m, Sentence(parse(text), Mode::TST)); }
}  // namespace

TEST_CASE("build_default level sizes") {
  using V = std::vector<std::uint64_t>;
  CHECK(build_default(1, 3).level_sizes() == V{1, 2, 4});
  CHECK(build_default(0, 2).level_sizes() == V{0, 1});
  CHECK(build_default(2, 4).level_sizes() == V{2, 4, 16, 65536});
  CHECK(kind_of([] { build_default(2, 5); }) == ErrorKind::BudgetExceeded);
  CHECK(kind_of([] { build_default(3, 4, 1000); }) == ErrorKind::BudgetExceeded);
}

TEST_CASE("eval examples") {
  CHECK(tst(build_default(1, 2), "exists x^1 exists y^1. ~(x=y)"));
  CHECK(!tst(build_default(0, 1), "exists x^0. x=x"));
  CHECK(tst(build_default(2, 3), "exists x^2 forall y^1. y in x"));
  // At depth 2 there is no type-2 level at all.
  CHECK(kind_of([] { tst(build_default(2, 2), "exists x^2 forall y^1. y in x"); }) ==
        ErrorKind::TypeOutOfRange);
  // No level-1 element contains every atom of a 2-atom base... except the full set.
  CHECK(tst(build_default(2, 2), "exists x^1 forall y^0. y in x"));
  CHECK(!tst(build_default(2, 2), "forall x^1 exists y^0. y in x"));
}

TEST_CASE("evaluator matches the naive reference on the sentence family") {
  auto family = sentence_family(3, 2);
  CHECK(family.size() > 500);
  for (std::uint64_t base = 0; base <= 2; ++base)
    for (int depth = 1; depth <= 3; ++depth) {
      NaturalModel m = build_default(base, depth);
      auto naive = testing::NaiveModel::build(base, depth);
      for (const Formula& f : family) {
        if (*max_type(f) >= depth) continue;
        INFO(pretty(f));
        bool fast = eval(m, Sentence(f, Mode::TST));
        bool slow = eval(m, Sentence(f, Mode::TST), EvalOptions{kDefaultBudget, false});
        CHECK(fast == slow);
        CHECK(fast == naive.eval(f));
      }
    }
}

TEST_CASE("type-0 homogeneity shortcut on counting sentences") {
  // "at least k distinct atoms" for base sizes around k
  auto at_least = [](int k) {
    Formula body = parse("x0^0 = x0^0");
    std::vector<Var> xs;
    for (int i = 0; i < k; ++i) xs.push_back(Var{"x" + std::to_string(i), 0});
    Formula f;
    for (int i = k - 1; i >= 0; --i) {
      Formula distinct = parse("x0^0 = x0^0");
      for (int j = 0; j < i; ++j) {
        Formula ne = make_not(Formula::equal(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]));
        distinct = j == 0 ? ne : make_and(distinct, ne);
      }
      Formula inner = i == k - 1 ? distinct : (i == 0 ? f : make_and(distinct, f));
      f = Formula::exists(xs[static_cast<std::size_t>(i)], inner);
    }
    return f;
  };
  for (int k = 1; k <= 6; ++k)
    for (std::uint64_t m = 0; m <= 6; ++m) {
      NaturalModel model = build_default(m, 1);
      bool fast = eval(model, Sentence(at_least(k), Mode::TST));
      bool slow = eval(model, Sentence(at_least(k), Mode::TST), EvalOptions{kDefaultBudget, false});
      CHECK(fast == (m >= static_cast<std::uint64_t>(k)));
      CHECK(slow == fast);
    }
  // Large k is cheap with the shortcut.
  CHECK(!eval(build_default(15, 1), Sentence(at_least(16), Mode::TST)));
  CHECK(eval(build_default(16, 1), Sentence(at_least(16), Mode::TST)));
}

TEST_CASE("extensionality holds in natural models") {
  for (std::uint64_t base = 0; base <= 3; ++base)
    for (int depth = 2; depth <= 3; ++depth) {
      if (base == 3 && depth == 3) continue;
      NaturalModel m = build_default(base, depth);
      for (int t = 0; t + 1 < depth; ++t)
        CHECK(eval(m, Sentence(extensionality_axiom(t), Mode::TST)));
    }
}

TEST_CASE("comprehension instances hold at small bases") {
  auto family = comprehension_family(2, 2);
  CHECK(family.size() > 50);
  for (std::uint64_t base = 0; base <= 2; ++base) {
    NaturalModel m = build_default(base, 2);
    for (const Formula& f : family) {
      INFO(pretty(f));
      CHECK(eval(m, Sentence(f, Mode::TST)));
    }
  }
}

TEST_CASE("iso_models lifts bijections and preserves membership") {
  NaturalModel a = build_default(2, 3, kDefaultBudget, {"p", "q"});
  NaturalModel b = build_default(2, 3, kDefaultBudget, {"u", "v"});
  for (const auto& base : {std::vector<std::uint64_t>{0, 1}, std::vector<std::uint64_t>{1, 0}}) {
    LevelBijection iso = iso_models(a, b, base);
    REQUIRE(iso.maps.size() == 3);
    CHECK(iso.maps[0].size() + iso.maps[1].size() + iso.maps[2].size() == 22);
    for (int lvl = 0; lvl + 1 < 3; ++lvl) {
      const auto& lo = iso.maps[static_cast<std::size_t>(lvl)];
      const auto& hi = iso.maps[static_cast<std::size_t>(lvl + 1)];
      std::set<std::uint64_t> image(hi.begin(), hi.end());
      CHECK(image.size() == hi.size());
      for (std::uint64_t x = 0; x < lo.size(); ++x)
        for (std::uint64_t y = 0; y < hi.size(); ++y)
          CHECK(a.member(lvl, x, lvl + 1, y) == b.member(lvl, lo[x], lvl + 1, hi[y]));
    }
  }
  LevelBijection id = iso_models(a, a);
  for (const auto& level : id.maps)
    for (std::uint64_t i = 0; i < level.size(); ++i) CHECK(level[i] == i);
  CHECK(kind_of([&] { iso_models(a, build_default(1, 3)); }) == ErrorKind::SizeMismatch);
}

TEST_CASE("build_tstu_family size constraints") {
  CHECK(build_tstu_family({1, 2, 4, 16, 65536}).lambda_fin() == 5);
  CHECK(build_tstu_family({0, 1, 2, 4, 16}).lambda_fin() == 5);
  CHECK(kind_of([] { build_tstu_family({2, 3}); }) == ErrorKind::SizeConstraintViolated);
  CHECK(kind_of([] { build_tstu_family({1, 2, 3}); }) == ErrorKind::SizeConstraintViolated);
}

TEST_CASE("eval_tstu: atoms, empty, weak extensionality") {
  TstuFamily fam = build_tstu_family({1, 2, 4});
  // level 2 has 4 elements, subsets of level 1 use codes 0..3: no atoms.
  CHECK(!fam.some_atom(2));
  TstuFamily fam2 = build_tstu_family({1, 3, 16});
  auto atom = fam2.some_atom(1);
  REQUIRE(atom);
  CHECK(*atom == 2);
  Interpretation i01(fam2, {0, 1});
  CHECK(!eval_tstu(i01, parse("exists w^0. w in y^1"), Assignment{{"y", *atom}}));
  CHECK(eval_tstu(i01, parse("exists w^0. w in y^1"), Assignment{{"y", 1}}));
  CHECK(eval_tstu(i01, Sentence(parse("forall w^0. ~(w in empty^1)"), Mode::TSTU)));

  std::vector<std::vector<int>> seqs{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  for (const auto& sizes : {std::vector<std::uint64_t>{1, 2, 4}, std::vector<std::uint64_t>{1, 3, 16},
                            std::vector<std::uint64_t>{2, 5, 40}}) {
    TstuFamily f = build_tstu_family(sizes);
    for (const auto& s : seqs) {
      Interpretation in(f, s);
      for (int t = 0; t + 1 < static_cast<int>(s.size()); ++t) {
        CHECK(eval_tstu(in, Sentence(weak_extensionality_axiom(t), Mode::TSTU)));
        CHECK(eval_tstu(in, Sentence(parse("forall w^" + std::to_string(t) + ". ~(w in empty^" +
                                           std::to_string(t + 1) + ")"),
                                     Mode::TSTU)));
      }
    }
  }
  // Full extensionality fails when atoms are present.
  Interpretation with_atoms(fam2, {0, 1});
  CHECK(!eval_tstu(with_atoms, Sentence(extensionality_axiom(0), Mode::TSTU)));
}

TEST_CASE("eval_tstu errors and tangled reading") {
  TstuFamily fam = build_tstu_family({1, 2, 4, 16, 65536});
  CHECK(kind_of([&] { Interpretation(fam, {2, 1}); }) == ErrorKind::NotIncreasing);
  CHECK(kind_of([&] { Interpretation(fam, {0, 7}); }) == ErrorKind::TypeOutOfRange);
  Interpretation in(fam, {0, 1});
  CHECK(kind_of([&] { eval_tstu(in, Sentence(parse("exists x^2. x=x"), Mode::TSTU)); }) ==
        ErrorKind::TypeOutOfRange);
  Interpretation top(fam, {4});
  CHECK(kind_of([&] {
          eval_tstu(top, Sentence(parse("forall x^0 forall y^0. x = y"), Mode::TSTU),
                    EvalOptions{1000, false});
        }) == ErrorKind::BudgetExceeded);
  Interpretation ttt(fam, {0, 1, 2});
  // x^0 in z^2 is meaningful in the tangled reading.
  CHECK(eval_ttt(ttt, parse("forall x^0. exists z^2. x in z")));
  CHECK(eval_ttt(ttt, parse("exists z^2. forall x^0. ~(x in z)")));
}
