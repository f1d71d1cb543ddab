#include <doctest.h>

#include "nfw/error.hpp"
#include "nfw/web.hpp"

using namespace nfw;

namespace {
WebFragment example_fragment() {
  WebFragment w;
  w.lambda_fin = 3;
  w.tau = {{{0, 1, 2}, 1}, {{1, 2}, 2}, {{0, 1}, 1}, {{0, 2}, 2},
           {{1}, 2},       {{2}, 4},    {{0}, 1}};
  return w;
}

// tau depends only on |A|, chained by naturality from the top set.
WebFragment size_graded(int lambda, std::vector<std::uint64_t> by_size) {
  WebFragment w;
  w.lambda_fin = lambda;
  for (int k = 1; k <= lambda; ++k)
    for_each_subset(lambda, k, [&](std::span<const int> a) {
      w.tau[IndexSet(a.begin(), a.end())] = by_size[static_cast<std::size_t>(k - 1)];
    });
  return w;
}

std::vector<Sentence> two_atoms() {
  return {Sentence(parse("exists x^0 exists y^0. ~(x=y)"), Mode::TST)};
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidInput;
}
}  // namespace

TEST_CASE("index set helpers") {
  CHECK(drop_min({0, 2, 5}) == IndexSet{2, 5});
  CHECK(smallest({0, 2, 5}, 2) == IndexSet{0, 2});
  CHECK(smallest({4}, 2) == IndexSet{4});
}

TEST_CASE("check_naturality") {
  CHECK(check_naturality(example_fragment()).pass());
  CHECK(check_naturality(example_fragment()).missing.empty());

  WebFragment bad;
  bad.lambda_fin = 2;
  bad.tau = {{{0, 1}, 2}, {{1}, 3}};
  auto r = check_naturality(bad);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].a == IndexSet{0, 1});
  CHECK(r.violations[0].tau_a1 == 3);

  WebFragment singletons;
  singletons.lambda_fin = 3;
  singletons.tau = {{{0}, 5}, {{1}, 7}, {{2}, 0}};
  CHECK(check_naturality(singletons).pass());

  WebFragment partial;
  partial.lambda_fin = 3;
  partial.tau = {{{0, 2}, 1}};
  auto rp = check_naturality(partial);
  CHECK(rp.pass());
  CHECK(rp.missing == std::vector<IndexSet>{{0, 2}});

  WebFragment huge;
  huge.lambda_fin = 2;
  huge.tau = {{{0, 1}, 64}, {{1}, 0}};
  CHECK(!check_naturality(huge).pass());
}

TEST_CASE("check_elementarity") {
  auto r = check_elementarity(example_fragment(), 1, two_atoms());
  REQUIRE(r.violations.size() >= 1);
  CHECK(r.violations[0].a == IndexSet{0, 1});
  CHECK(r.violations[0].b == IndexSet{0, 2});
  CHECK(r.violations[0].truth_a == std::vector<bool>{false});
  CHECK(r.violations[0].truth_b == std::vector<bool>{true});
  for (const auto& v : r.violations) CHECK(smallest(v.a, 1) == smallest(v.b, 1));

  std::vector<Sentence> valid{Sentence(parse("forall x^0. x=x"), Mode::TST)};
  CHECK(check_elementarity(example_fragment(), 1, valid).pass());

  WebFragment by_min;
  by_min.lambda_fin = 3;
  by_min.tau = {{{0, 1, 2}, 3}, {{0, 1}, 3}, {{0, 2}, 3}, {{1, 2}, 5}};
  CHECK(check_elementarity(by_min, 1, sigma_card(8)).pass());
}

TEST_CASE("sigma_card counts distinct atoms") {
  auto sigma = sigma_card(5);
  REQUIRE(sigma.size() == 5);
  for (std::uint64_t m = 0; m <= 6; ++m) {
    NaturalModel model = build_default(m, 1);
    for (int k = 1; k <= 5; ++k) {
      bool expect = m >= static_cast<std::uint64_t>(k);
      CHECK(eval(model, sigma[static_cast<std::size_t>(k - 1)]) == expect);
      CHECK(eval(model, sigma[static_cast<std::size_t>(k - 1)], EvalOptions{kDefaultBudget, false}) == expect);
    }
  }
}

TEST_CASE("web_ambiguity") {
  std::vector<Sentence> insensitive{Sentence(parse("exists x^0. x=x"), Mode::TST)};
  WebFragment graded = size_graded(4, {65536, 16, 4, 2});
  CHECK(check_naturality(graded).pass());
  auto r = web_ambiguity(graded, insensitive);
  REQUIRE(std::holds_alternative<AmbiguityWitness>(r));
  const auto& w = std::get<AmbiguityWitness>(r);
  CHECK(w.H.size() == 3);
  CHECK(w.verdicts[0].value);
  CHECK(w.verdicts[0].value_raised);

  auto r2 = web_ambiguity(graded, two_atoms());
  REQUIRE(std::holds_alternative<AmbiguityWitness>(r2));
  CHECK(std::get<AmbiguityWitness>(r2).verdicts[0].value);
  CHECK(std::get<AmbiguityWitness>(r2).verdicts[0].value_raised);

  // Three indices leave a pool of two: no homogeneous triple.
  auto r3 = web_ambiguity(example_fragment(), two_atoms());
  CHECK(std::holds_alternative<NoHomogeneousSet>(r3));

  // Colors alternate with min(A).
  WebFragment alt;
  alt.lambda_fin = 5;
  for (int a = 0; a + 1 < 5; ++a) alt.tau[{a, a + 1}] = a % 2 ? 2 : 1;
  auto r4 = web_ambiguity(alt, two_atoms());
  REQUIRE(std::holds_alternative<NoHomogeneousSet>(r4));
  const auto& c = std::get<NoHomogeneousSet>(r4).coloring;
  for (int a = 0; a < 4; ++a) CHECK(c.color_of(std::vector<int>{a}) == (a % 2 ? 1u : 0u));

  WebFragment sparse;
  sparse.lambda_fin = 4;
  sparse.tau = {{{0, 1}, 2}};
  CHECK(kind_of([&] { web_ambiguity(sparse, two_atoms()); }) == ErrorKind::MissingIndex);
}

TEST_CASE("impossibility sweep at lambda 3, cap 16") {
  SweepReport fwd = impossibility_sweep(3, 16, 1, SweepOrder::Forward);
  SweepReport rev = impossibility_sweep(3, 16, 1, SweepOrder::Reverse);
  CHECK(fwd.pass_both == 0);
  CHECK(fwd.pass_naturality == 255);
  CHECK(rev.pass_both == fwd.pass_both);
  CHECK(rev.pass_naturality == fwd.pass_naturality);
  REQUIRE(rev.natural.size() == fwd.natural.size());
  for (std::size_t i = 0; i < fwd.natural.size(); ++i) CHECK(fwd.natural[i].tau == rev.natural[i].tau);
  bool has_example = false;
  for (const auto& w : fwd.natural) has_example = has_example || w.tau == example_fragment().tau;
  CHECK(has_example);
}

TEST_CASE("impossibility sweep agrees with full enumeration at small caps") {
  for (int cap : {1, 2, 4}) {
    SweepReport rep = impossibility_sweep(3, cap, 1);
    auto sigma = sigma_card(cap);
    std::vector<IndexSet> sets{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    std::uint64_t natural = 0, both = 0;
    std::vector<int> v(7, 0);
    while (true) {
      WebFragment w;
      w.lambda_fin = 3;
      for (std::size_t i = 0; i < 7; ++i) w.tau[sets[i]] = static_cast<std::uint64_t>(v[i]);
      if (check_naturality(w).pass()) {
        ++natural;
        if (check_elementarity(w, 1, sigma).pass()) ++both;
      }
      std::size_t i = 0;
      while (i < 7 && v[i] == cap) v[i++] = 0;
      if (i == 7) break;
      ++v[i];
    }
    CHECK(rep.pass_naturality == natural);
    CHECK(rep.pass_both == both);
  }
  CHECK(impossibility_sweep(3, 1, 1).pass_naturality == 0);
  std::vector<Sentence> valid{Sentence(parse("forall x^0. x=x"), Mode::TST)};
  SweepReport v = impossibility_sweep(3, 16, 1, SweepOrder::Forward, valid);
  CHECK(v.pass_both == v.pass_naturality);
}
