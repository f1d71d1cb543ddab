#include <doctest.h>

#include <random>

#include "nfw/ambiguity.hpp"

using namespace nfw;

namespace {
// Brute force: does some k-subset have all its n-subsets of one color?
bool brute_homogeneous_exists(const Coloring& c, int k) {
  bool found = false;
  for_each_subset(c.lambda_fin(), k, [&](std::span<const int> h) {
    if (found) return;
    std::set<Coloring::Color> seen;
    std::vector<int> sub(static_cast<std::size_t>(c.n()));
    for_each_subset(k, c.n(), [&](std::span<const int> idx) {
      for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = h[static_cast<std::size_t>(idx[i])];
      seen.insert(c.color_of(sub));
    });
    found = seen.size() <= 1;
  });
  return found;
}

std::vector<Sentence> sentences(std::initializer_list<const char*> texts) {
  std::vector<Sentence> out;
  for (const char* t : texts) out.emplace_back(parse(t), Mode::TSTU);
  return out;
}

const char* kTwoAtoms = "exists x^0 exists y^0. ~(x=y)";
}  // namespace

TEST_CASE("Coloring rank and unrank are inverse") {
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; n <= m; ++n) {
      Coloring c(m, n, 1);
      std::size_t count = 0;
      std::set<std::size_t> ranks;
      for_each_subset(m, n, [&](std::span<const int> a) {
        std::size_t r = c.rank(a);
        ranks.insert(r);
        CHECK(c.unrank(r) == std::vector<int>(a.begin(), a.end()));
        ++count;
      });
      CHECK(count == c.subset_count());
      CHECK(ranks.size() == count);
    }
}

TEST_CASE("find_homogeneous: pigeonhole on [5]^1") {
  for (unsigned mask = 0; mask < 32; ++mask) {
    Coloring c = Coloring::tabulate(5, 1, 1, [&](std::span<const int> a) {
      return Coloring::Color{(mask >> a[0]) & 1u};
    });
    auto h = find_homogeneous(c, 3);
    REQUIRE(h);
    CHECK(is_homogeneous(c, *h));
  }
}

TEST_CASE("find_homogeneous: every 2-coloring of [6]^2 has a monochromatic triangle") {
  int failures = 0;
  for (unsigned mask = 0; mask < (1u << 15); ++mask) {
    Coloring c(6, 2, 1);
    for (std::size_t r = 0; r < 15; ++r) c.set_at(r, (mask >> r) & 1u);
    auto h = find_homogeneous(c, 3);
    if (!h || h->size() != 3 || !is_homogeneous(c, *h)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("find_homogeneous: the pentagon coloring has no monochromatic triangle") {
  Coloring c = pentagon_coloring();
  CHECK(!brute_homogeneous_exists(c, 3));
  CHECK(!find_homogeneous(c, 3));
  CHECK(find_homogeneous(c, 2));
}

TEST_CASE("find_homogeneous agrees with brute force on random 3-colorings") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 5 + trial % 4;
    int n = 1 + trial % 3;
    Coloring c(m, n, 2);
    for (std::size_t r = 0; r < c.subset_count(); ++r) c.set_at(r, static_cast<Coloring::Color>(rng() % 3));
    for (int k = n; k <= m; ++k) {
      auto h = find_homogeneous(c, k);
      CHECK(h.has_value() == brute_homogeneous_exists(c, k));
      if (h) CHECK(is_homogeneous(c, *h));
    }
  }
}

TEST_CASE("find_homogeneous: small k is vacuous, large k is not found") {
  Coloring c = pentagon_coloring();
  CHECK(find_homogeneous(c, 1) == std::vector<int>{0});
  CHECK(!find_homogeneous(c, 6));
}

TEST_CASE("color_by_theory") {
  TstuFamily fam = build_tstu_family({1, 2, 4, 16, 65536});
  auto sigma = sentences({kTwoAtoms});
  Coloring c = color_by_theory(fam, sigma, 1);
  CHECK(c.color_of(std::vector<int>{0}) == 0);
  for (int a = 1; a < 5; ++a) CHECK(c.color_of(std::vector<int>{a}) == 1);

  auto taut = sentences({"forall x^0. x=x"});
  for (int n = 1; n <= 3; ++n) CHECK(color_by_theory(fam, taut, n).classes().size() == 1);

  auto two = sentences({kTwoAtoms, "exists x^1 exists y^1 exists z^1. ~(x=y) & ~(x=z) & ~(y=z)"});
  Coloring c2 = color_by_theory(fam, two, 2);
  CHECK(c2.classes().size() <= 4);
  CHECK(c2.width() == 2);
}

TEST_CASE("jensen_witness") {
  TstuFamily fam = build_tstu_family({1, 2, 4, 16, 65536});
  auto sigma = sentences({kTwoAtoms});
  auto r = jensen_witness(fam, sigma);
  REQUIRE(std::holds_alternative<AmbiguityWitness>(r));
  const auto& w = std::get<AmbiguityWitness>(r);
  CHECK(w.H == std::vector<int>{1, 2});
  REQUIRE(w.verdicts.size() == 1);
  CHECK(w.verdicts[0].value);
  CHECK(w.verdicts[0].value_raised);

  auto taut = sentences({"forall x^0. x=x", "forall x^1 forall y^0. y in x -> y in x"});
  auto rt = jensen_witness(fam, taut);
  REQUIRE(std::holds_alternative<AmbiguityWitness>(rt));
  CHECK(std::get<AmbiguityWitness>(rt).H == std::vector<int>{0, 1, 2});

  // Truth flips between the only two indices: no homogeneous pair.
  TstuFamily flip = build_tstu_family({1, 2});
  auto rf = jensen_witness(flip, sigma);
  REQUIRE(std::holds_alternative<NoHomogeneousSet>(rf));
  CHECK(std::get<NoHomogeneousSet>(rf).k == 2);
}

TEST_CASE("ttt_transfer_demo agrees with jensen_witness") {
  TstuFamily fam = build_tstu_family({1, 2, 4, 16, 65536});
  auto sigma = sentences({kTwoAtoms, "exists x^1. forall y^0. y in x",
                          "forall x^1. exists y^1. ~(x = y) & forall z^0. z in x <-> z in y"});
  auto a = jensen_witness(fam, sigma);
  auto b = ttt_transfer_demo(fam, sigma);
  REQUIRE(std::holds_alternative<AmbiguityWitness>(a));
  REQUIRE(std::holds_alternative<AmbiguityWitness>(b));
  const auto& wa = std::get<AmbiguityWitness>(a);
  const auto& wb = std::get<AmbiguityWitness>(b);
  CHECK(wa.H == wb.H);
  for (std::size_t r = 0; r < wa.coloring.subset_count(); ++r)
    CHECK(wa.coloring.color_at(r) == wb.coloring.color_at(r));
  for (std::size_t i = 0; i < wa.verdicts.size(); ++i) {
    CHECK(wa.verdicts[i].value == wb.verdicts[i].value);
    CHECK(wb.verdicts[i].value == wb.verdicts[i].value_raised);
  }
}
