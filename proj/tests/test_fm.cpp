#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "nfw/error.hpp"
#include "nfw/fm/orbit.hpp"
#include "support/fm_oracle.hpp"

using namespace nfw;
using namespace nfw::fm;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidInput;
}

const FMUniverse& base() {
  static const FMUniverse u = build_universe({}, 1);
  return u;
}

int at(const FMUniverse& u, const char* name) { return u.find_atom(name).value(); }

AtomSet set_of(const FMUniverse& u, std::initializer_list<const char*> names) {
  AtomSet s;
  for (auto* n : names) s.set(at(u, n));
  return s;
}

AtomSet litter_set(const FMUniverse& u, int l) { return u.litter(l).atoms; }

Perm swaps(const FMUniverse& u, std::initializer_list<std::pair<const char*, const char*>> ps) {
  Perm p = u.identity();
  for (auto [a, b] : ps) std::swap(p[static_cast<std::size_t>(at(u, a))], p[static_cast<std::size_t>(at(u, b))]);
  return p;
}

SupportElement atom_el(const FMUniverse& u, const char* n) { return SupportElement::of_atom(at(u, n)); }
SupportElement nl(const AtomSet& s) { return SupportElement::of_near_litter(s); }

}  // namespace

TEST_CASE("universe layout and near-litter enumeration") {
  const auto& u = base();
  CHECK(u.atom_count() == 15);
  CHECK(u.litter_count() == 3);
  CHECK(u.name(0) == "c0:L1:a1");
  CHECK(u.name(12) == "p0:1");
  CHECK(u.group_of(12) == kIrregular);
  CHECK(u.litter(1).parent == at(u, "p0:2"));
  CHECK(u.max_outflow() == 1);

  const auto two = build_universe({}, 2);
  CHECK(two.atom_count() == 15 + 48);
  CHECK(two.litter_count() == 15);
  const int child = two.litter_with_parent(at(two, "c0:L1:a1")).value();
  CHECK(two.litter(child).clan == 1);

  // Independent count: subsets of clan 0 within small distance of a litter.
  const auto clan = u.group_members(0);
  int near = 0;
  for (std::uint32_t m = 0; m < (1u << clan.size()); ++m) {
    AtomSet s;
    for (std::size_t i = 0; i < clan.size(); ++i)
      if (m >> i & 1) s.set(clan[i]);
    int hits = 0;
    for (int l : u.litters_of(0))
      if ((s ^ litter_set(u, l)).count() < u.params().s_max) ++hits;
    CHECK(hits <= 1);
    near += hits;
    CHECK(u.is_near_litter(s) == (hits == 1));
  }
  CHECK(near == 237);
  CHECK(u.near_litters(0).size() == 237u);

  CHECK(kind_of([] { build_universe({4, 5, 3}, 1); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { build_universe({4, 3, 1}, 1); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { build_universe({}, 3); }) == ErrorKind::InvalidParams);
}

TEST_CASE("allowability of small permutations") {
  const auto& u = base();
  CHECK(is_allowable(u, u.identity()).allowable);

  auto r = is_allowable(u, swaps(u, {{"c0:L1:a1", "c0:L2:a1"}}));
  CHECK(r.allowable);
  CHECK(r.exceptions == set_of(u, {"c0:L1:a1", "c0:L2:a1"}));

  auto two_out = is_allowable(u, swaps(u, {{"c0:L1:a1", "c0:L2:a1"}, {"c0:L1:a2", "c0:L2:a2"}}));
  CHECK_FALSE(two_out.allowable);
  CHECK(two_out.bad_litter.has_value());

  // Permuting irregular atoms carries the litters along.
  Perm lit = swaps(u, {{"p0:1", "p0:2"}});
  for (int a = 0; a < 4; ++a) std::swap(lit[static_cast<std::size_t>(a)], lit[static_cast<std::size_t>(a + 4)]);
  CHECK(is_allowable(u, lit).allowable);
  CHECK(is_allowable(u, lit).exceptions.empty());
  CHECK_FALSE(is_allowable(u, swaps(u, {{"p0:1", "p0:2"}})).allowable);

  Perm broken = u.identity();
  broken[0] = 1;
  CHECK(kind_of([&] { is_allowable(u, broken); }) == ErrorKind::NotABijection);
}

TEST_CASE("allowable permutations are closed under inverse but not composition") {
  const auto& u = base();
  const Perm f = swaps(u, {{"c0:L1:a2", "c0:L2:a1"}});
  const Perm g = swaps(u, {{"c0:L1:a3", "c0:L3:a1"}});
  REQUIRE(is_allowable(u, f).allowable);
  REQUIRE(is_allowable(u, g).allowable);
  CHECK_FALSE(is_allowable(u, compose(f, g)).allowable);

  for (const auto& p : enumerated_family(u)) CHECK(is_allowable(u, inverse(p)).allowable);
}

TEST_CASE("search agrees with brute-force enumeration on two litters") {
  const auto u = build_universe({4, 3, 2}, 1);
  const testing::TinyUniverse t{4, 3, 2};
  REQUIRE(u.atom_count() == t.total());
  const auto group = testing::oracle_allowable_group(t);

  std::set<Perm> found;
  auto out = find_allowable(u, {}, kDefaultSearchBudget, {}, [&](const Perm& p) {
    found.insert(p);
    return false;
  });
  CHECK(out.complete);
  CHECK_FALSE(out.perm.has_value());
  CHECK(found == std::set<Perm>(group.begin(), group.end()));
  for (const auto& p : group) CHECK(is_allowable(u, p).allowable);

  // The census against components computed from the full group.
  const auto census = symmetric_census(u);
  const auto& clan = census.clan_atoms;
  std::vector<bool> symmetric(std::size_t{1} << clan.size(), false);
  for (const auto& s : candidate_supports(u)) {
    std::vector<int> comp(static_cast<std::size_t>(t.total()));
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> root = [&](int x) {
      return comp[static_cast<std::size_t>(x)] == x ? x : root(comp[static_cast<std::size_t>(x)]);
    };
    for (const auto& rho : group) {
      bool fixes_s = true;
      for (const auto& e : s) {
        if (e.is_atom()) {
          fixes_s = fixes_s && rho[static_cast<std::size_t>(e.atom)] == e.atom;
        } else {
          for (int x : e.set.members()) fixes_s = fixes_s && e.set.test(rho[static_cast<std::size_t>(x)]);
        }
      }
      if (!fixes_s) continue;
      for (int x = 0; x < t.total(); ++x) comp[static_cast<std::size_t>(root(x))] = root(rho[static_cast<std::size_t>(x)]);
    }
    for (std::size_t m = 0; m < symmetric.size(); ++m) {
      bool closed = true;
      for (std::size_t i = 0; i < clan.size(); ++i)
        for (std::size_t j = 0; j < clan.size(); ++j)
          if (root(clan[i]) == root(clan[j]) && ((m >> i & 1) != (m >> j & 1))) closed = false;
      if (closed) symmetric[m] = true;
    }
  }
  int mismatches = 0;
  for (std::size_t m = 0; m < symmetric.size(); ++m)
    if (symmetric[m] != census.entries[m].symmetric) ++mismatches;
  CHECK(mismatches == 0);
}

TEST_CASE("substitution extensions are the unique canonical extensions on two litters") {
  const auto u = build_universe({4, 3, 2}, 1);
  const testing::TinyUniverse t{4, 3, 2};
  const auto group = testing::oracle_allowable_group(t);
  const int n = t.total();
  std::vector<std::pair<int, int>> transpositions;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (u.group_of(a) == u.group_of(b)) transpositions.emplace_back(a, b);
  std::vector<PartialMap> inputs;
  for (std::size_t i = 0; i < transpositions.size(); ++i)
    for (std::size_t j = i; j < transpositions.size(); ++j) {
      auto [a, b] = transpositions[i];
      auto [c, d] = transpositions[j];
      PartialMap m{{a, b}, {b, a}};
      if (j != i) {
        if (m.count(c) || m.count(d)) continue;
        m.emplace(c, d);
        m.emplace(d, c);
      }
      bool locally_small = true;
      for (int l = 0; l < t.litters; ++l) {
        int inside = 0;
        for (int x : testing::litter_atoms(t, l)) inside += static_cast<int>(m.count(x));
        locally_small = locally_small && inside < t.s_max;
      }
      if (!locally_small) continue;
      inputs.push_back(m);
      bool clash = false;
      for (int p = t.regular(); p < n; ++p) clash = clash || m.count(p);
      if (clash) continue;
      for (int p = t.regular(); p < n; ++p) m.emplace(p, p);
      inputs.push_back(m);
    }
  int built = 0, refused = 0;
  for (const auto& rho0 : inputs) {
    // Canonical extensions in the brute-force group: agree with rho0,
    // fix irregular atoms outside the domain, and fill every litter in
    // ascending order.
    std::vector<Perm> canonical;
    for (const auto& pi : group) {
      bool ok = true;
      for (auto [x, y] : rho0) ok = ok && pi[static_cast<std::size_t>(x)] == y;
      for (int p = t.regular(); p < n; ++p)
        if (!rho0.count(p)) ok = ok && pi[static_cast<std::size_t>(p)] == p;
      for (int l = 0; ok && l < t.litters; ++l) {
        int last = -1;
        for (int x : testing::litter_atoms(t, l)) {
          if (rho0.count(x)) continue;
          const int y = pi[static_cast<std::size_t>(x)];
          const int target = pi[static_cast<std::size_t>(t.regular() + l)] - t.regular();
          ok = ok && y / t.k == target && y > last;
          last = y;
        }
      }
      if (ok) canonical.push_back(pi);
    }
    std::optional<Perm> ext;
    try {
      ext = substitution_extension(u, rho0);
    } catch (const Error&) {
    }
    if (ext) {
      ++built;
      REQUIRE(canonical.size() == 1u);
      CHECK(canonical[0] == *ext);
    } else {
      ++refused;
      CHECK(canonical.empty());
    }
  }
  CHECK(built > 0);
  CHECK(refused > 0);
}

TEST_CASE("supports are carried along by allowable permutations") {
  const auto& u = base();
  const auto census = symmetric_census(u);
  const auto family = enumerated_family(u);
  std::vector<std::size_t> symmetric;
  for (std::size_t m = 0; m < census.entries.size(); ++m)
    if (census.entries[m].symmetric) symmetric.push_back(m);
  std::mt19937_64 rng(20261016);
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    const auto& e = census.entries[symmetric[rng() % symmetric.size()]];
    const auto& rho = family[rng() % family.size()];
    Support image;
    for (const auto& el : *e.support)
      image.push_back(el.is_atom() ? SupportElement::of_atom(rho[static_cast<std::size_t>(el.atom)])
                                   : nl(fm::apply(rho, el.set)));
    // The image of a near-litter need not be a near-litter here.
    try {
      validate_support(u, image);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    CHECK(is_support(u, image, fm::apply(rho, e.x)).verdict == SupportVerdict::Holds);
  }
  CHECK(checked > 100);
}

TEST_CASE("substitution extension") {
  const auto& u = base();
  SUBCASE("irregular swap moves whole litters") {
    const Perm p = substitution_extension(u, {{at(u, "p0:1"), at(u, "p0:2")}, {at(u, "p0:2"), at(u, "p0:1")}});
    CHECK(is_allowable(u, p).exceptions.empty());
    CHECK(fm::apply(p, litter_set(u, 0)) == litter_set(u, 1));
    CHECK(p[static_cast<std::size_t>(at(u, "c0:L1:a1"))] == at(u, "c0:L2:a1"));
  }
  SUBCASE("second-stage litters follow their parents") {
    const auto two = build_universe({}, 2);
    const int a1 = at(two, "c0:L1:a1"), a2 = at(two, "c0:L1:a2");
    const Perm p = substitution_extension(two, {{a1, a2}, {a2, a1}});
    const int l1 = two.litter_with_parent(a1).value(), l2 = two.litter_with_parent(a2).value();
    CHECK(fm::apply(p, two.litter(l1).atoms) == two.litter(l2).atoms);
    CHECK(is_allowable(two, p).allowable);
  }
  SUBCASE("errors") {
    const int a1 = at(u, "c0:L1:a1"), a2 = at(u, "c0:L1:a2"), a3 = at(u, "c0:L1:a3");
    const int b1 = at(u, "c0:L2:a1"), b2 = at(u, "c0:L2:a2"), b3 = at(u, "c0:L2:a3");
    const int c1 = at(u, "c0:L3:a1");
    const int p1 = at(u, "p0:1"), p2 = at(u, "p0:2");
    CHECK(kind_of([&] { substitution_extension(u, {{a1, b1}}); }) == ErrorKind::NotABijection);
    CHECK(kind_of([&] {
            substitution_extension(u, {{a1, b1}, {a2, b2}, {a3, b3}, {b1, a1}, {b2, a2}, {b3, a3}});
          }) == ErrorKind::NotLocallySmall);
    CHECK(kind_of([&] { substitution_extension(u, {{p1, p2}, {p2, p1}, {a1, a2}, {a2, a1}}); }) ==
          ErrorKind::UnbalancedLitter);
    // Locally small, yet two atoms leave the first litter.
    CHECK(kind_of([&] { substitution_extension(u, {{a2, b1}, {b1, a2}, {a3, c1}, {c1, a3}}); }) ==
          ErrorKind::NotLocallySmall);
  }
  SUBCASE("swap family") {
    const auto rep = extension_family_check(u);
    CHECK(rep.inputs > 0);
    CHECK(rep.failures.empty());
    CHECK(rep.passed == rep.inputs);
  }
}

TEST_CASE("support checks") {
  const auto& u = base();
  const int a1 = at(u, "c0:L1:a1");
  CHECK(is_support(u, {SupportElement::of_atom(a1)}, a1).verdict == SupportVerdict::Holds);

  auto none = is_support(u, {}, a1);
  CHECK(none.verdict == SupportVerdict::Fails);
  REQUIRE(none.witness.has_value());
  CHECK(is_allowable(u, *none.witness).allowable);
  CHECK((*none.witness)[static_cast<std::size_t>(a1)] != a1);

  CHECK(is_support(u, {nl(litter_set(u, 0))}, litter_set(u, 0)).verdict == SupportVerdict::Holds);
  CHECK(is_support(u, {nl(litter_set(u, 0))}, at(u, "p0:1")).verdict == SupportVerdict::Holds);

  const AtomSet x = set_of(u, {"c0:L1:a1", "c0:L1:a2", "c0:L2:a1"});
  CHECK(is_support(u, {}, x).verdict == SupportVerdict::Fails);
  const AtomSet n = set_of(u, {"c0:L1:a1", "c0:L1:a2", "c0:L1:a3", "c0:L2:a1"});
  CHECK(is_support(u, {nl(n), atom_el(u, "c0:L1:a3")}, x).verdict == SupportVerdict::Holds);

  const LocalCardinalUnion p1{set_of(u, {"p0:1"})};
  CHECK(members(u, p1).size() == 79u);
  CHECK(is_support(u, {}, p1).verdict == SupportVerdict::Fails);
  // Fixing the parent is not enough here: a near-litter of L1 may be carried
  // four atoms away from L1. Fixing the litter itself is.
  CHECK(is_support(u, {atom_el(u, "p0:1")}, p1).verdict == SupportVerdict::Fails);
  CHECK(is_support(u, {nl(litter_set(u, 0))}, p1).verdict == SupportVerdict::Holds);

  const std::vector<AtomSet> fam{litter_set(u, 0), litter_set(u, 1)};
  CHECK(is_support(u, {}, fam).verdict == SupportVerdict::Fails);
  CHECK(is_support(u, {atom_el(u, "p0:3")}, fam).verdict == SupportVerdict::Fails);
  CHECK(is_support(u, {nl(litter_set(u, 0)), nl(litter_set(u, 1))}, fam).verdict == SupportVerdict::Holds);

  CHECK(kind_of([&] { require_strong(u, {atom_el(u, "c0:L1:a1"), nl(litter_set(u, 0))}); }) ==
        ErrorKind::NotStrong);
  CHECK(kind_of([&] { validate_support(u, {nl(x)}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("census of clan-0 subsets") {
  const auto& u = base();
  const auto census = symmetric_census(u);
  CHECK(census.entries.size() == 4096u);
  CHECK(census.symmetric_count == 2888);
  CHECK(census.near_union_count == 560);
  CHECK(census.near_not_symmetric.empty());
  CHECK(census.symmetric_not_near.size() == 2328u);
  CHECK_FALSE(census.biconditional_holds());

  auto entry = [&](const AtomSet& x) -> const CensusEntry& {
    for (const auto& e : census.entries)
      if (e.x == x) return e;
    throw std::logic_error("missing");
  };
  CHECK(entry(litter_set(u, 0)).symmetric);
  CHECK(entry(litter_set(u, 0)).union_distance == 0);
  const auto& plus_one = entry(litter_set(u, 0) | set_of(u, {"c0:L2:a1"}));
  CHECK(plus_one.symmetric);
  CHECK(plus_one.near_union);
  // Two atoms from each of two litters: each pair is a near-litter of its own.
  const AtomSet twotwo = set_of(u, {"c0:L1:a1", "c0:L1:a2", "c0:L2:a1", "c0:L2:a2"});
  CHECK(entry(twotwo).symmetric);
  CHECK(entry(twotwo).union_distance == 4);
  CHECK(is_support(u, {nl(set_of(u, {"c0:L1:a1", "c0:L1:a2"})), nl(set_of(u, {"c0:L2:a1", "c0:L2:a2"}))},
                   twotwo)
            .verdict == SupportVerdict::Holds);

  const auto lemma = clan_subset_support_lemma_check(u, census);
  CHECK(lemma.pairs_checked > 0);
  CHECK(lemma.failures.empty());

  const auto d = decompose(u, {nl(litter_set(u, 0))}, litter_set(u, 1) | litter_set(u, 2), 0);
  REQUIRE(d.has_value());
  CHECK(d->complement);
  CHECK(d->atoms.empty());
}

TEST_CASE("parent injection") {
  const auto rep = parent_injection_check(base());
  CHECK(rep.entries.size() == 8u);
  CHECK(rep.symmetric_images == 8);
  CHECK(rep.distinct_images == 8);
  CHECK(rep.injective);
}

TEST_CASE("orbit specifications") {
  const auto& u = base();
  SUBCASE("single atoms share an orbit") {
    const Support s{atom_el(u, "c0:L1:a1")}, t{atom_el(u, "c0:L2:a3")};
    CHECK(orbit_spec(u, s) == orbit_spec(u, t));
    auto r = same_orbit(u, s, t);
    REQUIRE(r.perm.has_value());
    CHECK((*r.perm)[static_cast<std::size_t>(at(u, "c0:L1:a1"))] == at(u, "c0:L2:a3"));
  }
  SUBCASE("membership is part of the orbit description") {
    const Support s{nl(litter_set(u, 0)), atom_el(u, "c0:L1:a1")};
    const Support t{nl(litter_set(u, 1)), atom_el(u, "c0:L3:a1")};
    CHECK(orbit_spec(u, s) != orbit_spec(u, t));
    CHECK_FALSE(same_orbit(u, s, t).perm.has_value());
    CHECK_FALSE(find_mapping(u, s, t).has_value());
  }
  SUBCASE("self map") {
    const Support s{nl(litter_set(u, 0)), atom_el(u, "c0:L1:a2")};
    auto r = same_orbit(u, s, s);
    CHECK(r.specs_equal);
    CHECK(r.perm.has_value());
  }
  SUBCASE("the mapping relation is not transitive") {
    const AtomSet l2 = litter_set(u, 1);
    const Support s{atom_el(u, "p0:1"), nl(l2 | set_of(u, {"c0:L1:a1", "c0:L1:a2"}))};
    const Support m{atom_el(u, "p0:1"), nl(l2 | set_of(u, {"c0:L1:a1", "c0:L3:a1"}))};
    const Support t{atom_el(u, "p0:1"), nl(l2 | set_of(u, {"c0:L3:a1", "c0:L3:a2"}))};
    CHECK(orbit_spec(u, s) == orbit_spec(u, t));
    CHECK(find_mapping(u, s, m).has_value());
    CHECK(find_mapping(u, m, t).has_value());
    CHECK_FALSE(find_mapping(u, s, t).has_value());
  }
  SUBCASE("census over class representatives") {
    const auto c = orbit_census(u);
    CHECK(c.supports == 16408u);
    CHECK(c.unexpected.empty());
    // Each missing pair is an instance of the non-transitivity above.
    CHECK(c.missing.size() == 6u);
  }
}

TEST_CASE("coding functions") {
  const auto& u = base();
  const auto one = coding_census(u, 1);
  CHECK(one.targets == 2888u);
  CHECK(one.violations == 0u);
  CHECK(one.distinct_functions <= one.targets);
  bool saw_empty = false;
  for (const auto& f : one.by_support)
    if (f.support.empty()) {
      saw_empty = true;
      CHECK(f.orbit_size == 1u);
    }
  CHECK(saw_empty);
  const auto two = coding_census(u, 2);
  CHECK(two.violations == 0u);
  CHECK(two.targets > 0u);
}
