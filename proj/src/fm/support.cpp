#include "nfw/fm/support.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "nfw/error.hpp"

namespace nfw::fm {

namespace {

int rank_in_strong_order(const FMUniverse& u, const SupportElement& e) {
  if (e.is_atom()) {
    const int g = u.group_of(e.atom);
    return g == kIrregular ? 0 : 2 + 2 * g;
  }
  const int clan = u.atom(e.set.members().front()).clan;
  return 1 + 2 * clan;
}

AtomSet atoms_of(const Support& s) {
  AtomSet out;
  for (const auto& e : s)
    if (e.is_atom()) out.set(e.atom);
  return out;
}

std::vector<int> sorted_groups(const FMUniverse& u) {
  std::vector<int> out{kIrregular, 0};
  if (u.stages() == 2) out.push_back(1);
  return out;
}

bool fixes_all(const Perm& rho, const Support& s) {
  return std::all_of(s.begin(), s.end(), [&](const SupportElement& e) { return fixes(rho, e); });
}

// Searches for rho fixing S with rho(Y) outside the family for some member Y.
SupportCheck search_family(const FMUniverse& u, const Support& s,
                           const std::vector<AtomSet>& family,
                           const std::function<bool(const AtomSet&)>& in_family,
                           std::uint64_t budget) {
  SupportCheck r{SupportVerdict::Holds, std::nullopt, "search"};
  const PermConstraints base = fixing_constraints(u, s);
  for (const auto& y : family) {
    PermConstraints c = base;
    c.first = y.members();
    const auto ys = c.first;
    auto prune = [&](const std::vector<int>& img) {
      AtomSet image;
      for (int a : ys) {
        const int b = img[static_cast<std::size_t>(a)];
        if (b < 0) return true;
        image.set(b);
      }
      return !in_family(image);
    };
    auto res = find_allowable(u, c, budget, prune);
    if (res.perm) {
      r.verdict = SupportVerdict::Fails;
      r.witness = res.perm;
      return r;
    }
    if (!res.complete) r.verdict = SupportVerdict::HoldsWithinBudget;
  }
  return r;
}

}  // namespace

std::string describe(const FMUniverse& u, const SupportElement& e) {
  return e.is_atom() ? u.name(e.atom) : "NL" + describe(u, e.set);
}

std::string describe(const FMUniverse& u, const Support& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + describe(u, s[i]);
  return out + ")";
}

void validate_support(const FMUniverse& u, const Support& s) {
  if (!u.is_small(static_cast<int>(s.size())))
    throw Error(ErrorKind::InvalidInput, "support is not small: " + describe(u, s));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = s[i];
    if (e.is_atom()) {
      if (e.atom < 0 || e.atom >= u.atom_count())
        throw Error(ErrorKind::InvalidInput, "atom id out of range");
    } else if (!u.is_near_litter(e.set)) {
      throw Error(ErrorKind::InvalidInput, describe(u, e.set) + " is not a near-litter");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (s[j] == e) throw Error(ErrorKind::InvalidInput, "repeated support element");
      if (!e.is_atom() && !s[j].is_atom() && e.set.intersects(s[j].set))
        throw Error(ErrorKind::InvalidInput, "near-litters of a support must be disjoint");
    }
  }
}

std::optional<std::string> strong_violation(const FMUniverse& u, const Support& s) {
  auto position = [&](const std::function<bool(const SupportElement&)>& pred) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (pred(s[i])) return i;
    return std::nullopt;
  };
  for (std::size_t g = 0; g < s.size(); ++g) {
    const auto& e = s[g];
    if (e.is_atom()) {
      if (u.group_of(e.atom) == kIrregular) continue;
      auto d = position([&](const SupportElement& f) { return !f.is_atom() && f.set.test(e.atom); });
      if (d && *d > g)
        return u.name(e.atom) + " precedes the near-litter containing it";
    } else {
      const int parent = u.litter(*u.core(e.set)).parent;
      auto d = position([&](const SupportElement& f) { return f.is_atom() && f.atom == parent; });
      if (d && *d > g) return "near-litter " + describe(u, e.set) + " precedes its parent " + u.name(parent);
    }
  }
  return std::nullopt;
}

void require_strong(const FMUniverse& u, const Support& s) {
  validate_support(u, s);
  if (auto why = strong_violation(u, s)) throw Error(ErrorKind::NotStrong, *why);
}

Support strong_order(const FMUniverse& u, Support s) {
  std::stable_sort(s.begin(), s.end(), [&](const SupportElement& a, const SupportElement& b) {
    return rank_in_strong_order(u, a) < rank_in_strong_order(u, b);
  });
  return s;
}

PermConstraints fixing_constraints(const FMUniverse& u, const Support& s) {
  PermConstraints c;
  c.forced.assign(static_cast<std::size_t>(u.atom_count()), -1);
  for (const auto& e : s) {
    if (e.is_atom())
      c.forced[static_cast<std::size_t>(e.atom)] = e.atom;
    else
      c.set_maps.emplace_back(e.set, e.set);
  }
  return c;
}

bool fixes(const Perm& rho, const SupportElement& e) {
  return e.is_atom() ? rho[static_cast<std::size_t>(e.atom)] == e.atom : apply(rho, e.set) == e.set;
}

bool contains(const FMUniverse& u, const LocalCardinalUnion& f, const AtomSet& n) {
  auto c = u.core(n);
  return c && f.parents.test(u.litter(*c).parent);
}

std::vector<AtomSet> members(const FMUniverse& u, const LocalCardinalUnion& f) {
  std::vector<AtomSet> out;
  for (int clan : {0, 1}) {
    if (clan == 1 && u.stages() < 2) break;
    bool any = false;
    for (int l : u.litters_of(clan)) any = any || f.parents.test(u.litter(l).parent);
    if (!any) continue;
    for (const auto& n : u.near_litters(clan))
      if (contains(u, f, n)) out.push_back(n);
  }
  return out;
}

const char* to_string(SupportVerdict v) {
  switch (v) {
    case SupportVerdict::Holds: return "holds";
    case SupportVerdict::HoldsWithinBudget: return "holds_within_budget";
    case SupportVerdict::Fails: return "fails";
  }
  return "?";
}

namespace {

std::function<bool(const Perm&)> mover(const FMUniverse& u, const Target& x) {
  if (const auto* f = std::get_if<LocalCardinalUnion>(&x)) {
    auto mem = members(u, *f);
    return [&u, f = *f, mem = std::move(mem)](const Perm& rho) {
      for (const auto& n : mem)
        if (!contains(u, f, apply(rho, n))) return true;
      return false;
    };
  }
  return [&u, &x](const Perm& rho) { return moves(u, rho, x); };
}

}  // namespace

bool moves(const FMUniverse& u, const Perm& rho, const Target& x) {
  return std::visit(
      [&](const auto& t) -> bool {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, int>) {
          return rho[static_cast<std::size_t>(t)] != t;
        } else if constexpr (std::is_same_v<T, AtomSet>) {
          return apply(rho, t) != t;
        } else if constexpr (std::is_same_v<T, std::vector<AtomSet>>) {
          std::vector<AtomSet> img;
          for (const auto& y : t) img.push_back(apply(rho, y));
          std::sort(img.begin(), img.end());
          std::vector<AtomSet> orig = t;
          std::sort(orig.begin(), orig.end());
          return img != orig;
        } else {
          for (const auto& n : members(u, t))
            if (!contains(u, t, apply(rho, n))) return true;
          return false;
        }
      },
      x);
}

SupportCheck is_support(const FMUniverse& u, const Support& s, const Target& x,
                        std::uint64_t budget) {
  validate_support(u, s);
  // Swap-type extensions: exchange two atoms, fix the atoms of S and every
  // other irregular atom.
  const AtomSet fixed_atoms = atoms_of(s);
  const auto moved = mover(u, x);
  for (int g : sorted_groups(u)) {
    const auto atoms = u.group_members(g);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        const int a = atoms[i], b = atoms[j];
        if (fixed_atoms.test(a) || fixed_atoms.test(b)) continue;
        PartialMap rho0{{a, b}, {b, a}};
        for (int f : fixed_atoms.members()) rho0[f] = f;
        if (g != kIrregular)
          for (int p : u.group_members(kIrregular)) rho0.emplace(p, p);
        Perm rho;
        try {
          rho = substitution_extension(u, rho0);
        } catch (const Error&) {
          continue;
        }
        if (fixes_all(rho, s) && moved(rho)) return {SupportVerdict::Fails, rho, "swap"};
      }
  }

  return std::visit(
      [&](const auto& t) -> SupportCheck {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, int>) {
          PermConstraints c = fixing_constraints(u, s);
          c.first = {t};
          auto res = find_allowable(u, c, budget, [&](const std::vector<int>& img) {
            return img[static_cast<std::size_t>(t)] != t;
          });
          if (res.perm) return {SupportVerdict::Fails, res.perm, "search"};
          return {res.complete ? SupportVerdict::Holds : SupportVerdict::HoldsWithinBudget,
                  std::nullopt, "search"};
        } else if constexpr (std::is_same_v<T, AtomSet>) {
          std::vector<Perm> found;
          std::vector<int> label;
          try {
            label = constrained_components(u, fixing_constraints(u, s), budget, &found);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::SearchBudgetExceeded) throw;
            return {SupportVerdict::HoldsWithinBudget, std::nullopt, "search"};
          }
          for (int a : t.members())
            for (int b = 0; b < u.atom_count(); ++b)
              if (label[static_cast<std::size_t>(b)] == label[static_cast<std::size_t>(a)] && !t.test(b)) {
                for (const auto& rho : found)
                  if (apply(rho, t) != t) return {SupportVerdict::Fails, rho, "search"};
                throw Error(ErrorKind::InvalidInput, "component bookkeeping lost its witness");
              }
          return {SupportVerdict::Holds, std::nullopt, "search"};
        } else if constexpr (std::is_same_v<T, std::vector<AtomSet>>) {
          std::vector<AtomSet> fam = t;
          std::sort(fam.begin(), fam.end());
          fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
          return search_family(u, s, fam,
                               [&](const AtomSet& y) { return std::binary_search(fam.begin(), fam.end(), y); },
                               budget);
        } else {
          return search_family(u, s, members(u, t),
                               [&](const AtomSet& y) { return contains(u, t, y); }, budget);
        }
      },
      x);
}

std::vector<Support> candidate_supports(const FMUniverse& u) {
  std::vector<SupportElement> pool;
  for (int p : u.group_members(kIrregular)) pool.push_back(SupportElement::of_atom(p));
  for (int a : u.group_members(0)) pool.push_back(SupportElement::of_atom(a));
  for (const auto& n : u.near_litters(0)) pool.push_back(SupportElement::of_near_litter(n));

  std::vector<Support> out;
  Support cur;
  std::function<void(std::size_t, int)> go = [&](std::size_t start, int left) {
    if (left == 0) {
      out.push_back(strong_order(u, cur));
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      const auto& e = pool[i];
      bool ok = true;
      if (!e.is_atom())
        for (const auto& f : cur) ok = ok && (f.is_atom() || !f.set.intersects(e.set));
      if (!ok) continue;
      cur.push_back(e);
      go(i + 1, left - 1);
      cur.pop_back();
    }
  };
  for (int size = 0; size < u.params().s_max; ++size) go(0, size);
  return out;
}

AtomSet CensusReport::set_of(std::size_t mask) const {
  AtomSet x;
  for (std::size_t i = 0; i < clan_atoms.size(); ++i)
    if (mask >> i & 1) x.set(clan_atoms[i]);
  return x;
}

CensusReport symmetric_census(const FMUniverse& u, int clan, std::uint64_t budget) {
  if (u.stages() != 1 || clan != 0)
    throw Error(ErrorKind::InvalidInput, "the census runs on clan 0 of a stage-1 universe");
  CensusReport r;
  r.clan = clan;
  r.clan_atoms = u.group_members(clan);
  const std::size_t n = r.clan_atoms.size();
  if (n > 14) throw Error(ErrorKind::InvalidInput, "the census needs at most 14 atoms in the clan");
  std::vector<int> index(static_cast<std::size_t>(u.atom_count()), -1);
  for (std::size_t i = 0; i < n; ++i) index[static_cast<std::size_t>(r.clan_atoms[i])] = static_cast<int>(i);
  auto mask_of = [&](const AtomSet& x) {
    std::size_t m = 0;
    for (int a : x.members()) m |= std::size_t{1} << index[static_cast<std::size_t>(a)];
    return m;
  };

  r.entries.resize(std::size_t{1} << n);
  for (std::size_t m = 0; m < r.entries.size(); ++m) r.entries[m].x = r.set_of(m);

  for (auto& s : candidate_supports(u)) {
    const auto label = constrained_components(u, fixing_constraints(u, s), budget);
    std::map<int, AtomSet> comps;
    for (int a : r.clan_atoms) comps[label[static_cast<std::size_t>(a)]].set(a);
    SupportRecord rec{std::move(s), {}};
    for (auto& [root, set] : comps) rec.components.push_back(set);
    const std::size_t c = rec.components.size();
    for (std::size_t sel = 0; sel < (std::size_t{1} << c); ++sel) {
      AtomSet x;
      for (std::size_t i = 0; i < c; ++i)
        if (sel >> i & 1) x |= rec.components[i];
      auto& e = r.entries[mask_of(x)];
      if (!e.symmetric) {
        e.symmetric = true;
        e.support = rec.support;
      }
    }
    r.records.push_back(std::move(rec));
  }

  const auto litters = u.litters_of(clan);
  std::vector<AtomSet> unions;
  for (std::size_t sel = 0; sel < (std::size_t{1} << litters.size()); ++sel) {
    AtomSet un;
    for (std::size_t i = 0; i < litters.size(); ++i)
      if (sel >> i & 1) un |= u.litter(litters[i]).atoms;
    unions.push_back(un);
  }
  for (std::size_t m = 0; m < r.entries.size(); ++m) {
    auto& e = r.entries[m];
    e.union_distance = static_cast<int>(n) + 1;
    for (const auto& un : unions) e.union_distance = std::min(e.union_distance, (e.x ^ un).count());
    e.near_union = u.is_small(e.union_distance);
    r.symmetric_count += e.symmetric;
    r.near_union_count += e.near_union;
    if (e.symmetric && !e.near_union) r.symmetric_not_near.push_back(m);
    if (!e.symmetric && e.near_union) r.near_not_symmetric.push_back(m);
  }
  return r;
}

std::optional<Decomposition> decompose(const FMUniverse& u, const Support& s, const AtomSet& x,
                                       int clan) {
  const AtomSet& whole = u.group(clan);
  AtomSet atoms;
  std::vector<AtomSet> nls;
  for (const auto& e : s) {
    if (e.is_atom()) {
      if (whole.test(e.atom)) atoms.set(e.atom);
    } else if (e.set.subset_of(whole)) {
      nls.push_back(e.set);
    }
  }
  for (std::size_t sel = 0; sel < (std::size_t{1} << nls.size()); ++sel) {
    AtomSet un;
    std::vector<AtomSet> chosen;
    for (std::size_t i = 0; i < nls.size(); ++i)
      if (sel >> i & 1) {
        un |= nls[i];
        chosen.push_back(nls[i]);
      }
    for (bool complement : {false, true}) {
      const AtomSet base = complement ? whole - un : un;
      const AtomSet a = x ^ base;
      if (a.subset_of(atoms)) return Decomposition{a, chosen, complement};
    }
  }
  return std::nullopt;
}

LemmaReport clan_subset_support_lemma_check(const FMUniverse& u, const CensusReport& census) {
  LemmaReport r;
  for (const auto& rec : census.records) {
    const std::size_t c = rec.components.size();
    for (std::size_t sel = 0; sel < (std::size_t{1} << c); ++sel) {
      AtomSet x;
      for (std::size_t i = 0; i < c; ++i)
        if (sel >> i & 1) x |= rec.components[i];
      ++r.pairs_checked;
      if (!decompose(u, rec.support, x, census.clan)) r.failures.push_back({rec.support, x});
    }
  }
  return r;
}

ExtensionReport extension_family_check(const FMUniverse& u) {
  ExtensionReport r;
  const auto irregular = u.group_members(kIrregular);
  const auto clan0 = u.group_members(0);
  auto balanced = [&](const PartialMap& rho0) {
    AtomSet dom;
    for (const auto& [x, y] : rho0) dom.set(x);
    for (int l = 0; l < u.litter_count(); ++l) {
      if (!u.is_small((dom & u.litter(l).atoms).count())) return false;
      const int p = u.litter(l).parent;
      const auto it = rho0.find(p);
      const int m = *u.litter_with_parent(it == rho0.end() ? p : it->second);
      if ((dom & u.litter(l).atoms).count() != (dom & u.litter(m).atoms).count()) return false;
    }
    return true;
  };
  auto run = [&](const PartialMap& rho0) {
    if (!balanced(rho0)) return;
    ++r.inputs;
    ExtensionCase ec{rho0, false, {}, std::nullopt};
    try {
      Perm rho = substitution_extension(u, rho0);
      ec.extension = rho;
      auto check = is_allowable(u, rho);
      AtomSet dom;
      for (const auto& [x, y] : rho0) dom.set(x);
      bool agrees = true;
      for (const auto& [x, y] : rho0) agrees = agrees && rho[static_cast<std::size_t>(x)] == y;
      if (!check.allowable)
        ec.error = "not allowable: " + check.reason;
      else if (!check.exceptions.subset_of(dom))
        ec.error = "exception outside the domain";
      else if (!agrees)
        ec.error = "extension disagrees with rho0";
      else
        ec.ok = true;
    } catch (const Error& e) {
      ec.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    if (ec.ok)
      ++r.passed;
    else
      r.failures.push_back(std::move(ec));
  };
  for (int g : sorted_groups(u)) {
    const auto atoms = u.group_members(g);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        const int a = atoms[i], b = atoms[j];
        PartialMap swap{{a, b}, {b, a}};
        run(swap);
        PartialMap with_parents = swap;
        for (int p : irregular) with_parents.emplace(p, p);
        if (with_parents != swap) run(with_parents);
        for (int c : clan0) {
          if (c == a || c == b) continue;
          PartialMap more = with_parents;
          more.emplace(c, c);
          run(more);
        }
      }
  }
  return r;
}

namespace {

// Replaces every atom that parents a litter by that litter.
std::optional<Support> induced_support(const FMUniverse& u, const Support& s) {
  Support out;
  for (const auto& e : s) {
    if (e.is_atom()) {
      auto l = u.litter_with_parent(e.atom);
      out.push_back(l ? SupportElement::of_near_litter(u.litter(*l).atoms) : e);
    } else {
      out.push_back(e);
    }
  }
  out = strong_order(u, out);
  try {
    require_strong(u, out);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

// Supports made of whole litters of the relevant clan and irregular atoms.
std::vector<Support> litter_supports(const FMUniverse& u, int clan) {
  std::vector<SupportElement> pool;
  for (int p : u.group_members(kIrregular)) pool.push_back(SupportElement::of_atom(p));
  for (int l : u.litters_of(clan)) pool.push_back(SupportElement::of_near_litter(u.litter(l).atoms));
  std::vector<Support> out;
  Support cur;
  std::function<void(std::size_t, int)> go = [&](std::size_t start, int left) {
    if (left == 0) {
      out.push_back(strong_order(u, cur));
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      go(i + 1, left - 1);
      cur.pop_back();
    }
  };
  for (int size = 0; size < u.params().s_max; ++size) go(0, size);
  return out;
}

}  // namespace

InjectionReport parent_injection_check(const FMUniverse& u, std::size_t limit,
                                       std::uint64_t budget) {
  InjectionReport r;
  std::vector<std::pair<AtomSet, std::optional<Support>>> inputs;
  int image_clan = 0;
  if (u.stages() == 1) {
    const auto ps = u.group_members(kIrregular);
    for (std::size_t sel = 0; sel < (std::size_t{1} << ps.size()); ++sel) {
      AtomSet x;
      for (std::size_t i = 0; i < ps.size(); ++i)
        if (sel >> i & 1) x.set(ps[i]);
      std::optional<Support> found;
      for (const auto& s : candidate_supports(u))
        if (is_support(u, s, x, budget).verdict == SupportVerdict::Holds) {
          found = s;
          break;
        }
      inputs.emplace_back(x, found);
    }
  } else {
    image_clan = 1;
    FMUniverse base = build_universe(u.params(), 1);
    CensusReport census = symmetric_census(base, 0, budget);
    for (const auto& e : census.entries) {
      if (inputs.size() >= limit) break;
      if (e.symmetric) inputs.emplace_back(e.x, e.support);
    }
  }

  const auto fallbacks = litter_supports(u, image_clan);
  for (const auto& [x, xs] : inputs) {
    InjectionEntry entry;
    entry.x = x;
    entry.x_support = xs;
    entry.image = LocalCardinalUnion{x};
    entry.image_size = members(u, entry.image).size();
    if (xs) {
      ++r.symmetric_inputs;
      if (auto ind = induced_support(u, *xs)) {
        auto check = is_support(u, *ind, entry.image, budget);
        if (check.verdict != SupportVerdict::Fails) {
          entry.image_verdict = check.verdict;
          entry.image_support = ind;
          entry.induced_support = true;
        }
      }
    }
    if (!entry.image_support)
      for (const auto& s : fallbacks) {
        auto check = is_support(u, s, entry.image, budget);
        if (check.verdict != SupportVerdict::Fails) {
          entry.image_verdict = check.verdict;
          entry.image_support = s;
          break;
        }
      }
    if (entry.image_support) ++r.symmetric_images;
    r.entries.push_back(std::move(entry));
  }

  // Images differ exactly when some litter's local cardinal is in one only;
  // the litter itself then witnesses the difference.
  std::set<AtomSet> classes;
  AtomSet relevant;
  for (int l : u.litters_of(image_clan)) relevant.set(u.litter(l).parent);
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    classes.insert(r.entries[i].image.parents & relevant);
    for (std::size_t j = i + 1; j < r.entries.size(); ++j) {
      bool differ = false;
      for (int l : u.litters_of(image_clan)) {
        const AtomSet& lit = u.litter(l).atoms;
        differ = differ || contains(u, r.entries[i].image, lit) != contains(u, r.entries[j].image, lit);
      }
      if (!differ) r.injective = false;
    }
  }
  r.distinct_images = static_cast<int>(classes.size());
  return r;
}

}  // namespace nfw::fm
