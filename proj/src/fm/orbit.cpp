#include "nfw/fm/orbit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "nfw/error.hpp"

namespace nfw::fm {

namespace {

bool maps_onto(const Perm& rho, const Support& s, const Support& t) {
  for (std::size_t g = 0; g < s.size(); ++g) {
    if (s[g].is_atom() != t[g].is_atom()) return false;
    if (s[g].is_atom() ? rho[static_cast<std::size_t>(s[g].atom)] != t[g].atom
                       : apply(rho, s[g].set) != t[g].set)
      return false;
  }
  return true;
}

bool verified(const FMUniverse& u, const Perm& rho, const Support& s, const Support& t) {
  return is_allowable(u, rho).allowable && maps_onto(rho, s, t);
}

// Same kinds, clans and near-litter sizes position by position.
bool same_shape(const FMUniverse& u, const Support& s, const Support& t) {
  if (s.size() != t.size()) return false;
  for (std::size_t g = 0; g < s.size(); ++g) {
    if (s[g].is_atom() != t[g].is_atom()) return false;
    if (s[g].is_atom()) {
      if (u.group_of(s[g].atom) != u.group_of(t[g].atom)) return false;
    } else if (s[g].set.count() != t[g].set.count() ||
               u.litter(*u.core(s[g].set)).clan != u.litter(*u.core(t[g].set)).clan) {
      return false;
    }
  }
  return true;
}

// The position-by-position construction; nullopt when it gets stuck.
std::optional<Perm> build_by_recursion(const FMUniverse& u, const Support& s, const Support& t) {
  PartialMap rho0;
  AtomSet range;
  auto add = [&](int x, int y) {
    if (auto it = rho0.find(x); it != rho0.end()) return it->second == y;
    if (range.test(y) || u.group_of(x) != u.group_of(y)) return false;
    rho0[x] = y;
    range.set(y);
    return true;
  };
  auto add_all = [&](const AtomSet& from, const AtomSet& to) {
    const auto a = from.members();
    const auto b = to.members();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!add(a[i], b[i])) return false;
    return true;
  };
  for (std::size_t g = 0; g < s.size(); ++g) {
    if (s[g].is_atom()) {
      if (!add(s[g].atom, t[g].atom)) return std::nullopt;
      continue;
    }
    const auto& ls = u.litter(*u.core(s[g].set));
    const auto& lt = u.litter(*u.core(t[g].set));
    if (!add(ls.parent, lt.parent)) return std::nullopt;
    if (!add_all(s[g].set - ls.atoms, t[g].set - lt.atoms)) return std::nullopt;
    if (!add_all(ls.atoms - s[g].set, lt.atoms - t[g].set)) return std::nullopt;
  }
  // Close the partial injection into a bijection with equal domain and range.
  AtomSet domain;
  for (const auto& [x, y] : rho0) domain.set(x);
  for (int g : {kIrregular, 0, 1}) {
    if (g == 1 && u.stages() < 2) break;
    const auto need_image = ((range - domain) & u.group(g)).members();
    const auto need_preimage = ((domain - range) & u.group(g)).members();
    if (need_image.size() != need_preimage.size()) return std::nullopt;
    for (std::size_t i = 0; i < need_image.size(); ++i) rho0[need_image[i]] = need_preimage[i];
  }
  try {
    Perm rho = substitution_extension(u, rho0);
    if (verified(u, rho, s, t)) return rho;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

OrbitSpec orbit_spec(const FMUniverse& u, const Support& s) {
  require_strong(u, s);
  OrbitSpec spec;
  for (std::size_t g = 0; g < s.size(); ++g) {
    OrbitPosition p;
    const auto& e = s[g];
    if (e.is_atom()) {
      p.clan = u.group_of(e.atom);
      for (std::size_t d = 0; d < g; ++d)
        if (!s[d].is_atom() && s[d].set.test(e.atom)) p.containing = static_cast<int>(d);
    } else {
      p.near_litter = true;
      const int l = *u.core(e.set);
      p.clan = u.litter(l).clan;
      p.size = e.set.count();
      const int parent = u.litter(l).parent;
      for (std::size_t d = 0; d < g; ++d) {
        if (s[d].is_atom() && s[d].atom == parent) p.parent = static_cast<int>(d);
        if (!s[d].is_atom() && p.same_litter < 0 && *u.core(s[d].set) == l)
          p.same_litter = static_cast<int>(d);
      }
      if (p.parent < 0) p.irregular_parent = u.group_of(parent) == kIrregular;
    }
    spec.push_back(p);
  }
  return spec;
}

std::string describe(const OrbitSpec& spec) {
  std::string out = "[";
  for (std::size_t g = 0; g < spec.size(); ++g) {
    const auto& p = spec[g];
    out += g ? "; " : "";
    out += p.near_litter ? "near-litter" : "atom";
    out += p.clan == kIrregular ? " irregular" : " clan" + std::to_string(p.clan);
    if (!p.near_litter) {
      out += p.containing >= 0 ? " in #" + std::to_string(p.containing) : " free";
    } else {
      out += " size " + std::to_string(p.size);
      out += p.parent >= 0 ? " parent #" + std::to_string(p.parent)
                           : (p.irregular_parent ? " parent irregular" : " parent outside");
      if (p.same_litter >= 0) out += " litter of #" + std::to_string(p.same_litter);
    }
  }
  return out + "]";
}

std::optional<Perm> find_mapping(const FMUniverse& u, const Support& s, const Support& t,
                                 std::uint64_t budget) {
  if (!same_shape(u, s, t)) return std::nullopt;
  PermConstraints c;
  c.forced.assign(static_cast<std::size_t>(u.atom_count()), -1);
  for (std::size_t g = 0; g < s.size(); ++g) {
    if (s[g].is_atom())
      c.forced[static_cast<std::size_t>(s[g].atom)] = t[g].atom;
    else
      c.set_maps.emplace_back(s[g].set, t[g].set);
  }
  auto res = find_allowable(u, c, budget);
  if (!res.complete) throw Error(ErrorKind::SearchBudgetExceeded, "mapping search ran out of budget");
  if (res.perm && !verified(u, *res.perm, s, t))
    throw Error(ErrorKind::InvalidInput, "search returned a permutation that does not map S to T");
  return res.perm;
}

SameOrbitResult same_orbit(const FMUniverse& u, const Support& s, const Support& t,
                           std::uint64_t budget) {
  if (s.size() != t.size()) throw Error(ErrorKind::InvalidInput, "supports differ in order type");
  SameOrbitResult r;
  r.specs_equal = orbit_spec(u, s) == orbit_spec(u, t);
  if (!r.specs_equal) return r;
  if (auto rho = build_by_recursion(u, s, t)) {
    r.perm = rho;
    r.method = "recursion";
    return r;
  }
  if (auto rho = find_mapping(u, s, t, budget)) {
    r.perm = rho;
    r.method = "search";
  }
  return r;
}

std::vector<Support> strong_supports(const FMUniverse& u) {
  std::vector<Support> out;
  for (const auto& s : candidate_supports(u)) {
    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0);
    do {
      Support o;
      for (auto i : idx) o.push_back(s[i]);
      if (!strong_violation(u, o)) out.push_back(std::move(o));
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return out;
}

std::vector<int> litter_preserving_key(const FMUniverse& u, const Support& s) {
  if (u.stages() != 1) throw Error(ErrorKind::InvalidInput, "keys are defined on stage-1 universes");
  std::vector<int> sig(static_cast<std::size_t>(u.atom_count()), 0);
  std::vector<int> key{static_cast<int>(s.size())};
  for (std::size_t g = 0; g < s.size(); ++g) {
    key.push_back(s[g].is_atom() ? 0 : 1);
    const int bit = 1 << g;
    if (s[g].is_atom())
      sig[static_cast<std::size_t>(s[g].atom)] |= bit;
    else
      for (int a : s[g].set.members()) sig[static_cast<std::size_t>(a)] |= bit;
  }
  std::vector<std::vector<int>> rows;
  for (int l : u.litters_of(0)) {
    std::vector<int> row;
    for (int a : u.litter(l).atoms.members()) row.push_back(sig[static_cast<std::size_t>(a)]);
    std::sort(row.begin(), row.end());
    row.insert(row.begin(), sig[static_cast<std::size_t>(u.litter(l).parent)]);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& row : rows) key.insert(key.end(), row.begin(), row.end());
  return key;
}

OrbitCensus orbit_census(const FMUniverse& u, std::uint64_t budget) {
  OrbitCensus r;
  std::map<std::vector<int>, Support> reps;
  for (auto& s : strong_supports(u)) {
    ++r.supports;
    reps.emplace(litter_preserving_key(u, s), std::move(s));
  }
  r.classes = reps.size();
  std::vector<Support> list;
  std::vector<OrbitSpec> specs;
  std::set<OrbitSpec> distinct;
  for (auto& [key, s] : reps) {
    specs.push_back(orbit_spec(u, s));
    distinct.insert(specs.back());
    list.push_back(s);
  }
  r.spec_classes = distinct.size();
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t j = i; j < list.size(); ++j) {
      if (list[i].size() != list[j].size()) continue;
      ++r.pairs;
      if (specs[i] == specs[j]) {
        ++r.equal_spec_pairs;
        auto res = same_orbit(u, list[i], list[j], budget);
        if (!res.perm)
          r.missing.emplace_back(list[i], list[j]);
        else if (res.method == "recursion")
          ++r.found_by_recursion;
        else
          ++r.found_by_search;
      } else if (find_mapping(u, list[i], list[j], budget)) {
        r.unexpected.emplace_back(list[i], list[j]);
      }
    }
  return r;
}

std::vector<Perm> enumerated_family(const FMUniverse& u) {
  std::set<Perm> singles{u.identity()};
  const auto irregular = u.group_members(kIrregular);
  for (int g : {kIrregular, 0, 1}) {
    if (g == 1 && u.stages() < 2) break;
    const auto atoms = u.group_members(g);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        PartialMap rho0{{atoms[i], atoms[j]}, {atoms[j], atoms[i]}};
        try {
          singles.insert(substitution_extension(u, rho0));
        } catch (const Error&) {
        }
      }
  }
  std::set<Perm> all(singles.begin(), singles.end());
  for (const auto& a : singles)
    for (const auto& b : singles) {
      Perm c = compose(a, b);
      if (!all.count(c) && is_allowable(u, c).allowable) all.insert(std::move(c));
    }
  return {all.begin(), all.end()};
}

namespace {

struct Hash2 {
  std::uint64_t a = 1469598103934665603ULL;
  std::uint64_t b = 0x9E3779B97F4A7C15ULL;
  void add(std::uint64_t v) {
    a = (a ^ v) * 1099511628211ULL;
    b = (b + v + 0x7F4A7C15ULL) * 0xBF58476D1CE4E5B9ULL;
    b ^= b >> 31;
  }
  void add(const AtomSet& s) {
    add(static_cast<std::uint64_t>(s.count()));
    for (int m : s.members()) add(static_cast<std::uint64_t>(m));
  }
};

Support image_of(const Perm& rho, const Support& s) {
  Support out;
  for (const auto& e : s)
    out.push_back(e.is_atom() ? SupportElement::of_atom(rho[static_cast<std::size_t>(e.atom)])
                              : SupportElement{SupportElement::Kind::NearLitter, -1, apply(rho, e.set)});
  return out;
}

using Value = std::vector<AtomSet>;

void tabulate(const Support& s, const std::vector<Value>& targets, const std::vector<Perm>& family,
              CodingCensus& out, std::set<std::pair<std::uint64_t, std::uint64_t>>& functions) {
  std::map<Support, std::size_t> keys;
  std::vector<std::size_t> key_of(family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    key_of[i] = keys.emplace(image_of(family[i], s), keys.size()).first->second;
  CodingFunction cf{s, targets.size(), keys.size(), true};
  for (const auto& x : targets) {
    std::vector<std::optional<Value>> table(keys.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
      Value v;
      for (const auto& y : x) v.push_back(apply(family[i], y));
      std::sort(v.begin(), v.end());
      auto& slot = table[key_of[i]];
      if (!slot)
        slot = std::move(v);
      else if (*slot != v) {
        cf.single_valued = false;
        ++out.violations;
      }
    }
    Hash2 h;
    for (const auto& [key, idx] : keys) {
      for (const auto& e : key) {
        h.add(e.is_atom() ? 0 : 1);
        if (e.is_atom()) h.add(static_cast<std::uint64_t>(e.atom));
        else h.add(e.set);
      }
      for (const auto& y : *table[idx]) h.add(y);
      h.add(~0ULL);
    }
    functions.emplace(h.a, h.b);
  }
  out.targets += targets.size();
  out.by_support.push_back(std::move(cf));
}

std::optional<Support> combine(const FMUniverse& u, const Support& a, const Support& b) {
  Support out = a;
  for (const auto& e : b)
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  out = strong_order(u, out);
  try {
    require_strong(u, out);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

}  // namespace

CodingCensus coding_census(const FMUniverse& u, int level, std::size_t limit,
                           std::uint64_t budget) {
  if (level != 1 && level != 2) throw Error(ErrorKind::InvalidInput, "level must be 1 or 2");
  CodingCensus out;
  out.level = level;
  const CensusReport census = symmetric_census(u, 0, budget);
  const auto family = enumerated_family(u);
  out.permutations = family.size();
  std::set<std::pair<std::uint64_t, std::uint64_t>> functions;

  std::map<Support, std::vector<Value>> groups;
  if (level == 1) {
    for (const auto& e : census.entries)
      if (e.symmetric) groups[*e.support].push_back({e.x});
  } else {
    std::vector<const CensusEntry*> base;
    for (const auto& e : census.entries)
      if (e.symmetric && base.size() < limit) base.push_back(&e);
    for (std::size_t i = 0; i < base.size(); ++i) {
      groups[*base[i]->support].push_back({base[i]->x});
      for (std::size_t j = i + 1; j < base.size(); ++j)
        if (auto s = combine(u, *base[i]->support, *base[j]->support))
          groups[*s].push_back({base[i]->x, base[j]->x});
    }
  }
  for (const auto& [s, targets] : groups) tabulate(s, targets, family, out, functions);
  out.distinct_functions = functions.size();
  return out;
}

}  // namespace nfw::fm
