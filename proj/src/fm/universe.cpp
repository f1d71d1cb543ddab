#include "nfw/fm/universe.hpp"

#include <algorithm>

#include "nfw/error.hpp"

namespace nfw::fm {

namespace {

void add_litters(std::vector<AtomInfo>& atoms, std::vector<LitterInfo>& litters, int clan,
                 const std::vector<int>& parents, int k) {
  for (std::size_t j = 0; j < parents.size(); ++j) {
    LitterInfo li{clan, parents[j], {}};
    const int lid = static_cast<int>(litters.size());
    for (int a = 0; a < k; ++a) {
      const int id = static_cast<int>(atoms.size());
      atoms.push_back({"c" + std::to_string(clan) + ":L" + std::to_string(j + 1) + ":a" +
                           std::to_string(a + 1),
                       clan, lid});
      li.atoms.set(id);
    }
    litters.push_back(li);
  }
}

}  // namespace

std::optional<int> FMUniverse::find_atom(const std::string& name) const {
  for (int a = 0; a < atom_count(); ++a)
    if (atoms_[static_cast<std::size_t>(a)].name == name) return a;
  return std::nullopt;
}

const AtomSet& FMUniverse::group(int clan) const {
  auto it = groups_.find(clan);
  if (it == groups_.end()) throw Error(ErrorKind::InvalidInput, "no clan " + std::to_string(clan));
  return it->second;
}

std::optional<int> FMUniverse::litter_with_parent(int parent) const {
  auto it = litter_by_parent_.find(parent);
  if (it == litter_by_parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> FMUniverse::litters_of(int clan) const {
  std::vector<int> out;
  for (int l = 0; l < litter_count(); ++l)
    if (litters_[static_cast<std::size_t>(l)].clan == clan) out.push_back(l);
  return out;
}

std::optional<int> FMUniverse::core(const AtomSet& n) const {
  if (n.empty()) return std::nullopt;
  const int a0 = n.members().front();
  const int clan = atom(a0).clan;
  if (clan == kIrregular || !n.subset_of(group(clan))) return std::nullopt;
  for (int l : litters_of(clan))
    if (is_small((n ^ litter(l).atoms).count())) return l;
  return std::nullopt;
}

std::vector<AtomSet> FMUniverse::near_litters(int clan) const {
  std::vector<AtomSet> out;
  const int limit = params_.s_max - 1;
  for (int l : litters_of(clan)) {
    const auto inside = litter(l).atoms.members();
    const auto outside = (group(clan) - litter(l).atoms).members();
    for (int total = 0; total <= limit; ++total)
      for (int r = total; r >= 0; --r) {
        const int add = total - r;
        if (r > static_cast<int>(inside.size()) || add > static_cast<int>(outside.size())) continue;
        // All r-subsets of inside removed, all add-subsets of outside added.
        std::vector<int> ri(static_cast<std::size_t>(r)), ai(static_cast<std::size_t>(add));
        for (int i = 0; i < r; ++i) ri[static_cast<std::size_t>(i)] = i;
        while (true) {
          for (int i = 0; i < add; ++i) ai[static_cast<std::size_t>(i)] = i;
          while (true) {
            AtomSet n = litter(l).atoms;
            for (int i : ri) n.reset(inside[static_cast<std::size_t>(i)]);
            for (int i : ai) n.set(outside[static_cast<std::size_t>(i)]);
            if (!n.empty()) out.push_back(n);
            int p = add - 1;
            while (p >= 0 && ai[static_cast<std::size_t>(p)] ==
                                 static_cast<int>(outside.size()) - add + p)
              --p;
            if (p < 0) break;
            ++ai[static_cast<std::size_t>(p)];
            for (int q = p + 1; q < add; ++q)
              ai[static_cast<std::size_t>(q)] = ai[static_cast<std::size_t>(q) - 1] + 1;
          }
          int p = r - 1;
          while (p >= 0 && ri[static_cast<std::size_t>(p)] == static_cast<int>(inside.size()) - r + p)
            --p;
          if (p < 0) break;
          ++ri[static_cast<std::size_t>(p)];
          for (int q = p + 1; q < r; ++q)
            ri[static_cast<std::size_t>(q)] = ri[static_cast<std::size_t>(q) - 1] + 1;
        }
      }
  }
  return out;
}

Perm FMUniverse::identity() const {
  Perm p(static_cast<std::size_t>(atom_count()));
  for (int a = 0; a < atom_count(); ++a) p[static_cast<std::size_t>(a)] = a;
  return p;
}

FMUniverse build_universe(const FMParams& params, int stages) {
  if (params.s_max < 2 || params.s_max > params.k || params.litters0 < 2)
    throw Error(ErrorKind::InvalidParams, "need 2 <= s_max <= k and litters0 >= 2");
  if (stages != 1 && stages != 2) throw Error(ErrorKind::InvalidParams, "stages must be 1 or 2");
  const long long regular0 = static_cast<long long>(params.k) * params.litters0;
  const long long total = regular0 + params.litters0 + (stages == 2 ? regular0 * params.k : 0);
  if (total > kMaxAtoms)
    throw Error(ErrorKind::InvalidParams,
                "universe would have " + std::to_string(total) + " atoms; the limit is " +
                    std::to_string(kMaxAtoms));

  FMUniverse u;
  u.params_ = params;
  u.stages_ = stages;
  // Clan 0 first so that its atoms have the smallest ids; parents follow.
  const int first_parent = static_cast<int>(regular0);
  std::vector<int> parents0;
  for (int l = 0; l < params.litters0; ++l) parents0.push_back(first_parent + l);
  add_litters(u.atoms_, u.litters_, 0, parents0, params.k);
  for (int l = 0; l < params.litters0; ++l) {
    u.atoms_.push_back({"p0:" + std::to_string(l + 1), kIrregular, -1});
    u.groups_[kIrregular].set(first_parent + l);
  }
  for (int a = 0; a < static_cast<int>(regular0); ++a) u.groups_[0].set(a);
  if (stages == 2) {
    std::vector<int> parents1;
    for (int a = 0; a < static_cast<int>(regular0); ++a) parents1.push_back(a);
    const int first = u.atom_count();
    add_litters(u.atoms_, u.litters_, 1, parents1, params.k);
    for (int a = first; a < u.atom_count(); ++a) u.groups_[1].set(a);
  }
  for (int l = 0; l < u.litter_count(); ++l) u.litter_by_parent_[u.litter(l).parent] = l;

  if (!near_litters_unique(u))
    throw Error(ErrorKind::InvalidParams, "some atom set is near two distinct litters");
  return u;
}

bool near_litters_unique(const FMUniverse& u) {
  for (int clan : {0, 1}) {
    if (clan == 1 && u.stages() < 2) break;
    for (const auto& n : u.near_litters(clan)) {
      int hits = 0;
      for (int l : u.litters_of(clan))
        if (u.is_small((n ^ u.litter(l).atoms).count())) ++hits;
      if (hits != 1) return false;
    }
  }
  return true;
}

AtomSet apply(const Perm& rho, const AtomSet& s) {
  AtomSet out;
  for (int a : s.members()) out.set(rho[static_cast<std::size_t>(a)]);
  return out;
}

Perm compose(const Perm& outer, const Perm& inner) {
  Perm out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i)
    out[i] = outer[static_cast<std::size_t>(inner[i])];
  return out;
}

Perm inverse(const Perm& rho) {
  Perm out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[static_cast<std::size_t>(rho[i])] = static_cast<int>(i);
  return out;
}

bool is_permutation(const Perm& rho, int n) {
  if (static_cast<int>(rho.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : rho) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

AllowableResult is_allowable(const FMUniverse& u, const Perm& rho) {
  if (!is_permutation(rho, u.atom_count()))
    throw Error(ErrorKind::NotABijection, "not a permutation of the universe's atoms");
  AllowableResult r;
  for (int a = 0; a < u.atom_count(); ++a)
    if (u.group_of(a) != u.group_of(rho[static_cast<std::size_t>(a)])) {
      r.reason = u.name(a) + " is sent outside its clan";
      return r;
    }
  bool ok = true;
  for (int l = 0; l < u.litter_count(); ++l) {
    const AtomSet image = apply(rho, u.litter(l).atoms);
    const auto c = u.core(image);
    const int parent_image = rho[static_cast<std::size_t>(u.litter(l).parent)];
    std::string why;
    if (!c)
      why = "image of litter " + std::to_string(l) + " is not a near-litter";
    else if (u.litter(*c).parent != parent_image)
      why = "image of litter " + std::to_string(l) + " has the wrong parent";
    if (!why.empty()) {
      if (ok) {
        r.bad_litter = l;
        r.reason = why;
      }
      ok = false;
    }
    if (c)
      for (int x : u.litter(l).atoms.members())
        if (!u.litter(*c).atoms.test(rho[static_cast<std::size_t>(x)])) r.exceptions.set(x);
  }
  r.allowable = ok;
  return r;
}

Perm substitution_extension(const FMUniverse& u, const PartialMap& rho0) {
  const int n = u.atom_count();
  AtomSet dom, ran;
  for (const auto& [x, y] : rho0) {
    if (x < 0 || x >= n || y < 0 || y >= n)
      throw Error(ErrorKind::NotABijection, "atom id out of range");
    if (ran.test(y)) throw Error(ErrorKind::NotABijection, "two atoms share the image " + u.name(y));
    if (u.group_of(x) != u.group_of(y))
      throw Error(ErrorKind::NotABijection, u.name(x) + " and " + u.name(y) + " lie in different clans");
    dom.set(x);
    ran.set(y);
  }
  if (dom != ran) throw Error(ErrorKind::NotABijection, "domain and range differ");
  for (int l = 0; l < u.litter_count(); ++l)
    if (!u.is_small((dom & u.litter(l).atoms).count()))
      throw Error(ErrorKind::NotLocallySmall,
                  "domain meets litter " + std::to_string(l) + " in a set that is not small");

  Perm rho(static_cast<std::size_t>(n), -1);
  for (const auto& [x, y] : rho0) rho[static_cast<std::size_t>(x)] = y;
  for (int p : u.group_members(kIrregular))
    if (!dom.test(p)) rho[static_cast<std::size_t>(p)] = p;
  // Litters are stored clan 0 first, so every parent image is known in time.
  for (int l = 0; l < u.litter_count(); ++l) {
    const auto& lit = u.litter(l);
    const int target = *u.litter_with_parent(rho[static_cast<std::size_t>(lit.parent)]);
    const auto from = (lit.atoms - dom).members();
    const auto to = (u.litter(target).atoms - dom).members();
    if (from.size() != to.size())
      throw Error(ErrorKind::UnbalancedLitter,
                  "litter " + std::to_string(l) + " has " + std::to_string(from.size()) +
                      " free atoms but its target has " + std::to_string(to.size()));
    for (std::size_t i = 0; i < from.size(); ++i) rho[static_cast<std::size_t>(from[i])] = to[i];
  }
  auto check = is_allowable(u, rho);
  if (!check.allowable)
    throw Error(ErrorKind::NotLocallySmall, "extension is not allowable: " + check.reason);
  return rho;
}

std::string describe(const FMUniverse& u, const AtomSet& s) {
  std::string out = "{";
  bool first = true;
  for (int a : s.members()) {
    out += (first ? "" : ", ") + u.name(a);
    first = false;
  }
  return out + "}";
}

}  // namespace nfw::fm
