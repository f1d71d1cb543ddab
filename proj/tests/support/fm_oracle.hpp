#pragma once

// Brute-force reference for small freedom-of-movement universes. It works on
// plain std::set and std::vector data and enumerates the whole symmetric
// group of the regular atoms, so it only suits a handful of atoms.

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "nfw/fm/universe.hpp"

namespace nfw::testing {

struct TinyUniverse {
  int k = 0;
  int s_max = 0;
  int litters = 0;
  // Regular atom l*k + a belongs to litter l; irregular atom n*k + l parents it.
  int regular() const { return k * litters; }
  int total() const { return regular() + litters; }
};

inline std::set<int> litter_atoms(const TinyUniverse& t, int l) {
  std::set<int> out;
  for (int a = 0; a < t.k; ++a) out.insert(l * t.k + a);
  return out;
}

inline int sym_diff_size(const std::set<int>& a, const std::set<int>& b) {
  std::vector<int> d;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
  return static_cast<int>(d.size());
}

/// rho(L) must be near the litter parented by rho(parent of L).
inline bool oracle_allowable(const TinyUniverse& t, const std::vector<int>& rho) {
  for (int l = 0; l < t.litters; ++l) {
    std::set<int> img;
    for (int x : litter_atoms(t, l)) img.insert(rho[static_cast<std::size_t>(x)]);
    const int target = rho[static_cast<std::size_t>(t.regular() + l)] - t.regular();
    if (sym_diff_size(img, litter_atoms(t, target)) >= t.s_max) return false;
  }
  return true;
}

/// Every allowable permutation (regular atoms to regular atoms, irregular to
/// irregular).
inline std::vector<std::vector<int>> oracle_allowable_group(const TinyUniverse& t) {
  std::vector<std::vector<int>> out;
  std::vector<int> reg(static_cast<std::size_t>(t.regular()));
  std::iota(reg.begin(), reg.end(), 0);
  std::vector<int> irr(static_cast<std::size_t>(t.litters));
  std::iota(irr.begin(), irr.end(), t.regular());
  do {
    std::vector<int> r = reg;
    do {
      std::vector<int> rho = r;
      rho.insert(rho.end(), irr.begin(), irr.end());
      if (oracle_allowable(t, rho)) out.push_back(rho);
    } while (std::next_permutation(r.begin(), r.end()));
  } while (std::next_permutation(irr.begin(), irr.end()));
  return out;
}

}  // namespace nfw::testing
