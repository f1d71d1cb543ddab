#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nfw::fm {

inline constexpr int kMaxAtoms = 256;

/// Fixed-capacity set of atom ids.
class AtomSet {
 public:
  AtomSet() = default;

  void set(int a) { w_[idx(a)] |= bit(a); }
  void reset(int a) { w_[idx(a)] &= ~bit(a); }
  bool test(int a) const { return (w_[idx(a)] & bit(a)) != 0; }
  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool empty() const { return count() == 0; }

  AtomSet& operator|=(const AtomSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  AtomSet& operator&=(const AtomSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  AtomSet& operator^=(const AtomSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  AtomSet& operator-=(const AtomSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
  friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
  friend AtomSet operator^(AtomSet a, const AtomSet& b) { return a ^= b; }
  friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }
  bool intersects(const AtomSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool subset_of(const AtomSet& o) const { return (*this - o).empty(); }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < w_.size(); ++i)
      for (auto w = w_[i]; w; w &= w - 1)
        out.push_back(static_cast<int>(i * 64) + std::countr_zero(w));
    return out;
  }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
  friend std::strong_ordering operator<=>(const AtomSet& a, const AtomSet& b) {
    for (std::size_t i = w_size; i-- > 0;)
      if (a.w_[i] != b.w_[i]) return a.w_[i] <=> b.w_[i];
    return std::strong_ordering::equal;
  }
  std::size_t hash() const {
    std::size_t h = 0;
    for (auto w : w_) h = h * 0x9E3779B97F4A7C15ULL ^ w;
    return h;
  }

 private:
  static constexpr std::size_t w_size = kMaxAtoms / 64;
  static std::size_t idx(int a) { return static_cast<std::size_t>(a) >> 6; }
  static std::uint64_t bit(int a) { return std::uint64_t{1} << (a & 63); }
  std::array<std::uint64_t, w_size> w_{};
};

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const { return s.hash(); }
};

struct FMParams {
  int k = 4;         // litter size
  int s_max = 3;     // a set is small iff its size is below s_max
  int litters0 = 3;  // litters in the base clan
};

/// Clan index of an atom; irregular atoms form their own group.
inline constexpr int kIrregular = -1;

struct AtomInfo {
  std::string name;
  int clan;    // 0, 1, or kIrregular
  int litter;  // litter id, or -1 for irregular atoms
};

struct LitterInfo {
  int clan;
  int parent;  // parent atom
  AtomSet atoms;
};

/// A permutation of all atoms: image[a] = rho(a).
using Perm = std::vector<int>;

class FMUniverse {
 public:
  const FMParams& params() const { return params_; }
  int stages() const { return stages_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int litter_count() const { return static_cast<int>(litters_.size()); }
  const AtomInfo& atom(int a) const { return atoms_.at(static_cast<std::size_t>(a)); }
  const LitterInfo& litter(int l) const { return litters_.at(static_cast<std::size_t>(l)); }
  const std::string& name(int a) const { return atom(a).name; }
  std::optional<int> find_atom(const std::string& name) const;

  /// Atoms of a clan (0 or 1), or the irregular atoms for kIrregular.
  const AtomSet& group(int clan) const;
  std::vector<int> group_members(int clan) const { return group(clan).members(); }
  /// Group of an atom (its clan, or kIrregular).
  int group_of(int a) const { return atom(a).clan; }
  /// Litter whose parent is the given atom, if any.
  std::optional<int> litter_with_parent(int parent) const;
  /// Litters of a clan.
  std::vector<int> litters_of(int clan) const;

  /// Largest number of atoms a litter may send outside its target litter
  /// under an allowable permutation: floor((s_max - 1) / 2).
  int max_outflow() const { return (params_.s_max - 1) / 2; }
  bool is_small(int size) const { return size < params_.s_max; }

  /// The unique litter within small symmetric difference of N, if any.
  std::optional<int> core(const AtomSet& n) const;
  bool is_near_litter(const AtomSet& n) const { return core(n).has_value(); }
  /// Every near-litter of a clan, in a fixed order.
  std::vector<AtomSet> near_litters(int clan) const;

  Perm identity() const;

 private:
  friend FMUniverse build_universe(const FMParams&, int);
  FMParams params_;
  int stages_ = 1;
  std::vector<AtomInfo> atoms_;
  std::vector<LitterInfo> litters_;
  std::map<int, AtomSet> groups_;
  std::map<int, int> litter_by_parent_;
};

/// Stage 1: clan 0 plus its irregular parents. Stage 2 adds clan 1, whose
/// litters are parented by the atoms of clan 0. Throws InvalidParams.
FMUniverse build_universe(const FMParams& params, int stages);

/// Minimum symmetric difference between two distinct litters (2k), compared
/// against twice the largest small size; a set near two litters is
/// impossible when it is larger.
bool near_litters_unique(const FMUniverse& u);

// Permutation helpers.
AtomSet apply(const Perm& rho, const AtomSet& s);
Perm compose(const Perm& outer, const Perm& inner);
Perm inverse(const Perm& rho);
bool is_permutation(const Perm& rho, int n);

struct AllowableResult {
  bool allowable = false;
  std::optional<int> bad_litter;
  std::string reason;
  /// Regular atoms x with rho(x) outside the core of rho(litter of x).
  AtomSet exceptions;
};

/// Throws NotABijection if rho is not a permutation of the atoms.
AllowableResult is_allowable(const FMUniverse& u, const Perm& rho);

/// Partial atom map with equal domain and range.
using PartialMap = std::map<int, int>;

/// Extends a locally small bijection to an allowable permutation whose
/// exceptions lie in its domain. Parents outside the domain are fixed; each
/// litter's remaining atoms go to its target litter's remaining atoms in
/// ascending order, clan 0 before clan 1. Throws NotABijection,
/// NotLocallySmall (including the case where the finite threshold makes the
/// filled image too far from its target) and UnbalancedLitter.
Perm substitution_extension(const FMUniverse& u, const PartialMap& rho0);

std::string describe(const FMUniverse& u, const AtomSet& s);

}  // namespace nfw::fm
