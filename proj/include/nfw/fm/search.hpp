#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nfw/fm/universe.hpp"

namespace nfw::fm {

/// Requirements on an allowable permutation rho.
struct PermConstraints {
  /// forced[x] = y demands rho(x) = y; -1 leaves x free. Empty means none.
  std::vector<int> forced;
  /// rho(A) = B for every pair.
  std::vector<std::pair<AtomSet, AtomSet>> set_maps;
  /// Atoms assigned before all others (in this order); useful when a prune
  /// hook looks only at these atoms.
  std::vector<int> first;
};

struct SearchOutcome {
  std::optional<Perm> perm;
  /// False when the node budget ran out before the space was exhausted.
  bool complete = true;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

/// Called after each assignment with the partial image (-1 = unassigned);
/// returning false abandons the branch.
using PruneHook = std::function<bool(const std::vector<int>& partial)>;

/// Depth-first search for an allowable permutation meeting the constraints.
/// Every permutation it returns is allowable; with an unlimited budget the
/// search is exact (nullopt means none exists). The optional accept hook
/// filters complete permutations.
SearchOutcome find_allowable(const FMUniverse& u, const PermConstraints& c,
                             std::uint64_t budget = kDefaultSearchBudget,
                             const PruneHook& prune = {},
                             const std::function<bool(const Perm&)>& accept = {});

/// Connected components of the relation "some allowable rho meeting the
/// constraints sends a to b". The result maps each atom to the smallest atom
/// of its component; every permutation found on the way is appended to
/// `found` when given. Throws SearchBudgetExceeded when a search is cut short.
std::vector<int> constrained_components(const FMUniverse& u, const PermConstraints& c,
                                        std::uint64_t budget = kDefaultSearchBudget,
                                        std::vector<Perm>* found = nullptr);

}  // namespace nfw::fm
