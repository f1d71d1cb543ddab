#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfw/fm/support.hpp"

namespace nfw::fm {

/// Positional descriptor of one element of a strongly ordered support.
/// Positions are indices into the support; -1 means "none".
struct OrbitPosition {
  bool near_litter = false;
  int clan = 0;         // 0, 1 or kIrregular
  int containing = -1;  // earlier near-litter containing this atom
  int parent = -1;      // earlier atom parenting this near-litter's litter
  /// For near-litters whose parent is not in the support: whether that
  /// parent is irregular.
  bool irregular_parent = false;
  int size = 0;          // near-litter cardinality
  int same_litter = -1;  // earliest earlier near-litter with the same litter

  friend bool operator==(const OrbitPosition&, const OrbitPosition&) = default;
  friend auto operator<=>(const OrbitPosition&, const OrbitPosition&) = default;
};

using OrbitSpec = std::vector<OrbitPosition>;

/// Throws NotStrong when the order is not strong.
OrbitSpec orbit_spec(const FMUniverse& u, const Support& s);
std::string describe(const OrbitSpec& spec);

struct SameOrbitResult {
  bool specs_equal = false;
  /// Verified: allowable and rho(S_g) = T_g for every position g.
  std::optional<Perm> perm;
  /// "recursion" when the position-by-position construction succeeded,
  /// "search" when the exhaustive search supplied the permutation.
  std::string method;
};

/// Builds a locally small bijection position by position (atoms to atoms,
/// parents to parents, anomalies to anomalies), completes it to equal domain
/// and range, extends it, and verifies the result; when any step fails the
/// exhaustive search decides. Returns no permutation when the specs differ.
SameOrbitResult same_orbit(const FMUniverse& u, const Support& s, const Support& t,
                           std::uint64_t budget = kDefaultSearchBudget);

/// Exhaustive existence check, independent of the specs.
std::optional<Perm> find_mapping(const FMUniverse& u, const Support& s, const Support& t,
                                 std::uint64_t budget = kDefaultSearchBudget);

/// Every strong ordering of every candidate support.
std::vector<Support> strong_supports(const FMUniverse& u);

/// Complete invariant of a support under the permutations that map every
/// litter onto a litter (litters and parents permuted together, atoms
/// permuted inside litters).
std::vector<int> litter_preserving_key(const FMUniverse& u, const Support& s);

struct OrbitCensus {
  std::size_t supports = 0;
  std::size_t classes = 0;  // classes under litter-preserving permutations
  std::size_t spec_classes = 0;
  std::uint64_t pairs = 0;
  std::uint64_t equal_spec_pairs = 0;
  std::uint64_t found_by_recursion = 0;
  std::uint64_t found_by_search = 0;
  /// Equal specs but no mapping permutation.
  std::vector<std::pair<Support, Support>> missing;
  /// Different specs yet a mapping permutation exists.
  std::vector<std::pair<Support, Support>> unexpected;
  bool pass() const { return missing.empty() && unexpected.empty(); }
};

/// Runs same_orbit and the independent search on every pair of class
/// representatives with the same order type. Any pair of strong supports is
/// carried to a pair of representatives by litter-preserving permutations,
/// which compose with allowable ones, so this covers all pairs.
OrbitCensus orbit_census(const FMUniverse& u, std::uint64_t budget = kDefaultSearchBudget);

struct CodingFunction {
  Support support;
  std::size_t targets = 0;  // targets sharing this support
  std::size_t orbit_size = 0;
  bool single_valued = true;
};

struct CodingCensus {
  int level = 1;
  std::size_t permutations = 0;  // size of the enumerated family
  std::size_t targets = 0;
  std::size_t distinct_functions = 0;
  std::size_t violations = 0;
  std::vector<CodingFunction> by_support;
};

/// The enumerated family: extensions of single transpositions together with
/// their allowable pairwise products.
std::vector<Perm> enumerated_family(const FMUniverse& u);

/// Level 1 tabulates chi_{X,S} for every symmetric subset of clan 0 with its
/// census support; level 2 for the sets {X} and {X, Y} built from the first
/// `limit` symmetric subsets whose supports combine into a support.
CodingCensus coding_census(const FMUniverse& u, int level, std::size_t limit = 24,
                           std::uint64_t budget = kDefaultSearchBudget);

}  // namespace nfw::fm
