#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nfw/fm/search.hpp"
#include "nfw/fm/universe.hpp"

namespace nfw::fm {

/// An atom or a near-litter.
struct SupportElement {
  enum class Kind { Atom, NearLitter };
  Kind kind = Kind::Atom;
  int atom = -1;  // for atoms
  AtomSet set;    // for near-litters

  static SupportElement of_atom(int a) { return {Kind::Atom, a, {}}; }
  static SupportElement of_near_litter(const AtomSet& n) { return {Kind::NearLitter, -1, n}; }
  bool is_atom() const { return kind == Kind::Atom; }

  friend bool operator==(const SupportElement&, const SupportElement&) = default;
  friend std::strong_ordering operator<=>(const SupportElement& a, const SupportElement& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    return a.set <=> b.set;
  }
};

/// A support; the vector order is the well-order when one is needed.
using Support = std::vector<SupportElement>;

std::string describe(const FMUniverse& u, const SupportElement& e);
std::string describe(const FMUniverse& u, const Support& s);

/// Throws InvalidInput unless S is small, duplicate-free, its near-litters
/// are near-litters and pairwise disjoint.
void validate_support(const FMUniverse& u, const Support& s);

/// First violated strong-order condition, if any.
std::optional<std::string> strong_violation(const FMUniverse& u, const Support& s);
/// Throws NotStrong (after validate_support) when the order is not strong.
void require_strong(const FMUniverse& u, const Support& s);
/// Reorders the elements of S into a strong order: parents before the
/// near-litters they parent, near-litters before the atoms they contain.
Support strong_order(const FMUniverse& u, Support s);

/// Constraints describing the allowable permutations that fix each element.
PermConstraints fixing_constraints(const FMUniverse& u, const Support& s);

bool fixes(const Perm& rho, const SupportElement& e);

/// Every near-litter whose litter is parented by an atom of `parents`.
struct LocalCardinalUnion {
  AtomSet parents;
};

/// Objects a support can be checked against.
using Target = std::variant<int, AtomSet, std::vector<AtomSet>, LocalCardinalUnion>;

bool contains(const FMUniverse& u, const LocalCardinalUnion& f, const AtomSet& n);
/// Members of a local-cardinal union, in near_litters() order.
std::vector<AtomSet> members(const FMUniverse& u, const LocalCardinalUnion& f);

enum class SupportVerdict { Holds, HoldsWithinBudget, Fails };
const char* to_string(SupportVerdict v);

struct SupportCheck {
  SupportVerdict verdict = SupportVerdict::Holds;
  /// An allowable permutation fixing S and moving the target.
  std::optional<Perm> witness;
  /// "swap" when a swap-type extension refuted the claim, otherwise "search".
  std::string method;
};

/// Swap-type substitution extensions fixing S are tried first; then an
/// exact search over the allowable permutations that fix S. The verdict is
/// HoldsWithinBudget when a search was cut short.
SupportCheck is_support(const FMUniverse& u, const Support& s, const Target& x,
                        std::uint64_t budget = kDefaultSearchBudget);

bool moves(const FMUniverse& u, const Perm& rho, const Target& x);

/// Every support (as a strongly ordered sequence) whose elements are drawn
/// from the stage-1 atoms and the near-litters of clan 0, smallest first.
std::vector<Support> candidate_supports(const FMUniverse& u);

struct SupportRecord {
  Support support;
  /// Components of the "some allowable rho fixing S sends a to b" relation
  /// on the clan's atoms; symmetric subsets with this support are unions.
  std::vector<AtomSet> components;
};

struct CensusEntry {
  AtomSet x;
  bool symmetric = false;
  /// First support found (strongly ordered), when symmetric.
  std::optional<Support> support;
  /// Smallest |X delta U| over unions U of litters.
  int union_distance = 0;
  bool near_union = false;
};

struct CensusReport {
  int clan = 0;
  std::vector<SupportRecord> records;
  std::vector<CensusEntry> entries;  // indexed by bitmask over clan atoms
  std::vector<int> clan_atoms;
  int symmetric_count = 0;
  int near_union_count = 0;
  /// Symmetric but far from every union of litters.
  std::vector<std::size_t> symmetric_not_near;
  /// Near a union of litters but not symmetric.
  std::vector<std::size_t> near_not_symmetric;
  bool biconditional_holds() const { return symmetric_not_near.empty() && near_not_symmetric.empty(); }
  AtomSet set_of(std::size_t mask) const;
};

/// Classifies every subset of clan 0 of a stage-1 universe. Throws
/// InvalidInput for other clans or universes and SearchBudgetExceeded.
CensusReport symmetric_census(const FMUniverse& u, int clan = 0,
                              std::uint64_t budget = kDefaultSearchBudget);

struct Decomposition {
  AtomSet atoms;                   // A, a set of atoms of S
  std::vector<AtomSet> near_litters;  // Y, near-litters of S
  bool complement = false;         // X = A delta (clan minus union Y)
};

std::optional<Decomposition> decompose(const FMUniverse& u, const Support& s, const AtomSet& x,
                                       int clan);

struct LemmaFailure {
  Support support;
  AtomSet x;
};

struct LemmaReport {
  std::uint64_t pairs_checked = 0;
  std::vector<LemmaFailure> failures;
};

/// Checks the decomposition for every pair (S, X) with X a union of the
/// components recorded for S in the census.
LemmaReport clan_subset_support_lemma_check(const FMUniverse& u, const CensusReport& census);

struct ExtensionCase {
  PartialMap rho0;
  bool ok = false;
  std::string error;
  std::optional<Perm> extension;
};

struct ExtensionReport {
  std::uint64_t inputs = 0;
  std::uint64_t passed = 0;
  std::vector<ExtensionCase> failures;
};

/// Runs substitution_extension on every swap-type input: a transposition of
/// two atoms of the same kind, together with the identity on the irregular
/// atoms and on at most one further atom of clan 0, whenever that map is
/// locally small. Each output must be allowable with exceptions inside the
/// domain.
ExtensionReport extension_family_check(const FMUniverse& u);

struct InjectionEntry {
  AtomSet x;
  std::optional<Support> x_support;
  LocalCardinalUnion image;
  std::size_t image_size = 0;
  SupportVerdict image_verdict = SupportVerdict::Fails;
  std::optional<Support> image_support;
  bool induced_support = false;
};

struct InjectionReport {
  std::vector<InjectionEntry> entries;
  bool injective = true;
  int symmetric_inputs = 0;
  int symmetric_images = 0;
  int distinct_images = 0;
};

/// Stage 1: every subset X of the irregular atoms. Stage 2: the symmetric
/// subsets of clan 0, at most `limit` of them. X is sent to the union of the
/// local cardinals of the litters it parents; each image is checked against
/// the support induced from X first and then against candidate supports.
InjectionReport parent_injection_check(const FMUniverse& u, std::size_t limit = 64,
                                       std::uint64_t budget = 2'000'000);

}  // namespace nfw::fm
