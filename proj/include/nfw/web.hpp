#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nfw/ambiguity.hpp"
#include "nfw/formula.hpp"
#include "nfw/natmodel.hpp"

namespace nfw {

/// Nonempty strictly increasing set of type indices.
using IndexSet = std::vector<int>;

/// A without its smallest element.
IndexSet drop_min(const IndexSet& a);
/// The n smallest elements of A.
IndexSet smallest(const IndexSet& a, int n);

struct WebFragment {
  int lambda_fin = 0;
  std::map<IndexSet, std::uint64_t> tau;

  std::optional<std::uint64_t> at(const IndexSet& a) const;
  /// Throws InvalidInput on empty, unsorted or out-of-range index sets.
  void validate() const;
};

struct NaturalityViolation {
  IndexSet a;
  std::uint64_t tau_a;
  IndexSet a1;
  std::uint64_t tau_a1;
};

struct NaturalityReport {
  std::vector<NaturalityViolation> violations;
  /// Sets A with |A| >= 2 whose A_1 has no value.
  std::vector<IndexSet> missing;
  bool pass() const { return violations.empty(); }
};

/// 2^tau(A) = tau(A_1) for every A with |A| >= 2 in the mapping.
NaturalityReport check_naturality(const WebFragment& w);

struct ElementarityViolation {
  IndexSet a;
  IndexSet b;
  std::uint64_t tau_a;
  std::uint64_t tau_b;
  std::vector<bool> truth_a;
  std::vector<bool> truth_b;
};

struct ElementarityReport {
  int n = 0;
  std::vector<ElementarityViolation> violations;
  bool pass() const { return violations.empty(); }
};

/// For every pair A < B with |A|, |B| > n and equal n smallest elements,
/// compares Sigma in depth-n default models over tau(A) and tau(B).
ElementarityReport check_elementarity(const WebFragment& w, int n,
                                      std::span<const Sentence> sigma,
                                      const EvalOptions& opts = {});

/// "There are at least k distinct type-0 elements", for k = 1..cap.
std::vector<Sentence> sigma_card(int cap);

/// Colors the n-subsets of {0..lambda_fin-2} by Sigma in depth-n models over
/// tau(A + {max(A)+1}), takes a homogeneous set H of size n+2 and evaluates
/// phi and phi+ in the depth-(n+1) model over tau(H). Throws MissingIndex when
/// a needed value is absent and InvalidInput when the fragment is not a web on
/// Sigma (the biconditional then fails on evaluation).
AmbiguityResult web_ambiguity(const WebFragment& w, std::span<const Sentence> sigma,
                              const EvalOptions& opts = {});

enum class SweepOrder { Forward, Reverse };

struct SweepReport {
  int lambda_fin = 0;
  int cap = 0;
  int n = 0;
  /// (cap+1)^(2^lambda_fin - 1) total fragments.
  double total_fragments = 0;
  std::uint64_t pass_naturality = 0;
  std::uint64_t pass_both = 0;
  /// Naturality-passing fragments in canonical (sorted) order.
  std::vector<WebFragment> natural;
  std::vector<WebFragment> both;
};

/// Enumerates every total fragment on the nonempty subsets of {0..lambda_fin-1}
/// with values 0..cap, pruning on naturality, and checks elementarity with
/// sigma (sigma_card(cap) when empty).
SweepReport impossibility_sweep(int lambda_fin = 3, int cap = 16, int n = 1,
                                SweepOrder order = SweepOrder::Forward,
                                std::span<const Sentence> sigma = {},
                                const EvalOptions& opts = {});

}  // namespace nfw
