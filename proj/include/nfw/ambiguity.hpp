#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nfw/formula.hpp"
#include "nfw/natmodel.hpp"

namespace nfw {

/// Coloring of the n-element subsets of {0, ..., lambda_fin - 1}. Colors are
/// bit-vectors (bit i = truth value of the i-th sentence).
class Coloring {
 public:
  using Color = std::uint32_t;

  Coloring(int lambda_fin, int n, int width);

  int lambda_fin() const { return lambda_fin_; }
  int n() const { return n_; }
  int width() const { return width_; }
  std::size_t subset_count() const { return colors_.size(); }

  /// Position of a strictly increasing n-subset in the lexicographic order.
  std::size_t rank(std::span<const int> subset) const;
  std::vector<int> unrank(std::size_t r) const;

  Color color_of(std::span<const int> subset) const { return colors_[rank(subset)]; }
  Color color_at(std::size_t r) const { return colors_[r]; }
  void set(std::span<const int> subset, Color c) { colors_[rank(subset)] = c; }
  void set_at(std::size_t r, Color c) { colors_[r] = c; }

  /// Distinct colors in use, with class sizes, largest class first (ties by
  /// smaller color).
  std::vector<std::pair<Color, std::size_t>> classes() const;

  /// Builds a coloring by calling fn on every n-subset in lexicographic order.
  static Coloring tabulate(int lambda_fin, int n, int width,
                           const std::function<Color(std::span<const int>)>& fn);

 private:
  int lambda_fin_;
  int n_;
  int width_;
  std::vector<std::vector<std::size_t>> binom_;
  std::vector<Color> colors_;
};

/// Visits every strictly increasing k-subset of {0..m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(std::span<const int>)>& fn);

/// k-element set all of whose n-subsets share a color; nullopt if none exists.
std::optional<std::vector<int>> find_homogeneous(const Coloring& coloring, int k);

/// Independent re-check used on every returned set.
bool is_homogeneous(const Coloring& coloring, std::span<const int> h);

struct Verdict {
  std::string sentence;
  bool value;         // phi under s
  bool value_raised;  // phi+ under s
};

struct AmbiguityWitness {
  std::vector<int> H;
  std::vector<int> s;
  std::vector<Verdict> verdicts;
  Coloring coloring;
};

struct NoHomogeneousSet {
  Coloring coloring;
  int k;
};

using AmbiguityResult = std::variant<AmbiguityWitness, NoHomogeneousSet>;

/// Colors each n-subset A by the Sigma truth vector under s = A followed by
/// the next indices above max(A). A second continuation is evaluated wherever
/// the family has room, and a mismatch raises std::logic_error.
Coloring color_by_theory(const TstuFamily& family, std::span<const Sentence> sigma, int n,
                         const EvalOptions& opts = {});

/// Homogeneous (n+1)-set for n = 1 + max type of Sigma, with phi and phi+
/// evaluated under its enumeration. Verdicts are checked before returning.
AmbiguityResult jensen_witness(const TstuFamily& family, std::span<const Sentence> sigma,
                               const EvalOptions& opts = {});

/// Same argument with the colored quantity being translate_s(phi, s),
/// evaluated with the family's indices used directly as TTT types.
AmbiguityResult ttt_transfer_demo(const TstuFamily& family, std::span<const Sentence> sigma,
                                  const EvalOptions& opts = {});

/// The classic coloring of [5]^2 with no monochromatic triangle: {i, j} gets
/// color 1 iff j - i is 1 or 4 modulo 5.
Coloring pentagon_coloring();

}  // namespace nfw
