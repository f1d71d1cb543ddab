#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfw/formula.hpp"

namespace nfw {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// A typed first-order structure: type t ranges over {0, ..., domain_size(t)-1}.
class Structure {
 public:
  virtual ~Structure() = default;

  /// Types 0 .. type_count()-1 are interpreted.
  virtual int type_count() const = 0;
  virtual std::uint64_t domain_size(int type) const = 0;
  virtual bool member(int tx, std::uint64_t x, int ty, std::uint64_t y) const = 0;
  /// Element denoting `empty` at the given type.
  virtual std::uint64_t empty_value(int type) const;
  /// True when every permutation of the type-0 domain lifts to an
  /// automorphism fixing all `empty` constants. The evaluator then only
  /// needs one representative for a fresh type-0 witness.
  virtual bool type0_homogeneous() const { return false; }
};

struct EvalOptions {
  /// Largest domain a quantifier may enumerate.
  std::uint64_t budget = kDefaultBudget;
  /// Use the type-0 homogeneity shortcut when the structure allows it.
  bool symmetry = true;
};

using Assignment = std::map<std::string, std::uint64_t>;

/// Evaluates a fully typed formula. Free variables other than `empty` must be
/// assigned. Throws MissingTypes, TypeOutOfRange, BudgetExceeded, InvalidInput.
bool evaluate(const Structure& st, const Formula& phi, const Assignment& env = {},
              const EvalOptions& opts = {});

/// Default natural model of TST_n over m tagged atoms. Elements of level i+1
/// are bit-vectors over the enumeration of level i.
class NaturalModel : public Structure {
 public:
  std::uint64_t base_size() const { return sizes_.empty() ? 0 : sizes_[0]; }
  int depth() const { return static_cast<int>(sizes_.size()); }
  const std::vector<std::uint64_t>& level_sizes() const { return sizes_; }
  const std::vector<std::string>& atom_tags() const { return tags_; }

  int type_count() const override { return depth(); }
  std::uint64_t domain_size(int type) const override;
  bool member(int tx, std::uint64_t x, int ty, std::uint64_t y) const override;
  bool type0_homogeneous() const override { return true; }

  /// Members of element y of level i+1, as indices into level i.
  std::vector<std::uint64_t> members(int level, std::uint64_t y) const;

 private:
  friend NaturalModel build_default(std::uint64_t, int, std::uint64_t,
                                    std::vector<std::string>);
  std::vector<std::uint64_t> sizes_;
  std::vector<std::string> tags_;
};

/// Throws BudgetExceeded when the total element count exceeds budget or a
/// level cannot be encoded. Tags default to "a0", "a1", ...
NaturalModel build_default(std::uint64_t m, int n, std::uint64_t budget = kDefaultBudget,
                           std::vector<std::string> tags = {});

/// Evaluates a TST sentence. Types must be below the model depth.
bool eval(const NaturalModel& model, const Sentence& phi, const EvalOptions& opts = {});

/// Level-wise bijection between two natural models; maps[i][x] is the image of
/// element x of level i.
struct LevelBijection {
  std::vector<std::vector<std::uint64_t>> maps;
};

/// Lifts a base bijection (identity by default) through the power-set levels.
/// Throws SizeMismatch on differing base sizes or depths, BudgetExceeded if a
/// level is too large to tabulate.
LevelBijection iso_models(const NaturalModel& a, const NaturalModel& b,
                          std::optional<std::vector<std::uint64_t>> base = std::nullopt,
                          std::uint64_t budget = kDefaultBudget);

/// lambda_fin-indexed levels X_0, X_1, ... with canonical injections
/// f_{i,j}(subset r of X_i) = element r of X_j. Elements of X_j at or above
/// 2^{|X_{j-1}|} are atoms.
class TstuFamily {
 public:
  int lambda_fin() const { return static_cast<int>(sizes_.size()); }
  const std::vector<std::uint64_t>& sizes() const { return sizes_; }
  std::uint64_t size(int i) const { return sizes_.at(static_cast<std::size_t>(i)); }

  /// Is element r of level j in the range of f_{i,j}?
  bool in_range(int i, int j, std::uint64_t r) const;
  /// x in X_i belongs to the subset coded by y in X_j (j > i).
  bool member(int i, std::uint64_t x, int j, std::uint64_t y) const;
  /// f_{i,j}(empty).
  std::uint64_t empty_image(int i, int j) const;
  /// Element of level j outside the range of every injection, if any.
  std::optional<std::uint64_t> some_atom(int j) const;

 private:
  friend TstuFamily build_tstu_family(std::vector<std::uint64_t>);
  std::vector<std::uint64_t> sizes_;
};

/// Throws SizeConstraintViolated unless sizes[j] >= 2^sizes[i] for all i < j.
TstuFamily build_tstu_family(std::vector<std::uint64_t> sizes);

struct Interpretation {
  Interpretation(const TstuFamily& family, std::vector<int> s);
  const TstuFamily* family;
  std::vector<int> s;
};

/// Type i ranges over X_{s_i}. With `tangled`, membership is allowed between
/// any increasing pair of types (the TTT reading of the same family).
class FamilyView : public Structure {
 public:
  FamilyView(const Interpretation& interp, bool tangled);

  int type_count() const override { return static_cast<int>(interp_.s.size()); }
  std::uint64_t domain_size(int type) const override;
  bool member(int tx, std::uint64_t x, int ty, std::uint64_t y) const override;
  std::uint64_t empty_value(int type) const override;
  bool type0_homogeneous() const override { return !tangled_; }

 private:
  Interpretation interp_;
  bool tangled_;
};

/// Evaluates a TSTU sentence under the interpretation.
bool eval_tstu(const Interpretation& interp, const Sentence& phi,
               const EvalOptions& opts = {});
/// Same, with free variables bound by env.
bool eval_tstu(const Interpretation& interp, const Formula& phi, const Assignment& env,
               const EvalOptions& opts = {});
/// Evaluates a TTT-typed formula under the tangled reading of the family.
bool eval_ttt(const Interpretation& interp, const Formula& phi,
              const EvalOptions& opts = {});

}  // namespace nfw
