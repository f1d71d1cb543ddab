#pragma once

// Many-sorted first-order formulas over = and membership, shared by the
// typed theories (TST, TSTU, TNT, TTT) and by stratified comprehension.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nfw/error.hpp"

namespace nfw {

enum class Mode { TST, TSTU, TNT, TTT };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);

// Name reserved for the TSTU constants empty^i.
inline constexpr const char* kEmptyName = "empty";

struct Var {
  std::string name;
  std::optional<int> type;

  bool is_empty_constant() const { return name == kEmptyName; }
  friend bool operator==(const Var&, const Var&) = default;
};

enum class Op { Equal, Member, Not, And, Or, Implies, Iff, Forall, Exists };

bool is_atomic(Op op);
bool is_binary(Op op);
bool is_quantifier(Op op);

class Formula;

namespace detail {
struct Node;
}

/// Immutable formula handle. Copies share structure.
class Formula {
 public:
  Formula() = default;  // empty handle, a placeholder only

  static Formula equal(Var lhs, Var rhs);
  static Formula member(Var lhs, Var rhs);
  static Formula negation(Formula body);
  static Formula binary(Op op, Formula lhs, Formula rhs);
  static Formula quantifier(Op op, Var bound, Formula body);

  static Formula forall(Var bound, Formula body) {
    return quantifier(Op::Forall, std::move(bound), std::move(body));
  }
  static Formula exists(Var bound, Formula body) {
    return quantifier(Op::Exists, std::move(bound), std::move(body));
  }

  Op op() const;
  // Atom operands; for quantifiers lhs() is the bound variable.
  const Var& lhs() const;
  const Var& rhs() const;
  const Var& bound() const { return lhs(); }
  // Children: body() for Not and quantifiers, left()/right() for binaries.
  const Formula& body() const;
  const Formula& left() const;
  const Formula& right() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const detail::Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  Op op;
  Var v1;
  Var v2;
  Formula c1;
  Formula c2;
};
}  // namespace detail

inline Formula make_and(Formula a, Formula b) {
  return Formula::binary(Op::And, std::move(a), std::move(b));
}
inline Formula make_or(Formula a, Formula b) {
  return Formula::binary(Op::Or, std::move(a), std::move(b));
}
inline Formula make_implies(Formula a, Formula b) {
  return Formula::binary(Op::Implies, std::move(a), std::move(b));
}
inline Formula make_iff(Formula a, Formula b) {
  return Formula::binary(Op::Iff, std::move(a), std::move(b));
}
inline Formula make_not(Formula a) { return Formula::negation(std::move(a)); }

/// Parses one formula of the grammar described in the README. The result is
/// normalized (see normalize()).
Formula parse(const std::string& text);

/// Renders a formula so that parse(pretty(f)) == f for normalized f.
std::string pretty(const Formula& f);

/// Alpha-renames so that no variable is bound twice and no variable occurs
/// both bound and free. Bound occurrences inherit the binder's declared type
/// when they carry none.
Formula normalize(const Formula& f);

/// Free variables (including `empty` constants), in order of first occurrence.
std::vector<Var> free_vars(const Formula& f);
/// Every variable occurrence (bound and free), deduplicated by name and type.
std::vector<Var> all_vars(const Formula& f);
std::set<std::string> var_names(const Formula& f);

int quantifier_depth(const Formula& f);
int atom_count(const Formula& f);
bool fully_typed(const Formula& f);
std::optional<int> max_type(const Formula& f);

/// Type-raising: every declared type incremented by `by`.
Formula raise(const Formula& phi, int by = 1);

/// Re-annotates type i as s[i]; s must be strictly increasing.
Formula translate_s(const Formula& phi, std::span<const int> s);

/// Sets the declared type of every variable by name.
template <class Assign>
Formula annotate(const Formula& phi, const Assign& type_of);

/// Universal closure over the free variables (excluding `empty` constants).
Formula universal_closure(const Formula& phi);

/// exists A. forall x. (x in A <-> phi)
Formula comprehension_instance(const Formula& phi, const Var& x, const Var& set);

/// Matches exists A. forall x. (x in A <-> phi) with A not occurring in phi.
bool is_comprehension_instance(const Formula& f);

class Sentence {
 public:
  Sentence(Formula formula, Mode mode);

  const Formula& formula() const { return formula_; }
  Mode mode() const { return mode_; }

 private:
  Formula formula_;
  Mode mode_;
};

/// phi <-> phi+
Sentence ambiguity_instance(const Sentence& phi);

namespace detail {
Formula map_vars(const Formula& phi, const std::function<Var(const Var&)>& fn);
}

template <class Assign>
Formula annotate(const Formula& phi, const Assign& type_of) {
  return detail::map_vars(phi, [&](const Var& v) {
    Var out = v;
    if (!v.is_empty_constant()) out.type = type_of(v.name);
    return out;
  });
}

}  // namespace nfw
