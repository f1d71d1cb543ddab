#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "nfw/formula.hpp"

namespace nfw {

/// Variable name -> integer type. `empty` constants are keyed as "empty^i".
struct Stratification {
  std::map<std::string, int> assignment;
  friend bool operator==(const Stratification&, const Stratification&) = default;
};

/// One atomic subformula on a constraint cycle, traversed forward (+1) or
/// backward (-1). Its contribution to the cycle sum is sign * offset.
struct CycleStep {
  Formula atom;
  int sign;
  int offset;
};

struct NotStratified {
  std::vector<CycleStep> cycle;
  int offset_sum() const;
};

using StratifyResult = std::variant<Stratification, NotStratified>;

/// type(to) - type(from) = offset, offset in {0, 1}.
struct ConstraintEdge {
  std::string from;
  std::string to;
  int offset;
  Formula atom;
};

struct ConstraintGraph {
  std::vector<std::string> nodes;
  std::vector<ConstraintEdge> edges;

  static ConstraintGraph from(const Formula& phi);
};

/// Key under which a variable participates in the constraint system.
std::string constraint_key(const Var& v);

/// Solves the constraint system of phi. The returned assignment is
/// canonical: each connected component has minimum type 0.
StratifyResult infer(const Formula& phi, Mode mode = Mode::TST);

bool is_stratified(const Formula& phi);

/// Checks declared types against the typing discipline of the mode.
bool check_typed(const Formula& phi, Mode mode);

/// Annotates phi with an inferred stratification.
Formula apply_stratification(const Formula& phi, const Stratification& s);

/// Verdict of infer, cross-checked against the typing discipline: a success is
/// re-typed and checked, a failure's witness cycle must have nonzero sum.
/// Throws std::logic_error if the two disagree.
bool stratified_equiv_check(const Formula& phi);

}  // namespace nfw
