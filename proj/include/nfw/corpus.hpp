#pragma once

#include <vector>

#include "nfw/formula.hpp"

namespace nfw {

/// Deterministic finite sentence family: every prenex TST sentence with at
/// most `max_qdepth` quantified variables (two names, "x" and "y"), all types
/// below `type_limit`, whose matrix is a literal or a binary combination of
/// two literals. Duplicates are removed; order is stable.
std::vector<Formula> sentence_family(int type_limit = 3, int max_qdepth = 2);

/// Universally closed comprehension instances
///   forall p. exists A^{t+1}. forall x^t. (x in A <-> phi)
/// where phi has quantifier depth <= max_qdepth, uses x plus at most two
/// further variables (bound or the parameter p), and every matrix literal
/// set mentions x. All types are below `type_limit`.
std::vector<Formula> comprehension_family(int type_limit = 3, int max_qdepth = 2);

/// forall a^{t+1} b^{t+1}. (forall z^t. z in a <-> z in b) -> a = b
Formula extensionality_axiom(int type);

/// forall a^{t+1} b^{t+1} z^t. z in a -> (a = b <-> forall w^t. w in a <-> w in b)
Formula weak_extensionality_axiom(int type);

}  // namespace nfw
