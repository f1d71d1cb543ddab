#include "nfw/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace nfw {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::MissingTypes: return "MissingTypes";
    case ErrorKind::TypeOutOfRange: return "TypeOutOfRange";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::Capture: return "CaptureError";
    case ErrorKind::NotASentence: return "NotASentence";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::SizeConstraintViolated: return "SizeConstraintViolated";
    case ErrorKind::MissingIndex: return "MissingIndex";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotABijection: return "NotABijection";
    case ErrorKind::NotLocallySmall: return "NotLocallySmall";
    case ErrorKind::UnbalancedLitter: return "UnbalancedLitter";
    case ErrorKind::NotStrong: return "NotStrong";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::TST: return "TST";
    case Mode::TSTU: return "TSTU";
    case Mode::TNT: return "TNT";
    case Mode::TTT: return "TTT";
  }
  return "?";
}

Mode mode_from_string(const std::string& text) {
  std::string up;
  for (char c : text) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "TST") return Mode::TST;
  if (up == "TSTU") return Mode::TSTU;
  if (up == "TNT") return Mode::TNT;
  if (up == "TTT") return Mode::TTT;
  throw Error(ErrorKind::InvalidInput, "unknown mode: " + text);
}

bool is_atomic(Op op) { return op == Op::Equal || op == Op::Member; }
bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}
bool is_quantifier(Op op) { return op == Op::Forall || op == Op::Exists; }

// --- construction and access ---

Formula Formula::equal(Var lhs, Var rhs) {
  return Formula(std::make_shared<const detail::Node>(
      detail::Node{Op::Equal, std::move(lhs), std::move(rhs), {}, {}}));
}

Formula Formula::member(Var lhs, Var rhs) {
  return Formula(std::make_shared<const detail::Node>(
      detail::Node{Op::Member, std::move(lhs), std::move(rhs), {}, {}}));
}

Formula Formula::negation(Formula body) {
  return Formula(std::make_shared<const detail::Node>(
      detail::Node{Op::Not, {}, {}, std::move(body), {}}));
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
  if (!is_binary(op)) throw Error(ErrorKind::InvalidInput, "not a binary connective");
  return Formula(std::make_shared<const detail::Node>(
      detail::Node{op, {}, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::quantifier(Op op, Var bound, Formula body) {
  if (!is_quantifier(op)) throw Error(ErrorKind::InvalidInput, "not a quantifier");
  return Formula(std::make_shared<const detail::Node>(
      detail::Node{op, std::move(bound), {}, std::move(body), {}}));
}

Op Formula::op() const { return node_->op; }
const Var& Formula::lhs() const { return node_->v1; }
const Var& Formula::rhs() const { return node_->v2; }
const Formula& Formula::body() const { return node_->c1; }
const Formula& Formula::left() const { return node_->c1; }
const Formula& Formula::right() const { return node_->c2; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  if (is_atomic(x.op)) return x.v1 == y.v1 && x.v2 == y.v2;
  if (is_quantifier(x.op)) return x.v1 == y.v1 && x.c1 == y.c1;
  if (x.op == Op::Not) return x.c1 == y.c1;
  return x.c1 == y.c1 && x.c2 == y.c2;
}

// --- pretty printing ---

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Forall:
    case Op::Exists: return 0;
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
  }
}

bool right_assoc(Op op) { return op == Op::Implies || op == Op::Iff; }

const char* connective(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    default: return " ? ";
  }
}

void print_var(std::string& out, const Var& v) {
  out += v.name;
  if (v.type) {
    out += '^';
    out += std::to_string(*v.type);
  }
}

void print(std::string& out, const Formula& f) {
  const Op op = f.op();
  if (is_atomic(op)) {
    print_var(out, f.lhs());
    out += op == Op::Equal ? " = " : " in ";
    print_var(out, f.rhs());
    return;
  }
  if (op == Op::Not) {
    out += '~';
    const Op child = f.body().op();
    bool paren = !(is_atomic(child) || child == Op::Not);
    if (paren) out += '(';
    print(out, f.body());
    if (paren) out += ')';
    return;
  }
  if (is_quantifier(op)) {
    out += op == Op::Forall ? "forall " : "exists ";
    print_var(out, f.bound());
    out += ". ";
    print(out, f.body());
    return;
  }
  const int p = precedence(op);
  const Op lop = f.left().op();
  const Op rop = f.right().op();
  bool lparen = is_quantifier(lop) || precedence(lop) < p ||
                (precedence(lop) == p && right_assoc(op));
  bool rparen = is_quantifier(rop) || precedence(rop) < p ||
                (precedence(rop) == p && !right_assoc(op));
  if (lparen) out += '(';
  print(out, f.left());
  if (lparen) out += ')';
  out += connective(op);
  if (rparen) out += '(';
  print(out, f.right());
  if (rparen) out += ')';
}

}  // namespace

std::string pretty(const Formula& f) {
  std::string out;
  print(out, f);
  return out;
}

// --- traversal helpers ---

namespace detail {

Formula map_vars(const Formula& phi, const std::function<Var(const Var&)>& fn) {
  const Op op = phi.op();
  if (op == Op::Equal) return Formula::equal(fn(phi.lhs()), fn(phi.rhs()));
  if (op == Op::Member) return Formula::member(fn(phi.lhs()), fn(phi.rhs()));
  if (op == Op::Not) return Formula::negation(map_vars(phi.body(), fn));
  if (is_quantifier(op))
    return Formula::quantifier(op, fn(phi.bound()), map_vars(phi.body(), fn));
  return Formula::binary(op, map_vars(phi.left(), fn), map_vars(phi.right(), fn));
}

}  // namespace detail

namespace {

template <class Fn>
void visit_vars(const Formula& f, Fn&& fn) {
  const Op op = f.op();
  if (is_atomic(op)) {
    fn(f.lhs());
    fn(f.rhs());
  } else if (op == Op::Not) {
    visit_vars(f.body(), fn);
  } else if (is_quantifier(op)) {
    fn(f.bound());
    visit_vars(f.body(), fn);
  } else {
    visit_vars(f.left(), fn);
    visit_vars(f.right(), fn);
  }
}

void collect_free(const Formula& f, std::vector<std::string>& scope,
                  std::vector<Var>& out) {
  const Op op = f.op();
  auto note = [&](const Var& v) {
    if (std::find(scope.begin(), scope.end(), v.name) != scope.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (is_atomic(op)) {
    note(f.lhs());
    note(f.rhs());
  } else if (op == Op::Not) {
    collect_free(f.body(), scope, out);
  } else if (is_quantifier(op)) {
    scope.push_back(f.bound().name);
    collect_free(f.body(), scope, out);
    scope.pop_back();
  } else {
    collect_free(f.left(), scope, out);
    collect_free(f.right(), scope, out);
  }
}

}  // namespace

std::vector<Var> free_vars(const Formula& f) {
  std::vector<std::string> scope;
  std::vector<Var> out;
  collect_free(f, scope, out);
  return out;
}

std::vector<Var> all_vars(const Formula& f) {
  std::vector<Var> out;
  visit_vars(f, [&](const Var& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  });
  return out;
}

std::set<std::string> var_names(const Formula& f) {
  std::set<std::string> out;
  visit_vars(f, [&](const Var& v) { out.insert(v.name); });
  return out;
}

int quantifier_depth(const Formula& f) {
  const Op op = f.op();
  if (is_atomic(op)) return 0;
  if (op == Op::Not) return quantifier_depth(f.body());
  if (is_quantifier(op)) return 1 + quantifier_depth(f.body());
  return std::max(quantifier_depth(f.left()), quantifier_depth(f.right()));
}

int atom_count(const Formula& f) {
  const Op op = f.op();
  if (is_atomic(op)) return 1;
  if (op == Op::Not || is_quantifier(op)) return atom_count(f.body());
  return atom_count(f.left()) + atom_count(f.right());
}

bool fully_typed(const Formula& f) {
  bool ok = true;
  visit_vars(f, [&](const Var& v) { ok = ok && v.type.has_value(); });
  return ok;
}

std::optional<int> max_type(const Formula& f) {
  std::optional<int> best;
  visit_vars(f, [&](const Var& v) {
    if (v.type && (!best || *v.type > *best)) best = v.type;
  });
  return best;
}

// --- normalization ---

namespace {

std::string base_name(const std::string& name) {
  auto pos = name.rfind('_');
  if (pos == std::string::npos || pos == 0 || pos + 1 == name.size()) return name;
  for (std::size_t i = pos + 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
  return name.substr(0, pos);
}

struct Normalizer {
  // Pass 1 results: the resolved declared type for each binder (pre-order id)
  // and for each free name.
  std::vector<std::optional<int>> binder_type;
  std::map<std::string, std::optional<int>> free_type;
  std::set<std::string> used;
  std::set<std::string> free_names;

  struct Scope {
    std::string name;
    int id;
    std::string renamed;
  };

  static void merge(std::optional<int>& slot, const std::optional<int>& t,
                    const std::string& name) {
    if (!t) return;
    if (slot && *slot != *t)
      throw Error(ErrorKind::InvalidInput,
                  "conflicting type annotations for variable '" + name + "'");
    slot = t;
  }

  void resolve(const Formula& f, std::vector<Scope>& scope) {
    auto note = [&](const Var& v) {
      used.insert(v.name);
      if (v.is_empty_constant()) return;
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->name == v.name) {
          merge(binder_type[it->id], v.type, v.name);
          return;
        }
      }
      free_names.insert(v.name);
      merge(free_type[v.name], v.type, v.name);
    };
    const Op op = f.op();
    if (is_atomic(op)) {
      note(f.lhs());
      note(f.rhs());
    } else if (op == Op::Not) {
      resolve(f.body(), scope);
    } else if (is_quantifier(op)) {
      if (f.bound().is_empty_constant())
        throw Error(ErrorKind::InvalidInput, "the name 'empty' is reserved");
      used.insert(f.bound().name);
      int id = static_cast<int>(binder_type.size());
      binder_type.push_back(f.bound().type);
      scope.push_back({f.bound().name, id, {}});
      resolve(f.body(), scope);
      scope.pop_back();
    } else {
      resolve(f.left(), scope);
      resolve(f.right(), scope);
    }
  }

  int next_binder = 0;
  std::set<std::string> taken_binders;

  std::string fresh(const std::string& name) {
    const std::string base = base_name(name);
    for (int k = 1;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (!used.count(cand)) {
        used.insert(cand);
        return cand;
      }
    }
  }

  Formula rebuild(const Formula& f, std::vector<Scope>& scope) {
    auto map = [&](const Var& v) -> Var {
      if (v.is_empty_constant()) return v;
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->name == v.name) return Var{it->renamed, binder_type[it->id]};
      return Var{v.name, free_type[v.name]};
    };
    const Op op = f.op();
    if (op == Op::Equal) return Formula::equal(map(f.lhs()), map(f.rhs()));
    if (op == Op::Member) return Formula::member(map(f.lhs()), map(f.rhs()));
    if (op == Op::Not) return Formula::negation(rebuild(f.body(), scope));
    if (is_quantifier(op)) {
      int id = next_binder++;
      const std::string& name = f.bound().name;
      std::string renamed = name;
      if (free_names.count(name) || taken_binders.count(name)) renamed = fresh(name);
      taken_binders.insert(renamed);
      scope.push_back({name, id, renamed});
      Formula body = rebuild(f.body(), scope);
      scope.pop_back();
      return Formula::quantifier(op, Var{renamed, binder_type[id]}, body);
    }
    Formula l = rebuild(f.left(), scope);
    Formula r = rebuild(f.right(), scope);
    return Formula::binary(op, l, r);
  }
};

}  // namespace

Formula normalize(const Formula& f) {
  Normalizer n;
  std::vector<Normalizer::Scope> scope;
  n.resolve(f, scope);
  return n.rebuild(f, scope);
}

// --- transformations ---

Formula raise(const Formula& phi, int by) {
  return detail::map_vars(phi, [by](const Var& v) {
    if (!v.type)
      throw Error(ErrorKind::MissingTypes,
                  "variable '" + v.name + "' has no declared type");
    return Var{v.name, *v.type + by};
  });
}

Formula translate_s(const Formula& phi, std::span<const int> s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] <= s[i - 1])
      throw Error(ErrorKind::NotIncreasing, "type sequence is not strictly increasing");
  return detail::map_vars(phi, [s](const Var& v) {
    if (!v.type)
      throw Error(ErrorKind::MissingTypes,
                  "variable '" + v.name + "' has no declared type");
    if (*v.type < 0 || static_cast<std::size_t>(*v.type) >= s.size())
      throw Error(ErrorKind::TypeOutOfRange,
                  "type " + std::to_string(*v.type) + " of '" + v.name +
                      "' is outside the sequence");
    return Var{v.name, s[static_cast<std::size_t>(*v.type)]};
  });
}

Formula universal_closure(const Formula& phi) {
  auto fv = free_vars(phi);
  Formula out = phi;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it)
    if (!it->is_empty_constant()) out = Formula::forall(*it, out);
  return out;
}

Formula comprehension_instance(const Formula& phi, const Var& x, const Var& set) {
  if (var_names(phi).count(set.name))
    throw Error(ErrorKind::Capture,
                "set variable '" + set.name + "' occurs in the formula");
  if (set.name == x.name)
    throw Error(ErrorKind::Capture, "set variable coincides with the element variable");
  Formula body = Formula::forall(x, make_iff(Formula::member(x, set), phi));
  return normalize(Formula::exists(set, body));
}

bool is_comprehension_instance(const Formula& f) {
  if (f.op() != Op::Exists) return false;
  const Var& set = f.bound();
  const Formula& inner = f.body();
  if (inner.op() != Op::Forall) return false;
  const Var& x = inner.bound();
  const Formula& iff = inner.body();
  if (iff.op() != Op::Iff || iff.left().op() != Op::Member) return false;
  if (iff.left().lhs().name != x.name || iff.left().rhs().name != set.name) return false;
  if (iff.left().lhs().type != x.type || iff.left().rhs().type != set.type) return false;
  return var_names(iff.right()).count(set.name) == 0;
}

Sentence::Sentence(Formula formula, Mode mode)
    : formula_(std::move(formula)), mode_(mode) {
  for (const Var& v : free_vars(formula_))
    if (!v.is_empty_constant())
      throw Error(ErrorKind::NotASentence,
                  "free variable '" + v.name + "' in sentence " + pretty(formula_));
}

Sentence ambiguity_instance(const Sentence& phi) {
  return Sentence(normalize(make_iff(phi.formula(), raise(phi.formula()))),
                  phi.mode());
}

}  // namespace nfw
