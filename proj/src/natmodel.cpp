#include "nfw/natmodel.hpp"

#include <algorithm>
#include <unordered_map>

#include "nfw/error.hpp"
#include "nfw/stratify.hpp"

namespace nfw {

std::uint64_t Structure::empty_value(int type) const {
  throw Error(ErrorKind::InvalidInput,
              "`empty` has no interpretation at type " + std::to_string(type));
}

// ---------------------------------------------------------------------------
// Evaluator

namespace {

constexpr int kNone = -1;

struct Node {
  Op op;
  int slot1 = kNone, slot2 = kNone;  // atoms: operands; quantifiers: bound slot
  int type1 = 0, type2 = 0;          // atoms: operand types; quantifiers: bound type
  int child1 = kNone, child2 = kNone;
  std::uint64_t domain = 0;
  bool homogeneous = false;
  std::vector<int> context;  // slots whose values a homogeneous witness must avoid
};

class Compiled {
 public:
  Compiled(const Structure& st, const Formula& phi, const Assignment& env,
           const EvalOptions& opts)
      : st_(st), opts_(opts) {
    root_ = compile(phi);
    values_.assign(slots_.size(), 0);
    for (const auto& [key, slot] : slots_) {
      const auto& info = slot_info_[static_cast<std::size_t>(slot)];
      if (info.empty) {
        values_[static_cast<std::size_t>(slot)] = st_.empty_value(info.type);
        continue;
      }
      if (info.bound) continue;
      auto it = env.find(key);
      if (it == env.end())
        throw Error(ErrorKind::InvalidInput, "free variable '" + key + "' is not assigned");
      if (it->second >= st_.domain_size(info.type))
        throw Error(ErrorKind::InvalidInput, "value of '" + key + "' is outside its domain");
      values_[static_cast<std::size_t>(slot)] = it->second;
    }
  }

  bool run() { return eval(root_); }

 private:
  struct SlotInfo {
    int type;
    bool bound;
    bool empty;
  };

  int type_of(const Var& v) {
    if (!v.type)
      throw Error(ErrorKind::MissingTypes, "variable '" + v.name + "' has no declared type");
    if (*v.type < 0 || *v.type >= st_.type_count())
      throw Error(ErrorKind::TypeOutOfRange,
                  "type " + std::to_string(*v.type) + " of '" + v.name +
                      "' is outside 0.." + std::to_string(st_.type_count() - 1));
    return *v.type;
  }

  int slot_of(const Var& v, bool binder) {
    const int t = type_of(v);
    const std::string key = constraint_key(v);
    auto it = slots_.find(key);
    if (it != slots_.end()) {
      if (binder) slot_info_[static_cast<std::size_t>(it->second)].bound = true;
      return it->second;
    }
    const int slot = static_cast<int>(slot_info_.size());
    slots_.emplace(key, slot);
    slot_info_.push_back({t, binder, v.is_empty_constant()});
    return slot;
  }

  int compile(const Formula& f) {
    Node n;
    n.op = f.op();
    if (is_atomic(n.op)) {
      n.slot1 = slot_of(f.lhs(), false);
      n.slot2 = slot_of(f.rhs(), false);
      n.type1 = *f.lhs().type;
      n.type2 = *f.rhs().type;
    } else if (n.op == Op::Not) {
      n.child1 = compile(f.body());
    } else if (is_quantifier(n.op)) {
      n.slot1 = slot_of(f.bound(), true);
      n.type1 = *f.bound().type;
      n.domain = st_.domain_size(n.type1);
      n.child1 = compile(f.body());
      n.homogeneous = opts_.symmetry && n.type1 == 0 && st_.type0_homogeneous();
      if (n.homogeneous) {
        for (const Var& v : free_vars(f.body())) {
          if (v.name == f.bound().name || v.is_empty_constant()) continue;
          if (type_of(v) != 0) {
            n.homogeneous = false;
            break;
          }
          n.context.push_back(slot_of(v, false));
        }
      }
      if (!n.homogeneous && n.domain > opts_.budget)
        throw Error(ErrorKind::BudgetExceeded,
                    "quantifier over type " + std::to_string(n.type1) + " ranges over " +
                        std::to_string(n.domain) + " elements (budget " +
                        std::to_string(opts_.budget) + ")");
    } else {
      n.child1 = compile(f.left());
      n.child2 = compile(f.right());
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool eval(int idx) {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    auto val = [&](int slot) { return values_[static_cast<std::size_t>(slot)]; };
    switch (n.op) {
      case Op::Equal:
        return val(n.slot1) == val(n.slot2);
      case Op::Member:
        return st_.member(n.type1, val(n.slot1), n.type2, val(n.slot2));
      case Op::Not:
        return !eval(n.child1);
      case Op::And:
        return eval(n.child1) && eval(n.child2);
      case Op::Or:
        return eval(n.child1) || eval(n.child2);
      case Op::Implies:
        return !eval(n.child1) || eval(n.child2);
      case Op::Iff:
        return eval(n.child1) == eval(n.child2);
      case Op::Forall:
      case Op::Exists:
        return quantify(n);
    }
    return false;
  }

  bool quantify(const Node& n) {
    const bool universal = n.op == Op::Forall;
    auto& slot = values_[static_cast<std::size_t>(n.slot1)];
    const std::uint64_t saved = slot;
    bool result = universal;
    auto visit = [&](std::uint64_t v) {
      slot = v;
      if (eval(n.child1) != universal) {
        result = !universal;
        return false;
      }
      return true;
    };
    if (n.homogeneous) {
      // Values already in play, plus one fresh representative.
      std::vector<std::uint64_t> seen;
      for (int s : n.context) seen.push_back(values_[static_cast<std::size_t>(s)]);
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      std::uint64_t fresh = 0;
      for (std::uint64_t v : seen)
        if (v == fresh) ++fresh;
      bool go = true;
      for (std::uint64_t v : seen) {
        if (!(go = visit(v))) break;
      }
      if (go && fresh < n.domain) visit(fresh);
    } else {
      for (std::uint64_t v = 0; v < n.domain; ++v)
        if (!visit(v)) break;
    }
    slot = saved;
    return result;
  }

  const Structure& st_;
  EvalOptions opts_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> slots_;
  std::vector<SlotInfo> slot_info_;
  std::vector<std::uint64_t> values_;
  int root_ = kNone;
};

}  // namespace

bool evaluate(const Structure& st, const Formula& phi, const Assignment& env,
              const EvalOptions& opts) {
  Compiled c(st, normalize(phi), env, opts);
  return c.run();
}

// ---------------------------------------------------------------------------
// Natural models

std::uint64_t NaturalModel::domain_size(int type) const {
  return sizes_.at(static_cast<std::size_t>(type));
}

bool NaturalModel::member(int tx, std::uint64_t x, int ty, std::uint64_t y) const {
  if (ty != tx + 1 || x >= 64) return false;
  return (y >> x) & 1U;
}

std::vector<std::uint64_t> NaturalModel::members(int level, std::uint64_t y) const {
  std::vector<std::uint64_t> out;
  const std::uint64_t below = sizes_.at(static_cast<std::size_t>(level - 1));
  for (std::uint64_t x = 0; x < below && x < 64; ++x)
    if ((y >> x) & 1U) out.push_back(x);
  return out;
}

NaturalModel build_default(std::uint64_t m, int n, std::uint64_t budget,
                           std::vector<std::string> tags) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "depth must be at least 1");
  if (!tags.empty() && tags.size() != m)
    throw Error(ErrorKind::InvalidInput, "expected one tag per atom");
  NaturalModel model;
  std::uint64_t total = 0;
  std::uint64_t size = m;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      // Elements of level i are bit-vectors over level i-1.
      if (size >= 63)
        throw Error(ErrorKind::BudgetExceeded,
                    "level " + std::to_string(i) + " has 2^" + std::to_string(size) +
                        " elements");
      size = std::uint64_t{1} << size;
    }
    total += size;
    if (total > budget)
      throw Error(ErrorKind::BudgetExceeded, "natural model needs " + std::to_string(total) +
                                                 "+ elements (budget " +
                                                 std::to_string(budget) + ")");
    model.sizes_.push_back(size);
  }
  if (tags.empty())
    for (std::uint64_t i = 0; i < m; ++i) tags.push_back("a" + std::to_string(i));
  model.tags_ = std::move(tags);
  return model;
}

bool eval(const NaturalModel& model, const Sentence& phi, const EvalOptions& opts) {
  if (auto t = max_type(phi.formula()); t && *t >= model.depth())
    throw Error(ErrorKind::TypeOutOfRange, "sentence uses type " + std::to_string(*t) +
                                               " but the model has depth " +
                                               std::to_string(model.depth()));
  if (!check_typed(phi.formula(), Mode::TST))
    throw Error(ErrorKind::InvalidInput, "sentence is not TST-typed: " + pretty(phi.formula()));
  return evaluate(model, phi.formula(), {}, opts);
}

LevelBijection iso_models(const NaturalModel& a, const NaturalModel& b,
                          std::optional<std::vector<std::uint64_t>> base,
                          std::uint64_t budget) {
  if (a.base_size() != b.base_size() || a.depth() != b.depth())
    throw Error(ErrorKind::SizeMismatch, "models differ in base size or depth");
  const auto& sizes = a.level_sizes();
  std::uint64_t total = 0;
  for (auto s : sizes) total += s;
  if (total > budget) throw Error(ErrorKind::BudgetExceeded, "levels too large to tabulate");

  LevelBijection out;
  std::vector<std::uint64_t> level0(a.base_size());
  if (base) {
    if (base->size() != a.base_size())
      throw Error(ErrorKind::SizeMismatch, "base bijection has the wrong length");
    std::vector<bool> hit(a.base_size(), false);
    for (auto v : *base) {
      if (v >= a.base_size() || hit[v])
        throw Error(ErrorKind::NotABijection, "base map is not a bijection");
      hit[v] = true;
    }
    level0 = *base;
  } else {
    for (std::uint64_t i = 0; i < level0.size(); ++i) level0[i] = i;
  }
  out.maps.push_back(std::move(level0));
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    const auto& prev = out.maps.back();
    std::vector<std::uint64_t> cur(sizes[i]);
    for (std::uint64_t y = 0; y < sizes[i]; ++y) {
      std::uint64_t img = 0;
      for (std::uint64_t x = 0; x < sizes[i - 1]; ++x)
        if ((y >> x) & 1U) img |= std::uint64_t{1} << prev[x];
      cur[y] = img;
    }
    out.maps.push_back(std::move(cur));
  }
  return out;
}

// ---------------------------------------------------------------------------
// TSTU families

namespace {
// Is r < 2^bits?
bool below_power(std::uint64_t r, std::uint64_t bits) {
  return bits >= 64 || r < (std::uint64_t{1} << bits);
}
}  // namespace

TstuFamily build_tstu_family(std::vector<std::uint64_t> sizes) {
  for (std::size_t i = 0; i < sizes.size(); ++i)
    for (std::size_t j = i + 1; j < sizes.size(); ++j) {
      const bool ok = sizes[i] < 64 && sizes[j] >= (std::uint64_t{1} << sizes[i]);
      if (!ok)
        throw Error(ErrorKind::SizeConstraintViolated,
                    "level " + std::to_string(j) + " (size " + std::to_string(sizes[j]) +
                        ") is smaller than the power set of level " + std::to_string(i) +
                        " (size 2^" + std::to_string(sizes[i]) + ")");
    }
  TstuFamily f;
  f.sizes_ = std::move(sizes);
  return f;
}

bool TstuFamily::in_range(int i, int j, std::uint64_t r) const {
  return i < j && below_power(r, size(i)) && r < size(j);
}

bool TstuFamily::member(int i, std::uint64_t x, int j, std::uint64_t y) const {
  return in_range(i, j, y) && x < 64 && ((y >> x) & 1U);
}

std::uint64_t TstuFamily::empty_image(int, int) const { return 0; }

std::optional<std::uint64_t> TstuFamily::some_atom(int j) const {
  // Ranges grow with i, so the last predecessor decides.
  if (j == 0) return size(0) > 0 ? std::optional<std::uint64_t>{0} : std::nullopt;
  const std::uint64_t bits = size(j - 1);
  if (bits >= 64) return std::nullopt;
  const std::uint64_t first = std::uint64_t{1} << bits;
  if (first < size(j)) return first;
  return std::nullopt;
}

Interpretation::Interpretation(const TstuFamily& fam, std::vector<int> seq)
    : family(&fam), s(std::move(seq)) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= fam.lambda_fin())
      throw Error(ErrorKind::TypeOutOfRange,
                  "index " + std::to_string(s[i]) + " is outside the family");
    if (i > 0 && s[i] <= s[i - 1])
      throw Error(ErrorKind::NotIncreasing, "interpretation sequence must increase");
  }
}

FamilyView::FamilyView(const Interpretation& interp, bool tangled)
    : interp_(interp), tangled_(tangled) {}

std::uint64_t FamilyView::domain_size(int type) const {
  return interp_.family->size(interp_.s.at(static_cast<std::size_t>(type)));
}

bool FamilyView::member(int tx, std::uint64_t x, int ty, std::uint64_t y) const {
  if (tangled_ ? ty <= tx : ty != tx + 1) return false;
  const auto& s = interp_.s;
  return interp_.family->member(s[static_cast<std::size_t>(tx)], x,
                                s[static_cast<std::size_t>(ty)], y);
}

std::uint64_t FamilyView::empty_value(int type) const {
  if (type < 1)
    throw Error(ErrorKind::InvalidInput, "`empty` is only available at positive types");
  const auto& s = interp_.s;
  return interp_.family->empty_image(s[static_cast<std::size_t>(type - 1)],
                                     s[static_cast<std::size_t>(type)]);
}

namespace {
void check_types_fit(const Interpretation& interp, const Formula& phi) {
  if (auto t = max_type(phi); t && *t >= static_cast<int>(interp.s.size()))
    throw Error(ErrorKind::TypeOutOfRange,
                "formula uses type " + std::to_string(*t) + " but s has length " +
                    std::to_string(interp.s.size()));
}
}  // namespace

bool eval_tstu(const Interpretation& interp, const Formula& phi, const Assignment& env,
               const EvalOptions& opts) {
  check_types_fit(interp, phi);
  if (!check_typed(phi, Mode::TSTU))
    throw Error(ErrorKind::InvalidInput, "formula is not TSTU-typed: " + pretty(phi));
  return evaluate(FamilyView(interp, false), phi, env, opts);
}

bool eval_tstu(const Interpretation& interp, const Sentence& phi, const EvalOptions& opts) {
  return eval_tstu(interp, phi.formula(), {}, opts);
}

bool eval_ttt(const Interpretation& interp, const Formula& phi, const EvalOptions& opts) {
  check_types_fit(interp, phi);
  if (!check_typed(phi, Mode::TTT))
    throw Error(ErrorKind::InvalidInput, "formula is not TTT-typed: " + pretty(phi));
  return evaluate(FamilyView(interp, true), phi, {}, opts);
}

}  // namespace nfw
