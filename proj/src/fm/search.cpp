#include "nfw/fm/search.hpp"

#include <map>
#include <numeric>

#include "nfw/error.hpp"

namespace nfw::fm {

namespace {

class Searcher {
 public:
  Searcher(const FMUniverse& u, const PermConstraints& c, std::uint64_t budget,
           const PruneHook& prune, const std::function<bool(const Perm&)>& accept)
      : u_(u), budget_(budget), prune_(prune), accept_(accept) {
    const auto n = static_cast<std::size_t>(u.atom_count());
    forced_ = c.forced.empty() ? std::vector<int>(n, -1) : c.forced;
    if (forced_.size() != n) throw Error(ErrorKind::InvalidInput, "forced map has the wrong size");
    forced_inv_.assign(n, -1);
    for (std::size_t x = 0; x < n; ++x) {
      const int y = forced_[x];
      if (y < 0) continue;
      if (y >= static_cast<int>(n) || forced_inv_[static_cast<std::size_t>(y)] >= 0 ||
          u.group_of(static_cast<int>(x)) != u.group_of(y))
        feasible_ = false;
      else
        forced_inv_[static_cast<std::size_t>(y)] = static_cast<int>(x);
    }
    if (c.set_maps.size() > 64) throw Error(ErrorKind::InvalidInput, "at most 64 set constraints");
    sig_a_.assign(n, 0);
    sig_b_.assign(n, 0);
    for (std::size_t i = 0; i < c.set_maps.size(); ++i) {
      for (int a : c.set_maps[i].first.members()) sig_a_[static_cast<std::size_t>(a)] |= 1ULL << i;
      for (int b : c.set_maps[i].second.members()) sig_b_[static_cast<std::size_t>(b)] |= 1ULL << i;
    }
    // Each signature class must have equal size on both sides, per clan.
    std::map<std::pair<int, std::uint64_t>, int> balance;
    for (std::size_t a = 0; a < n; ++a) {
      ++balance[{u.group_of(static_cast<int>(a)), sig_a_[a]}];
      --balance[{u.group_of(static_cast<int>(a)), sig_b_[a]}];
    }
    for (const auto& [key, v] : balance)
      if (v != 0) feasible_ = false;
    for (std::size_t x = 0; x < n; ++x)
      if (forced_[x] >= 0 && sig_a_[x] != sig_b_[static_cast<std::size_t>(forced_[x])]) feasible_ = false;

    std::vector<bool> placed(n, false);
    for (int a : c.first)
      if (!placed[static_cast<std::size_t>(a)]) {
        order_.push_back(a);
        placed[static_cast<std::size_t>(a)] = true;
      }
    auto push_group = [&](int g) {
      for (int a : u.group_members(g))
        if (!placed[static_cast<std::size_t>(a)]) {
          order_.push_back(a);
          placed[static_cast<std::size_t>(a)] = true;
        }
    };
    push_group(kIrregular);
    push_group(0);
    if (u.stages() == 2) push_group(1);

    img_.assign(n, -1);
    used_.assign(n, false);
    const auto nl = static_cast<std::size_t>(u.litter_count());
    target_.assign(nl, -1);
    targeted_by_.assign(nl, -1);
    out_.assign(nl, 0);
    unassigned_.assign(nl, u.params().k);
    free_.assign(nl, u.params().k);
    children_.assign(n, -1);
    for (int l = 0; l < u.litter_count(); ++l) {
      children_[static_cast<std::size_t>(u.litter(l).parent)] = l;
      litter_atoms_.push_back(u.litter(l).atoms.members());
    }
    for (int g : {kIrregular, 0, 1})
      if (g != 1 || u.stages() == 2) group_atoms_[g] = u.group_members(g);
  }

  SearchOutcome run() {
    SearchOutcome out;
    if (feasible_) go(0);
    out.perm = found_;
    out.complete = !exhausted_;
    out.nodes = nodes_;
    return out;
  }

 private:
  int litter_of(int x) const { return u_.atom(x).litter; }

  bool capacity_ok(int l) const {
    const int m = target_[static_cast<std::size_t>(l)];
    if (m < 0) return true;
    const int slack = u_.max_outflow() - out_[static_cast<std::size_t>(l)];
    return unassigned_[static_cast<std::size_t>(l)] - slack <= free_[static_cast<std::size_t>(m)];
  }

  // Assigns x -> y; returns false (after recording) if a constraint breaks.
  // Undo information is pushed regardless.
  struct Undo {
    int x;
    int y;
    int new_target_litter;  // litter whose target got fixed by this step, or -1
    int out_delta;          // added to out_[litter of x]
  };

  bool assign(int x, int y, Undo& undo) {
    undo = {x, y, -1, 0};
    img_[static_cast<std::size_t>(x)] = y;
    used_[static_cast<std::size_t>(y)] = true;
    bool ok = true;
    const int lx = litter_of(x);
    const int ly = litter_of(y);
    if (lx >= 0) {
      --unassigned_[static_cast<std::size_t>(lx)];
      const int m = target_[static_cast<std::size_t>(lx)];
      if (m >= 0 && ly != m) {
        undo.out_delta = 1;
        ++out_[static_cast<std::size_t>(lx)];
      }
    }
    if (ly >= 0) --free_[static_cast<std::size_t>(ly)];
    // x parents a litter: its target is now known.
    if (const int l = children_[static_cast<std::size_t>(x)]; l >= 0) {
      const int m = *u_.litter_with_parent(y);
      target_[static_cast<std::size_t>(l)] = m;
      targeted_by_[static_cast<std::size_t>(m)] = l;
      undo.new_target_litter = l;
      int out = 0;
      for (int a : litter_atoms_[static_cast<std::size_t>(l)]) {
        const int b = img_[static_cast<std::size_t>(a)];
        if (b >= 0 && litter_of(b) != m) ++out;
      }
      out_[static_cast<std::size_t>(l)] = out;
      ok = ok && out <= u_.max_outflow() && capacity_ok(l);
    }
    if (lx >= 0) ok = ok && out_[static_cast<std::size_t>(lx)] <= u_.max_outflow() && capacity_ok(lx);
    if (ly >= 0 && targeted_by_[static_cast<std::size_t>(ly)] >= 0)
      ok = ok && capacity_ok(targeted_by_[static_cast<std::size_t>(ly)]);
    return ok;
  }

  void unassign(const Undo& undo) {
    const int x = undo.x, y = undo.y;
    const int lx = litter_of(x);
    const int ly = litter_of(y);
    if (undo.new_target_litter >= 0) {
      const int l = undo.new_target_litter;
      targeted_by_[static_cast<std::size_t>(target_[static_cast<std::size_t>(l)])] = -1;
      target_[static_cast<std::size_t>(l)] = -1;
      out_[static_cast<std::size_t>(l)] = 0;
    }
    if (lx >= 0) {
      ++unassigned_[static_cast<std::size_t>(lx)];
      out_[static_cast<std::size_t>(lx)] -= undo.out_delta;
    }
    if (ly >= 0) ++free_[static_cast<std::size_t>(ly)];
    img_[static_cast<std::size_t>(x)] = -1;
    used_[static_cast<std::size_t>(y)] = false;
  }

  void go(std::size_t i) {
    if (found_ || exhausted_) return;
    if (i == order_.size()) {
      if (!accept_ || accept_(img_)) found_ = img_;
      return;
    }
    const int x = order_[i];
    const int fx = forced_[static_cast<std::size_t>(x)];
    auto try_y = [&](int y) {
      if (found_ || exhausted_) return;
      if (used_[static_cast<std::size_t>(y)]) return;
      const int fi = forced_inv_[static_cast<std::size_t>(y)];
      if (fi >= 0 && fi != x) return;
      if (sig_a_[static_cast<std::size_t>(x)] != sig_b_[static_cast<std::size_t>(y)]) return;
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return;
      }
      Undo undo;
      const bool ok = assign(x, y, undo);
      if (ok && (!prune_ || prune_(img_))) go(i + 1);
      unassign(undo);
    };
    if (fx >= 0) {
      try_y(fx);
      return;
    }
    const int lx = litter_of(x);
    const int m = lx >= 0 ? target_[static_cast<std::size_t>(lx)] : -1;
    if (m >= 0) {
      for (int y : litter_atoms_[static_cast<std::size_t>(m)]) try_y(y);
      if (out_[static_cast<std::size_t>(lx)] >= u_.max_outflow()) return;
      for (int y : group_atoms_.at(u_.group_of(x)))
        if (litter_of(y) != m) try_y(y);
    } else {
      for (int y : group_atoms_.at(u_.group_of(x))) try_y(y);
    }
  }

  const FMUniverse& u_;
  std::uint64_t budget_;
  const PruneHook& prune_;
  const std::function<bool(const Perm&)>& accept_;
  bool feasible_ = true;
  std::vector<int> forced_, forced_inv_;
  std::vector<std::uint64_t> sig_a_, sig_b_;
  std::vector<int> order_;
  std::vector<int> img_;
  std::vector<bool> used_;
  std::vector<int> target_, targeted_by_, out_, unassigned_, free_;
  std::vector<int> children_;
  std::vector<std::vector<int>> litter_atoms_;
  std::map<int, std::vector<int>> group_atoms_;
  std::optional<Perm> found_;
  bool exhausted_ = false;
  std::uint64_t nodes_ = 0;
};

int find(std::vector<int>& uf, int a) {
  while (uf[static_cast<std::size_t>(a)] != a) {
    uf[static_cast<std::size_t>(a)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(a)])];
    a = uf[static_cast<std::size_t>(a)];
  }
  return a;
}

void unite(std::vector<int>& uf, int a, int b) {
  a = find(uf, a);
  b = find(uf, b);
  if (a == b) return;
  if (a < b) std::swap(a, b);
  uf[static_cast<std::size_t>(a)] = b;
}

}  // namespace

SearchOutcome find_allowable(const FMUniverse& u, const PermConstraints& c, std::uint64_t budget,
                             const PruneHook& prune,
                             const std::function<bool(const Perm&)>& accept) {
  return Searcher(u, c, budget, prune, accept).run();
}

std::vector<int> constrained_components(const FMUniverse& u, const PermConstraints& c,
                                        std::uint64_t budget, std::vector<Perm>* found) {
  const int n = u.atom_count();
  std::vector<int> uf(static_cast<std::size_t>(n));
  std::iota(uf.begin(), uf.end(), 0);
  std::vector<int> base = c.forced.empty() ? std::vector<int>(static_cast<std::size_t>(n), -1) : c.forced;
  std::vector<int> base_inv(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < n; ++x)
    if (base[static_cast<std::size_t>(x)] >= 0) base_inv[static_cast<std::size_t>(base[static_cast<std::size_t>(x)])] = x;

  for (int g : {kIrregular, 0, 1}) {
    if (g == 1 && u.stages() < 2) break;
    const auto members = u.group_members(g);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int a = members[i];
      for (std::size_t j = 0; j < i; ++j) {
        const int r = members[j];
        if (find(uf, r) != r || find(uf, a) == r) continue;
        if (base[static_cast<std::size_t>(r)] >= 0 && base[static_cast<std::size_t>(r)] != a) continue;
        if (base_inv[static_cast<std::size_t>(a)] >= 0 && base_inv[static_cast<std::size_t>(a)] != r) continue;
        PermConstraints cc = c;
        cc.forced = base;
        cc.forced[static_cast<std::size_t>(r)] = a;
        auto res = find_allowable(u, cc, budget);
        if (!res.complete)
          throw Error(ErrorKind::SearchBudgetExceeded, "orbit search ran out of budget");
        if (res.perm) {
          for (int x = 0; x < n; ++x) unite(uf, x, (*res.perm)[static_cast<std::size_t>(x)]);
          if (found) found->push_back(*res.perm);
        }
      }
    }
  }
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) label[static_cast<std::size_t>(x)] = find(uf, x);
  return label;
}

}  // namespace nfw::fm
