#include "nfw/stratify.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace nfw {

int NotStratified::offset_sum() const {
  int sum = 0;
  for (const auto& step : cycle) sum += step.sign * step.offset;
  return sum;
}

std::string constraint_key(const Var& v) {
  if (v.is_empty_constant() && v.type) return v.name + "^" + std::to_string(*v.type);
  return v.name;
}

ConstraintGraph ConstraintGraph::from(const Formula& phi) {
  ConstraintGraph g;
  auto add_node = [&](const std::string& key) {
    if (std::find(g.nodes.begin(), g.nodes.end(), key) == g.nodes.end())
      g.nodes.push_back(key);
  };
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    const Op op = f.op();
    if (is_atomic(op)) {
      std::string a = constraint_key(f.lhs());
      std::string b = constraint_key(f.rhs());
      add_node(a);
      add_node(b);
      g.edges.push_back({a, b, op == Op::Member ? 1 : 0, f});
    } else if (op == Op::Not) {
      walk(f.body());
    } else if (is_quantifier(op)) {
      add_node(constraint_key(f.bound()));
      walk(f.body());
    } else {
      walk(f.left());
      walk(f.right());
    }
  };
  walk(phi);
  return g;
}

namespace {

// Union-find where each node stores its type offset relative to its parent.
class PotentialUnionFind {
 public:
  explicit PotentialUnionFind(std::size_t n) : parent_(n), offset_(n, 0), rank_(n, 0) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  // Returns the root and sets `pot` = type(x) - type(root).
  std::size_t find(std::size_t x, int& pot) {
    if (parent_[x] == x) {
      pot = 0;
      return x;
    }
    int up = 0;
    std::size_t root = find(parent_[x], up);
    offset_[x] += up;
    parent_[x] = root;
    pot = offset_[x];
    return root;
  }

  // Imposes type(b) - type(a) = d. Returns false on conflict.
  bool unite(std::size_t a, std::size_t b, int d) {
    int pa = 0, pb = 0;
    std::size_t ra = find(a, pa), rb = find(b, pb);
    if (ra == rb) return pb - pa == d;
    // type(rb) - type(ra) = pa + d - pb
    int delta = pa + d - pb;
    if (rank_[ra] < rank_[rb]) {
      parent_[ra] = rb;
      offset_[ra] = -delta;
    } else {
      parent_[rb] = ra;
      offset_[rb] = delta;
      if (rank_[ra] == rank_[rb]) ++rank_[ra];
    }
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> offset_;
  std::vector<int> rank_;
};

}  // namespace

StratifyResult infer(const Formula& phi, Mode /*mode*/) {
  ConstraintGraph g = ConstraintGraph::from(phi);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;

  PotentialUnionFind uf(g.nodes.size());
  // Spanning forest of accepted edges, used to extract witness cycles.
  std::vector<std::vector<std::size_t>> forest(g.nodes.size());

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    std::size_t a = index[edge.from], b = index[edge.to];
    int pa = 0, pb = 0;
    bool same = uf.find(a, pa) == uf.find(b, pb);
    if (uf.unite(a, b, edge.offset)) {
      if (!same) {
        forest[a].push_back(e);
        forest[b].push_back(e);
      }
      continue;
    }
    // Conflict: path b -> a in the forest closes the cycle a -> b -> a.
    NotStratified out;
    out.cycle.push_back({edge.atom, +1, edge.offset});
    if (a != b) {
      std::vector<long> via(g.nodes.size(), -1);
      std::vector<bool> seen(g.nodes.size(), false);
      std::deque<std::size_t> queue{b};
      seen[b] = true;
      while (!queue.empty() && !seen[a]) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t fe : forest[u]) {
          const auto& fedge = g.edges[fe];
          std::size_t v = index[fedge.from] == u ? index[fedge.to] : index[fedge.from];
          if (seen[v]) continue;
          seen[v] = true;
          via[v] = static_cast<long>(fe);
          queue.push_back(v);
        }
      }
      std::vector<CycleStep> path;
      std::size_t cur = a;
      while (cur != b) {
        const auto& fedge = g.edges[static_cast<std::size_t>(via[cur])];
        std::size_t from = index[fedge.from];
        std::size_t to = index[fedge.to];
        // walking b -> ... -> cur; the step into cur is forward iff cur is `to`
        std::size_t prev = cur == to ? from : to;
        path.push_back({fedge.atom, cur == to ? +1 : -1, fedge.offset});
        cur = prev;
      }
      std::reverse(path.begin(), path.end());
      out.cycle.insert(out.cycle.end(), path.begin(), path.end());
    }
    return out;
  }

  Stratification s;
  std::unordered_map<std::size_t, int> component_min;
  std::vector<int> pot(g.nodes.size());
  std::vector<std::size_t> root(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    root[i] = uf.find(i, pot[i]);
    auto it = component_min.find(root[i]);
    if (it == component_min.end() || pot[i] < it->second) component_min[root[i]] = pot[i];
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    s.assignment[g.nodes[i]] = pot[i] - component_min[root[i]];
  return s;
}

bool is_stratified(const Formula& phi) {
  return std::holds_alternative<Stratification>(infer(phi));
}

bool check_typed(const Formula& phi, Mode mode) {
  bool ok = true;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    const Op op = f.op();
    auto type_of = [&](const Var& v) {
      if (!v.type)
        throw Error(ErrorKind::MissingTypes,
                    "variable '" + v.name + "' has no declared type");
      if (mode != Mode::TNT && *v.type < 0) ok = false;
      return *v.type;
    };
    if (is_atomic(op)) {
      int a = type_of(f.lhs());
      int b = type_of(f.rhs());
      if (op == Op::Equal) {
        ok = ok && a == b;
      } else if (mode == Mode::TTT) {
        ok = ok && b > a;
      } else {
        ok = ok && b == a + 1;
      }
      // The constant `empty` only lives in positive types.
      if (f.lhs().is_empty_constant() || f.rhs().is_empty_constant()) {
        if (mode != Mode::TSTU) ok = false;
        if (f.rhs().is_empty_constant() && b < 1) ok = false;
        if (f.lhs().is_empty_constant() && a < 1) ok = false;
      }
    } else if (op == Op::Not) {
      walk(f.body());
    } else if (is_quantifier(op)) {
      type_of(f.bound());
      walk(f.body());
    } else {
      walk(f.left());
      walk(f.right());
    }
  };
  walk(phi);
  return ok;
}

Formula apply_stratification(const Formula& phi, const Stratification& s) {
  return detail::map_vars(phi, [&](const Var& v) {
    Var out = v;
    auto it = s.assignment.find(constraint_key(v));
    if (it != s.assignment.end()) out.type = it->second;
    if (v.is_empty_constant()) out.type = v.type;
    return out;
  });
}

bool stratified_equiv_check(const Formula& phi) {
  StratifyResult r = infer(phi);
  if (auto* s = std::get_if<Stratification>(&r)) {
    // Free-standing `empty` constants keep their own types; everything else
    // is re-typed from the assignment.
    bool has_empty = false;
    for (const Var& v : all_vars(phi)) has_empty = has_empty || v.is_empty_constant();
    Formula typed = apply_stratification(phi, *s);
    if (!has_empty && !check_typed(typed, Mode::TNT))
      throw std::logic_error("inferred stratification fails the typing check: " +
                             pretty(phi));
    return true;
  }
  const auto& ns = std::get<NotStratified>(r);
  if (ns.cycle.empty() || ns.offset_sum() == 0)
    throw std::logic_error("witness cycle does not refute stratification: " + pretty(phi));
  return false;
}

}  // namespace nfw
