#include "nfw/corpus.hpp"

#include <set>
#include <string>

#include "nfw/stratify.hpp"

namespace nfw {

namespace {

Var tv(const std::string& name, int type) { return Var{name, type}; }

std::vector<Formula> typed_atoms(const std::vector<Var>& vars) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const Var& a = vars[i];
      const Var& b = vars[j];
      if (*a.type == *b.type && i <= j) out.push_back(Formula::equal(a, b));
      if (*b.type == *a.type + 1) out.push_back(Formula::member(a, b));
    }
  return out;
}

bool mentions(const Formula& f, const std::string& name) {
  for (const Var& v : all_vars(f))
    if (v.name == name) return true;
  return false;
}

// Literals and two-literal combinations over the atoms.
std::vector<Formula> matrices(const std::vector<Formula>& atoms, bool with_implications) {
  std::vector<Formula> lits;
  for (const auto& a : atoms) {
    lits.push_back(a);
    lits.push_back(make_not(a));
  }
  std::vector<Formula> out = lits;
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (i / 2 == j / 2) continue;  // a literal and its own negation
      out.push_back(make_and(lits[i], lits[j]));
      out.push_back(make_or(lits[i], lits[j]));
    }
  if (with_implications)
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (i == j) continue;
        out.push_back(make_implies(atoms[i], atoms[j]));
        if (i < j) out.push_back(make_iff(atoms[i], atoms[j]));
      }
  return out;
}

Formula quantify(Op q, const Var& v, Formula body) {
  return Formula::quantifier(q, v, std::move(body));
}

void add_unique(std::vector<Formula>& out, std::set<std::string>& seen, const Formula& f) {
  Formula n = normalize(f);
  if (seen.insert(pretty(n)).second) out.push_back(std::move(n));
}

}  // namespace

std::vector<Formula> sentence_family(int type_limit, int max_qdepth) {
  std::vector<Formula> out;
  std::set<std::string> seen;
  const Op quants[] = {Op::Forall, Op::Exists};
  for (int t1 = 0; t1 < type_limit && max_qdepth >= 1; ++t1) {
    Var x = tv("x", t1);
    for (const auto& m : matrices(typed_atoms({x}), true))
      for (Op q1 : quants) add_unique(out, seen, quantify(q1, x, m));
  }
  if (max_qdepth < 2) return out;
  for (int t1 = 0; t1 < type_limit; ++t1)
    for (int t2 = 0; t2 < type_limit; ++t2) {
      Var x = tv("x", t1), y = tv("y", t2);
      for (const auto& m : matrices(typed_atoms({x, y}), true)) {
        if (!mentions(m, "x") || !mentions(m, "y")) continue;
        for (Op q1 : quants)
          for (Op q2 : quants) add_unique(out, seen, quantify(q1, x, quantify(q2, y, m)));
      }
    }
  return out;
}

std::vector<Formula> comprehension_family(int type_limit, int max_qdepth) {
  std::vector<Formula> out;
  std::set<std::string> seen;
  const Op quants[] = {Op::Forall, Op::Exists};

  // (parameter?, number of bound variables) shapes with at most two extras.
  struct Shape {
    bool param;
    int bound;
  };
  std::vector<Shape> shapes{{false, 0}, {true, 0}};
  if (max_qdepth >= 1) shapes.push_back({false, 1}), shapes.push_back({true, 1});
  if (max_qdepth >= 2) shapes.push_back({false, 2});

  for (int t = 0; t + 1 < type_limit; ++t) {
    Var x = tv("x", t);
    Var set = tv("A", t + 1);
    for (const Shape& sh : shapes) {
      const int extras = (sh.param ? 1 : 0) + sh.bound;
      // Each extra variable independently takes any type below the limit.
      int combos = 1;
      for (int e = 0; e < extras; ++e) combos *= type_limit;
      for (int code = 0; code < combos; ++code) {
        std::vector<int> types;
        for (int e = 0, c = code; e < extras; ++e, c /= type_limit) types.push_back(c % type_limit);
        std::vector<Var> vars{x};
        std::size_t k = 0;
        std::optional<Var> param;
        if (sh.param) vars.push_back(*(param = tv("p", types[k++])));
        std::vector<Var> bound;
        const char* names[] = {"z", "w"};
        for (int b = 0; b < sh.bound; ++b) bound.push_back(tv(names[b], types[k++]));
        vars.insert(vars.end(), bound.begin(), bound.end());

        for (const auto& m : matrices(typed_atoms(vars), false)) {
          if (!mentions(m, "x")) continue;
          if (param && !mentions(m, "p")) continue;
          std::vector<std::vector<Op>> prefixes{{}};
          for (int b = 0; b < sh.bound; ++b) {
            std::vector<std::vector<Op>> next;
            for (const auto& p : prefixes)
              for (Op q : quants) {
                auto np = p;
                np.push_back(q);
                next.push_back(np);
              }
            prefixes = next;
          }
          for (const auto& prefix : prefixes) {
            Formula phi = m;
            for (int b = sh.bound - 1; b >= 0; --b)
              phi = quantify(prefix[static_cast<std::size_t>(b)], bound[static_cast<std::size_t>(b)], phi);
            Formula inst = comprehension_instance(phi, x, set);
            if (!check_typed(inst, Mode::TST)) continue;
            add_unique(out, seen, universal_closure(inst));
          }
        }
      }
    }
  }
  return out;
}

Formula extensionality_axiom(int type) {
  Var a = tv("a", type + 1), b = tv("b", type + 1), z = tv("z", type);
  return Formula::forall(
      a, Formula::forall(
             b, make_implies(Formula::forall(z, make_iff(Formula::member(z, a),
                                                         Formula::member(z, b))),
                             Formula::equal(a, b))));
}

Formula weak_extensionality_axiom(int type) {
  Var a = tv("a", type + 1), b = tv("b", type + 1), z = tv("z", type), w = tv("w", type);
  Formula same = Formula::forall(w, make_iff(Formula::member(w, a), Formula::member(w, b)));
  return Formula::forall(
      a, Formula::forall(
             b, Formula::forall(z, make_implies(Formula::member(z, a),
                                                make_iff(Formula::equal(a, b), same)))));
}

}  // namespace nfw
