#pragma once

// Reference semantics for natural models: levels are materialized as explicit
// sets of indices and formulas are evaluated by direct recursion over names.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nfw/formula.hpp"

namespace nfw::testing {

struct NaiveModel {
  // levels[i][e] = members of element e of level i (as indices into level i-1)
  std::vector<std::vector<std::set<std::size_t>>> levels;

  static NaiveModel build(std::size_t base, int depth) {
    NaiveModel m;
    m.levels.emplace_back(base);
    for (int i = 1; i < depth; ++i) {
      const std::size_t below = m.levels.back().size();
      std::vector<std::set<std::size_t>> level{std::set<std::size_t>{}};
      // Power set by repeated doubling, independent of any bit encoding.
      for (std::size_t x = 0; x < below; ++x) {
        const std::size_t n = level.size();
        for (std::size_t k = 0; k < n; ++k) {
          auto with = level[k];
          with.insert(x);
          level.push_back(std::move(with));
        }
      }
      m.levels.push_back(std::move(level));
    }
    return m;
  }

  bool eval(const Formula& f, std::map<std::string, std::size_t>& env) const {
    switch (f.op()) {
      case Op::Equal:
        return env.at(f.lhs().name) == env.at(f.rhs().name);
      case Op::Member: {
        int ty = *f.rhs().type;
        if (ty != *f.lhs().type + 1) return false;
        const auto& s = levels[static_cast<std::size_t>(ty)][env.at(f.rhs().name)];
        return s.count(env.at(f.lhs().name)) > 0;
      }
      case Op::Not:
        return !eval(f.body(), env);
      case Op::And:
        return eval(f.left(), env) && eval(f.right(), env);
      case Op::Or:
        return eval(f.left(), env) || eval(f.right(), env);
      case Op::Implies:
        return !eval(f.left(), env) || eval(f.right(), env);
      case Op::Iff:
        return eval(f.left(), env) == eval(f.right(), env);
      case Op::Forall:
      case Op::Exists: {
        const bool all = f.op() == Op::Forall;
        const std::string name = f.bound().name;
        auto saved = env.find(name) == env.end() ? std::optional<std::size_t>{}
                                                 : std::optional<std::size_t>{env[name]};
        bool result = all;
        const std::size_t n = levels[static_cast<std::size_t>(*f.bound().type)].size();
        for (std::size_t v = 0; v < n; ++v) {
          env[name] = v;
          if (eval(f.body(), env) != all) {
            result = !all;
            break;
          }
        }
        if (saved) env[name] = *saved; else env.erase(name);
        return result;
      }
    }
    return false;
  }

  bool eval(const Formula& f) const {
    std::map<std::string, std::size_t> env;
    return eval(f, env);
  }
};

}  // namespace nfw::testing
