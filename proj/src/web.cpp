#include "nfw/web.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "nfw/error.hpp"

namespace nfw {

namespace {

std::string show(const IndexSet& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + std::to_string(a[i]);
  return out + "]";
}

// 2^e == v without overflow.
bool is_power_of_two_exp(std::uint64_t e, std::uint64_t v) {
  return e < 64 && v == (std::uint64_t{1} << e);
}

std::vector<bool> truth_vector(std::uint64_t base, int depth, std::span<const Sentence> sigma,
                               const EvalOptions& opts) {
  NaturalModel m = build_default(base, depth, opts.budget);
  std::vector<bool> out;
  for (const auto& phi : sigma) out.push_back(eval(m, phi, opts));
  return out;
}

int strict_type_bound(std::span<const Sentence> sigma) {
  int n = 1;
  for (const auto& phi : sigma)
    if (auto t = max_type(phi.formula())) n = std::max(n, *t + 1);
  return n;
}

}  // namespace

IndexSet drop_min(const IndexSet& a) { return IndexSet(a.begin() + (a.empty() ? 0 : 1), a.end()); }

IndexSet smallest(const IndexSet& a, int n) {
  return IndexSet(a.begin(), a.begin() + std::min<std::ptrdiff_t>(n, static_cast<std::ptrdiff_t>(a.size())));
}

std::optional<std::uint64_t> WebFragment::at(const IndexSet& a) const {
  auto it = tau.find(a);
  if (it == tau.end()) return std::nullopt;
  return it->second;
}

void WebFragment::validate() const {
  for (const auto& [a, v] : tau) {
    (void)v;
    if (a.empty()) throw Error(ErrorKind::InvalidInput, "empty index set");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0 || a[i] >= lambda_fin)
        throw Error(ErrorKind::InvalidInput, "index out of range in " + show(a));
      if (i > 0 && a[i] <= a[i - 1])
        throw Error(ErrorKind::InvalidInput, "index set not increasing: " + show(a));
    }
  }
}

NaturalityReport check_naturality(const WebFragment& w) {
  NaturalityReport r;
  for (const auto& [a, v] : w.tau) {
    if (a.size() < 2) continue;
    IndexSet a1 = drop_min(a);
    auto v1 = w.at(a1);
    if (!v1) {
      r.missing.push_back(a);
      continue;
    }
    if (!is_power_of_two_exp(v, *v1)) r.violations.push_back({a, v, a1, *v1});
  }
  return r;
}

ElementarityReport check_elementarity(const WebFragment& w, int n,
                                      std::span<const Sentence> sigma,
                                      const EvalOptions& opts) {
  ElementarityReport r;
  r.n = n;
  std::map<std::uint64_t, std::vector<bool>> cache;
  auto truth = [&](std::uint64_t base) -> const std::vector<bool>& {
    auto it = cache.find(base);
    if (it == cache.end()) it = cache.emplace(base, truth_vector(base, n, sigma, opts)).first;
    return it->second;
  };
  std::vector<std::pair<IndexSet, std::uint64_t>> big;
  for (const auto& [a, v] : w.tau)
    if (static_cast<int>(a.size()) > n) big.emplace_back(a, v);

  for (std::size_t i = 0; i < big.size(); ++i)
    for (std::size_t j = i + 1; j < big.size(); ++j) {
      const auto& [a, va] = big[i];
      const auto& [b, vb] = big[j];
      if (smallest(a, n) != smallest(b, n)) continue;
      const auto& ta = truth(va);
      const auto& tb = truth(vb);
      if (ta == tb) continue;
      // Re-derive the first disagreement from freshly built models, by plain
      // enumeration when that is affordable.
      std::size_t k = 0;
      while (ta[k] == tb[k]) ++k;
      const Formula& f = sigma[k].formula();
      const double cost = std::pow(static_cast<double>(std::max(va, vb)) + 1.0,
                                   static_cast<double>(quantifier_depth(f)));
      EvalOptions plain = opts;
      plain.symmetry = cost > 1e7;
      bool ra = eval(build_default(va, n, opts.budget), sigma[k], plain);
      bool rb = eval(build_default(vb, n, opts.budget), sigma[k], plain);
      if (ra != ta[k] || rb != tb[k])
        throw std::logic_error("elementarity violation did not reproduce");
      r.violations.push_back({a, b, va, vb, ta, tb});
    }
  return r;
}

std::vector<Sentence> sigma_card(int cap) {
  std::vector<Sentence> out;
  for (int k = 1; k <= cap; ++k) {
    auto x = [](int i) { return Var{"x" + std::to_string(i), 0}; };
    // Innermost first: exists x_k. (x_k != x_1 & ... & x_k != x_{k-1}).
    Formula f;
    for (int i = k; i >= 1; --i) {
      Formula distinct = Formula::equal(x(i), x(i));
      bool first = true;
      for (int j = 1; j < i; ++j) {
        Formula ne = make_not(Formula::equal(x(i), x(j)));
        distinct = first ? ne : make_and(distinct, ne);
        first = false;
      }
      Formula body = i == k ? distinct : (i == 1 ? f : make_and(distinct, f));
      f = Formula::exists(x(i), body);
    }
    out.emplace_back(f, Mode::TST);
  }
  return out;
}

AmbiguityResult web_ambiguity(const WebFragment& w, std::span<const Sentence> sigma,
                              const EvalOptions& opts) {
  w.validate();
  if (sigma.size() > 32) throw Error(ErrorKind::InvalidInput, "at most 32 sentences");
  const int n = strict_type_bound(sigma);
  const int pool = std::max(0, w.lambda_fin - 1);
  auto need = [&](const IndexSet& a) {
    auto v = w.at(a);
    if (!v) throw Error(ErrorKind::MissingIndex, "no value for " + show(a));
    return *v;
  };
  std::map<std::uint64_t, std::vector<bool>> cache;
  auto color = [&](std::span<const int> a) {
    IndexSet padded(a.begin(), a.end());
    padded.push_back(a.back() + 1);
    const std::uint64_t base = need(padded);
    auto it = cache.find(base);
    if (it == cache.end()) it = cache.emplace(base, truth_vector(base, n, sigma, opts)).first;
    Coloring::Color c = 0;
    for (std::size_t i = 0; i < it->second.size(); ++i)
      if (it->second[i]) c |= Coloring::Color{1} << i;
    return c;
  };
  Coloring coloring =
      pool >= n ? Coloring::tabulate(pool, n, static_cast<int>(sigma.size()), color)
                : Coloring(pool, n, static_cast<int>(sigma.size()));
  auto h = find_homogeneous(coloring, n + 2);
  if (!h) return NoHomogeneousSet{std::move(coloring), n + 2};

  NaturalModel model = build_default(need(*h), n + 1, opts.budget);
  AmbiguityWitness wit{*h, *h, {}, std::move(coloring)};
  for (const auto& phi : sigma) {
    Sentence raised(raise(phi.formula()), Mode::TST);
    Verdict v{pretty(phi.formula()), eval(model, phi, opts), eval(model, raised, opts)};
    if (v.value != v.value_raised)
      throw Error(ErrorKind::InvalidInput,
                  "phi <-> phi+ fails at base " + std::to_string(need(*h)) + " for " +
                      v.sentence + "; the fragment is not a tangled web on these sentences");
    wit.verdicts.push_back(std::move(v));
  }
  return wit;
}

SweepReport impossibility_sweep(int lambda_fin, int cap, int n, SweepOrder order,
                                std::span<const Sentence> sigma, const EvalOptions& opts) {
  if (lambda_fin < 1 || lambda_fin > 5 || cap < 0 || n < 1)
    throw Error(ErrorKind::InvalidParams, "sweep needs 1 <= lambda <= 5, cap >= 0, n >= 1");
  std::vector<Sentence> own;
  if (sigma.empty()) {
    own = sigma_card(cap);
    sigma = own;
  }
  SweepReport rep;
  rep.lambda_fin = lambda_fin;
  rep.cap = cap;
  rep.n = n;

  // Nonempty subsets, larger first so that A is assigned before A_1.
  std::vector<IndexSet> sets;
  for (int k = lambda_fin; k >= 1; --k) {
    std::vector<IndexSet> level;
    for_each_subset(lambda_fin, k, [&](std::span<const int> a) { level.emplace_back(a.begin(), a.end()); });
    if (order == SweepOrder::Reverse) std::reverse(level.begin(), level.end());
    sets.insert(sets.end(), level.begin(), level.end());
  }
  rep.total_fragments = std::pow(static_cast<double>(cap) + 1.0, static_cast<double>(sets.size()));

  // For each position, the earlier positions whose A_1 is this set.
  std::map<IndexSet, std::size_t> pos;
  for (std::size_t i = 0; i < sets.size(); ++i) pos[sets[i]] = i;
  std::vector<std::vector<std::size_t>> parents(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i].size() >= 2) parents[pos.at(drop_min(sets[i]))].push_back(i);

  std::vector<std::uint64_t> value(sets.size(), 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == sets.size()) {
      WebFragment w;
      w.lambda_fin = lambda_fin;
      for (std::size_t j = 0; j < sets.size(); ++j) w.tau[sets[j]] = value[j];
      ++rep.pass_naturality;
      if (check_elementarity(w, n, sigma, opts).pass()) {
        ++rep.pass_both;
        rep.both.push_back(w);
      }
      rep.natural.push_back(std::move(w));
      return;
    }
    for (int step = 0; step <= cap; ++step) {
      const auto v = static_cast<std::uint64_t>(order == SweepOrder::Forward ? step : cap - step);
      bool ok = true;
      for (std::size_t p : parents[i]) ok = ok && is_power_of_two_exp(value[p], v);
      if (!ok) continue;
      value[i] = v;
      go(i + 1);
    }
  };
  go(0);

  auto by_tau = [](const WebFragment& a, const WebFragment& b) { return a.tau < b.tau; };
  std::sort(rep.natural.begin(), rep.natural.end(), by_tau);
  std::sort(rep.both.begin(), rep.both.end(), by_tau);
  return rep;
}

}  // namespace nfw
