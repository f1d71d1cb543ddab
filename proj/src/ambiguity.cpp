#include "nfw/ambiguity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nfw/error.hpp"
#include "nfw/stratify.hpp"

namespace nfw {

Coloring::Coloring(int lambda_fin, int n, int width)
    : lambda_fin_(lambda_fin), n_(n), width_(width) {
  if (lambda_fin < 0 || n < 1 || width < 0 || width > 32)
    throw Error(ErrorKind::InvalidParams, "coloring needs lambda >= 0, n >= 1, width <= 32");
  const auto m = static_cast<std::size_t>(lambda_fin);
  binom_.assign(m + 1, std::vector<std::size_t>(static_cast<std::size_t>(n) + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) {
    binom_[i][0] = 1;
    for (std::size_t j = 1; j <= static_cast<std::size_t>(n) && j <= i; ++j)
      binom_[i][j] = binom_[i - 1][j - 1] + (j <= i - 1 ? binom_[i - 1][j] : 0);
  }
  colors_.assign(lambda_fin >= n ? binom_[m][static_cast<std::size_t>(n)] : 0, 0);
}

// Colex rank: sum of C(a_i, i + 1).
std::size_t Coloring::rank(std::span<const int> subset) const {
  if (static_cast<int>(subset.size()) != n_)
    throw Error(ErrorKind::InvalidInput, "subset has the wrong size");
  std::size_t r = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= lambda_fin_ || (i > 0 && subset[i] <= subset[i - 1]))
      throw Error(ErrorKind::InvalidInput, "subset must be increasing and within range");
    r += binom_[static_cast<std::size_t>(subset[i])][i + 1];
  }
  return r;
}

std::vector<int> Coloring::unrank(std::size_t r) const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  int hi = lambda_fin_ - 1;
  for (int i = n_ - 1; i >= 0; --i) {
    while (binom_[static_cast<std::size_t>(hi)][static_cast<std::size_t>(i) + 1] > r) --hi;
    out[static_cast<std::size_t>(i)] = hi;
    r -= binom_[static_cast<std::size_t>(hi)][static_cast<std::size_t>(i) + 1];
    --hi;
  }
  return out;
}

std::vector<std::pair<Coloring::Color, std::size_t>> Coloring::classes() const {
  std::map<Color, std::size_t> count;
  for (Color c : colors_) ++count[c];
  std::vector<std::pair<Color, std::size_t>> out(count.begin(), count.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void for_each_subset(int m, int k, const std::function<void(std::span<const int>)>& fn) {
  if (k < 0 || k > m) return;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    fn(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j) - 1] + 1;
  }
}

Coloring Coloring::tabulate(int lambda_fin, int n, int width,
                            const std::function<Color(std::span<const int>)>& fn) {
  Coloring c(lambda_fin, n, width);
  for_each_subset(lambda_fin, n, [&](std::span<const int> a) { c.set(a, fn(a)); });
  return c;
}

bool is_homogeneous(const Coloring& coloring, std::span<const int> h) {
  std::optional<Coloring::Color> first;
  bool ok = true;
  std::vector<int> sub(static_cast<std::size_t>(coloring.n()));
  for_each_subset(static_cast<int>(h.size()), coloring.n(), [&](std::span<const int> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = h[static_cast<std::size_t>(idx[i])];
    Coloring::Color c = coloring.color_of(sub);
    if (!first) first = c;
    ok = ok && *first == c;
  });
  return ok;
}

namespace {

class HomogeneousSearch {
 public:
  HomogeneousSearch(const Coloring& c, int k) : c_(c), k_(k), n_(c.n()) {}

  std::optional<std::vector<int>> run() {
    for (const auto& [color, size] : c_.classes()) {
      (void)size;
      color_ = color;
      h_.clear();
      if (extend(0)) return h_;
    }
    return std::nullopt;
  }

 private:
  // Every n-subset of h_ + {v} that contains v has color_.
  bool compatible(int v) {
    const int m = static_cast<int>(h_.size());
    if (m + 1 < n_) return true;
    bool ok = true;
    std::vector<int> sub(static_cast<std::size_t>(n_));
    for_each_subset(m, n_ - 1, [&](std::span<const int> idx) {
      if (!ok) return;
      for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = h_[static_cast<std::size_t>(idx[i])];
      sub.back() = v;
      ok = c_.color_of(sub) == color_;
    });
    return ok;
  }

  bool extend(int start) {
    if (static_cast<int>(h_.size()) == k_) return true;
    for (int v = start; v < c_.lambda_fin(); ++v) {
      if (static_cast<int>(h_.size()) + (c_.lambda_fin() - v) < k_) return false;
      if (!compatible(v)) continue;
      h_.push_back(v);
      if (extend(v + 1)) return true;
      h_.pop_back();
    }
    return false;
  }

  const Coloring& c_;
  int k_;
  int n_;
  Coloring::Color color_ = 0;
  std::vector<int> h_;
};

int strict_type_bound(std::span<const Sentence> sigma) {
  int n = 1;
  for (const auto& phi : sigma)
    if (auto t = max_type(phi.formula())) n = std::max(n, *t + 1);
  return n;
}

std::vector<int> with_continuation(std::span<const int> a, int extra) {
  std::vector<int> s(a.begin(), a.end());
  if (extra > 0) s.push_back(a.back() + extra);
  return s;
}

Coloring::Color truth_vector(std::span<const Sentence> sigma,
                             const std::function<bool(const Sentence&)>& value) {
  Coloring::Color c = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (value(sigma[i])) c |= Coloring::Color{1} << i;
  return c;
}

using Evaluator = std::function<bool(const Formula&, std::span<const int> s)>;

Coloring color_with(const TstuFamily& family, std::span<const Sentence> sigma, int n,
                    const Evaluator& ev) {
  if (sigma.size() > 32) throw Error(ErrorKind::InvalidInput, "at most 32 sentences");
  if (strict_type_bound(sigma) > n)
    throw Error(ErrorKind::InvalidInput, "n must exceed every type used in the sentences");
  const int lambda = family.lambda_fin();
  return Coloring::tabulate(lambda, n, static_cast<int>(sigma.size()), [&](std::span<const int> a) {
    auto vec = [&](int extra) {
      auto s = with_continuation(a, extra);
      return truth_vector(sigma, [&](const Sentence& phi) { return ev(phi.formula(), s); });
    };
    const int room = lambda - 1 - a.back();
    Coloring::Color c = vec(room >= 1 ? 1 : 0);
    if (room >= 2 && vec(2) != c)
      throw std::logic_error("truth vector depends on the continuation of s");
    return c;
  });
}

AmbiguityResult witness_with(const TstuFamily& family, std::span<const Sentence> sigma,
                             const Evaluator& ev, const EvalOptions& opts) {
  (void)opts;
  const int n = strict_type_bound(sigma);
  Coloring coloring = color_with(family, sigma, n, ev);
  auto h = find_homogeneous(coloring, n + 1);
  if (!h) return NoHomogeneousSet{std::move(coloring), n + 1};
  if (!is_homogeneous(coloring, *h)) throw std::logic_error("search returned a mixed set");
  AmbiguityWitness w{*h, *h, {}, std::move(coloring)};
  for (const auto& phi : sigma) {
    Verdict v{pretty(phi.formula()), ev(phi.formula(), w.s), ev(raise(phi.formula()), w.s)};
    if (v.value != v.value_raised)
      throw std::logic_error("ambiguity fails on a homogeneous set: " + v.sentence);
    w.verdicts.push_back(std::move(v));
  }
  return w;
}

}  // namespace

std::optional<std::vector<int>> find_homogeneous(const Coloring& coloring, int k) {
  if (k < 0 || k > coloring.lambda_fin()) return std::nullopt;
  if (k < coloring.n()) {
    std::vector<int> h(static_cast<std::size_t>(k));
    std::iota(h.begin(), h.end(), 0);
    return h;
  }
  return HomogeneousSearch(coloring, k).run();
}

Coloring color_by_theory(const TstuFamily& family, std::span<const Sentence> sigma, int n,
                         const EvalOptions& opts) {
  return color_with(family, sigma, n, [&](const Formula& f, std::span<const int> s) {
    return eval_tstu(Interpretation(family, {s.begin(), s.end()}), f, {}, opts);
  });
}

AmbiguityResult jensen_witness(const TstuFamily& family, std::span<const Sentence> sigma,
                               const EvalOptions& opts) {
  return witness_with(
      family, sigma,
      [&](const Formula& f, std::span<const int> s) {
        return eval_tstu(Interpretation(family, {s.begin(), s.end()}), f, {}, opts);
      },
      opts);
}

AmbiguityResult ttt_transfer_demo(const TstuFamily& family, std::span<const Sentence> sigma,
                                  const EvalOptions& opts) {
  std::vector<int> all(static_cast<std::size_t>(family.lambda_fin()));
  std::iota(all.begin(), all.end(), 0);
  Interpretation identity(family, all);
  return witness_with(
      family, sigma,
      [&](const Formula& f, std::span<const int> s) {
        Formula translated = translate_s(f, s);
        if (!check_typed(translated, Mode::TTT))
          throw std::logic_error("translation is not TTT-typed: " + pretty(translated));
        return eval_ttt(identity, translated, opts);
      },
      opts);
}

Coloring pentagon_coloring() {
  return Coloring::tabulate(5, 2, 1, [](std::span<const int> a) {
    const int d = (a[1] - a[0]) % 5;
    return Coloring::Color{d == 1 || d == 4 ? 1u : 0u};
  });
}

}  // namespace nfw
