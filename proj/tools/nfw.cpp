// Command-line front end. Every result is one JSON record per line on
// standard output; diagnostics go to standard error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "nfw/ambiguity.hpp"
#include "nfw/error.hpp"
#include "nfw/fm/orbit.hpp"
#include "nfw/formula.hpp"
#include "nfw/natmodel.hpp"
#include "nfw/stratify.hpp"
#include "nfw/web.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace nfw;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kNegative = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared state and output

struct Run {
  json params = json::object();
  bool expect_pass = false;
  bool negative = false;
  bool input_error = false;

  json record(const std::string& kind) const {
    json r;
    r["kind"] = kind;
    r["version"] = kVersion;
    r["params"] = params;
    return r;
  }
  void emit(const json& r) const { std::cout << r.dump() << '\n'; }
  void verdict(bool ok) { negative = negative || !ok; }
  void error(const std::string& what, const json& where = nullptr) {
    input_error = true;
    std::cerr << "error: " << what << '\n';
    json r = record("error");
    if (!where.is_null()) r["at"] = where;
    r["message"] = what;
    emit(r);
  }
};

/// Echo of every option that belongs to the chosen command path.
void echo_params(const CLI::App& app, json& out) {
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help" || name == "version" || name.empty()) continue;
    const auto& res = opt->results();
    if (opt->get_expected_min() == 0) {
      out[name] = opt->count() > 0;
    } else if (res.empty()) {
      out[name] = opt->get_default_str();
    } else if (res.size() == 1 && opt->get_expected_max() <= 1) {
      out[name] = res.front();
    } else {
      out[name] = res;
    }
  }
  for (const CLI::App* sub : app.get_subcommands()) {
    json inner = json::object();
    echo_params(*sub, inner);
    out[sub->get_name()] = inner;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CorpusLine {
  int line;
  std::string text;
  std::optional<Formula> formula;
};

/// One formula per line; '#' starts a comment; blank lines are skipped.
/// Lines that fail to parse are reported and kept with no formula.
std::vector<CorpusLine> read_corpus(Run& run, const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<CorpusLine> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string text = line.substr(0, line.find('#'));
    const auto b = text.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    text = text.substr(b, text.find_last_not_of(" \t\r") - b + 1);
    CorpusLine cl{no, text, std::nullopt};
    try {
      cl.formula = parse(text);
    } catch (const Error& e) {
      run.error(e.what(), json{{"file", path}, {"line", no}});
    }
    out.push_back(std::move(cl));
  }
  return out;
}

std::vector<Sentence> read_sentences(Run& run, const std::string& path, Mode mode) {
  std::vector<Sentence> out;
  for (auto& cl : read_corpus(run, path))
    if (cl.formula) out.emplace_back(*cl.formula, mode);
  return out;
}

EvalOptions eval_options(const std::optional<std::uint64_t>& budget) {
  EvalOptions o;
  if (budget) o.budget = *budget;
  return o;
}

// ---------------------------------------------------------------------------
// Formula commands

json cycle_json(const NotStratified& ns) {
  json steps = json::array();
  for (const auto& s : ns.cycle)
    steps.push_back({{"atom", pretty(s.atom)}, {"sign", s.sign}, {"offset", s.offset}});
  return steps;
}

void cmd_stratify(Run& run, const std::string& file, Mode mode) {
  for (const auto& cl : read_corpus(run, file)) {
    if (!cl.formula) continue;
    json r = run.record("stratify");
    r["line"] = cl.line;
    r["formula"] = pretty(*cl.formula);
    const auto res = infer(*cl.formula, mode);
    if (const auto* s = std::get_if<Stratification>(&res)) {
      r["stratified"] = true;
      r["assignment"] = s->assignment;
    } else {
      const auto& ns = std::get<NotStratified>(res);
      r["stratified"] = false;
      r["cycle"] = cycle_json(ns);
      r["cycle_sum"] = ns.offset_sum();
    }
    run.verdict(r["stratified"].get<bool>());
    run.emit(r);
  }
}

void cmd_raise(Run& run, const std::string& file, int by) {
  for (const auto& cl : read_corpus(run, file)) {
    if (!cl.formula) continue;
    json r = run.record("raise");
    r["line"] = cl.line;
    r["formula"] = pretty(*cl.formula);
    Formula up = *cl.formula;
    try {
      up = raise(*cl.formula, by);
    } catch (const Error& e) {
      run.input_error = true;
      std::cerr << "error: line " << cl.line << ": " << e.what() << '\n';
      r["error"] = to_string(e.kind());
      r["message"] = e.what();
      run.emit(r);
      continue;
    }
    r["raised"] = pretty(up);
    r["stratified"] = is_stratified(*cl.formula);
    r["raised_stratified"] = is_stratified(up);
    r["comprehension"] = is_comprehension_instance(*cl.formula);
    r["raised_comprehension"] = is_comprehension_instance(up);
    run.verdict(r["stratified"] == r["raised_stratified"] &&
                r["comprehension"] == r["raised_comprehension"]);
    run.emit(r);
  }
}

void cmd_typecheck(Run& run, const std::string& file, Mode mode) {
  for (const auto& cl : read_corpus(run, file)) {
    if (!cl.formula) continue;
    json r = run.record("typecheck");
    r["line"] = cl.line;
    r["formula"] = pretty(*cl.formula);
    r["mode"] = to_string(mode);
    try {
      r["well_typed"] = check_typed(*cl.formula, mode);
    } catch (const Error& e) {
      r["well_typed"] = false;
      r["error"] = to_string(e.kind());
      r["message"] = e.what();
    }
    run.verdict(r["well_typed"].get<bool>());
    run.emit(r);
  }
}

template <class Eval>
void eval_corpus(Run& run, const std::string& kind, const std::string& file, Mode mode,
                 const Eval& eval_one) {
  for (const auto& cl : read_corpus(run, file)) {
    if (!cl.formula) continue;
    json r = run.record(kind);
    r["line"] = cl.line;
    r["formula"] = pretty(*cl.formula);
    try {
      const bool v = eval_one(Sentence(*cl.formula, mode));
      r["value"] = v;
      run.verdict(v);
    } catch (const Error& e) {
      run.input_error = true;
      std::cerr << "error: line " << cl.line << ": " << e.what() << '\n';
      r["error"] = to_string(e.kind());
      r["message"] = e.what();
    }
    run.emit(r);
  }
}

// ---------------------------------------------------------------------------
// Ambiguity and Ramsey

json coloring_summary(const Coloring& c) {
  json classes = json::array();
  for (auto [color, size] : c.classes()) classes.push_back({{"color", color}, {"size", size}});
  return {{"lambda_fin", c.lambda_fin()}, {"n", c.n()}, {"width", c.width()},
          {"subsets", c.subset_count()}, {"classes", classes}};
}

json ambiguity_json(Run& run, const json& base, const AmbiguityResult& res) {
  json r = base;
  if (const auto* w = std::get_if<AmbiguityWitness>(&res)) {
    r["result"] = "witness";
    r["coloring"] = coloring_summary(w->coloring);
    r["H"] = w->H;
    r["s"] = w->s;
    json verdicts = json::array();
    bool agree = true;
    for (const auto& v : w->verdicts) {
      verdicts.push_back({{"sentence", v.sentence}, {"value", v.value}, {"value_raised", v.value_raised}});
      agree = agree && v.value == v.value_raised;
    }
    r["verdicts"] = verdicts;
    run.verdict(agree);
  } else {
    const auto& no = std::get<NoHomogeneousSet>(res);
    r["result"] = "no_homogeneous_set";
    r["k"] = no.k;
    r["coloring"] = coloring_summary(no.coloring);
    run.verdict(false);
  }
  return r;
}

void cmd_ambiguity(Run& run, const std::vector<std::uint64_t>& sizes, const std::string& sigma_file,
                   std::optional<int> k, bool ttt, const EvalOptions& opts) {
  const TstuFamily fam = build_tstu_family(sizes);
  const auto sigma = read_sentences(run, sigma_file, Mode::TSTU);
  const auto res = ttt ? ttt_transfer_demo(fam, sigma, opts) : jensen_witness(fam, sigma, opts);
  json r = ambiguity_json(run, run.record("ambiguity"), res);
  if (k) {
    const Coloring& c = std::holds_alternative<AmbiguityWitness>(res)
                            ? std::get<AmbiguityWitness>(res).coloring
                            : std::get<NoHomogeneousSet>(res).coloring;
    const auto h = find_homogeneous(c, *k);
    r["homogeneous_k"] = h ? json(*h) : json(nullptr);
  }
  run.emit(r);
}

std::vector<int> parse_index_list(const std::string& key) {
  const json j = json::parse(key);
  if (!j.is_array()) throw UsageError("index list expected, got " + key);
  return j.get<std::vector<int>>();
}

void cmd_ramsey(Run& run, int lambda, int n, const std::string& file, std::optional<int> k) {
  const json table = json::parse(read_file(file));
  std::vector<std::pair<std::vector<int>, std::uint32_t>> entries;
  std::uint32_t max_color = 0;
  if (table.is_array()) {
    Coloring probe(lambda, n, 1);
    if (table.size() != probe.subset_count())
      throw UsageError("coloring table has " + std::to_string(table.size()) + " entries, expected " +
                       std::to_string(probe.subset_count()));
    for (std::size_t i = 0; i < table.size(); ++i)
      entries.emplace_back(probe.unrank(i), table[i].get<std::uint32_t>());
  } else if (table.is_object()) {
    for (const auto& [key, value] : table.items()) entries.emplace_back(parse_index_list(key), value.get<std::uint32_t>());
  } else {
    throw UsageError("coloring table must be a JSON array or object");
  }
  for (const auto& e : entries) max_color = std::max(max_color, e.second);
  int width = 1;
  while (width < 32 && (max_color >> width) != 0) ++width;
  Coloring c(lambda, n, width);
  std::vector<bool> seen(c.subset_count(), false);
  for (const auto& [subset, color] : entries) {
    if (static_cast<int>(subset.size()) != n || !std::is_sorted(subset.begin(), subset.end()) ||
        std::adjacent_find(subset.begin(), subset.end()) != subset.end() || subset.front() < 0 ||
        subset.back() >= lambda)
      throw UsageError("bad subset in coloring table: " + json(subset).dump());
    c.set(subset, color);
    seen[c.rank(subset)] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw UsageError("coloring table misses " + json(c.unrank(i)).dump());
  const int size = k.value_or(n + 1);
  const auto h = find_homogeneous(c, size);
  json r = run.record("ramsey");
  r["coloring"] = coloring_summary(c);
  r["k"] = size;
  r["found"] = h.has_value();
  r["H"] = h ? json(*h) : json(nullptr);
  if (h) r["color"] = c.color_of(std::vector<int>(h->begin(), h->begin() + n));
  run.verdict(h.has_value());
  run.emit(r);
}

// ---------------------------------------------------------------------------
// Webs

WebFragment read_fragment(const std::string& file, std::optional<int> lambda) {
  const json j = json::parse(read_file(file));
  if (!j.is_object()) throw UsageError("fragment must be a JSON object");
  WebFragment w;
  int top = 0;
  for (const auto& [key, value] : j.items()) {
    auto idx = parse_index_list(key);
    if (!idx.empty()) top = std::max(top, idx.back() + 1);
    w.tau[idx] = value.get<std::uint64_t>();
  }
  w.lambda_fin = lambda.value_or(top);
  w.validate();
  return w;
}

void cmd_web_check(Run& run, const std::string& file, std::optional<int> lambda, int n, int cap,
                   const std::string& sigma_file, const EvalOptions& opts) {
  const WebFragment w = read_fragment(file, lambda);
  const auto sigma = sigma_file.empty() ? sigma_card(cap) : read_sentences(run, sigma_file, Mode::TST);
  const auto nat = check_naturality(w);
  const auto el = check_elementarity(w, n, sigma, opts);
  json r = run.record("web_check");
  r["lambda_fin"] = w.lambda_fin;
  json nv = json::array();
  for (const auto& v : nat.violations)
    nv.push_back({{"A", v.a}, {"tau_A", v.tau_a}, {"A1", v.a1}, {"tau_A1", v.tau_a1}});
  r["naturality"] = {{"pass", nat.pass()}, {"violations", nv}, {"missing", nat.missing}};
  json ev = json::array();
  for (const auto& v : el.violations)
    ev.push_back({{"A", v.a}, {"B", v.b}, {"tau_A", v.tau_a}, {"tau_B", v.tau_b},
                  {"truth_A", v.truth_a}, {"truth_B", v.truth_b}});
  r["elementarity"] = {{"n", el.n}, {"pass", el.pass()}, {"violations", ev}};
  run.verdict(nat.pass() && el.pass());
  run.emit(r);
}

void cmd_web_sweep(Run& run, int lambda, int cap, int n, const EvalOptions& opts) {
  const auto rep = impossibility_sweep(lambda, cap, n, SweepOrder::Forward, {}, opts);
  json r = run.record("web_sweep");
  r["total_fragments"] = rep.total_fragments;
  r["pass_naturality"] = rep.pass_naturality;
  r["pass_both"] = rep.pass_both;
  json both = json::array();
  for (const auto& w : rep.both) {
    json t = json::object();
    for (const auto& [a, v] : w.tau) t[json(a).dump()] = v;
    both.push_back(t);
  }
  r["passing_both"] = both;
  run.verdict(rep.pass_both == 0);
  run.emit(r);
}

// ---------------------------------------------------------------------------
// Freedom of movement

namespace fmx {

using namespace nfw::fm;

json atoms_json(const FMUniverse& u, const AtomSet& s) {
  json out = json::array();
  for (int a : s.members()) out.push_back(u.name(a));
  return out;
}

json element_json(const FMUniverse& u, const SupportElement& e) {
  if (e.is_atom()) return {{"atom", u.name(e.atom)}};
  return {{"near_litter", atoms_json(u, e.set)}};
}

json support_json(const FMUniverse& u, const Support& s) {
  json out = json::array();
  for (const auto& e : s) out.push_back(element_json(u, e));
  return out;
}

/// Moved atoms only, in atom order.
json perm_json(const FMUniverse& u, const Perm& p) {
  json out = json::array();
  for (int a = 0; a < u.atom_count(); ++a)
    if (p[static_cast<std::size_t>(a)] != a)
      out.push_back({{"atom", u.name(a)}, {"image", u.name(p[static_cast<std::size_t>(a)])}});
  return out;
}

json partial_json(const FMUniverse& u, const PartialMap& m) {
  json out = json::array();
  for (auto [a, b] : m) out.push_back({{"atom", u.name(a)}, {"image", u.name(b)}});
  return out;
}

int atom_named(const FMUniverse& u, const std::string& raw) {
  const auto b = raw.find_first_not_of(' ');
  const auto e = raw.find_last_not_of(' ');
  const std::string name = b == std::string::npos ? "" : raw.substr(b, e - b + 1);
  const auto a = u.find_atom(name);
  if (!a) throw UsageError("unknown atom '" + name + "'");
  return *a;
}

/// "p0:1, {c0:L2:a1, c0:L2:a2, c0:L2:a3}, c0:L1:a1": atoms by name,
/// near-litters in braces, elements in the given order.
Support parse_support(const FMUniverse& u, const std::string& text) {
  Support s;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == ',') {
      ++i;
    } else if (text[i] == '{') {
      const auto close = text.find('}', i);
      if (close == std::string::npos) throw UsageError("unterminated '{' in support");
      AtomSet n;
      std::stringstream body(text.substr(i + 1, close - i - 1));
      std::string item;
      while (std::getline(body, item, ','))
        if (item.find_first_not_of(' ') != std::string::npos) n.set(atom_named(u, item));
      s.push_back(SupportElement::of_near_litter(n));
      i = close + 1;
    } else {
      const auto end = text.find(',', i);
      s.push_back(SupportElement::of_atom(atom_named(u, text.substr(i, end - i))));
      i = end == std::string::npos ? text.size() : end;
    }
  }
  return s;
}

struct Common {
  int k = 4, smax = 3, litters = 3, stages = 1;
  std::optional<std::uint64_t> budget;
  std::size_t limit = 20;

  FMUniverse universe() const { return build_universe({k, smax, litters}, stages); }
  std::uint64_t search_budget() const { return budget.value_or(kDefaultSearchBudget); }
};

void build(Run& run, const Common& c) {
  const auto u = c.universe();
  json r = run.record("fm_build");
  r["atom_count"] = u.atom_count();
  r["litter_count"] = u.litter_count();
  r["max_outflow"] = u.max_outflow();
  json atoms = json::array();
  for (int a = 0; a < u.atom_count(); ++a) {
    const auto& info = u.atom(a);
    atoms.push_back({{"name", info.name},
                     {"group", info.clan == kIrregular ? json("irregular") : json(info.clan)}});
  }
  r["atoms"] = atoms;
  json litters = json::array();
  for (int l = 0; l < u.litter_count(); ++l)
    litters.push_back({{"clan", u.litter(l).clan},
                       {"parent", u.name(u.litter(l).parent)},
                       {"atoms", atoms_json(u, u.litter(l).atoms)}});
  r["litters"] = litters;
  json nl = json::object();
  for (int clan = 0; clan < u.stages(); ++clan) nl["clan" + std::to_string(clan)] = u.near_litters(clan).size();
  r["near_litters"] = nl;
  run.emit(r);
}

json entry_json(const FMUniverse& u, const CensusEntry& e) {
  json j{{"x", atoms_json(u, e.x)}, {"symmetric", e.symmetric}, {"union_distance", e.union_distance}};
  j["support"] = e.support ? support_json(u, *e.support) : json(nullptr);
  return j;
}

void census(Run& run, const Common& c) {
  const auto u = c.universe();
  const auto rep = symmetric_census(u, 0, c.search_budget());
  json r = run.record("fm_census");
  r["subsets"] = rep.entries.size();
  r["supports"] = rep.records.size();
  r["symmetric"] = rep.symmetric_count;
  r["near_union"] = rep.near_union_count;
  r["biconditional_holds"] = rep.biconditional_holds();
  r["symmetric_not_near_count"] = rep.symmetric_not_near.size();
  r["near_not_symmetric_count"] = rep.near_not_symmetric.size();
  json a = json::array(), b = json::array();
  for (std::size_t i = 0; i < rep.symmetric_not_near.size() && i < c.limit; ++i)
    a.push_back(entry_json(u, rep.entries[rep.symmetric_not_near[i]]));
  for (std::size_t i = 0; i < rep.near_not_symmetric.size() && i < c.limit; ++i)
    b.push_back(entry_json(u, rep.entries[rep.near_not_symmetric[i]]));
  r["symmetric_not_near"] = a;
  r["near_not_symmetric"] = b;
  run.verdict(rep.biconditional_holds());
  run.emit(r);
}

void lemma_clan_subset(Run& run, const Common& c) {
  const auto u = c.universe();
  const auto census = symmetric_census(u, 0, c.search_budget());
  const auto rep = clan_subset_support_lemma_check(u, census);
  json r = run.record("fm_lemma_clan_subset");
  r["pairs_checked"] = rep.pairs_checked;
  json v = json::array();
  for (const auto& f : rep.failures) v.push_back({{"support", support_json(u, f.support)}, {"x", atoms_json(u, f.x)}});
  r["violations"] = v;
  run.verdict(rep.failures.empty());
  run.emit(r);
}

void lemma_extension(Run& run, const Common& c) {
  const auto u = c.universe();
  const auto rep = extension_family_check(u);
  json r = run.record("fm_lemma_extension");
  r["inputs"] = rep.inputs;
  r["passed"] = rep.passed;
  json v = json::array();
  for (const auto& f : rep.failures) {
    json j{{"rho0", partial_json(u, f.rho0)}, {"error", f.error}};
    j["extension"] = f.extension ? perm_json(u, *f.extension) : json(nullptr);
    v.push_back(j);
  }
  r["failures"] = v;
  run.verdict(rep.failures.empty());
  run.emit(r);
}

void lemma_injection(Run& run, const Common& c) {
  const auto u = c.universe();
  const auto rep = parent_injection_check(u, c.limit, c.budget.value_or(2'000'000));
  json r = run.record("fm_lemma_injection");
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json j{{"x", atoms_json(u, e.x)}};
    j["x_support"] = e.x_support ? support_json(u, *e.x_support) : json(nullptr);
    j["image_parents"] = atoms_json(u, e.image.parents);
    j["image_size"] = e.image_size;
    j["image_verdict"] = to_string(e.image_verdict);
    j["image_support"] = e.image_support ? support_json(u, *e.image_support) : json(nullptr);
    j["induced_support"] = e.induced_support;
    entries.push_back(j);
  }
  r["entries"] = entries;
  r["inputs"] = rep.entries.size();
  r["symmetric_inputs"] = rep.symmetric_inputs;
  r["symmetric_images"] = rep.symmetric_images;
  r["distinct_images"] = rep.distinct_images;
  r["injective"] = rep.injective;
  const auto n = static_cast<int>(rep.entries.size());
  run.verdict(rep.injective && rep.symmetric_images == n && rep.distinct_images == n);
  run.emit(r);
}

json pairs_json(const FMUniverse& u, const std::vector<std::pair<Support, Support>>& ps, std::size_t limit) {
  json out = json::array();
  for (std::size_t i = 0; i < ps.size() && i < limit; ++i)
    out.push_back({{"S", support_json(u, ps[i].first)}, {"T", support_json(u, ps[i].second)}});
  return out;
}

void orbit(Run& run, const Common& c, const std::string& s_text, const std::string& t_text) {
  const auto u = c.universe();
  if (s_text.empty() != t_text.empty()) throw UsageError("--s and --t must be given together");
  if (!s_text.empty()) {
    const Support s = parse_support(u, s_text), t = parse_support(u, t_text);
    json r = run.record("fm_orbit_pair");
    r["S"] = support_json(u, s);
    r["T"] = support_json(u, t);
    r["spec_S"] = describe(orbit_spec(u, s));
    r["spec_T"] = describe(orbit_spec(u, t));
    const auto res = same_orbit(u, s, t, c.search_budget());
    const auto direct = find_mapping(u, s, t, c.search_budget());
    r["specs_equal"] = res.specs_equal;
    r["mapping"] = res.perm ? perm_json(u, *res.perm) : json(nullptr);
    r["method"] = res.method;
    r["mapping_exists"] = direct.has_value();
    run.verdict(res.specs_equal == direct.has_value());
    run.emit(r);
    return;
  }
  const auto rep = orbit_census(u, c.search_budget());
  json r = run.record("fm_orbit_census");
  r["supports"] = rep.supports;
  r["classes"] = rep.classes;
  r["spec_classes"] = rep.spec_classes;
  r["pairs"] = rep.pairs;
  r["equal_spec_pairs"] = rep.equal_spec_pairs;
  r["found_by_recursion"] = rep.found_by_recursion;
  r["found_by_search"] = rep.found_by_search;
  r["missing_count"] = rep.missing.size();
  r["unexpected_count"] = rep.unexpected.size();
  r["missing"] = pairs_json(u, rep.missing, c.limit);
  r["unexpected"] = pairs_json(u, rep.unexpected, c.limit);
  run.verdict(rep.pass());
  run.emit(r);
}

void coding(Run& run, const Common& c, int level) {
  const auto u = c.universe();
  const auto rep = coding_census(u, level, c.limit, c.search_budget());
  json r = run.record("fm_coding");
  r["level"] = rep.level;
  r["permutations"] = rep.permutations;
  r["targets"] = rep.targets;
  r["supports"] = rep.by_support.size();
  r["distinct_functions"] = rep.distinct_functions;
  r["violations"] = rep.violations;
  run.verdict(rep.violations == 0);
  run.emit(r);
}

}  // namespace fmx

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for stratified set theory, natural models, webs and permutation models"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  std::string expect;
  app.add_option("--seed", seed, "Seed recorded in every record")->capture_default_str();
  app.add_option("--budget", budget, "Evaluation or search budget")->check(CLI::PositiveNumber);
  app.add_option("--expect", expect, "Exit 1 on a negative verdict")->check(CLI::IsMember({"pass"}));

  Run run;
  std::vector<std::function<void()>> actions;
  auto on = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&actions, fn] { actions.push_back(fn); });
  };

  std::string mode_text = "TST";
  auto mode = [&] { return mode_from_string(mode_text); };

  std::string file;
  auto* stratify = app.add_subcommand("stratify", "Infer stratifications for a corpus");
  stratify->add_option("file", file)->required()->check(CLI::ExistingFile);
  stratify->add_option("--mode", mode_text)->capture_default_str();
  on(stratify, [&] { cmd_stratify(run, file, mode()); });

  int raise_by = 1;
  auto* raise_cmd = app.add_subcommand("raise", "Raise every type of every formula");
  raise_cmd->add_option("file", file)->required()->check(CLI::ExistingFile);
  raise_cmd->add_option("--by", raise_by)->capture_default_str();
  on(raise_cmd, [&] { cmd_raise(run, file, raise_by); });

  auto* typecheck = app.add_subcommand("typecheck", "Check declared types against a mode");
  typecheck->add_option("file", file)->required()->check(CLI::ExistingFile);
  typecheck->add_option("--mode", mode_text)->capture_default_str();
  on(typecheck, [&] { cmd_typecheck(run, file, mode()); });

  std::uint64_t base_size = 2;
  int depth = 3;
  auto* model = app.add_subcommand("model", "Natural models");
  model->require_subcommand(1);
  auto* model_eval = model->add_subcommand("eval", "Evaluate sentences in a default model");
  model_eval->add_option("file", file)->required()->check(CLI::ExistingFile);
  model_eval->add_option("--base", base_size)->capture_default_str();
  model_eval->add_option("--depth", depth)->capture_default_str();
  on(model_eval, [&] {
    const auto m = build_default(base_size, depth, eval_options(budget).budget);
    eval_corpus(run, "model_eval", file, Mode::TST,
                [&](const Sentence& s) { return eval(m, s, eval_options(budget)); });
  });

  std::vector<std::uint64_t> sizes{1, 2, 4, 16};
  std::vector<int> s_seq{0, 2, 3};
  auto* tstu = app.add_subcommand("tstu", "TSTU families");
  tstu->require_subcommand(1);
  auto* tstu_eval = tstu->add_subcommand("eval", "Evaluate sentences under an interpretation");
  tstu_eval->add_option("file", file)->required()->check(CLI::ExistingFile);
  tstu_eval->add_option("--sizes", sizes)->delimiter(',')->capture_default_str();
  tstu_eval->add_option("--s", s_seq)->delimiter(',')->capture_default_str();
  on(tstu_eval, [&] {
    const auto fam = build_tstu_family(sizes);
    const Interpretation interp(fam, s_seq);
    eval_corpus(run, "tstu_eval", file, Mode::TSTU,
                [&](const Sentence& s) { return eval_tstu(interp, s, eval_options(budget)); });
  });

  std::vector<std::uint64_t> amb_sizes{1, 2, 4, 16, 65536};
  std::string sigma_file;
  std::optional<int> k_opt;
  bool ttt = false;
  auto* ambiguity = app.add_subcommand("ambiguity", "Jensen-style ambiguity witness");
  ambiguity->add_option("--sizes", amb_sizes)->delimiter(',')->capture_default_str();
  ambiguity->add_option("--sigma", sigma_file)->required()->check(CLI::ExistingFile);
  ambiguity->add_option("--k", k_opt, "Also search a homogeneous set of this size");
  ambiguity->add_flag("--ttt", ttt, "Color by the translated sentences");
  on(ambiguity, [&] { cmd_ambiguity(run, amb_sizes, sigma_file, k_opt, ttt, eval_options(budget)); });

  int lambda = 6, n = 2;
  std::string colors;
  auto* ramsey = app.add_subcommand("ramsey", "Homogeneous set search on an explicit coloring");
  ramsey->add_option("--lambda", lambda)->required();
  ramsey->add_option("--n", n)->required();
  ramsey->add_option("--colors", colors)->required()->check(CLI::ExistingFile);
  ramsey->add_option("--k", k_opt, "Size of the homogeneous set (default n+1)");
  on(ramsey, [&] { cmd_ramsey(run, lambda, n, colors, k_opt); });

  auto* web = app.add_subcommand("web", "Tangled webs");
  web->require_subcommand(1);
  std::optional<int> web_lambda;
  int web_n = 1, cap = 16;
  auto* web_check = web->add_subcommand("check", "Naturality and elementarity of a fragment");
  web_check->add_option("fragment", file)->required()->check(CLI::ExistingFile);
  web_check->add_option("--lambda", web_lambda);
  web_check->add_option("--n", web_n)->capture_default_str();
  web_check->add_option("--cap", cap, "Size of the cardinality sentences")->capture_default_str();
  web_check->add_option("--sigma", sigma_file)->check(CLI::ExistingFile);
  on(web_check, [&] { cmd_web_check(run, file, web_lambda, web_n, cap, sigma_file, eval_options(budget)); });
  int sweep_lambda = 3;
  auto* web_sweep = web->add_subcommand("sweep", "Impossibility sweep over total fragments");
  web_sweep->add_option("--lambda", sweep_lambda)->capture_default_str();
  web_sweep->add_option("--cap", cap)->capture_default_str();
  web_sweep->add_option("--n", web_n)->capture_default_str();
  on(web_sweep, [&] { cmd_web_sweep(run, sweep_lambda, cap, web_n, eval_options(budget)); });

  fmx::Common fc;
  auto* fm = app.add_subcommand("fm", "Permutation-model combinatorics");
  fm->require_subcommand(1);
  fm->add_option("--k", fc.k, "Litter size")->capture_default_str();
  fm->add_option("--smax", fc.smax, "Smallness threshold")->capture_default_str();
  fm->add_option("--litters", fc.litters, "Litters in the base clan")->capture_default_str();
  fm->add_option("--stages", fc.stages)->capture_default_str();
  fm->add_option("--limit", fc.limit, "Witnesses listed per report")->capture_default_str();
  auto fm_sub = [&](const char* name, const char* help, std::function<void()> fn) {
    auto* sub = fm->add_subcommand(name, help);
    on(sub, [&, fn] {
      fc.budget = budget;
      fn();
    });
    return sub;
  };
  fm_sub("build", "Describe the universe", [&] { fmx::build(run, fc); });
  fm_sub("census", "Classify every subset of the base clan", [&] { fmx::census(run, fc); });
  auto* lemma = fm->add_subcommand("lemma", "Lemma checks");
  lemma->require_subcommand(1);
  auto lemma_sub = [&](const char* name, std::function<void()> fn) {
    on(lemma->add_subcommand(name), [&, fn] {
      fc.budget = budget;
      fn();
    });
  };
  lemma_sub("clan-subset", [&] { fmx::lemma_clan_subset(run, fc); });
  lemma_sub("extension", [&] { fmx::lemma_extension(run, fc); });
  lemma_sub("injection", [&] { fmx::lemma_injection(run, fc); });
  std::string s_text, t_text;
  auto* orbit = fm_sub("orbit", "Orbit census, or one pair of supports", [&] { fmx::orbit(run, fc, s_text, t_text); });
  orbit->add_option("--s", s_text, "Support, e.g. \"p0:1, {c0:L2:a1, c0:L2:a2, c0:L2:a3}\"");
  orbit->add_option("--t", t_text);
  int level = 1;
  auto* coding = fm_sub("coding", "Coding-function census", [&] { fmx::coding(run, fc, level); });
  coding->add_option("--level", level)->check(CLI::IsMember({1, 2}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  run.expect_pass = expect == "pass";
  echo_params(app, run.params);
  try {
    for (auto& act : actions) act();
  } catch (const UsageError& e) {
    run.error(e.what());
    return kUsage;
  } catch (const json::exception& e) {
    run.error(std::string("malformed JSON input: ") + e.what());
    return kUsage;
  } catch (const Error& e) {
    run.error(std::string(to_string(e.kind())) + ": " + e.what());
    return kUsage;
  }
  if (run.input_error) return kUsage;
  if (run.expect_pass && run.negative) return kNegative;
  return kOk;
}
