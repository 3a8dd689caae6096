#include "core/jsonio.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "core/lower.hpp"

namespace olab {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  fail_parse((path.empty() ? std::string(".") : path) + ": " + why);
}

void expect_object(const Json& v, const std::string& path) {
  if (!v.is_object()) bad(path, "expected an object");
}

void expect_array(const Json& v, const std::string& path) {
  if (!v.is_array()) bad(path, "expected an array");
}

std::string idx(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Re-raise a structure's own validation error with the JSON path prefixed.
template <class F>
void validated(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    throw Error(e.code, (path.empty() ? std::string(".") : path) + ": " + e.what());
  }
}

std::vector<std::string> labels_from_json(const Json& v, const std::string& path,
                                          const char* stem) {
  if (v.is_number()) {
    const long long n = jint(v, path);
    if (n < 1) bad(path, "need at least one label");
    std::vector<std::string> out;
    for (long long i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
    return out;
  }
  expect_array(v, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(jstr(v[i], idx(path, i)));
  return out;
}

std::vector<std::vector<double>> mat_from_json(const Json& v, const std::string& path) {
  expect_array(v, path);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(jvec(v[i], idx(path, i)));
  return out;
}

std::vector<int> imap_from_json(const Json& v, const std::string& path) {
  expect_array(v, path);
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(static_cast<int>(jint(v[i], idx(path, i))));
  return out;
}

std::vector<std::vector<int>> imaps_from_json(const Json& v, const std::string& path) {
  expect_array(v, path);
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(imap_from_json(v[i], idx(path, i)));
  return out;
}

Json kvec_to_json(const Vec& v) {
  if (v.size() == 1) return v[0];
  return Json(v);
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail_parse(what + ": " + e.what());
  }
}

const Json& jget(const Json& obj, const std::string& path, const char* key) {
  expect_object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) bad(path + "." + key, "missing required field");
  return *it;
}

const Json* jopt(const Json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double jnum(const Json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

long long jint(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) <= 9.007199254740992e15)
      return static_cast<long long>(d);
  }
  bad(path, "expected an integer");
}

std::uint64_t ju64(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const long long s = v.get<long long>();
    if (s >= 0) return static_cast<std::uint64_t>(s);
  }
  bad(path, "expected a nonnegative integer");
}

bool jbool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) bad(path, "expected true or false");
  return v.get<bool>();
}

std::string jstr(const Json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

Vec jvec(const Json& v, const std::string& path) {
  expect_array(v, path);
  Vec out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(jnum(v[i], idx(path, i)));
  return out;
}

Vec jkvec(const Json& v, const std::string& path) {
  if (v.is_number()) return Vec{v.get<double>()};
  return jvec(v, path);
}

std::vector<Vec> jkvecs(const Json& v, const std::string& path) {
  expect_array(v, path);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(jkvec(v[i], idx(path, i)));
  return out;
}

void jcheck_keys(const Json& obj, const std::string& path,
                 const std::vector<const char*>& allowed) {
  expect_object(obj, path);
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok) bad(path + "." + item.key(), "unknown field");
  }
}

// --- norms -------------------------------------------------------------------

NormSpec norm_from_json(const Json& v, const std::string& path) {
  NormSpec n;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "l1")
      n.kind = NormSpec::Kind::l1;
    else if (s == "l2")
      n.kind = NormSpec::Kind::l2;
    else if (s == "linf")
      n.kind = NormSpec::Kind::linf;
    else if (s == "lq")
      bad(path, "lq needs its exponent: use {\"kind\":\"lq\",\"q\":...}");
    else
      bad(path, "unknown norm \"" + s + "\" (expected l1, l2, linf, or an lq object)");
    return n;
  }
  jcheck_keys(v, path, {"kind", "q"});
  const std::string s = jstr(jget(v, path, "kind"), path + ".kind");
  if (s == "l1")
    n.kind = NormSpec::Kind::l1;
  else if (s == "l2")
    n.kind = NormSpec::Kind::l2;
  else if (s == "linf")
    n.kind = NormSpec::Kind::linf;
  else if (s == "lq")
    n.kind = NormSpec::Kind::lq;
  else
    bad(path + ".kind", "unknown norm \"" + s + "\"");
  if (const Json* q = jopt(v, "q")) n.q = jnum(*q, path + ".q");
  validated(path, [&] { n.validate(); });
  return n;
}

Json norm_to_json(const NormSpec& n) {
  if (n.kind == NormSpec::Kind::lq) return Json{{"kind", "lq"}, {"q", n.q}};
  return n.name();
}

// --- payoffs, targets --------------------------------------------------------

PayoffTable payoff_from_json(const Json& v, const std::string& path) {
  // Shorthand: a bare array is the values table with k inferred from entries.
  const bool bare = v.is_array();
  if (!bare) jcheck_keys(v, path, {"k", "values"});
  PayoffTable p;
  const Json& vals = bare ? v : jget(v, path, "values");
  expect_array(vals, bare ? path : path + ".values");
  int k = -1;
  if (!bare)
    if (const Json* kj = jopt(v, "k")) k = static_cast<int>(jint(*kj, path + ".k"));
  for (std::size_t f = 0; f < vals.size(); ++f) {
    const std::string fp = idx(bare ? path : path + ".values", f);
    expect_array(vals[f], fp);
    p.values.emplace_back();
    for (std::size_t x = 0; x < vals[f].size(); ++x) {
      Vec e = jkvec(vals[f][x], idx(fp, x));
      if (k < 0) k = static_cast<int>(e.size());
      if (static_cast<int>(e.size()) != k)
        bad(idx(fp, x), "expected a vector of length k=" + std::to_string(k));
      p.values.back().push_back(std::move(e));
    }
  }
  p.k = k < 0 ? 1 : k;
  return p;
}

Json payoff_to_json(const PayoffTable& p) {
  Json vals = Json::array();
  for (const auto& row : p.values) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(kvec_to_json(e));
    vals.push_back(std::move(r));
  }
  return Json{{"k", p.k}, {"values", std::move(vals)}};
}

TargetSet target_from_json(const Json& v, const std::string& path) {
  TargetSet s;
  s.vertices = jkvecs(v, path);
  return s;
}

Json target_to_json(const TargetSet& s) {
  Json out = Json::array();
  for (const auto& v : s.vertices) out.push_back(kvec_to_json(v));
  return out;
}

// --- aggregator --------------------------------------------------------------

namespace {

Aggregator aggregator_from_json(const Json& v, const std::string& path) {
  Aggregator a;
  const std::string kind = jstr(jget(v, path, "kind"), path + ".kind");
  if (kind == "average") {
    jcheck_keys(v, path, {"kind"});
    a.kind = Aggregator::Kind::average;
  } else if (kind == "norm-of-average" || kind == "neg-norm-of-average") {
    jcheck_keys(v, path, {"kind", "norm"});
    a.kind = kind == "norm-of-average" ? Aggregator::Kind::norm_of_average
                                       : Aggregator::Kind::neg_norm_of_average;
    a.norm = norm_from_json(jget(v, path, "norm"), path + ".norm");
  } else if (kind == "distance-to-set") {
    jcheck_keys(v, path, {"kind", "norm", "target"});
    a.kind = Aggregator::Kind::distance_to_set;
    a.norm = norm_from_json(jget(v, path, "norm"), path + ".norm");
    a.target = target_from_json(jget(v, path, "target"), path + ".target");
  } else if (kind == "function-of-average") {
    jcheck_keys(v, path, {"kind", "fn"});
    a.kind = Aggregator::Kind::function_of_average;
    const Json& fn = jget(v, path, "fn");
    jcheck_keys(fn, path + ".fn", {"name", "norm"});
    const std::string name = jstr(jget(fn, path + ".fn", "name"), path + ".fn.name");
    if (name == "norm")
      a.fn.name = FnOfAverage::Name::norm;
    else if (name == "neg_norm")
      a.fn.name = FnOfAverage::Name::neg_norm;
    else if (name == "max_coord")
      a.fn.name = FnOfAverage::Name::max_coord;
    else
      bad(path + ".fn.name", "unknown function \"" + name + "\"");
    if (name != "max_coord")
      a.fn.norm = norm_from_json(jget(fn, path + ".fn", "norm"), path + ".fn.norm");
    else if (jopt(fn, "norm"))
      bad(path + ".fn.norm", "unknown field for max_coord");
  } else {
    bad(path + ".kind", "unknown aggregator \"" + kind + "\"");
  }
  return a;
}

Json aggregator_to_json(const Aggregator& a) {
  Json out{{"kind", a.kind_name()}};
  switch (a.kind) {
    case Aggregator::Kind::average: break;
    case Aggregator::Kind::norm_of_average:
    case Aggregator::Kind::neg_norm_of_average: out["norm"] = norm_to_json(a.norm); break;
    case Aggregator::Kind::distance_to_set:
      out["norm"] = norm_to_json(a.norm);
      out["target"] = target_to_json(a.target);
      break;
    case Aggregator::Kind::function_of_average: {
      Json fn;
      switch (a.fn.name) {
        case FnOfAverage::Name::norm: fn["name"] = "norm"; break;
        case FnOfAverage::Name::neg_norm: fn["name"] = "neg_norm"; break;
        case FnOfAverage::Name::max_coord: fn["name"] = "max_coord"; break;
      }
      if (a.fn.name != FnOfAverage::Name::max_coord) fn["norm"] = norm_to_json(a.fn.norm);
      out["fn"] = std::move(fn);
      break;
    }
  }
  return out;
}

// --- transforms ---------------------------------------------------------------

TransformStep step_from_json(const Json& v, const std::string& path) {
  TransformStep st;
  const bool dep = jopt(v, "departure") != nullptr;
  const bool ovr = jopt(v, "override") != nullptr;
  if (dep == ovr) bad(path, "expected exactly one of \"departure\" or \"override\"");
  if (dep) {
    jcheck_keys(v, path, {"departure"});
    st.kind = TransformStep::Kind::departure;
    st.map = imap_from_json(*jopt(v, "departure"), path + ".departure");
  } else {
    jcheck_keys(v, path, {"override"});
    st.kind = TransformStep::Kind::payoff_override;
    const Json& tab = *jopt(v, "override");
    expect_array(tab, path + ".override");
    for (std::size_t f = 0; f < tab.size(); ++f) {
      const std::string fp = idx(path + ".override", f);
      st.table.push_back(jkvecs(tab[f], fp));
    }
  }
  return st;
}

Json step_to_json(const TransformStep& st, int k) {
  if (st.kind == TransformStep::Kind::departure) return Json{{"departure", st.map}};
  Json tab = Json::array();
  for (const auto& row : st.table) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(k == 1 ? kvec_to_json(e) : Json(e));
    tab.push_back(std::move(r));
  }
  return Json{{"override", std::move(tab)}};
}

TransformSet transforms_from_json(const Json& v, const std::string& path) {
  expect_array(v, path);
  TransformSet out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string sp = idx(path, i);
    expect_object(v[i], sp);
    TransformSeq seq;
    if (jopt(v[i], "departure") || jopt(v[i], "override")) {
      seq.steps.push_back(step_from_json(v[i], sp));
    } else {
      jcheck_keys(v[i], sp, {"name", "steps"});
      if (const Json* name = jopt(v[i], "name")) seq.name = jstr(*name, sp + ".name");
      const Json& steps = jget(v[i], sp, "steps");
      expect_array(steps, sp + ".steps");
      for (std::size_t t = 0; t < steps.size(); ++t)
        seq.steps.push_back(step_from_json(steps[t], idx(sp + ".steps", t)));
    }
    out.seqs.push_back(std::move(seq));
  }
  return out;
}

Json transforms_to_json(const TransformSet& phi, int k) {
  Json out = Json::array();
  for (const auto& seq : phi.seqs) {
    Json steps = Json::array();
    // A validated set repeats time-invariant sequences T times; serialize the
    // single step so configs stay readable and broadcast back on parse.
    bool uniform = true;
    for (const auto& st : seq.steps)
      if (!(st == seq.steps[0])) uniform = false;
    if (uniform && !seq.steps.empty()) {
      steps.push_back(step_to_json(seq.steps[0], k));
    } else {
      for (const auto& st : seq.steps) steps.push_back(step_to_json(st, k));
    }
    out.push_back(Json{{"name", seq.name}, {"steps", std::move(steps)}});
  }
  return out;
}

// --- game factories -----------------------------------------------------------

GameSpec game_from_make(const Json& v, const std::string& path) {
  const std::string family = jstr(jget(v, path, "family"), path + ".family");
  const auto geti = [&](const char* key) {
    return static_cast<int>(jint(jget(v, path, key), path + "." + key));
  };
  if (family == "external") {
    jcheck_keys(v, path, {"family", "F", "X", "loss", "T"});
    return make_external(labels_from_json(jget(v, path, "F"), path + ".F", "f"),
                         labels_from_json(jget(v, path, "X"), path + ".X", "x"),
                         mat_from_json(jget(v, path, "loss"), path + ".loss"), geti("T"));
  }
  if (family == "phi_regret") {
    jcheck_keys(v, path, {"family", "F", "X", "loss", "phi", "T", "budget"});
    const Json& phi = jget(v, path, "phi");
    PhiFamily fam = PhiFamily::explicit_list;
    std::vector<std::vector<int>> maps;
    if (phi.is_string()) {
      const std::string s = phi.get<std::string>();
      if (s == "internal")
        fam = PhiFamily::internal;
      else if (s == "swap_all")
        fam = PhiFamily::swap_all;
      else
        bad(path + ".phi", "expected internal, swap_all, or an array of maps");
    } else {
      maps = imaps_from_json(phi, path + ".phi");
    }
    long long budget = 1'000'000;
    if (const Json* b = jopt(v, "budget")) budget = jint(*b, path + ".budget");
    return make_phi_regret(labels_from_json(jget(v, path, "F"), path + ".F", "f"),
                           labels_from_json(jget(v, path, "X"), path + ".X", "x"),
                           mat_from_json(jget(v, path, "loss"), path + ".loss"), fam, maps,
                           geti("T"), budget);
  }
  if (family == "adaptive") {
    jcheck_keys(v, path, {"family", "F", "X", "loss", "psi", "T", "budget"});
    long long budget = 100'000;
    if (const Json* b = jopt(v, "budget")) budget = jint(*b, path + ".budget");
    return make_adaptive_game(labels_from_json(jget(v, path, "F"), path + ".F", "f"),
                              labels_from_json(jget(v, path, "X"), path + ".X", "x"),
                              mat_from_json(jget(v, path, "loss"), path + ".loss"),
                              imaps_from_json(jget(v, path, "psi"), path + ".psi"), geti("T"),
                              budget);
  }
  if (family == "global_cost") {
    jcheck_keys(v, path, {"family", "k", "norm", "T", "f_grid", "x_grid"});
    return make_global_cost(geti("k"),
                            norm_from_json(jget(v, path, "norm"), path + ".norm"), geti("T"),
                            jkvecs(jget(v, path, "f_grid"), path + ".f_grid"),
                            jkvecs(jget(v, path, "x_grid"), path + ".x_grid"));
  }
  if (family == "supervised") {
    jcheck_keys(v, path, {"family", "z", "fvals", "T"});
    return make_supervised_game(labels_from_json(jget(v, path, "z"), path + ".z", "z"),
                                mat_from_json(jget(v, path, "fvals"), path + ".fvals"),
                                geti("T"));
  }
  if (family == "linear") {
    jcheck_keys(v, path, {"family", "fs", "xs", "T"});
    return make_linear_game(jkvecs(jget(v, path, "fs"), path + ".fs"),
                            jkvecs(jget(v, path, "xs"), path + ".xs"), geti("T"));
  }
  if (family == "blackwell") {
    jcheck_keys(v, path, {"family", "H", "norm", "T"});
    return make_blackwell_game(jkvecs(jget(v, path, "H"), path + ".H"),
                               norm_from_json(jget(v, path, "norm"), path + ".norm"),
                               geti("T"));
  }
  bad(path + ".family", "unknown family \"" + family + "\"");
}

}  // namespace

// --- game ----------------------------------------------------------------------

const std::vector<const char*>& game_keys() {
  static const std::vector<const char*> keys = {"F",          "X",          "T",   "payoff",
                                                "aggregator", "transforms", "make"};
  return keys;
}

GameSpec game_from_json(const Json& v, const std::string& path) {
  expect_object(v, path);
  if (const Json* mk = jopt(v, "make")) {
    for (const char* key : game_keys())
      if (std::string(key) != "make" && jopt(v, key))
        bad(path + "." + key, "cannot be combined with \"make\"");
    GameSpec g = game_from_make(*mk, path + ".make");
    validated(path + ".make", [&] { g.validate(); });
    return g;
  }
  GameSpec g;
  g.F = labels_from_json(jget(v, path, "F"), path + ".F", "f");
  g.X = labels_from_json(jget(v, path, "X"), path + ".X", "x");
  g.T = static_cast<int>(jint(jget(v, path, "T"), path + ".T"));
  g.payoff = payoff_from_json(jget(v, path, "payoff"), path + ".payoff");
  if (const Json* agg = jopt(v, "aggregator"))
    g.agg = aggregator_from_json(*agg, path + ".aggregator");
  if (const Json* tr = jopt(v, "transforms")) {
    g.phi = transforms_from_json(*tr, path + ".transforms");
  } else {
    // Default benchmark: the identity relabelling (plain nonnegative regret).
    TransformSeq seq;
    seq.name = "id";
    TransformStep st;
    st.kind = TransformStep::Kind::departure;
    for (int f = 0; f < static_cast<int>(g.F.size()); ++f) st.map.push_back(f);
    seq.steps.push_back(std::move(st));
    g.phi.seqs.push_back(std::move(seq));
  }
  validated(path, [&] { g.validate(); });
  return g;
}

Json game_to_json(const GameSpec& g) {
  return Json{{"F", g.F},
              {"X", g.X},
              {"T", g.T},
              {"payoff", payoff_to_json(g.payoff)},
              {"aggregator", aggregator_to_json(g.agg)},
              {"transforms", transforms_to_json(g.phi, g.payoff.k)}};
}

// --- trees ----------------------------------------------------------------------

LabeledTree labeled_tree_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"T", "nodes"});
  LabeledTree t;
  t.T = static_cast<int>(jint(jget(v, path, "T"), path + ".T"));
  const Json& nodes = jget(v, path, "nodes");
  expect_array(nodes, path + ".nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string np = idx(path + ".nodes", i);
    const std::vector<int> fx = imap_from_json(nodes[i], np);
    if (fx.size() != 2) bad(np, "expected an [f,x] pair");
    t.nodes.emplace_back(fx[0], fx[1]);
  }
  return t;
}

Json labeled_tree_to_json(const LabeledTree& t) {
  Json nodes = Json::array();
  for (const auto& [f, x] : t.nodes) nodes.push_back(Json::array({f, x}));
  return Json{{"T", t.T}, {"nodes", std::move(nodes)}};
}

RealTree real_tree_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"T", "nodes"});
  RealTree t;
  t.T = static_cast<int>(jint(jget(v, path, "T"), path + ".T"));
  t.nodes = jvec(jget(v, path, "nodes"), path + ".nodes");
  validated(path, [&] { t.validate(); });
  return t;
}

Json real_tree_to_json(const RealTree& t) { return Json{{"T", t.T}, {"nodes", t.nodes}}; }

std::vector<RealTree> real_trees_from_json(const Json& v, const std::string& path) {
  expect_array(v, path);
  std::vector<RealTree> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(real_tree_from_json(v[i], idx(path, i)));
  return out;
}

VecTree vec_tree_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"T", "k", "nodes"});
  VecTree t;
  t.T = static_cast<int>(jint(jget(v, path, "T"), path + ".T"));
  const Json& nodes = jget(v, path, "nodes");
  t.nodes = jkvecs(nodes, path + ".nodes");
  if (const Json* k = jopt(v, "k"))
    t.k = static_cast<int>(jint(*k, path + ".k"));
  else if (!t.nodes.empty())
    t.k = static_cast<int>(t.nodes[0].size());
  validated(path, [&] { t.validate(); });
  return t;
}

Json vec_tree_to_json(const VecTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes) nodes.push_back(t.k == 1 ? kvec_to_json(n) : Json(n));
  return Json{{"T", t.T}, {"k", t.k}, {"nodes", std::move(nodes)}};
}

MdsSpec mds_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"tree", "palette", "palette_seed", "T", "k", "B", "norm", "sigma"});
  MdsSpec m;
  if (const Json* tree = jopt(v, "tree")) {
    m.tree = vec_tree_from_json(*tree, path + ".tree");
  } else {
    m.palette = jkvecs(jget(v, path, "palette"), path + ".palette");
    m.T = static_cast<int>(jint(jget(v, path, "T"), path + ".T"));
    if (const Json* k = jopt(v, "k"))
      m.k = static_cast<int>(jint(*k, path + ".k"));
    else if (!m.palette.empty())
      m.k = static_cast<int>(m.palette[0].size());
    if (const Json* seed = jopt(v, "palette_seed")) m.palette_seed = ju64(*seed, path + ".palette_seed");
  }
  if (const Json* b = jopt(v, "B")) m.B = jnum(*b, path + ".B");
  if (const Json* n = jopt(v, "norm")) m.norm = norm_from_json(*n, path + ".norm");
  if (const Json* s = jopt(v, "sigma")) m.sigma = jnum(*s, path + ".sigma");
  validated(path, [&] { m.validate(); });
  return m;
}

Json mds_to_json(const MdsSpec& m) {
  Json out;
  if (!m.tree.nodes.empty()) {
    out["tree"] = vec_tree_to_json(m.tree);
  } else {
    Json pal = Json::array();
    for (const auto& p : m.palette) pal.push_back(m.k == 1 ? kvec_to_json(p) : Json(p));
    out["palette"] = std::move(pal);
    out["palette_seed"] = m.palette_seed;
    out["T"] = m.T;
    out["k"] = m.k;
  }
  out["B"] = m.B;
  out["norm"] = norm_to_json(m.norm);
  if (!std::isnan(m.sigma)) out["sigma"] = m.sigma;
  return out;
}

// --- parameter blocks -------------------------------------------------------------

GammaSpec gamma_from_json(const Json& v, const std::string& path) {
  GammaSpec g;
  const std::string name = jstr(jget(v, path, "name"), path + ".name");
  if (name == "identity") {
    jcheck_keys(v, path, {"name"});
    g.name = GammaSpec::Name::identity;
  } else if (name == "indicator") {
    jcheck_keys(v, path, {"name", "theta"});
    g.name = GammaSpec::Name::indicator;
    g.theta = jnum(jget(v, path, "theta"), path + ".theta");
  } else if (name == "exp_quadratic") {
    jcheck_keys(v, path, {"name", "alpha", "scale"});
    g.name = GammaSpec::Name::exp_quadratic;
    g.alpha = jnum(jget(v, path, "alpha"), path + ".alpha");
    if (const Json* s = jopt(v, "scale")) g.scale = jnum(*s, path + ".scale");
  } else {
    bad(path + ".name", "unknown leaf transformation \"" + name + "\"");
  }
  return g;
}

Json gamma_to_json(const GammaSpec& g) {
  switch (g.name) {
    case GammaSpec::Name::identity: return Json{{"name", "identity"}};
    case GammaSpec::Name::indicator: return Json{{"name", "indicator"}, {"theta", g.theta}};
    case GammaSpec::Name::exp_quadratic:
      return Json{{"name", "exp_quadratic"}, {"alpha", g.alpha}, {"scale", g.scale}};
  }
  fail_internal("unhandled gamma name");
}

ConcParams conc_params_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"T", "theta", "c", "lambda", "B", "sigma", "eps", "n_gamma", "a", "b",
                        "N", "nu", "R", "r_payoff", "p", "q", "c_abs", "norm"});
  ConcParams cp;
  const auto read = [&](const char* key, double& field) {
    if (const Json* j = jopt(v, key)) field = jnum(*j, path + "." + key);
  };
  read("T", cp.T);
  read("theta", cp.theta);
  read("c", cp.c);
  read("lambda", cp.lambda);
  read("B", cp.B);
  read("sigma", cp.sigma);
  read("eps", cp.eps);
  read("n_gamma", cp.n_gamma);
  read("a", cp.a);
  read("b", cp.b);
  read("N", cp.N);
  read("nu", cp.nu);
  read("R", cp.R);
  read("r_payoff", cp.r_payoff);
  read("p", cp.p);
  read("q", cp.q);
  read("c_abs", cp.c_abs);
  if (const Json* n = jopt(v, "norm")) {
    cp.has_norm = true;
    cp.norm = norm_from_json(*n, path + ".norm");
  }
  return cp;
}

CoverTable cover_table_from_json(const Json& v, const std::string& path) {
  CoverTable ct;
  if (v.is_string()) {
    validated(path, [&] { ct = cover_table_from_csv(v.get<std::string>()); });
    return ct;
  }
  if (jopt(v, "csv")) {
    jcheck_keys(v, path, {"csv"});
    validated(path + ".csv",
              [&] { ct = cover_table_from_csv(jstr(*jopt(v, "csv"), path + ".csv")); });
    return ct;
  }
  jcheck_keys(v, path, {"rows"});
  const Json& rows = jget(v, path, "rows");
  expect_array(rows, path + ".rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vec pair = jvec(rows[i], idx(path + ".rows", i));
    if (pair.size() != 2) bad(idx(path + ".rows", i), "expected a [beta, log_cover] pair");
    ct.rows.emplace_back(pair[0], pair[1]);
  }
  validated(path, [&] { ct.validate(); });
  return ct;
}

BoundParams bound_params_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"T", "card", "payoff_bound", "grad_bound", "sigma", "p", "q", "gamma",
                        "c_abs", "cover"});
  BoundParams bp;
  const auto read = [&](const char* key, double& field) {
    if (const Json* j = jopt(v, key)) field = jnum(*j, path + "." + key);
  };
  read("T", bp.T);
  read("card", bp.card);
  read("payoff_bound", bp.payoff_bound);
  read("grad_bound", bp.grad_bound);
  read("sigma", bp.sigma);
  read("p", bp.p);
  read("q", bp.q);
  read("gamma", bp.gamma);
  read("c_abs", bp.c_abs);
  if (const Json* c = jopt(v, "cover")) bp.cover = cover_table_from_json(*c, path + ".cover");
  return bp;
}

CombParams comb_params_from_json(const Json& v, const std::string& path) {
  jcheck_keys(v, path, {"T", "d", "k", "changes", "n", "alpha", "fat", "L"});
  CombParams cp;
  const auto readi = [&](const char* key, long long& field) {
    if (const Json* j = jopt(v, key)) field = jint(*j, path + "." + key);
  };
  readi("T", cp.T);
  readi("d", cp.d);
  readi("k", cp.k);
  readi("changes", cp.changes);
  readi("n", cp.n);
  readi("fat", cp.fat);
  if (const Json* a = jopt(v, "alpha")) cp.alpha = jnum(*a, path + ".alpha");
  if (const Json* l = jopt(v, "L")) cp.L = jnum(*l, path + ".L");
  return cp;
}

// --- policies and histories ---------------------------------------------------------

History history_from_key(const std::string& key, const GameSpec& g, const std::string& path) {
  History h;
  if (key.empty()) return h;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    const std::size_t semi = std::min(key.find(';', pos), key.size());
    const std::string round = key.substr(pos, semi - pos);
    const std::size_t comma = round.find(',');
    int f = -1, x = -1;
    try {
      if (comma != std::string::npos) {
        f = std::stoi(round.substr(0, comma));
        x = std::stoi(round.substr(comma + 1));
      }
    } catch (const std::exception&) {
      f = -1;
    }
    if (f < 0 || x < 0 || f >= g.nf() || x >= g.nx())
      bad(path, "history \"" + key + "\": round \"" + round + "\" is not \"f,x\" with f < " +
                    std::to_string(g.nf()) + " and x < " + std::to_string(g.nx()));
    h.emplace_back(f, x);
    pos = semi + 1;
  }
  return h;
}

StrategyTable strategy_from_json(const Json& v, const std::string& path, const GameSpec& g,
                                 bool over_x) {
  expect_object(v, path);
  StrategyTable table;
  const std::size_t want = static_cast<std::size_t>(over_x ? g.nx() : g.nf());
  for (const auto& item : v.items()) {
    const std::string ip = path + "[\"" + item.key() + "\"]";
    History h = history_from_key(item.key(), g, ip);
    if (static_cast<int>(h.size()) >= g.T)
      bad(ip, "history has " + std::to_string(h.size()) + " rounds; the table covers rounds 0.." +
                  std::to_string(g.T - 1));
    Vec w = jvec(item.value(), ip);
    if (w.size() != want) bad(ip, "expected " + std::to_string(want) + " weights");
    double sum = 0;
    for (double wi : w) {
      if (wi < -1e-12) bad(ip, "weights must be nonnegative");
      sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-6) bad(ip, "weights must sum to 1; got " + fmt12(sum));
    table[std::move(h)] = std::move(w);
  }
  return table;
}

Json strategy_to_json(const StrategyTable& t) {
  Json out = Json::object();
  for (const auto& [h, w] : t) out[history_key(h)] = w;
  return out;
}

namespace {

template <class Policy>
Policy policy_from_json(const Json& v, const std::string& path, const GameSpec& g, bool over_x) {
  Policy p;
  const std::string kind = jstr(jget(v, path, "kind"), path + ".kind");
  constexpr bool is_player = std::is_same_v<Policy, PlayerPolicy>;
  if constexpr (is_player) {
    if (kind == "minimax") {
      jcheck_keys(v, path, {"kind"});
      p.kind = PlayerPolicy::Kind::minimax;
      return p;
    }
  }
  if (kind == "uniform") {
    jcheck_keys(v, path, {"kind"});
    p.kind = Policy::Kind::uniform;
  } else if (kind == "best_response") {
    jcheck_keys(v, path, {"kind"});
    p.kind = Policy::Kind::best_response;
  } else if (kind == "fixed") {
    jcheck_keys(v, path, {"kind", "actions"});
    p.kind = Policy::Kind::fixed;
    p.fixed = imap_from_json(jget(v, path, "actions"), path + ".actions");
    const int limit = over_x ? g.nx() : g.nf();
    for (std::size_t i = 0; i < p.fixed.size(); ++i)
      if (p.fixed[i] < 0 || p.fixed[i] >= limit)
        bad(idx(path + ".actions", i), "action index out of range");
  } else if (kind == "table") {
    jcheck_keys(v, path, {"kind", "table"});
    p.kind = Policy::Kind::table;
    p.table = strategy_from_json(jget(v, path, "table"), path + ".table", g, over_x);
  } else {
    bad(path + ".kind", "unknown policy \"" + kind + "\"");
  }
  return p;
}

}  // namespace

PlayerPolicy player_policy_from_json(const Json& v, const std::string& path, const GameSpec& g) {
  return policy_from_json<PlayerPolicy>(v, path, g, false);
}

AdversaryPolicy adversary_policy_from_json(const Json& v, const std::string& path,
                                           const GameSpec& g) {
  return policy_from_json<AdversaryPolicy>(v, path, g, true);
}

// --- calibration transcripts ----------------------------------------------------------

CalibrationTranscript transcript_from_json(const Json& v, const std::string& path) {
  CalibrationTranscript tr;
  if (jopt(v, "csv")) {
    jcheck_keys(v, path, {"csv"});
    validated(path + ".csv",
              [&] { tr = CalibrationTranscript::from_csv(jstr(*jopt(v, "csv"), path + ".csv")); });
    return tr;
  }
  jcheck_keys(v, path, {"k", "forecasts", "outcomes"});
  tr.k = static_cast<int>(jint(jget(v, path, "k"), path + ".k"));
  const Json& fc = jget(v, path, "forecasts");
  expect_array(fc, path + ".forecasts");
  for (std::size_t i = 0; i < fc.size(); ++i)
    tr.forecasts.push_back(jvec(fc[i], idx(path + ".forecasts", i)));
  const Json& oc = jget(v, path, "outcomes");
  expect_array(oc, path + ".outcomes");
  for (std::size_t i = 0; i < oc.size(); ++i)
    tr.outcomes.push_back(static_cast<int>(jint(oc[i], idx(path + ".outcomes", i))));
  validated(path, [&] { tr.validate(); });
  return tr;
}

Json transcript_to_json(const CalibrationTranscript& tr) {
  return Json{{"k", tr.k}, {"forecasts", tr.forecasts}, {"outcomes", tr.outcomes}};
}

}  // namespace olab
