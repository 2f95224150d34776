#include "mdca/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace mdca {

namespace {

[[noreturn]] void fail(const std::string &where, const std::string &what)
{
  throw InputError(where + ": " + what);
}

Rational rat(const Json &j, const std::string &where)
{
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError &e) {
      fail(where, e.what());
    }
  }
  if (j.is_number_integer())
    return Rational(mpz_class(j.dump(), 10));
  fail(where, "expected a rational written as a string \"p/q\"");
}

std::string rat_str(const Rational &q) { return format_rational(q); }

const Json &need(const Json &obj, const std::string &key, const std::string &where)
{
  if (!obj.is_object())
    fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    fail(where, "missing \"" + key + "\"");
  return *it;
}

const Json &need_array(const Json &j, const std::string &where, std::size_t len = 0)
{
  if (!j.is_array())
    fail(where, "expected an array");
  if (len && j.size() != len)
    fail(where, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
  return j;
}

std::string str(const Json &j, const std::string &where)
{
  if (!j.is_string())
    fail(where, "expected a string");
  return j.get<std::string>();
}

int integer(const Json &j, const std::string &where)
{
  if (!j.is_number_integer())
    fail(where, "expected an integer");
  return j.get<int>();
}

std::string at(const std::string &where, std::size_t i)
{
  return where + "[" + std::to_string(i) + "]";
}

// index given as integer or label
int index_in(const GradedBasis &B, const Json &j, const std::string &where)
{
  if (j.is_string()) {
    auto i = B.find(j.get<std::string>());
    if (!i)
      fail(where, "unknown label \"" + j.get<std::string>() + "\"");
    return *i;
  }
  const int i = integer(j, where);
  if (i < 0 || i >= (int)B.size())
    fail(where, "index " + std::to_string(i) + " out of range");
  return i;
}

GradedBasis parse_generators(const Json &j, const std::string &where)
{
  need_array(j, where);
  std::vector<Generator> g;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    g.push_back({str(need(j[i], "label", w), w + ".label"),
                 -integer(need(j[i], "degree", w), w + ".degree")});
    if (g.back().label.empty())
      fail(w + ".label", "empty label");
  }
  try {
    return GradedBasis(g);
  } catch (const InputError &e) {
    fail(where, e.what());
  }
}

Json emit_generators(const GradedBasis &B)
{
  Json a = Json::array();
  for (const auto &g : B.generators())
    a.push_back({{"label", g.label}, {"degree", -g.degree}});
  return a;
}

AlgebraPtr parse_algebra(const Json &j)
{
  const std::string where = "algebra";
  if (!j.is_object())
    fail(where, "expected an object");
  if (!j.contains("generators") || j["generators"].empty())
    fail(where, "unit required (no generators)");
  GradedBasis B = parse_generators(j["generators"], where + ".generators");
  const int unit = index_in(B, need(j, "unit", where), where + ".unit");
  std::vector<std::tuple<int, int, int, Rational>> mult;
  if (j.contains("mult")) {
    const Json &m = need_array(j["mult"], where + ".mult");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string w = at(where + ".mult", i);
      need_array(m[i], w, 4);
      mult.emplace_back(index_in(B, m[i][0], w), index_in(B, m[i][1], w), index_in(B, m[i][2], w),
                        rat(m[i][3], w));
      const auto &[a, b, c, x] = mult.back();
      if (B.degree(a) + B.degree(b) != B.degree(c))
        fail(w, "degree mismatch: |" + B.label(a) + "| + |" + B.label(b) + "| != |" +
                    B.label(c) + "|");
    }
  }
  std::vector<std::tuple<int, int, Rational>> diff;
  if (j.contains("diff")) {
    const Json &d = need_array(j["diff"], where + ".diff");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::string w = at(where + ".diff", i);
      need_array(d[i], w, 3);
      diff.emplace_back(index_in(B, d[i][0], w), index_in(B, d[i][1], w), rat(d[i][2], w));
      const auto &[t, s, c] = diff.back();
      if (B.degree(t) != B.degree(s) - 1)
        fail(w, "the differential raises upper degree by one: d(" + B.label(s) + ") -> " +
                    B.label(t));
    }
  }
  auto A = std::make_shared<AlgebraSpec>(AlgebraSpec::make(std::move(B), unit, mult, diff));
  auto bad = validate_algebra(*A);
  if (!bad.empty())
    fail(where, bad[0].invariant + " fails at " + bad[0].witness);
  return A;
}

Json emit_algebra(const AlgebraSpec &A)
{
  Json mult = Json::array(), diff = Json::array();
  const int n = (int)A.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto &[k, c] : A.mult[i][j])
        mult.push_back({i, j, k, rat_str(c)});
  for (int i = 0; i < n; ++i)
    for (const auto &[k, c] : A.diff.apply(unit_vector(i)))
      diff.push_back({k, i, rat_str(c)});
  return {{"generators", emit_generators(A.basis)}, {"unit", A.unit}, {"mult", mult}, {"diff", diff}};
}

ModulePtr parse_module(const AlgebraPtr &A, const Json &j)
{
  const std::string where = "module";
  GradedBasis B = parse_generators(need(j, "generators", where), where + ".generators");
  if (B.size() == 0)
    fail(where, "at least one generator required");
  std::vector<std::tuple<int, int, int, Rational>> diff;
  if (j.contains("diff")) {
    const Json &d = need_array(j["diff"], where + ".diff");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::string w = at(where + ".diff", i);
      need_array(d[i], w, 4);
      diff.emplace_back(index_in(A->basis, d[i][0], w), index_in(B, d[i][1], w),
                        index_in(B, d[i][2], w), rat(d[i][3], w));
      const auto &[a, l, k, c] = diff.back();
      if (A->degree(a) + B.degree(l) != B.degree(k) - 1)
        fail(w, "degree mismatch in d(" + B.label(k) + ")");
    }
  }
  auto L = std::make_shared<ModuleSpec>(ModuleSpec::make(A, std::move(B), diff));
  auto bad = validate_module(*L);
  if (!bad.empty())
    fail(where, bad[0].invariant + " fails at " + bad[0].witness);
  return L;
}

Json emit_module(const ModuleSpec &L)
{
  Json diff = Json::array();
  for (int k = 0; k < L.rank(); ++k)
    for (const auto &[q, c] : L.diff_L.apply(unit_vector(L.qindex(L.over->unit, k))))
      diff.push_back({L.a_part(q), L.x_part(q), k, rat_str(c)});
  return {{"generators", emit_generators(L.a_basis)}, {"diff", diff}};
}

int qlabel(const ModuleSpec &L, const Json &j, const std::string &where)
{
  return index_in(L.qbasis, j, where);
}

void parse_lie_rinehart(Instance &inst, const Json &s, bool canonical_allowed)
{
  const std::string where = "structure";
  const ModuleSpec &L = *inst.L;
  const AlgebraSpec &A = *inst.A;
  if (canonical_allowed && !s.contains("bracket") && !s.contains("anchor"))
    return; // Der(A) with its commutator bracket, already filled
  LieRinehartData d;
  d.L = inst.L;
  const int N = (int)L.qbasis.size();
  for (int q = 0; q < N; ++q)
    d.anchor.emplace_back(L.qbasis.degree(q), A.dim());
  if (s.contains("bracket")) {
    const Json &b = need_array(s["bracket"], where + ".bracket");
    std::map<std::pair<int, int>, SparseVec> given;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string w = at(where + ".bracket", i);
      need_array(b[i], w, 4);
      const int x = qlabel(L, b[i][0], w), y = qlabel(L, b[i][1], w), z = qlabel(L, b[i][2], w);
      if (L.qbasis.degree(z) != L.qbasis.degree(x) + L.qbasis.degree(y))
        fail(w, "degree mismatch: [" + L.qbasis.label(x) + ", " + L.qbasis.label(y) + "] -> " +
                    L.qbasis.label(z));
      add_entry(d.bracket[{x, y}], z, rat(b[i][3], w));
    }
    try {
      complete_skew(d);
    } catch (const InputError &e) {
      fail(where + ".bracket", e.what());
    }
  }
  if (s.contains("anchor")) {
    const Json &a = need_array(s["anchor"], where + ".anchor");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string w = at(where + ".anchor", i);
      need_array(a[i], w, 4);
      const int x = qlabel(L, a[i][0], w);
      const int t = index_in(A.basis, a[i][1], w), src = index_in(A.basis, a[i][2], w);
      if (A.degree(t) != A.degree(src) + L.qbasis.degree(x))
        fail(w, "degree mismatch: " + L.qbasis.label(x) + " maps " + A.basis.label(src) +
                    " to " + A.basis.label(t));
      add_entry(d.anchor[x].col[src], t, rat(a[i][3], w));
    }
  }
  inst.lr = std::move(d);
}

Json emit_lie_rinehart(const LieRinehartData &d)
{
  const ModuleSpec &L = *d.L;
  const AlgebraSpec &A = *L.over;
  Json b = Json::array(), a = Json::array();
  for (const auto &[xy, v] : d.bracket) {
    if (xy.first > xy.second)
      continue;
    for (const auto &[z, c] : v)
      b.push_back({L.qbasis.label(xy.first), L.qbasis.label(xy.second), L.qbasis.label(z), rat_str(c)});
  }
  for (int q = 0; q < (int)d.anchor.size(); ++q)
    for (int src = 0; src < (int)A.dim(); ++src)
      for (const auto &[t, c] : d.anchor[q].col[src])
        a.push_back({L.qbasis.label(q), A.basis.label(t), A.basis.label(src), rat_str(c)});
  return {{"kind", "lie_rinehart"}, {"bracket", b}, {"anchor", a}};
}

int level_key(const std::string &key, const std::string &where)
{
  try {
    std::size_t pos = 0;
    int j = std::stoi(key, &pos);
    if (pos == key.size() && j >= 0)
      return j;
  } catch (const std::exception &) {
  }
  fail(where, "level key \"" + key + "\" is not a non-negative integer");
}

std::pair<int, SymWord> parse_word(const SymContext &ctx, const Json &j, const std::string &where,
                                   bool &vanishes)
{
  need_array(j, where);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j.size(); ++i)
    labels.push_back(str(j[i], at(where, i)));
  std::optional<std::pair<int, SymWord>> w;
  try {
    w = normalize_labels(ctx, labels);
  } catch (const InputError &e) {
    fail(where, e.what());
  }
  vanishes = !w;
  if (!w)
    return {0, {}};
  return *w;
}

Json emit_word(const SymContext &ctx, const SymWord &w)
{
  Json a = Json::array();
  for (int g : w.gens)
    a.push_back(ctx.label(g));
  return a;
}

void parse_sh(Instance &inst, const Json &s)
{
  const std::string where = "structure";
  SymContext ctx(inst.L);
  const AlgebraSpec &A = *inst.A;
  ShLieRinehartData d;
  d.L = inst.L;
  const std::string ext = s.contains("extension") ? str(s["extension"], where + ".extension") : "none";
  if (ext != "sh" && ext != "none")
    fail(where + ".extension", "expected \"sh\" or \"none\"");
  inst.sh_pure = ext == "sh";
  auto check_pure = [&](const SymWord &w, const std::string &loc) {
    if (!inst.sh_pure)
      return;
    for (int g : w.gens)
      if (!ctx.is_pure(g))
        fail(loc, "extension \"sh\" takes values on pure words only");
  };
  if (s.contains("coderivations")) {
    const Json &c = s["coderivations"];
    if (!c.is_object())
      fail(where + ".coderivations", "expected an object keyed by level");
    for (const auto &[key, entries] : c.items()) {
      const std::string lw = where + ".coderivations." + key;
      const int j = level_key(key, lw);
      if (j < 1)
        fail(lw, "levels start at 1");
      need_array(entries, lw);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string w = at(lw, i);
        need_array(entries[i], w, 3);
        bool zero = false;
        auto [sign, word] = parse_word(ctx, entries[i][0], w + "[0]", zero);
        if (zero)
          continue;
        if ((int)word.length() != j + 1)
          fail(w, "level " + std::to_string(j) + " needs words of length " + std::to_string(j + 1));
        check_pure(word, w);
        auto t = ctx.find(str(entries[i][1], w + "[1]"));
        if (!t)
          fail(w + "[1]", "unknown generator of sL");
        if (ctx.degree(*t) != word_degree(ctx, word) - 1)
          fail(w, "degree mismatch: c_" + std::to_string(j) + " has degree -1");
        add_entry(d.del.parts[j][word], *t, sign * rat(entries[i][2], w + "[2]"));
      }
    }
  }
  if (s.contains("twisting")) {
    const Json &tw = s["twisting"];
    if (!tw.is_object())
      fail(where + ".twisting", "expected an object keyed by level");
    for (const auto &[key, entries] : tw.items()) {
      const std::string lw = where + ".twisting." + key;
      const int j = level_key(key, lw);
      if (j < 1)
        fail(lw, "levels start at 1");
      need_array(entries, lw);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string w = at(lw, i);
        need_array(entries[i], w, 2);
        bool zero = false;
        auto [sign, word] = parse_word(ctx, entries[i][0], w + "[0]", zero);
        if (zero)
          continue;
        if ((int)word.length() != j)
          fail(w, "level " + std::to_string(j) + " needs words of length " + std::to_string(j));
        check_pure(word, w);
        const int deg = word_degree(ctx, word) - 1;
        auto &D = d.t.parts[j].try_emplace(word, deg, A.dim()).first->second;
        const Json &m = need_array(entries[i][1], w + "[1]");
        for (std::size_t e = 0; e < m.size(); ++e) {
          const std::string we = at(w + "[1]", e);
          need_array(m[e], we, 3);
          const int t = index_in(A.basis, m[e][0], we), src = index_in(A.basis, m[e][1], we);
          if (A.degree(t) != A.degree(src) + deg)
            fail(we, "degree mismatch: t_" + std::to_string(j) + " has degree |w| - 1");
          add_entry(D.col[src], t, sign * rat(m[e][2], we));
        }
      }
    }
  }
  inst.sh = std::move(d);
}

Json emit_sh(const ShLieRinehartData &d, bool pure)
{
  SymContext ctx(d.L);
  const AlgebraSpec &A = *d.L->over;
  Json c = Json::object(), t = Json::object();
  for (const auto &[j, part] : d.del.parts) {
    Json arr = Json::array();
    for (const auto &[w, v] : part)
      for (const auto &[g, x] : v)
        arr.push_back({emit_word(ctx, w), ctx.label(g), rat_str(x)});
    if (!arr.empty())
      c[std::to_string(j)] = arr;
  }
  for (const auto &[j, part] : d.t.parts) {
    Json arr = Json::array();
    for (const auto &[w, D] : part) {
      Json m = Json::array();
      for (int src = 0; src < (int)A.dim(); ++src)
        for (const auto &[tg, x] : D.col[src])
          m.push_back({A.basis.label(tg), A.basis.label(src), rat_str(x)});
      if (!m.empty())
        arr.push_back({emit_word(ctx, w), m});
    }
    if (!arr.empty())
      t[std::to_string(j)] = arr;
  }
  return {{"kind", "sh_lie_rinehart"},
          {"extension", pure ? "sh" : "none"},
          {"coderivations", c},
          {"twisting", t}};
}

void parse_quasi(Instance &inst, const Json &s)
{
  const std::string where = "structure";
  const ModuleSpec &L = *inst.L;
  const AlgebraSpec &A = *inst.A;
  QuasiData q;
  q.L = inst.L;
  const int r = L.rank();
  for (int k = 0; k < r; ++k)
    q.pairing.emplace_back(0, A.dim());
  std::map<std::pair<int, int>, SparseVec> br;
  std::map<std::pair<int, int>, Derivation> tr;
  if (s.contains("bracketQ")) {
    const Json &b = need_array(s["bracketQ"], where + ".bracketQ");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string w = at(where + ".bracketQ", i);
      need_array(b[i], w, 4);
      const int x = index_in(L.a_basis, b[i][0], w), y = index_in(L.a_basis, b[i][1], w);
      const int z = qlabel(L, b[i][2], w);
      if (L.qbasis.degree(z) != 0)
        fail(w, "the bracket on Q has degree zero");
      add_entry(br[{x, y}], z, rat(b[i][3], w));
    }
  }
  if (s.contains("pairing")) {
    const Json &p = need_array(s["pairing"], where + ".pairing");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string w = at(where + ".pairing", i);
      need_array(p[i], w, 4);
      const int x = index_in(L.a_basis, p[i][0], w);
      const int t = index_in(A.basis, p[i][1], w), src = index_in(A.basis, p[i][2], w);
      if (A.degree(t) != A.degree(src))
        fail(w, "the pairing has degree zero");
      add_entry(q.pairing[x].col[src], t, rat(p[i][3], w));
    }
  }
  if (s.contains("triple")) {
    const Json &p = need_array(s["triple"], where + ".triple");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string w = at(where + ".triple", i);
      need_array(p[i], w, 5);
      const int x = index_in(L.a_basis, p[i][0], w), y = index_in(L.a_basis, p[i][1], w);
      const int t = index_in(A.basis, p[i][2], w), src = index_in(A.basis, p[i][3], w);
      if (A.degree(t) != A.degree(src) + 1)
        fail(w, "the triple lowers upper degree by one");
      add_entry(tr.try_emplace({x, y}, 1, A.dim()).first->second.col[src], t, rat(p[i][4], w));
    }
  }
  for (const auto &[xy, v] : br) {
    auto rev = br.find({xy.second, xy.first});
    if (rev != br.end() && rev->second != scaled(v, -1))
      fail(where + ".bracketQ", "not skew-symmetric on (" + L.a_basis.label(xy.first) + ", " +
                                    L.a_basis.label(xy.second) + ")");
    q.bracket[xy] = v;
    q.bracket[{xy.second, xy.first}] = scaled(v, -1);
  }
  for (const auto &[xy, D] : tr) {
    auto rev = tr.find({xy.second, xy.first});
    if (rev != tr.end() && !(rev->second == scaled(D, -1)))
      fail(where + ".triple", "not skew-symmetric on (" + L.a_basis.label(xy.first) + ", " +
                                  L.a_basis.label(xy.second) + ")");
    q.triple[xy] = D;
    q.triple[{xy.second, xy.first}] = scaled(D, -1);
  }
  auto bad = validate_quasi(q);
  if (!bad.empty())
    fail(where, bad[0].identity + (bad[0].word.empty() ? "" : " fails at " + bad[0].word));
  inst.quasi = std::move(q);
}

Json emit_quasi(const QuasiData &q)
{
  const ModuleSpec &L = *q.L;
  const AlgebraSpec &A = *L.over;
  Json b = Json::array(), p = Json::array(), t = Json::array();
  for (const auto &[xy, v] : q.bracket)
    if (xy.first < xy.second)
      for (const auto &[z, c] : v)
        b.push_back({L.a_basis.label(xy.first), L.a_basis.label(xy.second), L.qbasis.label(z), rat_str(c)});
  for (int k = 0; k < (int)q.pairing.size(); ++k)
    for (int src = 0; src < (int)A.dim(); ++src)
      for (const auto &[tg, c] : q.pairing[k].col[src])
        p.push_back({L.a_basis.label(k), A.basis.label(tg), A.basis.label(src), rat_str(c)});
  for (const auto &[xy, D] : q.triple)
    if (xy.first < xy.second)
      for (int src = 0; src < (int)A.dim(); ++src)
        for (const auto &[tg, c] : D.col[src])
          t.push_back({L.a_basis.label(xy.first), L.a_basis.label(xy.second), A.basis.label(tg),
                       A.basis.label(src), rat_str(c)});
  return {{"kind", "quasi"}, {"bracketQ", b}, {"pairing", p}, {"triple", t}};
}

void parse_mdca(Instance &inst, const Json &s)
{
  const std::string where = "structure.D";
  const Json &D = need(s, "D", "structure");
  if (!D.is_object())
    fail(where, "expected an object keyed by level");
  auto rows = [&](const Json &obj, const std::string &w) {
    MdcaTable::Row row;
    if (!obj.is_object())
      fail(w, "expected an object");
    for (const auto &[key, forms] : obj.items()) {
      if (!forms.is_object())
        fail(w + "." + key, "expected an object of form label -> rational");
      for (const auto &[label, c] : forms.items())
        row[key][label] = rat(c, w + "." + key + "." + label);
    }
    return row;
  };
  for (const auto &[key, lv] : D.items()) {
    const std::string w = where + "." + key;
    const int j = level_key(key, w);
    if (lv.contains("on_A"))
      inst.mdca.on_A[j] = rows(lv["on_A"], w + ".on_A");
    if (lv.contains("on_forms"))
      inst.mdca.on_forms[j] = rows(lv["on_forms"], w + ".on_forms");
  }
}

Json emit_mdca(const MdcaTable &t)
{
  Json D = Json::object();
  auto put = [&](const std::map<int, MdcaTable::Row> &src, const char *name) {
    for (const auto &[j, row] : src) {
      Json r = Json::object();
      for (const auto &[key, forms] : row) {
        Json f = Json::object();
        for (const auto &[label, c] : forms)
          f[label] = rat_str(c);
        r[key] = f;
      }
      D[std::to_string(j)][name] = r;
    }
  };
  put(t.on_A, "on_A");
  put(t.on_forms, "on_forms");
  return {{"kind", "mdca"}, {"D", D}};
}

StructureKind sniff(const Json &s)
{
  if (s.contains("kind")) {
    const std::string k = str(s["kind"], "structure.kind");
    if (k == "lie_rinehart")
      return StructureKind::lie_rinehart;
    if (k == "sh_lie_rinehart")
      return StructureKind::sh_lie_rinehart;
    if (k == "quasi")
      return StructureKind::quasi;
    if (k == "mdca")
      return StructureKind::mdca;
    fail("structure.kind", "unsupported structure kind \"" + k + "\"");
  }
  std::vector<StructureKind> hits;
  if (s.contains("bracket") || s.contains("anchor"))
    hits.push_back(StructureKind::lie_rinehart);
  if (s.contains("coderivations") || s.contains("twisting"))
    hits.push_back(StructureKind::sh_lie_rinehart);
  if (s.contains("bracketQ") || s.contains("pairing") || s.contains("triple"))
    hits.push_back(StructureKind::quasi);
  if (s.contains("D"))
    hits.push_back(StructureKind::mdca);
  if (hits.size() != 1)
    fail("structure", hits.empty() ? "cannot tell the structure kind" : "ambiguous structure kind");
  return hits[0];
}

} // namespace

Instance parse_instance(const Json &doc)
{
  if (!doc.is_object())
    fail("instance", "expected a JSON object");
  Instance inst;
  if (doc.contains("name"))
    inst.name = str(doc["name"], "name");
  if (doc.contains("note"))
    inst.note = str(doc["note"], "note");
  inst.A = parse_algebra(need(doc, "algebra", "instance"));
  const Json &mod = need(doc, "module", "instance");
  bool derivations = false;
  if (mod.is_object() && mod.contains("kind")) {
    const std::string k = str(mod["kind"], "module.kind");
    if (k != "derivations")
      fail("module.kind", "unsupported module kind \"" + k + "\"");
    derivations = true;
    Instance d = derivation_instance(inst.name, inst.A);
    inst.L = d.L;
    inst.lr = d.lr;
  } else {
    inst.L = parse_module(inst.A, mod);
  }
  const Json &s = need(doc, "structure", "instance");
  if (!s.is_object())
    fail("structure", "expected an object");
  inst.kind = sniff(s);
  if (derivations && inst.kind != StructureKind::lie_rinehart)
    fail("module.kind", "the derivation module carries its own Lie-Rinehart structure");
  switch (inst.kind) {
  case StructureKind::lie_rinehart:
    parse_lie_rinehart(inst, s, derivations);
    break;
  case StructureKind::sh_lie_rinehart:
    parse_sh(inst, s);
    break;
  case StructureKind::quasi:
    parse_quasi(inst, s);
    break;
  case StructureKind::mdca:
    parse_mdca(inst, s);
    break;
  }
  if (doc.contains("policy")) {
    const Json &p = doc["policy"];
    if (p.contains("W")) {
      inst.policy.W = integer(p["W"], "policy.W");
      if (inst.policy.W < 2)
        fail("policy.W", "W must be at least 2");
    }
    if (p.contains("degree_window")) {
      const Json &w = need_array(p["degree_window"], "policy.degree_window", 2);
      inst.policy.dmin = integer(w[0], "policy.degree_window[0]");
      inst.policy.dmax = integer(w[1], "policy.degree_window[1]");
      if (inst.policy.dmin > inst.policy.dmax)
        fail("policy.degree_window", "empty window");
      inst.policy.windowed = true;
    }
  }
  return inst;
}

Instance load_instance(const std::string &path)
{
  const std::string prefix = "catalog:";
  if (path.rfind(prefix, 0) == 0)
    return catalog_instance(path.substr(prefix.size()));
  std::ifstream in(path);
  if (!in)
    throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(ss.str());
  } catch (const Json::parse_error &e) {
    throw InputError(path + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  return parse_instance(doc);
}

Json emit_instance(const Instance &inst)
{
  Json doc;
  doc["name"] = inst.name;
  if (!inst.note.empty())
    doc["note"] = inst.note;
  doc["algebra"] = emit_algebra(*inst.A);
  doc["module"] = emit_module(*inst.L);
  switch (inst.kind) {
  case StructureKind::lie_rinehart:
    doc["structure"] = emit_lie_rinehart(inst.lr);
    break;
  case StructureKind::sh_lie_rinehart:
    doc["structure"] = emit_sh(inst.sh, inst.sh_pure);
    break;
  case StructureKind::quasi:
    doc["structure"] = emit_quasi(inst.quasi);
    break;
  case StructureKind::mdca:
    doc["structure"] = emit_mdca(inst.mdca);
    break;
  }
  Json policy{{"W", inst.policy.W}};
  if (inst.policy.windowed)
    policy["degree_window"] = {inst.policy.dmin, inst.policy.dmax};
  doc["policy"] = policy;
  return doc;
}

std::string dump_instance(const Json &doc) { return doc.dump(2) + "\n"; }

} // namespace mdca
