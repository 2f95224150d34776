#include "mdca/structures.hpp"

#include <algorithm>
#include <functional>

namespace mdca {

Workspace Workspace::make(ModulePtr L, int W)
{
  if (W < 1)
    throw InputError("truncation bound W must be at least 1");
  Workspace ws;
  ws.L = std::move(L);
  ws.ctx = std::make_shared<SymContext>(ws.L);
  ws.words = std::make_shared<WordSpace>(ws.ctx, W);
  ws.forms = std::make_shared<FormSpace>(ws.words);
  ws.sym = std::make_shared<SymAlgebra>(ws.forms);
  return ws;
}

namespace {

std::string lvec(const ModuleSpec &L, const SparseVec &v)
{
  if (v.empty())
    return "0";
  std::string s;
  for (const auto &[q, c] : v) {
    if (!s.empty())
      s += " + ";
    s += "(" + format_rational(c) + ") " + L.qbasis.label(q);
  }
  return s;
}

std::string derivation_label(const AlgebraSpec &A, const Derivation &d)
{
  std::string s;
  for (std::size_t i = 0; i < d.col.size(); ++i) {
    if (d.col[i].empty())
      continue;
    if (!s.empty())
      s += "; ";
    s += A.basis.label(i) + " -> " + element_label(A, d.col[i]);
  }
  return s.empty() ? "0" : "{" + s + "}";
}

std::string tuple_label(const ModuleSpec &L, std::initializer_list<int> qs)
{
  std::string s = "(";
  bool first = true;
  for (int q : qs) {
    if (!first)
      s += ", ";
    s += L.qbasis.label(q);
    first = false;
  }
  return s + ")";
}

Derivation zero_derivation(const AlgebraSpec &A, int deg) { return Derivation(deg, A.dim()); }

int element_degree(const AlgebraSpec &A, const SparseVec &a)
{
  return a.empty() ? 0 : A.degree(a.begin()->first);
}

} // namespace

SparseVec LieRinehartData::bracket_of(const SparseVec &x, const SparseVec &y) const
{
  SparseVec r;
  for (const auto &[i, ci] : x)
    for (const auto &[j, cj] : y) {
      auto it = bracket.find({i, j});
      if (it != bracket.end())
        axpy(r, ci * cj, it->second);
    }
  return r;
}

Derivation LieRinehartData::anchor_of(const SparseVec &x) const
{
  Derivation r = zero_derivation(*L->over, 0);
  for (const auto &[i, c] : x)
    r += scaled(anchor[i], c);
  return r;
}

void complete_skew(LieRinehartData &d)
{
  auto given = d.bracket;
  for (const auto &[ij, v] : given) {
    const auto [i, j] = ij;
    const int s = -sign_of_parity((long)d.L->qbasis.degree(i) * d.L->qbasis.degree(j));
    SparseVec rev = scaled(v, s);
    auto it = given.find({j, i});
    if (it != given.end() && it->second != rev)
      throw InputError("bracket: values for (" + d.L->qbasis.label(i) + ", " +
                       d.L->qbasis.label(j) + ") and its reverse are not graded skew-symmetric");
    d.bracket[{j, i}] = rev;
  }
  for (auto it = d.bracket.begin(); it != d.bracket.end();)
    it = it->second.empty() ? d.bracket.erase(it) : std::next(it);
}

std::vector<Residual> check_lie_rinehart(const LieRinehartData &d)
{
  std::vector<Residual> out;
  const ModuleSpec &L = *d.L;
  const AlgebraSpec &A = *L.over;
  const int N = (int)L.qbasis.size();
  const int n = (int)A.dim();
  auto deg = [&](int q) { return L.qbasis.degree(q); };
  auto e = [](int q) { return unit_vector(q); };
  auto dL = [&](const SparseVec &v) { return L.diff_L.apply(v); };
  const Derivation dA = algebra_differential(A);
  // levels follow the filtration: Jacobi and the Lie-map property live at j = 2
  auto report = [&](const std::string &id, const std::string &word, const std::string &slot,
                    const std::string &value) {
    const int level = id == "Jacobi" || id == "anchor is a Lie map" ? 2 : 1;
    out.push_back({id, level, word, slot, value});
  };

  for (int q = 0; q < N; ++q) {
    if (auto v = leibniz_violation(A, d.anchor[q]))
      report("anchor is a derivation", L.qbasis.label(q), v->witness, v->invariant);
    else if (!d.anchor[q].is_zero() && d.anchor[q].degree != deg(q))
      report("anchor degree", L.qbasis.label(q), "", derivation_label(A, d.anchor[q]));
  }
  for (const auto &[ij, v] : d.bracket)
    for (const auto &[q, c] : v)
      if (deg(q) != deg(ij.first) + deg(ij.second)) {
        report("bracket degree", tuple_label(L, {ij.first, ij.second}), "", lvec(L, v));
        break;
      }
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      SparseVec r = d.bracket_of(e(x), e(y));
      axpy(r, sign_of_parity((long)deg(x) * deg(y)), d.bracket_of(e(y), e(x)));
      if (!r.empty())
        report("skew-symmetry", tuple_label(L, {x, y}), "", lvec(L, r));
    }
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y)
      for (int z = 0; z < N; ++z) {
        SparseVec r = d.bracket_of(e(x), d.bracket_of(e(y), e(z)));
        axpy(r, -1, d.bracket_of(d.bracket_of(e(x), e(y)), e(z)));
        axpy(r, -sign_of_parity((long)deg(x) * deg(y)), d.bracket_of(e(y), d.bracket_of(e(x), e(z))));
        if (!r.empty())
          report("Jacobi", tuple_label(L, {x, y, z}), "", lvec(L, r));
      }
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      SparseVec r = dL(d.bracket_of(e(x), e(y)));
      axpy(r, -1, d.bracket_of(dL(e(x)), e(y)));
      axpy(r, -sign_of_parity(deg(x)), d.bracket_of(e(x), dL(e(y))));
      if (!r.empty())
        report("differential is a derivation of the bracket", tuple_label(L, {x, y}), "", lvec(L, r));
    }
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < N; ++x) {
      Derivation lhs = d.anchor_of(L.act(a, e(x)));
      Derivation rhs = left_multiply(A, e(a), A.degree(a), d.anchor[x]);
      if (!(lhs == rhs))
        report("anchor A-linear", tuple_label(L, {x}), "a = " + A.basis.label(a),
               derivation_label(A, lhs) + " != " + derivation_label(A, rhs));
    }
  for (int x = 0; x < N; ++x)
    for (int a = 0; a < n; ++a)
      for (int y = 0; y < N; ++y) {
        SparseVec r = d.bracket_of(e(x), L.act(a, e(y)));
        SparseVec xa = d.anchor[x].apply(e(a));
        for (const auto &[b, c] : xa)
          axpy(r, -c, L.act(b, e(y)));
        axpy(r, -sign_of_parity((long)deg(x) * A.degree(a)), L.act(a, d.bracket_of(e(x), e(y))));
        if (!r.empty())
          report("Leibniz rule for the bracket", tuple_label(L, {x, y}), "a = " + A.basis.label(a),
                 lvec(L, r));
      }
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      Derivation lhs = d.anchor_of(d.bracket_of(e(x), e(y)));
      Derivation rhs = graded_commutator(d.anchor[x], d.anchor[y]);
      if (!(lhs == rhs))
        report("anchor is a Lie map", tuple_label(L, {x, y}), "",
               derivation_label(A, lhs) + " != " + derivation_label(A, rhs));
    }
  for (int x = 0; x < N; ++x) {
    Derivation lhs = d.anchor_of(dL(e(x)));
    Derivation rhs = graded_commutator(dA, d.anchor[x]);
    if (!(lhs == rhs))
      report("anchor commutes with differentials", tuple_label(L, {x}), "",
             derivation_label(A, lhs) + " != " + derivation_label(A, rhs));
  }
  return out;
}

ShLieRinehartData lie_rinehart_to_sh(const Workspace &ws, const LieRinehartData &d)
{
  ShLieRinehartData sh;
  sh.L = d.L;
  Bracket b;
  b.n = 2;
  for (const auto &[ij, v] : d.bracket)
    b.values[{ij.first, ij.second}] = v;
  Corestriction c = coderivation_from_brackets(*ws.ctx, b);
  if (!c.empty())
    sh.del.parts[1] = std::move(c);
  for (int q = 0; q < (int)d.anchor.size(); ++q)
    if (!d.anchor[q].is_zero())
      sh.t.parts[1][SymWord{{q}}] = d.anchor[q];
  return sh;
}

Derivation twisting_value(const Workspace &ws, const TwistingCochain &t, int j,
                          const std::vector<int> &gens)
{
  int deg = -1;
  for (int g : gens)
    deg += ws.ctx->degree(g);
  Derivation zero = zero_derivation(ws.algebra(), deg);
  auto nw = normalize_word(*ws.ctx, gens);
  const auto *tj = t.part(j);
  if (!nw || !tj)
    return zero;
  auto it = tj->find(nw->second);
  if (it == tj->end())
    return zero;
  return scaled(it->second, nw->first);
}

SparseVec corestriction_value(const Workspace &ws, const Coderivation &del, int j,
                              const std::vector<int> &gens)
{
  auto nw = normalize_word(*ws.ctx, gens);
  const Corestriction *c = del.part(j);
  if (!nw || !c)
    return {};
  auto it = c->find(nw->second);
  if (it == c->end())
    return {};
  return scaled(it->second, nw->first);
}

namespace {

bool word_is_pure(const SymContext &ctx, const SymWord &w)
{
  return std::all_of(w.gens.begin(), w.gens.end(), [&](int g) { return ctx.is_pure(g); });
}

std::vector<int> without(const std::vector<int> &v, std::size_t i)
{
  std::vector<int> r;
  for (std::size_t p = 0; p < v.size(); ++p)
    if (p != i)
      r.push_back(v[p]);
  return r;
}

std::vector<int> with_last(std::vector<int> v, int g)
{
  v.push_back(g);
  return v;
}

int degree_sum(const SymContext &ctx, const std::vector<int> &gens)
{
  int d = 0;
  for (int g : gens)
    d += ctx.degree(g);
  return d;
}

} // namespace

ShLieRinehartData extend_from_pure(const Workspace &ws, const ShLieRinehartData &pure)
{
  const SymContext &ctx = *ws.ctx;
  const WordSpace &W = *ws.words;
  const AlgebraSpec &A = ws.algebra();
  const ModuleSpec &L = *ws.L;
  ShLieRinehartData out;
  out.L = pure.L;

  for (const auto &[j, tab] : pure.t.parts) {
    auto &dst = out.t.parts[j];
    for (int w = 0; w < W.size(); ++w) {
      if (W.length(w) != j)
        continue;
      const auto &pd = W.pure_decomposition(w);
      if (pd.zero)
        continue;
      auto it = tab.find(W.word(pd.pure_word));
      if (it == tab.end() || it->second.is_zero())
        continue;
      Derivation v = scaled(left_multiply(A, pd.coefficient, 0, it->second),
                            pd.sign * sign_of_parity(pd.a_parity));
      v.degree = W.degree(w) - 1;
      if (!v.is_zero())
        dst[W.word(w)] = std::move(v);
    }
    if (dst.empty())
      out.t.parts.erase(j);
  }

  std::set<int> levels;
  for (const auto &[j, c] : pure.del.parts)
    levels.insert(j);
  for (const auto &[j, c] : out.t.parts)
    levels.insert(j);
  for (int j : levels) {
    if (j + 1 > ws.W())
      continue;
    const Corestriction *pc = pure.del.part(j);
    std::map<SymWord, SparseVec> memo;
    std::function<SparseVec(const SymWord &)> value = [&](const SymWord &w) -> SparseVec {
      auto m = memo.find(w);
      if (m != memo.end())
        return m->second;
      int slot = -1;
      for (int p = (int)w.gens.size() - 1; p >= 0; --p)
        if (!ctx.is_pure(w.gens[p])) {
          slot = p;
          break;
        }
      SparseVec r;
      if (slot < 0) {
        if (pc) {
          auto it = pc->find(w);
          if (it != pc->end())
            r = it->second;
        }
      } else {
        // s(a x) = (-1)^{|a|} a.s(x), moved to the last slot
        const int g = w.gens[slot];
        const int a = L.a_part(g);
        const int sx = ctx.pure(L.x_part(g));
        std::vector<int> others = without(w.gens, slot);
        auto moved = normalize_word(ctx, with_last(others, g));
        const int kappa = moved->first;
        const int da = A.degree(a);
        Derivation T = twisting_value(ws, out.t, j, others);
        r = ctx.act(T.col[a], unit_vector(sx));
        auto inner = normalize_word(ctx, with_last(others, sx));
        if (inner) {
          SparseVec c = scaled(value(inner->second), inner->first);
          axpy(r, sign_of_parity((long)(degree_sum(ctx, others) + 1) * da),
               ctx.act(unit_vector(a), c));
        }
        r = scaled(r, kappa * sign_of_parity(da));
      }
      memo[w] = r;
      return r;
    };
    Corestriction dst;
    for (int w = 0; w < W.size(); ++w)
      if (W.length(w) == j + 1) {
        SparseVec v = value(W.word(w));
        if (!v.empty())
          dst[W.word(w)] = std::move(v);
      }
    if (!dst.empty())
      out.del.parts[j] = std::move(dst);
  }
  return out;
}

ShLieRinehartData restrict_to_pure(const Workspace &ws, const ShLieRinehartData &d)
{
  ShLieRinehartData r;
  r.L = d.L;
  for (const auto &[j, c] : d.del.parts)
    for (const auto &[w, v] : c)
      if (word_is_pure(*ws.ctx, w) && !v.empty())
        r.del.parts[j][w] = v;
  for (const auto &[j, tab] : d.t.parts)
    for (const auto &[w, v] : tab)
      if (word_is_pure(*ws.ctx, w) && !v.is_zero())
        r.t.parts[j][w] = v;
  return r;
}

std::map<SymWord, Derivation> twisting_residual(const Workspace &ws, const Coderivation &del,
                                                const TwistingCochain &t, int j)
{
  std::map<SymWord, Derivation> out;
  const WordSpace &W = *ws.words;
  const AlgebraSpec &A = ws.algebra();
  const Derivation dA = algebra_differential(A);
  const SparseMatrix &d0 = ws.forms->d0_words();
  std::vector<SparseMatrix> dj(j);
  for (int m = 1; m < j; ++m)
    if (auto c = del.part(m))
      dj[m] = extend_coderivation(W, *c, m);
  auto tval = [&](int k, int w) { return twisting_value(ws, t, k, W.word(w).gens); };
  for (int w = 0; w < W.size(); ++w) {
    if (W.length(w) != j)
      continue;
    Derivation R = zero_derivation(A, W.degree(w) - 2);
    R += graded_commutator(dA, tval(j, w));
    for (const auto &[v, c] : d0.col[w])
      R += scaled(tval(j, v), c);
    for (int k = 1; k < j; ++k) {
      if (dj[j - k].cols == 0)
        continue;
      for (const auto &[v, c] : dj[j - k].col[w])
        R += scaled(tval(k, v), c);
    }
    for (const auto &term : W.diagonal(w)) {
      const int k = W.length(term.left);
      if (k < 1 || k > j - 1)
        continue;
      Derivation br = graded_commutator(tval(k, term.left), tval(j - k, term.right));
      R += scaled(br, term.coef * sign_of_parity(W.degree(term.left)) / 2);
    }
    if (!R.is_zero())
      out[W.word(w)] = std::move(R);
  }
  return out;
}

std::vector<Residual> check_twisting_cochain(const Workspace &ws, const Coderivation &del,
                                             const TwistingCochain &t)
{
  std::vector<Residual> out;
  for (int j = 1; j < ws.W(); ++j)
    for (const auto &[w, R] : twisting_residual(ws, del, t, j))
      out.push_back({"twisting cochain", j, word_label(*ws.ctx, w), "",
                     derivation_label(ws.algebra(), R)});
  return out;
}

namespace {

// o·g as a label, also when the product vanishes
std::string sequence_label(const SymContext &ctx, const std::vector<int> &others, int g)
{
  auto w = normalize_word(ctx, with_last(others, g));
  if (w)
    return word_label(ctx, w->second);
  std::string s;
  for (int x : others)
    s += ctx.label(x) + "·";
  return s + ctx.label(g) + " (= 0)";
}

} // namespace

// every (o, g) with o a word of length j - 1 and g a generator; o·g may itself vanish while
// o·(a g) does not
std::vector<Residual> check_t_multilinear(const Workspace &ws, const TwistingCochain &t, int j)
{
  std::vector<Residual> out;
  const WordSpace &W = *ws.words;
  const SymContext &ctx = *ws.ctx;
  const AlgebraSpec &A = ws.algebra();
  for (int o = 0; o < W.size(); ++o) {
    if (W.length(o) != j - 1)
      continue;
    const auto &others = W.word(o).gens;
    const int od = W.degree(o);
    for (int g = 0; g < ctx.size(); ++g)
      for (int a = 0; a < (int)A.dim(); ++a) {
        if (a == A.unit)
          continue;
        Derivation lhs = zero_derivation(A, od + ctx.degree(g) + A.degree(a) - 1);
        for (const auto &[h, c] : ctx.act(a, g))
          lhs += scaled(twisting_value(ws, t, j, with_last(others, h)), c);
        Derivation rhs = scaled(left_multiply(A, unit_vector(a), A.degree(a),
                                              twisting_value(ws, t, j, with_last(others, g))),
                                sign_of_parity((long)A.degree(a) * (od - 1)));
        if (!(lhs == rhs)) {
          out.push_back({"t A-multilinear", j, sequence_label(ctx, others, g),
                         "a = " + A.basis.label(a) + " on " + ctx.label(g),
                         derivation_label(A, lhs) + " != " + derivation_label(A, rhs)});
          break;
        }
      }
  }
  for (int w = 0; w < W.size(); ++w) {
    if (W.length(w) != j)
      continue;
    if (auto v = t.part(j)) {
      auto it = v->find(W.word(w));
      if (it != v->end())
        if (auto bad = leibniz_violation(A, it->second))
          out.push_back({"t values are derivations", j, W.label(w), bad->witness, bad->invariant});
    }
  }
  return out;
}

std::vector<Residual> check_anomaly(const Workspace &ws, const ShLieRinehartData &d, int j)
{
  std::vector<Residual> out;
  const WordSpace &W = *ws.words;
  const SymContext &ctx = *ws.ctx;
  const AlgebraSpec &A = ws.algebra();
  for (int o = 0; o < W.size(); ++o) {
    if (W.length(o) != j)
      continue;
    const auto &others = W.word(o).gens;
    const int od = W.degree(o);
    const Derivation T = twisting_value(ws, d.t, j, others);
    for (int g = 0; g < ctx.size(); ++g)
      for (int a = 0; a < (int)A.dim(); ++a) {
        if (a == A.unit)
          continue;
        SparseVec lhs;
        for (const auto &[h, c] : ctx.act(a, g))
          axpy(lhs, c, corestriction_value(ws, d.del, j, with_last(others, h)));
        SparseVec rhs = ctx.act(T.col[a], unit_vector(g));
        axpy(rhs, sign_of_parity((long)(od + 1) * A.degree(a)),
             ctx.act(unit_vector(a), corestriction_value(ws, d.del, j, with_last(others, g))));
        if (lhs != rhs) {
          out.push_back({"anomaly law", j, sequence_label(ctx, others, g),
                         "a = " + A.basis.label(a) + " on " + ctx.label(g),
                         vector_label(ctx, lhs, true) + " != " + vector_label(ctx, rhs, true)});
          break;
        }
      }
  }
  return out;
}

namespace {

void finish(RouteReport &r)
{
  for (const auto &x : r.residuals)
    if (!r.first_level || x.level < *r.first_level)
      r.first_level = x.level;
}

void append(std::vector<Residual> &dst, std::vector<Residual> src)
{
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

} // namespace

RouteReport check_direct(const Workspace &ws, const ShLieRinehartData &d)
{
  RouteReport r;
  append(r.residuals, check_coalgebra_perturbation(*ws.words, d.del));
  append(r.residuals, check_twisting_cochain(ws, d.del, d.t));
  for (int j = 1; j <= ws.W(); ++j)
    append(r.residuals, check_t_multilinear(ws, d.t, j));
  for (int j = 1; j < ws.W(); ++j)
    append(r.residuals, check_anomaly(ws, d, j));
  finish(r);
  return r;
}

RouteReport check_indirect(const Workspace &ws, const ShLieRinehartData &d)
{
  RouteReport r;
  auto D = build_operators(*ws.forms, d.del, d.t);
  for (int j = 1; j <= ws.W(); ++j)
    append(r.residuals, descent_check(*ws.sym, D[j], j, "D_j preserves A-multilinearity"));
  append(r.residuals, square_check(*ws.forms, D, ws.W() - 1));
  std::vector<SparseMatrix> DS;
  for (const auto &M : D)
    DS.push_back(ws.sym->descend(M));
  append(r.residuals, square_check_descended(*ws.sym, DS, ws.W() - 1, true));
  finish(r);
  return r;
}

bool ShReport::agree() const
{
  return direct.residuals.empty() == indirect.residuals.empty() &&
         direct.first_level == indirect.first_level;
}

ShReport check_sh_lie_rinehart(const Workspace &ws, const ShLieRinehartData &d)
{
  ShReport rep;
  rep.direct = check_direct(ws, d);
  rep.indirect = check_indirect(ws, d);
  return rep;
}

bool operator==(const MdcaStructure &a, const MdcaStructure &b)
{
  auto norm = [](const std::map<int, std::vector<SparseVec>> &m) {
    std::map<int, std::vector<SparseVec>> r;
    for (const auto &[j, v] : m)
      if (std::any_of(v.begin(), v.end(), [](const SparseVec &x) { return !x.empty(); }))
        r[j] = v;
    return r;
  };
  return norm(a.on_A) == norm(b.on_A) && norm(a.on_forms) == norm(b.on_forms);
}

MdcaStructure build_maurer_cartan(const Workspace &ws, const ShLieRinehartData &d,
                                  bool require_descent)
{
  const SymAlgebra &S = *ws.sym;
  auto D = build_operators(*ws.forms, d.del, d.t);
  if (require_descent)
    for (int j = 1; j <= ws.W(); ++j) {
      auto bad = descent_check(S, D[j], j, "D_j preserves A-multilinearity", 1);
      if (!bad.empty())
        throw StructureError("D_" + std::to_string(j) + " does not descend: " + bad[0].word +
                             " (" + bad[0].slot + ")");
    }
  MdcaStructure m;
  m.L = ws.L;
  const int n = (int)ws.algebra().dim();
  for (int j = 0; j <= ws.W(); ++j) {
    auto &row = m.on_A[j];
    for (int a = 0; a < n; ++a)
      row.push_back(S.restrict(D[j].apply(S.embed(unit_vector(S.constant(a))))));
  }
  for (int j = 0; j < ws.W(); ++j) {
    auto &row = m.on_forms[j];
    for (int k = 0; k < ws.L->rank(); ++k)
      row.push_back(S.restrict(D[j].apply(S.embed(unit_vector(S.dual_generator(k))))));
  }
  return m;
}

std::vector<SparseMatrix> mdca_operators(const Workspace &ws, const MdcaStructure &m)
{
  const SymAlgebra &S = *ws.sym;
  const WordSpace &W = *ws.words;
  const SymContext &ctx = *ws.ctx;
  const AlgebraSpec &A = ws.algebra();
  const int unit = A.unit;
  auto table = [](const std::map<int, std::vector<SparseVec>> &t, int j, int i) -> SparseVec {
    auto it = t.find(j);
    if (it == t.end() || i >= (int)it->second.size())
      return {};
    return it->second[i];
  };
  // e_u = (φ_k ∪ e_{u'}) / λ with u = s x_k · u'
  struct Split {
    int k, rest;
    Rational lambda;
  };
  std::map<int, Split> split;
  for (int w : W.pure_words()) {
    if (W.length(w) == 0)
      continue;
    const auto &g = W.word(w).gens;
    SymWord rest{std::vector<int>(g.begin() + 1, g.end())};
    const int k = ctx.module().x_part(g[0]);
    const int rw = W.index_or_throw(rest);
    SparseVec prod = S.cup(unit_vector(S.dual_generator(k)), unit_vector(*S.find(rw, unit)));
    const int s = *S.find(w, unit);
    Rational lambda = prod.count(s) ? prod.at(s) : Rational(0);
    if (lambda == 0 || prod.size() != 1)
      throw std::logic_error("Sym_A is not generated by the dual forms at " + W.label(w));
    split[w] = {k, rw, lambda};
  }
  std::vector<SparseMatrix> out;
  for (int j = 0; j <= ws.W(); ++j) {
    SparseMatrix M(S.size(), S.size());
    std::map<int, SparseVec> De; // D_j(e_u)
    std::function<SparseVec(int)> on_e = [&](int w) -> SparseVec {
      if (W.length(w) == 0)
        return {};
      auto it = De.find(w);
      if (it != De.end())
        return it->second;
      const Split &sp = split.at(w);
      const int phi = S.dual_generator(sp.k);
      const int e_rest = *S.find(sp.rest, unit);
      SparseVec r = S.cup(table(m.on_forms, j, sp.k), unit_vector(e_rest));
      axpy(r, sign_of_parity(S.degree(phi)), S.cup(unit_vector(phi), on_e(sp.rest)));
      r = scaled(r, 1 / sp.lambda);
      De[w] = r;
      return r;
    };
    for (int s = 0; s < S.size(); ++s) {
      const int w = S.word_of(s), a = S.a_of(s);
      const int e_u = *S.find(w, unit);
      SparseVec r = S.cup(table(m.on_A, j, a), unit_vector(e_u));
      axpy(r, sign_of_parity(A.degree(a)), S.cup(unit_vector(S.constant(a)), on_e(w)));
      M.col[s] = std::move(r);
    }
    out.push_back(std::move(M));
  }
  return out;
}

ShLieRinehartData extract_structure(const Workspace &ws, const MdcaStructure &m)
{
  const SymAlgebra &S = *ws.sym;
  const FormSpace &F = *ws.forms;
  const WordSpace &W = *ws.words;
  const SymContext &ctx = *ws.ctx;
  const AlgebraSpec &A = ws.algebra();
  const ModuleSpec &L = *ws.L;
  const int n = (int)A.dim();

  ShLieRinehartData pure;
  pure.L = ws.L;
  for (const auto &[j, row] : m.on_A) {
    if (j < 1)
      continue;
    std::map<SymWord, Derivation> tab;
    for (int i = 0; i < n && i < (int)row.size(); ++i)
      for (const auto &[s, c] : row[i]) {
        const int u = S.word_of(s);
        auto &T = tab.try_emplace(W.word(u), W.degree(u) - 1, A.dim()).first->second;
        add_entry(T.col[i], S.a_of(s), c * sign_of_parity((long)A.degree(i) * W.degree(u)));
      }
    for (auto &[w, T] : tab)
      if (!T.is_zero())
        pure.t.parts[j][w] = std::move(T);
  }
  ShLieRinehartData t_only;
  t_only.L = ws.L;
  t_only.t = pure.t;
  const TwistingCochain t_ext = extend_from_pure(ws, t_only).t;

  for (const auto &[j, row] : m.on_forms) {
    if (j < 1 || j + 1 > ws.W())
      continue;
    SparseMatrix Pt = partial_t(F, t_ext, j);
    Corestriction cj;
    for (int k = 0; k < L.rank() && k < (int)row.size(); ++k) {
      const int phi_s = S.dual_generator(k);
      const Form phi = S.embed(unit_vector(phi_s));
      const Form dt = Pt.apply(phi);
      const Form dphi = S.embed(row[k]);
      const int sg = sign_of_parity(S.degree(phi_s) + 1);
      for (int u : W.pure_words()) {
        if (W.length(u) != j + 1)
          continue;
        SparseVec val = F.value(dphi, u);
        axpy(val, -1, F.value(dt, u));
        for (const auto &[i, c] : val) {
          const int q = L.qindex(i, k);
          const int wq = W.index_or_throw(SymWord{{q}});
          Rational pair = F.value(phi, wq).count(i) ? F.value(phi, wq).at(i) : Rational(0);
          if (pair == 0)
            throw StructureError("dual pairing degenerate at " + ctx.label(q));
          add_entry(cj[W.word(u)], q, sg * c / pair);
        }
      }
    }
    for (auto it = cj.begin(); it != cj.end();)
      it = it->second.empty() ? cj.erase(it) : std::next(it);
    if (!cj.empty())
      pure.del.parts[j] = std::move(cj);
  }
  return extend_from_pure(ws, pure);
}

std::string structure_difference(const Workspace &ws, const ShLieRinehartData &a,
                                 const ShLieRinehartData &b)
{
  const WordSpace &W = *ws.words;
  const AlgebraSpec &A = ws.algebra();
  for (int j = 1; j <= ws.W(); ++j)
    for (int w = 0; w < W.size(); ++w) {
      if (W.length(w) == j + 1) {
        SparseVec x = corestriction_value(ws, a.del, j, W.word(w).gens);
        SparseVec y = corestriction_value(ws, b.del, j, W.word(w).gens);
        if (x != y)
          return "c_" + std::to_string(j) + "(" + W.label(w) + "): " +
                 vector_label(*ws.ctx, x, true) + " vs " + vector_label(*ws.ctx, y, true);
      }
      if (W.length(w) == j) {
        Derivation x = twisting_value(ws, a.t, j, W.word(w).gens);
        Derivation y = twisting_value(ws, b.t, j, W.word(w).gens);
        if (!(x == y))
          return "t_" + std::to_string(j) + "(" + W.label(w) + "): " + derivation_label(A, x) +
                 " vs " + derivation_label(A, y);
      }
    }
  return "";
}

std::string mdca_difference(const Workspace &ws, const MdcaStructure &a, const MdcaStructure &b)
{
  const SymAlgebra &S = *ws.sym;
  const AlgebraSpec &A = ws.algebra();
  auto get = [](const std::map<int, std::vector<SparseVec>> &t, int j, int i) -> SparseVec {
    auto it = t.find(j);
    if (it == t.end() || i >= (int)it->second.size())
      return {};
    return it->second[i];
  };
  for (int j = 0; j <= ws.W(); ++j) {
    for (int i = 0; i < (int)A.dim(); ++i)
      if (get(a.on_A, j, i) != get(b.on_A, j, i))
        return "D_" + std::to_string(j) + "(" + A.basis.label(i) + "): " +
               S.vector_label(get(a.on_A, j, i)) + " vs " + S.vector_label(get(b.on_A, j, i));
    for (int k = 0; k < ws.L->rank(); ++k)
      if (get(a.on_forms, j, k) != get(b.on_forms, j, k))
        return "D_" + std::to_string(j) + "(phi_" + ws.L->a_basis.label(k) + "): " +
               S.vector_label(get(a.on_forms, j, k)) + " vs " + S.vector_label(get(b.on_forms, j, k));
  }
  return "";
}

std::vector<Residual> validate_quasi(const QuasiData &q)
{
  std::vector<Residual> out;
  const ModuleSpec &L = *q.L;
  const AlgebraSpec &A = *L.over;
  const int r = L.rank();
  auto bad = [&](const std::string &id, const std::string &where) {
    out.push_back({id, 0, where, "", ""});
  };
  for (int k = 0; k < r; ++k)
    if (L.a_basis.degree(k) != 0)
      bad("quasi generators in degree 0", L.a_basis.label(k));
  for (int i = 0; i < (int)A.dim(); ++i)
    if (A.degree(i) > 0)
      bad("algebra concentrated in upper degrees >= 0", A.basis.label(i));
  if ((int)q.pairing.size() != r)
    bad("pairing given for every generator", "");
  for (int k = 0; k < (int)q.pairing.size(); ++k) {
    if (!q.pairing[k].is_zero() && q.pairing[k].degree != 0)
      bad("pairing of degree 0", L.a_basis.label(k));
    if (leibniz_violation(A, q.pairing[k]))
      bad("pairing is a derivation", L.a_basis.label(k));
  }
  for (const auto &[kl, v] : q.bracket) {
    auto it = q.bracket.find({kl.second, kl.first});
    if (it == q.bracket.end() || it->second != scaled(v, -1))
      bad("bracket skew-symmetric", L.a_basis.label(kl.first) + ", " + L.a_basis.label(kl.second));
    for (const auto &[g, c] : v)
      if (L.qbasis.degree(g) != 0)
        bad("bracket of degree 0", L.a_basis.label(kl.first) + ", " + L.a_basis.label(kl.second));
  }
  for (const auto &[kl, D] : q.triple) {
    const std::string where = L.a_basis.label(kl.first) + ", " + L.a_basis.label(kl.second);
    if (kl.first == kl.second && !D.is_zero())
      bad("triple skew-symmetric", where);
    auto it = q.triple.find({kl.second, kl.first});
    if (it == q.triple.end() || !(it->second == scaled(D, -1)))
      bad("triple skew-symmetric", where);
    if (!D.is_zero() && D.degree != 1)
      bad("triple of upper degree -1", where);
    if (leibniz_violation(A, D))
      bad("triple is a derivation", where);
    for (int i = 0; i < (int)A.dim(); ++i)
      if (A.degree(i) == 0 && !D.col[i].empty())
        bad("triple is A-linear", where);
  }
  return out;
}

ShLieRinehartData quasi_to_sh(const Workspace &ws, const QuasiData &q)
{
  const SymContext &ctx = *ws.ctx;
  ShLieRinehartData pure;
  pure.L = q.L;
  const int r = q.L->rank();
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) {
      auto nw = normalize_word(ctx, {ctx.pure(k), ctx.pure(l)});
      if (!nw || nw->second.gens[0] != ctx.pure(k))
        continue; // only the canonical order
      auto b = q.bracket.find({k, l});
      if (b != q.bracket.end() && !b->second.empty())
        pure.del.parts[1][nw->second] = b->second;
      auto tr = q.triple.find({k, l});
      if (tr != q.triple.end() && !tr->second.is_zero())
        pure.t.parts[2][nw->second] = scaled(tr->second, -1);
    }
  for (int k = 0; k < r && k < (int)q.pairing.size(); ++k)
    if (!q.pairing[k].is_zero())
      pure.t.parts[1][SymWord{{ctx.pure(k)}}] = q.pairing[k];
  return extend_from_pure(ws, pure);
}

std::vector<SparseMatrix> build_quasi_mc(const Workspace &ws, const QuasiData &q)
{
  const SymAlgebra &S = *ws.sym;
  const WordSpace &W = *ws.words;
  const SymContext &ctx = *ws.ctx;
  const AlgebraSpec &A = ws.algebra();
  const ModuleSpec &L = *ws.L;
  std::vector<SparseMatrix> out;
  out.push_back(S.descend(hom_differential(*ws.forms)));
  SparseMatrix D1(S.size(), S.size()), D2(S.size(), S.size());

  for (int s = 0; s < S.size(); ++s) {
    const int u = S.word_of(s), m = S.a_of(s);
    const int fdeg = S.degree(s);
    // f(seq) for a sequence of pure generators
    auto f = [&](const std::vector<int> &seq) -> SparseVec {
      auto nw = normalize_word(ctx, seq);
      if (!nw || !(nw->second == W.word(u)))
        return {};
      return scaled(unit_vector(m), nw->first);
    };
    for (int v : W.pure_words()) {
      const int p1 = W.length(v);
      const auto &xi = W.word(v).gens;
      if (p1 == W.length(u) + 1) {
        SparseVec val;
        for (int j = 0; j < p1; ++j) {
          const int k = L.x_part(xi[j]);
          axpy(val, sign_of_parity(j), q.pairing[k].apply(f(without(xi, j))));
        }
        for (int j = 0; j < p1; ++j)
          for (int k = j + 1; k < p1; ++k) {
            auto b = q.bracket.find({L.x_part(xi[j]), L.x_part(xi[k])});
            if (b == q.bracket.end())
              continue;
            std::vector<int> rest = without(without(xi, k), j);
            for (const auto &[g, c] : b->second) {
              std::vector<int> seq{ctx.pure(L.x_part(g))};
              seq.insert(seq.end(), rest.begin(), rest.end());
              // 1-based positions j+1, k+1
              axpy(val, c * sign_of_parity(j + k),
                   multiply(A, unit_vector(L.a_part(g)), f(seq)));
            }
          }
        for (const auto &[i, c] : val)
          D1.add(*S.find(v, i), s, c * sign_of_parity(fdeg));
      }
      if (p1 == W.length(u) + 2) {
        SparseVec val;
        for (int j = 0; j < p1; ++j)
          for (int k = j + 1; k < p1; ++k) {
            auto tr = q.triple.find({L.x_part(xi[j]), L.x_part(xi[k])});
            if (tr == q.triple.end())
              continue;
            SparseVec alpha = f(without(without(xi, k), j));
            if (alpha.empty())
              continue;
            const int ad = element_degree(A, alpha);
            axpy(val, sign_of_parity(j + k + ad), tr->second.apply(alpha));
          }
        for (const auto &[i, c] : val)
          D2.add(*S.find(v, i), s, c * sign_of_parity(fdeg));
      }
    }
  }
  out.push_back(std::move(D1));
  out.push_back(std::move(D2));
  return out;
}

JacobiDefect jacobi_defect_identity(const Workspace &ws, const QuasiData &q)
{
  JacobiDefect res;
  const ModuleSpec &L = *ws.L;
  const SymContext &ctx = *ws.ctx;
  ShLieRinehartData sh = quasi_to_sh(ws, q);
  Bracket b3 = brackets_from_coderivation(ctx, sh.del, 3);
  const int r = L.rank();
  auto e = [&](int k) { return unit_vector(ctx.pure(k)); };
  auto br = [&](const SparseVec &x, const SparseVec &y) {
    SparseVec out;
    for (const auto &[gx, cx] : x)
      for (const auto &[gy, cy] : y) {
        auto it = q.bracket.find({L.x_part(gx), L.x_part(gy)});
        if (it != q.bracket.end())
          axpy(out, cx * cy, it->second);
      }
    return out;
  };
  auto dl = [&](const SparseVec &x) { return L.diff_L.apply(x); };
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        SparseVec lhs = br(br(e(i), e(j)), e(k));
        axpy(lhs, 1, br(br(e(j), e(k)), e(i)));
        axpy(lhs, 1, br(br(e(k), e(i)), e(j)));
        SparseVec rhs = evaluate_bracket(b3, {dl(e(i)), e(j), e(k)});
        axpy(rhs, 1, evaluate_bracket(b3, {e(i), dl(e(j)), e(k)}));
        axpy(rhs, 1, evaluate_bracket(b3, {e(i), e(j), dl(e(k))}));
        const std::string word = "(" + L.a_basis.label(i) + ", " + L.a_basis.label(j) + ", " +
                                 L.a_basis.label(k) + ")";
        if (lhs.empty() && rhs.empty())
          continue;
        int s = 0;
        if (lhs == rhs)
          s = 1;
        else if (lhs == scaled(rhs, -1))
          s = -1;
        if (s == 0 || (res.sign && *res.sign != s)) {
          res.mismatches.push_back({"Jacobi defect", 2, word, "",
                                    lvec(L, lhs) + " vs " + lvec(L, rhs)});
          continue;
        }
        res.sign = s;
      }
  return res;
}

QuasiData quasi_sample_from_parameters(const std::vector<int> &m, const std::vector<int> &b,
                                       const std::vector<int> &lambda, const Rational &c)
{
  // A = Λ[t], |t| = -1; Q0 = span(x1, x2)
  auto A = std::make_shared<AlgebraSpec>(AlgebraSpec::make(
      GradedBasis({{"1", 0}, {"t", -1}}), 0, {{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}}, {}));
  std::vector<std::tuple<int, int, int, Rational>> diff;
  // d(x_k) = t * sum_l m[2l+k] x_l
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      if (m[2 * l + k] != 0)
        diff.emplace_back(1, l, k, Rational(m[2 * l + k]));
  auto L = std::make_shared<ModuleSpec>(
      ModuleSpec::make(A, GradedBasis({{"x1", 0}, {"x2", 0}}), diff));
  QuasiData q;
  q.L = L;
  SparseVec br;
  add_entry(br, L->qindex(0, 0), b[0]);
  add_entry(br, L->qindex(0, 1), b[1]);
  q.bracket[{0, 1}] = br;
  q.bracket[{1, 0}] = scaled(br, -1);
  for (int k = 0; k < 2; ++k) {
    Derivation p(0, 2);
    add_entry(p.col[1], 1, lambda[k]);
    q.pairing.push_back(p);
  }
  Derivation tr(1, 2);
  add_entry(tr.col[1], 0, c);
  q.triple[{0, 1}] = tr;
  q.triple[{1, 0}] = scaled(tr, -1);
  return q;
}

QuasiSearch solve_quasi_sample(int W)
{
  QuasiSearch res;
  std::vector<int> vals{-1, 0, 1};
  // m (4), b (2), lambda (2): 3^8 candidates in a fixed order
  for (long code = 0; code < 6561; ++code) {
    long x = code;
    std::vector<int> p(8);
    for (int i = 7; i >= 0; --i) {
      p[i] = vals[x % 3];
      x /= 3;
    }
    std::vector<int> m(p.begin(), p.begin() + 4), b(p.begin() + 4, p.begin() + 6),
        lambda(p.begin() + 6, p.end());
    ++res.candidates;
    QuasiData q0 = quasi_sample_from_parameters(m, b, lambda, 0);
    QuasiData q1 = quasi_sample_from_parameters(m, b, lambda, 1);
    if (!validate_module(*q0.L).empty())
      continue;
    // the closed-form operators are affine in the triple coefficient
    Workspace ws = Workspace::make(q0.L, 2);
    auto D0 = build_quasi_mc(ws, q0);
    auto D1 = build_quasi_mc(ws, q1);
    const SparseMatrix &d0 = D0[0], &d1 = D0[1];
    const SparseMatrix d2 = D1[2]; // coefficient 1
    if (!(d0 * d1 + d1 * d0).is_zero())
      continue;
    SparseMatrix Y = d1 * d1;
    if (Y.is_zero())
      continue;
    SparseMatrix X = d0 * d2 + d2 * d0;
    // c X + Y = 0
    std::optional<Rational> c;
    bool ok = true;
    for (int col = 0; col < X.cols && ok; ++col) {
      for (const auto &[row, y] : Y.col[col]) {
        Rational xv = X.at(row, col);
        if (xv == 0) {
          ok = false;
          break;
        }
        Rational cand = -y / xv;
        if (c && *c != cand) {
          ok = false;
          break;
        }
        c = cand;
      }
      for (const auto &[row, xv] : X.col[col])
        if (Y.at(row, col) == 0)
          ok = false;
    }
    if (!ok || !c || *c == 0)
      continue;
    if (!(d1 * d2 + d2 * d1).is_zero() || !(d2 * d2).is_zero())
      continue;
    QuasiData q = quasi_sample_from_parameters(m, b, lambda, *c);
    Workspace full = Workspace::make(q.L, W);
    ShReport rep = check_sh_lie_rinehart(full, quasi_to_sh(full, q));
    res.certificate = rep.direct.residuals;
    res.certificate.insert(res.certificate.end(), rep.indirect.residuals.begin(),
                           rep.indirect.residuals.end());
    if (!res.certificate.empty())
      continue;
    res.found = q;
    return res;
  }
  return res;
}

} // namespace mdca
