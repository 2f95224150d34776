#include "mdca/convolution.hpp"

#include <functional>

namespace mdca {

const std::map<SymWord, Derivation> *TwistingCochain::part(int j) const
{
  auto it = parts.find(j);
  return it == parts.end() ? nullptr : &it->second;
}

FormSpace::FormSpace(std::shared_ptr<const WordSpace> ws)
    : ws_(std::move(ws)), dimA_((int)ws_->context().algebra().dim())
{
  d0_ = suspended_differential(*ws_);
}

std::string FormSpace::label(int v) const
{
  return ws_->label(word_of(v)) + "->" + algebra().basis.label(a_of(v));
}

SparseVec FormSpace::value(const Form &f, int w) const
{
  SparseVec r;
  auto it = f.lower_bound(index(w, 0));
  for (; it != f.end() && word_of(it->first) == w; ++it)
    add_entry(r, a_of(it->first), it->second);
  return r;
}

std::string form_label(const FormSpace &fs, const Form &f)
{
  if (f.empty())
    return "0";
  std::string s;
  int shown = 0;
  for (const auto &[v, c] : f) {
    if (shown++ == 12) {
      s += " + ... (" + std::to_string(f.size()) + " terms)";
      break;
    }
    if (!s.empty())
      s += " + ";
    s += "(" + format_rational(c) + ") " + fs.label(v);
  }
  return s;
}

namespace {

using Entries = std::map<int, std::vector<std::pair<int, Rational>>>;

Entries by_word(const FormSpace &fs, const Form &f)
{
  Entries e;
  for (const auto &[v, c] : f)
    e[fs.word_of(v)].emplace_back(fs.a_of(v), c);
  return e;
}

} // namespace

Form cup(const FormSpace &fs, const Form &f, const Form &g)
{
  const WordSpace &ws = fs.words();
  const AlgebraSpec &A = fs.algebra();
  Entries fw = by_word(fs, f), gw = by_word(fs, g);
  Form out;
  for (int w = 0; w < ws.size(); ++w)
    for (const auto &t : ws.diagonal(w)) {
      auto fi = fw.find(t.left);
      if (fi == fw.end())
        continue;
      auto gi = gw.find(t.right);
      if (gi == gw.end())
        continue;
      const int dl = ws.degree(t.left);
      for (const auto &[m2, c2] : gi->second) {
        const int dg = A.degree(m2) - ws.degree(t.right);
        const Rational s = t.coef * c2 * sign_of_parity((long)dg * dl);
        for (const auto &[m1, c1] : fi->second)
          for (const auto &[k, c3] : A.mult[m1][m2])
            add_entry(out, fs.index(w, k), s * c1 * c3);
      }
    }
  return out;
}

SparseMatrix precompose(const FormSpace &fs, const SparseMatrix &word_op)
{
  const int nw = fs.words().size();
  std::vector<std::vector<std::pair<int, Rational>>> rows(nw);
  for (int src = 0; src < nw; ++src)
    for (const auto &[w, c] : word_op.col[src])
      rows[w].emplace_back(src, c);
  SparseMatrix M(fs.size(), fs.size());
  for (int v = 0; v < fs.size(); ++v) {
    const int w = fs.word_of(v), m = fs.a_of(v);
    const int s = sign_of_parity(fs.degree(v) + 1);
    for (const auto &[src, c] : rows[w])
      M.add(fs.index(src, m), v, s * c);
  }
  return M;
}

SparseMatrix hom_differential(const FormSpace &fs)
{
  SparseMatrix M = precompose(fs, fs.d0_words());
  const AlgebraSpec &A = fs.algebra();
  for (int v = 0; v < fs.size(); ++v)
    for (const auto &[k, c] : A.diff.apply(unit_vector(fs.a_of(v))))
      M.add(fs.index(fs.word_of(v), k), v, c);
  return M;
}

SparseMatrix partial_bra(const FormSpace &fs, const Coderivation &del, int j)
{
  const Corestriction *c = del.part(j);
  if (!c)
    return SparseMatrix(fs.size(), fs.size());
  return precompose(fs, extend_coderivation(fs.words(), *c, j));
}

SparseMatrix partial_t(const FormSpace &fs, const TwistingCochain &t, int j)
{
  SparseMatrix M(fs.size(), fs.size());
  const auto *tj = t.part(j);
  if (!tj)
    return M;
  const WordSpace &ws = fs.words();
  const int n = fs.dimA();
  for (int w = 0; w < ws.size(); ++w)
    for (const auto &term : ws.diagonal(w)) {
      if (ws.length(term.left) != j)
        continue;
      auto it = tj->find(ws.word(term.left));
      if (it == tj->end())
        continue;
      const int dl = ws.degree(term.left);
      for (int m = 0; m < n; ++m) {
        const int src = fs.index(term.right, m);
        const Rational s = term.coef * sign_of_parity((long)fs.degree(src) * dl);
        for (const auto &[k, c] : it->second.col[m])
          M.add(fs.index(w, k), src, s * c);
      }
    }
  return M;
}

SparseMatrix build_D(const FormSpace &fs, const Coderivation &del, const TwistingCochain &t, int j)
{
  if (j == 0)
    return hom_differential(fs);
  return partial_bra(fs, del, j) + partial_t(fs, t, j);
}

std::vector<SparseMatrix> build_operators(const FormSpace &fs, const Coderivation &del,
                                          const TwistingCochain &t)
{
  std::vector<SparseMatrix> D;
  for (int j = 0; j <= fs.W(); ++j)
    D.push_back(build_D(fs, del, t, j));
  return D;
}

SymAlgebra::SymAlgebra(std::shared_ptr<const FormSpace> fs) : fs_(std::move(fs))
{
  const WordSpace &ws = fs_->words();
  const AlgebraSpec &A = fs_->algebra();
  const int n = fs_->dimA();
  for (int w : ws.pure_words())
    for (int m = 0; m < n; ++m) {
      index_[{w, m}] = (int)word_.size();
      word_.push_back(w);
      a_.push_back(m);
    }
  E_ = SparseMatrix(fs_->size(), size());
  R_ = SparseMatrix(size(), fs_->size());
  for (int s = 0; s < size(); ++s)
    R_.add(s, fs_->index(word_[s], a_[s]), 1);
  // f(w) = ± P_w f(u) for w = ± P_w·u
  std::vector<std::vector<int>> by_pure(ws.size());
  for (int w = 0; w < ws.size(); ++w) {
    const auto &pd = ws.pure_decomposition(w);
    if (!pd.zero)
      by_pure[pd.pure_word].push_back(w);
  }
  for (int s = 0; s < size(); ++s) {
    const int fdeg = degree(s);
    for (int w : by_pure[word_[s]]) {
      const auto &pd = ws.pure_decomposition(w);
      const int sg = pd.sign * sign_of_parity((long)fdeg * pd.a_parity);
      for (const auto &[k, c] : multiply(A, pd.coefficient, unit_vector(a_[s])))
        E_.add(fs_->index(w, k), s, sg * c);
    }
  }
}

int SymAlgebra::degree(int s) const
{
  return fs_->algebra().degree(a_[s]) - fs_->words().degree(word_[s]);
}

std::optional<int> SymAlgebra::find(int word, int m) const
{
  auto it = index_.find({word, m});
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

int SymAlgebra::dual_generator(int k) const
{
  const SymContext &ctx = fs_->context();
  auto w = fs_->words().index(SymWord{{ctx.pure(k)}});
  if (!w)
    throw std::out_of_range("dual generator outside the truncation");
  return *find(*w, fs_->algebra().unit);
}

SparseMatrix SymAlgebra::descend(const SparseMatrix &op) const { return R_ * (op * E_); }

SparseVec SymAlgebra::cup(const SparseVec &f, const SparseVec &g) const
{
  return restrict(mdca::cup(*fs_, embed(f), embed(g)));
}

GradedBasis SymAlgebra::basis() const
{
  std::vector<Generator> g;
  for (int s = 0; s < size(); ++s)
    g.push_back({label(s), degree(s)});
  return GradedBasis(std::move(g));
}

std::string SymAlgebra::vector_label(const SparseVec &s) const
{
  Form f;
  for (const auto &[i, c] : s)
    add_entry(f, fs_->index(word_[i], a_[i]), c);
  return form_label(*fs_, f);
}

std::optional<MultilinearWitness> multilinearity_defect(const SymAlgebra &S, const Form &f)
{
  const FormSpace &fs = S.ambient();
  Form diff = f;
  axpy(diff, -1, S.embed(S.restrict(f)));
  if (diff.empty())
    return std::nullopt;
  MultilinearWitness w;
  w.word = fs.word_of(diff.begin()->first);
  const SymContext &ctx = fs.context();
  const auto &gens = fs.words().word(w.word).gens;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!ctx.is_pure(gens[i])) {
      w.slot = (int)i;
      w.a = ctx.module().a_part(gens[i]);
      break;
    }
  w.actual = fs.value(f, w.word);
  w.expected = fs.value(S.embed(S.restrict(f)), w.word);
  return w;
}

std::string witness_slot(const SymAlgebra &S, const MultilinearWitness &w)
{
  if (w.slot < 0)
    return "";
  return "slot " + std::to_string(w.slot + 1) + ", a = " +
         S.ambient().algebra().basis.label(w.a);
}

std::vector<int> descent_test_forms(const SymAlgebra &S, int j)
{
  const int W = S.ambient().W();
  const int unit = S.ambient().algebra().unit;
  std::vector<int> first, second, rest;
  for (int s = 0; s < S.size(); ++s) {
    const int p = S.length(s);
    if (p > W - j)
      continue;
    if (p == 0)
      first.push_back(s);
    else if (p == 1 && S.a_of(s) == unit)
      second.push_back(s);
    else
      rest.push_back(s);
  }
  first.insert(first.end(), second.begin(), second.end());
  first.insert(first.end(), rest.begin(), rest.end());
  return first;
}

std::vector<Residual> descent_check(const SymAlgebra &S, const SparseMatrix &op, int j,
                                    const std::string &identity, std::size_t limit)
{
  std::vector<Residual> out;
  const AlgebraSpec &A = S.ambient().algebra();
  for (int s : descent_test_forms(S, j)) {
    Form img = op.apply(S.embed(unit_vector(s)));
    auto w = multilinearity_defect(S, img);
    if (!w)
      continue;
    out.push_back({identity, j, S.label(s) + " at " + S.ambient().words().label(w->word),
                   witness_slot(S, *w),
                   element_label(A, w->actual) + " != " + element_label(A, w->expected)});
    if (out.size() >= limit)
      break;
  }
  return out;
}

std::vector<Residual> square_check(const FormSpace &fs, const std::vector<SparseMatrix> &D,
                                   int max_level, std::size_t limit)
{
  std::vector<Residual> out;
  for (int j = 0; j <= max_level && j < (int)D.size(); ++j) {
    SparseMatrix M(fs.size(), fs.size());
    for (int k = 0; k <= j; ++k)
      M += D[k] * D[j - k];
    std::size_t found = 0;
    for (int v = 0; v < fs.size() && found < limit; ++v)
      if (!M.col[v].empty()) {
        out.push_back({"D squared", j, fs.label(v), "", form_label(fs, M.col[v])});
        ++found;
      }
  }
  return out;
}

std::vector<Residual> square_check_descended(const SymAlgebra &S,
                                             const std::vector<SparseMatrix> &DS, int max_level,
                                             bool generators_only, std::size_t limit)
{
  std::vector<Residual> out;
  const int unit = S.ambient().algebra().unit;
  for (int j = 0; j <= max_level && j < (int)DS.size(); ++j) {
    SparseMatrix M(S.size(), S.size());
    for (int k = 0; k <= j; ++k)
      M += DS[k] * DS[j - k];
    std::size_t found = 0;
    for (int s = 0; s < S.size() && found < limit; ++s) {
      if (generators_only && !(S.length(s) == 0 || (S.length(s) == 1 && S.a_of(s) == unit)))
        continue;
      if (!M.col[s].empty()) {
        out.push_back({"D squared on Sym_A", j, S.label(s), "", S.vector_label(M.col[s])});
        ++found;
      }
    }
  }
  return out;
}

std::vector<Residual> bigrade_check(const FormSpace &fs, const SparseMatrix &Dj, int j)
{
  std::vector<Residual> out;
  for (int v = 0; v < fs.size(); ++v)
    for (const auto &[r, c] : Dj.col[v])
      if (fs.length(r) != fs.length(v) + j || fs.degree(r) != fs.degree(v) - 1) {
        out.push_back({"bidegree", j, fs.label(v), "", "(" + format_rational(c) + ") " + fs.label(r)});
        break;
      }
  return out;
}

std::vector<BettiEntry> cohomology_ranks(const SymAlgebra &S, const SparseMatrix &total, int qmin,
                                         int qmax)
{
  GradedBasis b = S.basis();
  LinearMap f(b, b, -1);
  for (int s = 0; s < S.size(); ++s)
    for (const auto &[r, c] : total.col[s])
      f.add(r, s, c);
  // homological h = -q
  auto ranks = rank_and_kernel(f, -qmax - 1, -qmin + 1);
  std::map<int, int> rank_at, dim_at;
  for (const auto &dr : ranks) {
    rank_at[dr.degree] = dr.rank;
    dim_at[dr.degree] = dr.source_dim;
  }

  const FormSpace &fs = S.ambient();
  const SymContext &ctx = fs.context();
  const AlgebraSpec &A = fs.algebra();
  bool unbounded = false;
  for (int k = 0; k < ctx.module().rank(); ++k)
    if (ctx.degree(ctx.pure(k)) <= 0)
      unbounded = true;
  // D_j with j up to jmax cuts images of forms on words of length >= W - jmax + 1; degrees
  // grow with length once the generators are positive, so everything from the lowest such
  // degree upwards is suspect
  int jmax = 0;
  for (int s = 0; s < S.size(); ++s)
    for (const auto &[r, c] : total.col[s])
      jmax = std::max(jmax, S.length(r) - S.length(s));
  const int n0 = std::max(1, fs.W() - jmax + 1);
  std::optional<int> beyond;
  if (!unbounded) {
    const int rank = ctx.module().rank();
    std::vector<int> gens;
    std::function<void(int)> walk = [&](int from) {
      if ((int)gens.size() == n0) {
        if (!normalize_word(ctx, gens))
          return;
        int deg = 0;
        for (int g : gens)
          deg += ctx.degree(g);
        for (std::size_t m = 0; m < A.dim(); ++m) {
          const int q = deg - A.degree((int)m);
          if (!beyond || q < *beyond)
            beyond = q;
        }
        return;
      }
      for (int k = from; k < rank; ++k) {
        gens.push_back(ctx.pure(k));
        walk(k);
        gens.pop_back();
      }
    };
    walk(0);
  }
  std::vector<BettiEntry> out;
  for (int q = qmin; q <= qmax; ++q) {
    const int h = -q;
    BettiEntry e;
    e.degree = q;
    e.dimension = dim_at[h];
    e.betti = dim_at[h] - rank_at[h] - rank_at[h + 1];
    e.boundary = (q == qmin || q == qmax);
    e.truncated = unbounded || (beyond && q >= *beyond);
    out.push_back(e);
  }
  return out;
}

} // namespace mdca
