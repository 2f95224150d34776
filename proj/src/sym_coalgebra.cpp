#include "mdca/sym_coalgebra.hpp"

#include <algorithm>
#include <numeric>

namespace mdca {

SparseVec ModuleSpec::act(int i, const SparseVec &v) const
{
  SparseVec r;
  for (const auto &[q, c] : v) {
    const int a = a_part(q), k = x_part(q);
    for (const auto &[m, c2] : over->mult[i][a])
      add_entry(r, qindex(m, k), c * c2);
  }
  return r;
}

namespace {

GradedBasis make_qbasis(const AlgebraSpec &A, const GradedBasis &gens)
{
  std::vector<Generator> q;
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t i = 0; i < A.dim(); ++i) {
      std::string label = ((int)i == A.unit) ? gens.label(k) : A.basis.label(i) + "*" + gens.label(k);
      q.push_back({label, A.degree((int)i) + gens.degree(k)});
    }
  return GradedBasis(std::move(q));
}

} // namespace

ModuleSpec ModuleSpec::make(AlgebraPtr A, GradedBasis gens,
                            const std::vector<std::tuple<int, int, int, Rational>> &gen_diff)
{
  ModuleSpec L;
  L.over = std::move(A);
  L.a_basis = std::move(gens);
  L.qbasis = make_qbasis(*L.over, L.a_basis);
  const int n = L.dimA(), r = L.rank();
  std::vector<SparseVec> dx(r);
  for (const auto &[i, l, k, c] : gen_diff) {
    if (i < 0 || i >= n || l < 0 || l >= r || k < 0 || k >= r)
      throw InputError("module.diff: index out of range");
    add_entry(dx[k], L.qindex(i, l), c);
  }
  L.diff_L = LinearMap(L.qbasis, L.qbasis, -1);
  try {
    for (int k = 0; k < r; ++k)
      for (int i = 0; i < n; ++i) {
        const int q = L.qindex(i, k);
        SparseVec v;
        for (const auto &[m, c] : L.over->diff.apply(unit_vector(i)))
          add_entry(v, L.qindex(m, k), c);
        axpy(v, sign_of_parity(L.over->degree(i)), L.act(i, dx[k]));
        for (const auto &[t, c] : v)
          L.diff_L.add(t, q, c);
      }
  } catch (const std::invalid_argument &e) {
    throw InputError(std::string("module.diff: ") + e.what());
  }
  return L;
}

ModuleSpec ModuleSpec::from_full_diff(AlgebraPtr A, GradedBasis gens, LinearMap diff)
{
  ModuleSpec L;
  L.over = std::move(A);
  L.a_basis = std::move(gens);
  L.qbasis = make_qbasis(*L.over, L.a_basis);
  if (!(diff.source == L.qbasis) || !(diff.target == L.qbasis) || diff.degree != -1)
    throw InputError("module: differential must be a degree -1 map on the induced Q-basis");
  L.diff_L = std::move(diff);
  return L;
}

std::vector<Violation> validate_module(const ModuleSpec &L)
{
  std::vector<Violation> out;
  const int n = L.dimA();
  const int N = (int)L.qbasis.size();
  for (int q = 0; q < N; ++q) {
    if (!L.diff_L.apply(L.diff_L.apply(unit_vector(q))).empty()) {
      out.push_back({"d_L squared", L.qbasis.label(q)});
      break;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < N; ++q) {
      SparseVec lhs = L.diff_L.apply(L.act(i, unit_vector(q)));
      SparseVec rhs;
      for (const auto &[m, c] : L.over->diff.apply(unit_vector(i)))
        axpy(rhs, c, L.act(m, unit_vector(q)));
      axpy(rhs, sign_of_parity(L.over->degree(i)), L.act(i, L.diff_L.apply(unit_vector(q))));
      if (lhs != rhs) {
        out.push_back({"dg-module compatibility",
                       "(" + L.over->basis.label(i) + ", " + L.qbasis.label(q) + ")"});
        return out;
      }
    }
  return out;
}

SymContext::SymContext(ModulePtr L) : L_(std::move(L))
{
  const ModuleSpec &M = *L_;
  const int N = (int)M.qbasis.size();
  const int n = M.dimA();
  deg_.resize(N);
  label_.resize(N);
  for (int q = 0; q < N; ++q) {
    deg_[q] = M.qbasis.degree(q) + 1;
    label_[q] = is_pure(q) ? "s" + M.qbasis.label(q) : "s(" + M.qbasis.label(q) + ")";
  }
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (deg_[a] != deg_[b])
      return deg_[a] < deg_[b];
    return label_[a] < label_[b];
  });
  rank_.resize(N);
  for (int p = 0; p < N; ++p)
    rank_[order[p]] = p;
  d_.resize(N);
  for (int q = 0; q < N; ++q)
    d_[q] = scaled(M.diff_L.apply(unit_vector(q)), -1);
  act_.assign(n, std::vector<SparseVec>(N));
  for (int a = 0; a < n; ++a)
    for (int q = 0; q < N; ++q)
      act_[a][q] = scaled(M.act(a, unit_vector(q)), sign_of_parity(M.over->degree(a)));
}

std::optional<int> SymContext::find(const std::string &label) const
{
  for (int g = 0; g < size(); ++g)
    if (label_[g] == label)
      return g;
  return std::nullopt;
}

SparseVec SymContext::act(const SparseVec &a, const SparseVec &v) const
{
  SparseVec r;
  for (const auto &[i, c] : a)
    for (const auto &[g, c2] : v)
      axpy(r, c * c2, act_[i][g]);
  return r;
}

int word_degree(const SymContext &ctx, const SymWord &w)
{
  int d = 0;
  for (int g : w.gens)
    d += ctx.degree(g);
  return d;
}

std::string word_label(const SymContext &ctx, const SymWord &w)
{
  if (w.gens.empty())
    return "1";
  std::string s;
  for (std::size_t i = 0; i < w.gens.size(); ++i) {
    if (i)
      s += "·";
    s += ctx.label(w.gens[i]);
  }
  return s;
}

std::optional<std::pair<int, SymWord>> normalize_word(const SymContext &ctx,
                                                      const std::vector<int> &gens)
{
  const std::size_t n = gens.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int g : gens)
    if (g < 0 || g >= ctx.size())
      throw InputError("unknown generator index " + std::to_string(g));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ctx.rank_of(gens[a]) < ctx.rank_of(gens[b]); });
  std::vector<int> perm(n), degs(n);
  SymWord w;
  for (std::size_t p = 0; p < n; ++p) {
    perm[order[p]] = (int)p;
    w.gens.push_back(gens[order[p]]);
  }
  for (std::size_t i = 0; i < n; ++i)
    degs[i] = ctx.degree(gens[i]);
  for (std::size_t p = 1; p < n; ++p)
    if (w.gens[p] == w.gens[p - 1] && ctx.degree(w.gens[p]) % 2 != 0)
      return std::nullopt;
  return std::make_pair(koszul_sign(perm, degs), std::move(w));
}

std::optional<std::pair<int, SymWord>> normalize_labels(const SymContext &ctx,
                                                        const std::vector<std::string> &labels)
{
  std::vector<int> g;
  for (const auto &l : labels) {
    auto i = ctx.find(l);
    if (!i)
      throw InputError("unknown generator label \"" + l + "\"");
    g.push_back(*i);
  }
  return normalize_word(ctx, g);
}

namespace {

std::vector<SymWord> enumerate_words(const SymContext &ctx, int W)
{
  std::vector<int> sorted(ctx.size());
  std::iota(sorted.begin(), sorted.end(), 0);
  std::sort(sorted.begin(), sorted.end(),
            [&](int a, int b) { return ctx.rank_of(a) < ctx.rank_of(b); });
  std::vector<SymWord> out;
  SymWord cur;
  auto rec = [&](auto &&self, std::size_t start) -> void {
    out.push_back(cur);
    if ((int)cur.gens.size() == W)
      return;
    for (std::size_t p = start; p < sorted.size(); ++p) {
      const int g = sorted[p];
      const bool odd = ctx.degree(g) % 2 != 0;
      cur.gens.push_back(g);
      self(self, odd ? p + 1 : p);
      cur.gens.pop_back();
    }
  };
  rec(rec, 0);
  std::stable_sort(out.begin(), out.end(), [&](const SymWord &a, const SymWord &b) {
    if (a.length() != b.length())
      return a.length() < b.length();
    int da = word_degree(ctx, a), db = word_degree(ctx, b);
    if (da != db)
      return da < db;
    std::vector<int> ra, rb;
    for (int g : a.gens)
      ra.push_back(ctx.rank_of(g));
    for (int g : b.gens)
      rb.push_back(ctx.rank_of(g));
    return ra < rb;
  });
  return out;
}

} // namespace

std::vector<SymWord> word_basis(const SymContext &ctx, const TruncationPolicy &policy)
{
  if (policy.W < 0)
    throw InputError("truncation bound W must be nonnegative");
  std::vector<SymWord> out;
  for (auto &w : enumerate_words(ctx, policy.W)) {
    int d = word_degree(ctx, w);
    if (d >= policy.dmin && d <= policy.dmax)
      out.push_back(std::move(w));
  }
  return out;
}

std::vector<DiagonalTerm> shuffle_diagonal(const SymContext &ctx, const SymWord &w)
{
  const std::size_t p = w.length();
  std::map<std::pair<SymWord, SymWord>, Rational> acc;
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    SymWord l, r;
    long odd = 0;
    for (std::size_t i = 0; i < p; ++i) {
      if (mask & (1u << i)) {
        // moving w_i left past the unselected letters before it
        for (int g : r.gens)
          odd += (long)ctx.degree(g) * ctx.degree(w.gens[i]);
        l.gens.push_back(w.gens[i]);
      } else {
        r.gens.push_back(w.gens[i]);
      }
    }
    acc[{l, r}] += sign_of_parity(odd);
  }
  std::vector<DiagonalTerm> out;
  for (auto &[lr, c] : acc)
    if (c != 0)
      out.push_back({lr.first, lr.second, c});
  return out;
}

WordSpace::WordSpace(std::shared_ptr<const SymContext> ctx, int W) : ctx_(std::move(ctx)), W_(W)
{
  words_ = enumerate_words(*ctx_, W);
  const int n = (int)words_.size();
  deg_.resize(n);
  for (int i = 0; i < n; ++i) {
    deg_[i] = word_degree(*ctx_, words_[i]);
    index_.emplace(words_[i], i);
  }
  diag_.resize(n);
  for (int i = 0; i < n; ++i)
    for (auto &t : shuffle_diagonal(*ctx_, words_[i]))
      diag_[i].push_back({index_.at(t.left), index_.at(t.right), t.coef});

  const ModuleSpec &L = ctx_->module();
  const AlgebraSpec &A = *L.over;
  pure_.resize(n);
  for (int i = 0; i < n; ++i) {
    const SymWord &w = words_[i];
    bool all_pure = true;
    for (int g : w.gens)
      all_pure = all_pure && ctx_->is_pure(g);
    if (all_pure)
      pure_words_.push_back(i);

    PureDecomposition pd;
    long odd = 0, apar = 0, slots = 0;
    SparseVec coef = unit_vector(A.unit);
    std::vector<int> plain;
    for (int g : w.gens) {
      const int a = L.a_part(g), k = L.x_part(g);
      const int da = A.degree(a);
      odd += da;                       // s(a x) = (-1)^{|a|} a s(x)
      odd += (long)da * slots;         // moving a to the front past earlier slots
      apar += da;
      slots += ctx_->degree(ctx_->pure(k));
      coef = multiply(A, coef, unit_vector(a));
      plain.push_back(ctx_->pure(k));
    }
    auto nw = normalize_word(*ctx_, plain);
    if (nw && !coef.empty()) {
      pd.zero = false;
      pd.sign = sign_of_parity(odd) * nw->first;
      pd.a_parity = (int)(((apar % 2) + 2) % 2);
      pd.coefficient = std::move(coef);
      pd.pure_word = index_.at(nw->second);
    }
    pure_[i] = std::move(pd);
  }
}

std::optional<int> WordSpace::index(const SymWord &w) const
{
  auto it = index_.find(w);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

int WordSpace::index_or_throw(const SymWord &w) const
{
  auto i = index(w);
  if (!i)
    throw std::out_of_range("word outside the truncation: " + word_label(*ctx_, w));
  return *i;
}

bool WordSpace::is_pure(int i) const
{
  for (int g : words_[i].gens)
    if (!ctx_->is_pure(g))
      return false;
  return true;
}

const Corestriction *Coderivation::part(int j) const
{
  auto it = parts.find(j);
  return it == parts.end() ? nullptr : &it->second;
}

SparseMatrix extend_coderivation(const WordSpace &ws, const Corestriction &c, int j)
{
  const int n = ws.size();
  SparseMatrix M(n, n);
  const SymContext &ctx = ws.context();
  parallel_for(n, [&](std::size_t col) {
    if (ws.length((int)col) < j + 1)
      return;
    for (const auto &t : ws.diagonal((int)col)) {
      if (ws.length(t.left) != j + 1)
        continue;
      auto it = c.find(ws.word(t.left));
      if (it == c.end())
        continue;
      for (const auto &[g, cg] : it->second) {
        std::vector<int> gens{g};
        const auto &rest = ws.word(t.right).gens;
        gens.insert(gens.end(), rest.begin(), rest.end());
        auto nw = normalize_word(ctx, gens);
        if (!nw)
          continue;
        add_entry(M.col[col], ws.index_or_throw(nw->second), t.coef * cg * nw->first);
      }
    }
  });
  return M;
}

SparseMatrix suspended_differential(const WordSpace &ws)
{
  const SymContext &ctx = ws.context();
  Corestriction c0;
  for (int g = 0; g < ctx.size(); ++g)
    if (!ctx.differential(g).empty())
      c0[SymWord{{g}}] = ctx.differential(g);
  return extend_coderivation(ws, c0, 0);
}

std::string vector_label(const SymContext &ctx, const SparseVec &v, bool suspended)
{
  if (v.empty())
    return "0";
  std::string s;
  for (const auto &[g, c] : v) {
    std::string name = suspended ? ctx.label(g) : ctx.module().qbasis.label(g);
    if (c == 1)
      s += (s.empty() ? "" : " + ") + name;
    else if (c == -1)
      s += (s.empty() ? "-" : " - ") + name;
    else if (c < 0)
      s += (s.empty() ? "-" : " - ") + format_rational(-c) + " " + name;
    else
      s += (s.empty() ? "" : " + ") + format_rational(c) + " " + name;
  }
  return s;
}

std::string element_label(const AlgebraSpec &A, const SparseVec &v)
{
  if (v.empty())
    return "0";
  std::string s;
  for (const auto &[i, c] : v) {
    const std::string &name = A.basis.label(i);
    if (c == 1)
      s += (s.empty() ? "" : " + ") + name;
    else if (c == -1)
      s += (s.empty() ? "-" : " - ") + name;
    else if (c < 0)
      s += (s.empty() ? "-" : " - ") + format_rational(-c) + " " + name;
    else
      s += (s.empty() ? "" : " + ") + format_rational(c) + " " + name;
  }
  return s;
}

namespace {

std::string words_vector_label(const WordSpace &ws, const SparseVec &v)
{
  if (v.empty())
    return "0";
  std::string s;
  for (const auto &[w, c] : v) {
    if (!s.empty())
      s += " + ";
    s += "(" + format_rational(c) + ") " + ws.label(w);
  }
  return s;
}

} // namespace

std::vector<Residual> check_coalgebra_perturbation(const WordSpace &ws, const Coderivation &del)
{
  std::vector<Residual> out;
  const int W = ws.W();
  SparseMatrix d0 = suspended_differential(ws);
  std::vector<SparseMatrix> dj(W + 1, SparseMatrix(ws.size(), ws.size()));
  for (int j = 1; j <= W; ++j)
    if (auto c = del.part(j))
      dj[j] = extend_coderivation(ws, *c, j);
  // j = 0: (d^0)^2, part of the dg-module axiom
  for (int j = 0; j <= W - 1; ++j) {
    SparseMatrix R = (j == 0) ? d0 * d0 : d0 * dj[j] + dj[j] * d0;
    for (int k = 1; k <= j - 1; ++k)
      R += dj[k] * dj[j - k];
    for (int w = 0; w < ws.size(); ++w)
      if (!R.col[w].empty())
        out.push_back({"coalgebra perturbation", j, ws.label(w), "",
                       words_vector_label(ws, R.col[w])});
  }
  return out;
}

namespace {

std::vector<SymWord> words_of_length(const SymContext &ctx, int n)
{
  TruncationPolicy p;
  p.W = n;
  std::vector<SymWord> out;
  for (auto &w : word_basis(ctx, p))
    if ((int)w.length() == n)
      out.push_back(std::move(w));
  return out;
}

int suspension_sign(const SymContext &ctx, const std::vector<int> &xs)
{
  // s^{⊗n}(x_1⊗...⊗x_n): the k-th s passes x_1..x_{k-1}
  long odd = 0, acc = 0;
  for (int x : xs) {
    odd += acc;
    acc += ctx.degree(x) - 1;
  }
  return sign_of_parity(odd);
}

} // namespace

Bracket brackets_from_coderivation(const SymContext &ctx, const Coderivation &del, int n)
{
  if (n < 2)
    throw std::invalid_argument("brackets_from_coderivation: arity must be at least 2");
  Bracket b;
  b.n = n;
  const Corestriction *c = del.part(n - 1);
  const int N = ctx.size();
  std::vector<int> xs(n, 0);
  Rational inv_fact = 1;
  for (int k = 2; k <= n; ++k)
    inv_fact /= k;
  while (true) {
    SparseVec value;
    if (c) {
      // sym: 1/n! sum over sigma of the Koszul-signed permuted tensors, multiplied out in Sym
      std::vector<int> sigma(n);
      std::iota(sigma.begin(), sigma.end(), 0);
      std::vector<int> degs(n);
      for (int i = 0; i < n; ++i)
        degs[i] = ctx.degree(xs[i]);
      std::map<SymWord, Rational> sym;
      do {
        std::vector<int> perm(n), gens(n);
        for (int p = 0; p < n; ++p) {
          perm[sigma[p]] = p;
          gens[p] = xs[sigma[p]];
        }
        auto nw = normalize_word(ctx, gens);
        if (nw)
          sym[nw->second] += inv_fact * koszul_sign(perm, degs) * nw->first;
      } while (std::next_permutation(sigma.begin(), sigma.end()));
      for (const auto &[w, coef] : sym) {
        if (coef == 0)
          continue;
        auto it = c->find(w);
        if (it != c->end())
          axpy(value, coef, it->second);
      }
      value = scaled(value, suspension_sign(ctx, xs));
    }
    if (!value.empty())
      b.values[xs] = std::move(value);
    int p = n - 1;
    while (p >= 0 && ++xs[p] == N)
      xs[p--] = 0;
    if (p < 0)
      break;
  }
  return b;
}

Corestriction coderivation_from_brackets(const SymContext &ctx, const Bracket &b)
{
  Corestriction c;
  for (const auto &w : words_of_length(ctx, b.n)) {
    auto it = b.values.find(w.gens);
    if (it == b.values.end())
      continue;
    SparseVec v = scaled(it->second, suspension_sign(ctx, w.gens));
    if (!v.empty())
      c[w] = std::move(v);
  }
  return c;
}

SparseVec evaluate_bracket(const Bracket &b, const std::vector<SparseVec> &args)
{
  SparseVec out;
  std::vector<int> idx(args.size());
  auto rec = [&](auto &&self, std::size_t p, const Rational &coef) -> void {
    if (p == args.size()) {
      auto it = b.values.find(idx);
      if (it != b.values.end())
        axpy(out, coef, it->second);
      return;
    }
    for (const auto &[q, c] : args[p]) {
      idx[p] = q;
      self(self, p + 1, coef * c);
    }
  };
  rec(rec, 0, Rational(1));
  return out;
}

} // namespace mdca
