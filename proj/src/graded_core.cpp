#include "mdca/graded_core.hpp"

#include <cstdlib>
#include <regex>

namespace mdca {

Rational parse_rational(const std::string &s)
{
  static const std::regex re(R"(^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    throw InputError("malformed rational \"" + s + "\"");
  mpz_class num(m[1].str(), 10);
  mpz_class den(1);
  if (m[2].matched) {
    den = mpz_class(m[2].str(), 10);
    if (den == 0)
      throw InputError("zero denominator in \"" + s + "\"");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1)
      throw InputError("rational \"" + s + "\" is not reduced");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational &q) { return q.get_str(); }

GradedBasis::GradedBasis(std::vector<Generator> gens) : gens_(std::move(gens))
{
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    auto [it, fresh] = index_.emplace(gens_[i].label, static_cast<int>(i));
    if (!fresh)
      throw InputError("duplicate label \"" + gens_[i].label + "\"");
  }
}

std::optional<int> GradedBasis::find(const std::string &label) const
{
  auto it = index_.find(label);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

bool GradedBasis::operator==(const GradedBasis &o) const
{
  if (gens_.size() != o.gens_.size())
    return false;
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].label != o.gens_[i].label || gens_[i].degree != o.gens_[i].degree)
      return false;
  return true;
}

void add_entry(SparseVec &v, int i, const Rational &c)
{
  if (c == 0)
    return;
  auto [it, fresh] = v.emplace(i, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0)
      v.erase(it);
  }
}

void axpy(SparseVec &y, const Rational &a, const SparseVec &x)
{
  if (a == 0)
    return;
  for (const auto &[i, c] : x)
    add_entry(y, i, a * c);
}

SparseVec scaled(const SparseVec &x, const Rational &a)
{
  SparseVec r;
  axpy(r, a, x);
  return r;
}

SparseVec unit_vector(int i) { return SparseVec{{i, Rational(1)}}; }

LinearMap::LinearMap(GradedBasis src, GradedBasis tgt, int deg)
    : source(std::move(src)), target(std::move(tgt)), degree(deg)
{
}

void LinearMap::add(int t, int s, const Rational &v)
{
  if (v == 0)
    return;
  if (t < 0 || s < 0 || t >= (int)target.size() || s >= (int)source.size())
    throw std::out_of_range("LinearMap entry out of range");
  if (target.degree(t) != source.degree(s) + degree)
    throw std::invalid_argument("LinearMap entry (" + target.label(t) + ", " + source.label(s) +
                                ") violates degree " + std::to_string(degree));
  auto key = std::make_pair(t, s);
  auto [it, fresh] = entries.emplace(key, v);
  if (!fresh) {
    it->second += v;
    if (it->second == 0)
      entries.erase(it);
  }
}

Rational LinearMap::at(int t, int s) const
{
  auto it = entries.find({t, s});
  return it == entries.end() ? Rational(0) : it->second;
}

SparseVec LinearMap::apply(const SparseVec &x) const
{
  SparseVec y;
  for (const auto &[ts, c] : entries) {
    auto it = x.find(ts.second);
    if (it != x.end())
      add_entry(y, ts.first, c * it->second);
  }
  return y;
}

LinearMap LinearMap::identity(const GradedBasis &b)
{
  LinearMap m(b, b, 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    m.add((int)i, (int)i, 1);
  return m;
}

LinearMap LinearMap::zero(const GradedBasis &src, const GradedBasis &tgt, int deg)
{
  return LinearMap(src, tgt, deg);
}

bool operator==(const LinearMap &a, const LinearMap &b)
{
  return a.degree == b.degree && a.source == b.source && a.target == b.target &&
         a.entries == b.entries;
}

int koszul_sign(const std::vector<int> &perm, const std::vector<int> &degs)
{
  if (perm.size() != degs.size())
    throw std::invalid_argument("koszul_sign: permutation and degree list differ in length");
  const std::size_t n = perm.size();
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || (std::size_t)p >= n || seen[p])
      throw std::invalid_argument("koszul_sign: not a permutation");
    seen[p] = 1;
  }
  long odd = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (perm[i] > perm[j] && (degs[i] % 2 != 0) && (degs[j] % 2 != 0))
        ++odd;
  return sign_of_parity(odd);
}

LinearMap compose(const LinearMap &f, const LinearMap &g)
{
  if (!(g.target == f.source))
    throw std::invalid_argument("compose: basis mismatch");
  LinearMap h(g.source, f.target, f.degree + g.degree);
  std::map<int, std::vector<std::pair<int, Rational>>> by_src;
  for (const auto &[ts, c] : f.entries)
    by_src[ts.second].emplace_back(ts.first, c);
  for (const auto &[ts, c] : g.entries) {
    auto it = by_src.find(ts.first);
    if (it == by_src.end())
      continue;
    for (const auto &[t, c2] : it->second)
      h.add(t, ts.second, c2 * c);
  }
  return h;
}

RowEchelon row_reduce(QMatrix m, std::size_t cols)
{
  RowEchelon e;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0)
      ++p;
    if (p == m.size())
      continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t k = c; k < cols; ++k)
      m[r][k] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0)
        continue;
      Rational f = m[i][c];
      for (std::size_t k = c; k < cols; ++k)
        if (m[r][k] != 0)
          m[i][k] -= f * m[r][k];
    }
    e.pivot_cols.push_back((int)c);
    ++r;
  }
  e.rank = (int)r;
  m.resize(r);
  e.rref = std::move(m);
  return e;
}

std::vector<std::vector<Rational>> nullspace(const QMatrix &m, std::size_t cols)
{
  RowEchelon e = row_reduce(m, cols);
  std::vector<char> is_pivot(cols, 0);
  for (int c : e.pivot_cols)
    is_pivot[c] = 1;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f])
      continue;
    std::vector<Rational> v(cols, 0);
    v[f] = 1;
    for (int i = 0; i < e.rank; ++i)
      v[e.pivot_cols[i]] = -e.rref[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve(const QMatrix &m, const std::vector<Rational> &b,
                                           std::size_t cols)
{
  QMatrix aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    aug[i].resize(cols + 1);
    aug[i][cols] = b[i];
  }
  RowEchelon e = row_reduce(aug, cols + 1);
  std::vector<Rational> x(cols, 0);
  for (int i = 0; i < e.rank; ++i) {
    if ((std::size_t)e.pivot_cols[i] == cols)
      return std::nullopt;
    x[e.pivot_cols[i]] = e.rref[i][cols];
  }
  return x;
}

std::vector<DegreeRank> rank_and_kernel(const LinearMap &f, int dmin, int dmax)
{
  std::vector<DegreeRank> out;
  for (int d = dmin; d <= dmax; ++d) {
    std::vector<int> src, tgt;
    for (std::size_t i = 0; i < f.source.size(); ++i)
      if (f.source.degree(i) == d)
        src.push_back((int)i);
    for (std::size_t i = 0; i < f.target.size(); ++i)
      if (f.target.degree(i) == d + f.degree)
        tgt.push_back((int)i);
    std::map<int, int> tpos, spos;
    for (std::size_t i = 0; i < tgt.size(); ++i)
      tpos[tgt[i]] = (int)i;
    for (std::size_t i = 0; i < src.size(); ++i)
      spos[src[i]] = (int)i;
    QMatrix m(tgt.size(), std::vector<Rational>(src.size(), 0));
    for (const auto &[ts, c] : f.entries) {
      auto a = tpos.find(ts.first);
      auto b = spos.find(ts.second);
      if (a != tpos.end() && b != spos.end())
        m[a->second][b->second] = c;
    }
    DegreeRank dr;
    dr.degree = d;
    dr.source_dim = (int)src.size();
    auto ker = nullspace(m, src.size());
    dr.rank = dr.source_dim - (int)ker.size();
    for (auto &v : ker) {
      SparseVec sv;
      for (std::size_t i = 0; i < v.size(); ++i)
        add_entry(sv, src[i], v[i]);
      dr.kernel.push_back(std::move(sv));
    }
    out.push_back(std::move(dr));
  }
  return out;
}

Rational SparseMatrix::at(int r, int c) const
{
  auto it = col[c].find(r);
  return it == col[c].end() ? Rational(0) : it->second;
}

SparseVec SparseMatrix::apply(const SparseVec &x) const
{
  SparseVec y;
  for (const auto &[j, c] : x)
    axpy(y, c, col[j]);
  return y;
}

bool SparseMatrix::is_zero() const
{
  for (const auto &c : col)
    if (!c.empty())
      return false;
  return true;
}

std::size_t SparseMatrix::nonzeros() const
{
  std::size_t n = 0;
  for (const auto &c : col)
    n += c.size();
  return n;
}

SparseMatrix &SparseMatrix::operator+=(const SparseMatrix &o)
{
  if (rows != o.rows || cols != o.cols)
    throw std::invalid_argument("SparseMatrix: shape mismatch");
  for (int j = 0; j < cols; ++j)
    axpy(col[j], 1, o.col[j]);
  return *this;
}

SparseMatrix operator*(const SparseMatrix &a, const SparseMatrix &b)
{
  if (a.cols != b.rows)
    throw std::invalid_argument("SparseMatrix: shape mismatch in product");
  SparseMatrix c(a.rows, b.cols);
  parallel_for(b.cols, [&](std::size_t j) {
    for (const auto &[k, v] : b.col[j])
      axpy(c.col[j], v, a.col[k]);
  });
  return c;
}

SparseMatrix operator+(const SparseMatrix &a, const SparseMatrix &b)
{
  SparseMatrix c = a;
  c += b;
  return c;
}

SparseMatrix operator-(const SparseMatrix &a, const SparseMatrix &b)
{
  SparseMatrix c = a;
  c += scaled(b, -1);
  return c;
}

SparseMatrix scaled(const SparseMatrix &a, const Rational &s)
{
  SparseMatrix c(a.rows, a.cols);
  for (int j = 0; j < a.cols; ++j)
    c.col[j] = scaled(a.col[j], s);
  return c;
}

bool operator==(const SparseMatrix &a, const SparseMatrix &b)
{
  return a.rows == b.rows && a.cols == b.cols && a.col == b.col;
}

unsigned thread_budget()
{
  static const unsigned n = [] {
    const char *env = std::getenv("MDCA_THREADS");
    if (!env)
      return 1u;
    long v = std::strtol(env, nullptr, 10);
    return v > 0 ? (unsigned)v : 1u;
  }();
  return n;
}

} // namespace mdca
