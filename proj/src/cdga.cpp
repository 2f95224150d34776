#include "mdca/cdga.hpp"

#include <algorithm>
#include <set>

namespace mdca {

AlgebraSpec AlgebraSpec::make(GradedBasis basis, int unit,
                              const std::vector<std::tuple<int, int, int, Rational>> &mult,
                              const std::vector<std::tuple<int, int, Rational>> &diff)
{
  AlgebraSpec A;
  const int n = (int)basis.size();
  if (n == 0)
    throw InputError("algebra: unit required (empty basis)");
  if (unit < 0 || unit >= n)
    throw InputError("algebra: unit index out of range");
  A.basis = std::move(basis);
  A.unit = unit;
  A.mult.assign(n, std::vector<SparseVec>(n));
  for (const auto &[i, j, k, c] : mult) {
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
      throw InputError("algebra.mult: index out of range");
    add_entry(A.mult[i][j], k, c);
  }
  A.diff = LinearMap(A.basis, A.basis, -1);
  for (const auto &[k, i, c] : diff) {
    if (i < 0 || k < 0 || i >= n || k >= n)
      throw InputError("algebra.diff: index out of range");
    try {
      A.diff.add(k, i, c);
    } catch (const std::invalid_argument &e) {
      throw InputError(std::string("algebra.diff: ") + e.what());
    }
  }
  return A;
}

SparseVec basis_product(const AlgebraSpec &A, int i, int j) { return A.mult[i][j]; }

SparseVec multiply(const AlgebraSpec &A, const SparseVec &a, const SparseVec &b)
{
  SparseVec r;
  for (const auto &[i, ca] : a)
    for (const auto &[j, cb] : b)
      axpy(r, ca * cb, A.mult[i][j]);
  return r;
}

namespace {

std::string tuple_label(const AlgebraSpec &A, std::initializer_list<int> idx)
{
  std::string s = "(";
  bool first = true;
  for (int i : idx) {
    if (!first)
      s += ", ";
    s += A.basis.label(i);
    first = false;
  }
  return s + ")";
}

} // namespace

std::vector<Violation> validate_algebra(const AlgebraSpec &A)
{
  std::vector<Violation> out;
  const int n = (int)A.dim();
  if (n == 0) {
    out.push_back({"unit", "unit required"});
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto &[k, c] : A.mult[i][j])
        if (A.degree(k) != A.degree(i) + A.degree(j))
          out.push_back({"degree additivity", tuple_label(A, {i, j})});
  for (int i = 0; i < n; ++i) {
    if (A.mult[A.unit][i] != unit_vector(i) || A.mult[i][A.unit] != unit_vector(i))
      out.push_back({"unit", tuple_label(A, {i})});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SparseVec ba = scaled(A.mult[j][i], sign_of_parity((long)A.degree(i) * A.degree(j)));
      if (A.mult[i][j] != ba)
        out.push_back({"graded commutativity", tuple_label(A, {i, j})});
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        SparseVec l = multiply(A, A.mult[i][j], unit_vector(k));
        SparseVec r = multiply(A, unit_vector(i), A.mult[j][k]);
        if (l != r)
          out.push_back({"associativity", tuple_label(A, {i, j, k})});
      }
  LinearMap dd = compose(A.diff, A.diff);
  for (const auto &[ts, c] : dd.entries) {
    out.push_back({"d0 squared", tuple_label(A, {ts.second})});
    break;
  }
  Derivation d = algebra_differential(A);
  if (auto v = leibniz_violation(A, d))
    out.push_back({"d0 Leibniz", v->witness});
  return out;
}

SparseVec Derivation::apply(const SparseVec &a) const
{
  SparseVec r;
  for (const auto &[i, c] : a)
    axpy(r, c, col[i]);
  return r;
}

bool Derivation::is_zero() const
{
  return std::all_of(col.begin(), col.end(), [](const SparseVec &v) { return v.empty(); });
}

LinearMap Derivation::action(const AlgebraSpec &A) const
{
  LinearMap m(A.basis, A.basis, degree);
  for (std::size_t i = 0; i < col.size(); ++i)
    for (const auto &[k, c] : col[i])
      m.add(k, (int)i, c);
  return m;
}

Derivation &Derivation::operator+=(const Derivation &o)
{
  if (col.size() != o.col.size())
    throw std::invalid_argument("derivation: algebra mismatch");
  if (o.is_zero())
    return *this;
  if (is_zero())
    degree = o.degree;
  else if (degree != o.degree)
    throw std::invalid_argument("derivation: degree mismatch in sum");
  for (std::size_t i = 0; i < col.size(); ++i)
    axpy(col[i], 1, o.col[i]);
  return *this;
}

bool operator==(const Derivation &a, const Derivation &b)
{
  if (a.is_zero() && b.is_zero())
    return a.col.size() == b.col.size();
  return a.degree == b.degree && a.col == b.col;
}

Derivation operator+(const Derivation &a, const Derivation &b)
{
  Derivation r = a;
  r += b;
  return r;
}

Derivation scaled(const Derivation &d, const Rational &s)
{
  Derivation r(d.degree, d.col.size());
  for (std::size_t i = 0; i < d.col.size(); ++i)
    r.col[i] = scaled(d.col[i], s);
  return r;
}

Derivation compose(const Derivation &a, const Derivation &b)
{
  Derivation r(a.degree + b.degree, a.col.size());
  for (std::size_t i = 0; i < b.col.size(); ++i)
    r.col[i] = a.apply(b.col[i]);
  return r;
}

Derivation left_multiply(const AlgebraSpec &A, const SparseVec &a, int a_degree,
                         const Derivation &d)
{
  Derivation r(a_degree + d.degree, d.col.size());
  for (std::size_t i = 0; i < d.col.size(); ++i)
    r.col[i] = multiply(A, a, d.col[i]);
  return r;
}

std::optional<Violation> leibniz_violation(const AlgebraSpec &A, const Derivation &d)
{
  const int n = (int)A.dim();
  for (int i = 0; i < n; ++i)
    for (const auto &[k, c] : d.col[i])
      if (A.degree(k) != A.degree(i) + d.degree)
        return Violation{"derivation degree", tuple_label(A, {i})};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SparseVec lhs = d.apply(A.mult[i][j]);
      SparseVec rhs = multiply(A, d.col[i], unit_vector(j));
      axpy(rhs, sign_of_parity((long)d.degree * A.degree(i)), multiply(A, unit_vector(i), d.col[j]));
      if (lhs != rhs)
        return Violation{"Leibniz", tuple_label(A, {i, j})};
    }
  return std::nullopt;
}

Derivation derivation_from_map(const AlgebraSpec &A, const LinearMap &m)
{
  Derivation d(m.degree, A.dim());
  for (const auto &[ts, c] : m.entries)
    add_entry(d.col[ts.second], ts.first, c);
  return d;
}

Derivation algebra_differential(const AlgebraSpec &A) { return derivation_from_map(A, A.diff); }

std::vector<Derivation> derivation_space(const AlgebraSpec &A, int deg)
{
  const int n = (int)A.dim();
  // unknown (i, k): coefficient of a_k in delta(a_i)
  std::vector<std::pair<int, int>> unknowns;
  std::map<std::pair<int, int>, int> pos;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (A.degree(k) == A.degree(i) + deg) {
        pos[{i, k}] = (int)unknowns.size();
        unknowns.emplace_back(i, k);
      }
  const std::size_t m = unknowns.size();
  if (m == 0)
    return {};
  QMatrix rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // delta(a_i a_j) - delta(a_i) a_j - (-1)^{deg|a_i|} a_i delta(a_j), one row per output basis
      std::map<int, std::vector<Rational>> eq;
      auto row = [&](int out) -> std::vector<Rational> & {
        auto it = eq.find(out);
        if (it == eq.end())
          it = eq.emplace(out, std::vector<Rational>(m, 0)).first;
        return it->second;
      };
      for (const auto &[p, c] : A.mult[i][j])
        for (int k = 0; k < n; ++k) {
          auto it = pos.find({p, k});
          if (it != pos.end())
            row(k)[it->second] += c;
        }
      for (int k = 0; k < n; ++k) {
        auto it = pos.find({i, k});
        if (it == pos.end())
          continue;
        for (const auto &[o, c] : A.mult[k][j])
          row(o)[it->second] -= c;
      }
      const int s = sign_of_parity((long)deg * A.degree(i));
      for (int k = 0; k < n; ++k) {
        auto it = pos.find({j, k});
        if (it == pos.end())
          continue;
        for (const auto &[o, c] : A.mult[i][k])
          row(o)[it->second] -= s * c;
      }
      for (auto &[o, r] : eq)
        if (std::any_of(r.begin(), r.end(), [](const Rational &q) { return q != 0; }))
          rows.push_back(std::move(r));
    }
  auto ker = nullspace(rows, m);
  std::vector<Derivation> out;
  for (const auto &v : ker) {
    Derivation d(deg, n);
    for (std::size_t u = 0; u < m; ++u)
      add_entry(d.col[unknowns[u].first], unknowns[u].second, v[u]);
    out.push_back(std::move(d));
  }
  return out;
}

Derivation graded_commutator(const Derivation &a, const Derivation &b)
{
  if (a.col.size() != b.col.size())
    throw std::invalid_argument("graded_commutator: algebra mismatch");
  Derivation ab = compose(a, b);
  Derivation ba = compose(b, a);
  Derivation r = ab;
  r.degree = a.degree + b.degree;
  for (std::size_t i = 0; i < r.col.size(); ++i)
    axpy(r.col[i], -sign_of_parity((long)a.degree * b.degree), ba.col[i]);
  return r;
}

namespace {

std::vector<Rational> flatten(const Derivation &d, std::size_t n)
{
  std::vector<Rational> v(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &[k, c] : d.col[i])
      v[i * n + k] = c;
  return v;
}

int rank_of(const std::vector<std::vector<Rational>> &vecs, std::size_t cols)
{
  if (vecs.empty())
    return 0;
  return row_reduce(vecs, cols).rank;
}

} // namespace

DerModule derivation_module(const AlgebraSpec &A)
{
  DerModule M;
  const std::size_t n = A.dim();
  int lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, A.degree(i));
    hi = std::max(hi, A.degree(i));
  }
  for (int d = lo - hi; d <= hi - lo; ++d)
    for (auto &der : derivation_space(A, d))
      M.rational_basis.push_back(std::move(der));
  const std::size_t total = M.rational_basis.size();
  if (total % n != 0) {
    M.reason = "dim_Q Der(A) = " + std::to_string(total) + " is not a multiple of dim_Q A = " +
               std::to_string(n);
    return M;
  }
  // generators: complement of (non-unit basis) * Der, pivoting in basis order
  std::vector<std::vector<Rational>> span;
  for (std::size_t i = 0; i < n; ++i) {
    if ((int)i == A.unit)
      continue;
    for (const auto &der : M.rational_basis)
      span.push_back(flatten(left_multiply(A, unit_vector((int)i), A.degree((int)i), der), n));
  }
  int r0 = rank_of(span, n * n);
  for (const auto &der : M.rational_basis) {
    auto trial = span;
    trial.push_back(flatten(der, n));
    int r1 = rank_of(trial, n * n);
    if (r1 > r0) {
      span = std::move(trial);
      r0 = r1;
      M.basis.push_back(der);
    }
  }
  std::vector<std::vector<Rational>> image;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &g : M.basis)
      image.push_back(flatten(left_multiply(A, unit_vector((int)i), A.degree((int)i), g), n));
  const int r = rank_of(image, n * n);
  if ((std::size_t)r != M.basis.size() * n || (std::size_t)r != total) {
    M.reason = "the A-module map A^" + std::to_string(M.basis.size()) +
               " -> Der(A) has rank " + std::to_string(r) + " but dim_Q Der(A) = " +
               std::to_string(total) + " and dim_Q A^r = " + std::to_string(M.basis.size() * n);
    return M;
  }
  M.free = true;
  return M;
}

} // namespace mdca
