#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mdca {

using Rational = mpq_class;

// malformed or inconsistent input (exit code 2 at the CLI)
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational parse_rational(const std::string &s);
std::string format_rational(const Rational &q);

inline int sign_of_parity(long e) { return (e % 2 == 0) ? 1 : -1; }

struct Generator {
  std::string label;
  int degree = 0;
};

class GradedBasis {
public:
  GradedBasis() = default;
  explicit GradedBasis(std::vector<Generator> gens);

  std::size_t size() const { return gens_.size(); }
  const Generator &operator[](std::size_t i) const { return gens_[i]; }
  int degree(std::size_t i) const { return gens_[i].degree; }
  const std::string &label(std::size_t i) const { return gens_[i].label; }
  std::optional<int> find(const std::string &label) const;
  const std::vector<Generator> &generators() const { return gens_; }

  bool operator==(const GradedBasis &o) const;
  bool operator!=(const GradedBasis &o) const { return !(*this == o); }

private:
  std::vector<Generator> gens_;
  std::unordered_map<std::string, int> index_;
};

// sparse vectors: index -> nonzero coefficient
using SparseVec = std::map<int, Rational>;

void add_entry(SparseVec &v, int i, const Rational &c);
void axpy(SparseVec &y, const Rational &a, const SparseVec &x);
SparseVec scaled(const SparseVec &x, const Rational &a);
SparseVec unit_vector(int i);

struct LinearMap {
  GradedBasis source;
  GradedBasis target;
  int degree = 0;
  std::map<std::pair<int, int>, Rational> entries; // (target, source)

  LinearMap() = default;
  LinearMap(GradedBasis src, GradedBasis tgt, int deg);

  void add(int t, int s, const Rational &v);
  Rational at(int t, int s) const;
  SparseVec apply(const SparseVec &x) const;
  bool is_zero() const { return entries.empty(); }

  static LinearMap identity(const GradedBasis &b);
  static LinearMap zero(const GradedBasis &src, const GradedBasis &tgt, int deg);
};

bool operator==(const LinearMap &a, const LinearMap &b);

// perm[i] is the position item i moves to
int koszul_sign(const std::vector<int> &perm, const std::vector<int> &degs);

LinearMap compose(const LinearMap &f, const LinearMap &g);

struct DegreeRank {
  int degree = 0;
  int source_dim = 0;
  int rank = 0;
  std::vector<SparseVec> kernel; // over source indices
};

std::vector<DegreeRank> rank_and_kernel(const LinearMap &f, int dmin, int dmax);

// dense exact elimination
using QMatrix = std::vector<std::vector<Rational>>;

struct RowEchelon {
  int rank = 0;
  std::vector<int> pivot_cols;
  QMatrix rref;
};

RowEchelon row_reduce(QMatrix m, std::size_t cols);
std::vector<std::vector<Rational>> nullspace(const QMatrix &m, std::size_t cols);
// solves m x = b; nullopt when inconsistent; free variables set to zero
std::optional<std::vector<Rational>> solve(const QMatrix &m, const std::vector<Rational> &b,
                                           std::size_t cols);

struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<SparseVec> col;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), col(c) {}

  void add(int r, int c, const Rational &v) { add_entry(col[c], r, v); }
  Rational at(int r, int c) const;
  SparseVec apply(const SparseVec &x) const;
  bool is_zero() const;
  std::size_t nonzeros() const;
  SparseMatrix &operator+=(const SparseMatrix &o);
};

SparseMatrix operator*(const SparseMatrix &a, const SparseMatrix &b);
SparseMatrix operator+(const SparseMatrix &a, const SparseMatrix &b);
SparseMatrix operator-(const SparseMatrix &a, const SparseMatrix &b);
SparseMatrix scaled(const SparseMatrix &a, const Rational &s);
bool operator==(const SparseMatrix &a, const SparseMatrix &b);

// MDCA_THREADS caps this; 1 when unset
unsigned thread_budget();

template <class F> void parallel_for(std::size_t n, F &&body);

} // namespace mdca

#include "mdca/parallel.ipp"
