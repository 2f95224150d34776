#pragma once

#include "mdca/graded_core.hpp"

#include <memory>
#include <tuple>

namespace mdca {

struct Violation {
  std::string invariant;
  std::string witness;
};

struct AlgebraSpec {
  GradedBasis basis;
  int unit = 0;
  std::vector<std::vector<SparseVec>> mult; // mult[i][j] = a_i a_j
  LinearMap diff;                           // degree -1

  std::size_t dim() const { return basis.size(); }
  int degree(int i) const { return basis.degree(i); }

  static AlgebraSpec make(GradedBasis basis, int unit,
                          const std::vector<std::tuple<int, int, int, Rational>> &mult,
                          const std::vector<std::tuple<int, int, Rational>> &diff);
};

using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

std::vector<Violation> validate_algebra(const AlgebraSpec &A);

SparseVec multiply(const AlgebraSpec &A, const SparseVec &a, const SparseVec &b);
SparseVec basis_product(const AlgebraSpec &A, int i, int j);

struct Derivation {
  int degree = 0;
  std::vector<SparseVec> col; // col[i] = value on a_i

  Derivation() = default;
  Derivation(int deg, std::size_t dim) : degree(deg), col(dim) {}

  SparseVec apply(const SparseVec &a) const;
  const SparseVec &on(int i) const { return col[i]; }
  bool is_zero() const;
  LinearMap action(const AlgebraSpec &A) const;
  Derivation &operator+=(const Derivation &o);
};

bool operator==(const Derivation &a, const Derivation &b);
Derivation operator+(const Derivation &a, const Derivation &b);
Derivation scaled(const Derivation &d, const Rational &s);
Derivation compose(const Derivation &a, const Derivation &b); // a∘b, not a derivation in general
Derivation left_multiply(const AlgebraSpec &A, const SparseVec &a, int a_degree,
                         const Derivation &d); // (a·d)(u) = a d(u)

std::optional<Violation> leibniz_violation(const AlgebraSpec &A, const Derivation &d);
Derivation derivation_from_map(const AlgebraSpec &A, const LinearMap &m);
Derivation algebra_differential(const AlgebraSpec &A);

std::vector<Derivation> derivation_space(const AlgebraSpec &A, int deg);
Derivation graded_commutator(const Derivation &a, const Derivation &b);

// A-module structure of Der(A|R): basis if free of finite rank
struct DerModule {
  bool free = false;
  std::string reason;
  std::vector<Derivation> basis;
  std::vector<Derivation> rational_basis; // all of Der(A|R) over Q, by degree
};

DerModule derivation_module(const AlgebraSpec &A);

} // namespace mdca
