#include "mdca/catalog.hpp"

#include <gtest/gtest.h>

using namespace mdca;

namespace {

AlgebraPtr truncated_poly()
{
  return std::make_shared<AlgebraSpec>(AlgebraSpec::make(
      GradedBasis({{"1", 0}, {"x", 0}, {"x2", 0}}), 0,
      {{0, 0, 0, Rational(1)}, {0, 1, 1, Rational(1)}, {0, 2, 2, Rational(1)}, {1, 0, 1, Rational(1)},
       {1, 1, 2, Rational(1)}, {2, 0, 2, Rational(1)}},
      {}));
}

// span{1, v, u}, |u| = 1 upper, d v = u
AlgebraPtr acyclic_pair()
{
  return std::make_shared<AlgebraSpec>(AlgebraSpec::make(
      GradedBasis({{"1", 0}, {"v", 0}, {"u", -1}}), 0,
      {{0, 0, 0, Rational(1)}, {0, 1, 1, Rational(1)}, {1, 0, 1, Rational(1)}, {0, 2, 2, Rational(1)},
       {2, 0, 2, Rational(1)}},
      {{2, 1, Rational(1)}}));
}

Derivation der(std::size_t dim, int deg, std::initializer_list<std::tuple<int, int, Rational>> e)
{
  Derivation d(deg, dim);
  for (const auto &[src, t, c] : e)
    add_entry(d.col[src], t, c);
  return d;
}

} // namespace

TEST(ValidateAlgebra, Examples)
{
  EXPECT_TRUE(validate_algebra(*rational_numbers()).empty());
  EXPECT_TRUE(validate_algebra(*exterior_algebra({"q"})).empty());
  EXPECT_TRUE(validate_algebra(*exterior_algebra({"a", "b", "c"})).empty());
  EXPECT_TRUE(validate_algebra(*truncated_poly()).empty());
  EXPECT_TRUE(validate_algebra(*acyclic_pair()).empty());

  AlgebraSpec bad = *exterior_algebra({"p", "q"});
  bad.mult[2][1] = {{3, Rational(1)}}; // q p = +pq
  auto rep = validate_algebra(bad);
  ASSERT_FALSE(rep.empty());
  bool named = false;
  for (const auto &v : rep)
    named = named || (v.invariant.find("commutativ") != std::string::npos &&
                      v.witness.find("p") != std::string::npos && v.witness.find("q") != std::string::npos);
  EXPECT_TRUE(named);
}

TEST(ValidateAlgebra, UnitRequired)
{
  EXPECT_THROW(AlgebraSpec::make(GradedBasis(std::vector<Generator>{}), 0, {}, {}), InputError);
}

TEST(Multiply, Examples)
{
  AlgebraPtr L1 = exterior_algebra({"t"});
  EXPECT_EQ(multiply(*L1, unit_vector(0), unit_vector(1)), unit_vector(1));
  EXPECT_TRUE(multiply(*L1, unit_vector(1), unit_vector(1)).empty());
  AlgebraPtr L2 = exterior_algebra({"t1", "t2"});
  SparseVec a{{0, 1}, {1, 1}}, b{{0, 1}, {2, 1}};
  SparseVec expect{{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  EXPECT_EQ(multiply(*L2, a, b), expect);
}

TEST(DerivationSpace, Examples)
{
  AlgebraPtr Q = rational_numbers();
  for (int d = -2; d <= 2; ++d)
    EXPECT_TRUE(derivation_space(*Q, d).empty());

  AlgebraPtr L1 = exterior_algebra({"t"});
  auto odd = derivation_space(*L1, 1); // d/dt
  auto even = derivation_space(*L1, 0); // t d/dt
  ASSERT_EQ(odd.size(), 1u);
  ASSERT_EQ(even.size(), 1u);
  EXPECT_EQ(odd[0].col[1], unit_vector(0));
  EXPECT_EQ(even[0].col[1].size(), 1u);
  EXPECT_EQ(even[0].col[1].begin()->first, 1);
  DerModule M = derivation_module(*L1);
  EXPECT_TRUE(M.free);
  EXPECT_EQ(M.basis.size(), 1u);

  AlgebraPtr P = truncated_poly();
  auto d0 = derivation_space(*P, 0);
  ASSERT_EQ(d0.size(), 2u);
  for (const auto &d : d0) {
    EXPECT_FALSE(leibniz_violation(*P, d));
    EXPECT_EQ(d.col[1].count(0), 0u); // no constant term in δ(x)
  }
  EXPECT_FALSE(derivation_module(*P).free);
}

TEST(GradedCommutator, Examples)
{
  AlgebraPtr P = truncated_poly();
  Derivation xd = der(3, 0, {{1, 1, 1}, {2, 2, 2}});
  Derivation x2d = der(3, 0, {{1, 2, 1}});
  EXPECT_FALSE(leibniz_violation(*P, xd));
  EXPECT_FALSE(leibniz_violation(*P, x2d));
  EXPECT_TRUE(graded_commutator(xd, xd).is_zero());
  EXPECT_EQ(graded_commutator(xd, x2d), x2d);

  AlgebraPtr L1 = exterior_algebra({"t"});
  Derivation dt = der(2, 1, {{1, 0, 1}});
  Derivation tdt = der(2, 0, {{1, 1, 1}});
  EXPECT_EQ(graded_commutator(dt, tdt), dt);
}

TEST(DerivationSpace, GradedLieAlgebraOnCatalogAlgebras)
{
  for (AlgebraPtr A : {exterior_algebra({"t1", "t2"}), truncated_poly(), acyclic_pair()}) {
    std::vector<Derivation> all;
    for (int d = -3; d <= 3; ++d)
      for (auto &x : derivation_space(*A, d))
        all.push_back(x);
    for (const auto &x : all)
      EXPECT_FALSE(leibniz_violation(*A, x));
    for (const auto &x : all)
      for (const auto &y : all) {
        Derivation xy = graded_commutator(x, y);
        EXPECT_FALSE(leibniz_violation(*A, xy));
        EXPECT_EQ(xy + scaled(graded_commutator(y, x), sign_of_parity((long)x.degree * y.degree)),
                  Derivation(x.degree + y.degree, A->dim()));
        for (const auto &z : all) {
          Derivation lhs = graded_commutator(x, graded_commutator(y, z));
          Derivation rhs = graded_commutator(graded_commutator(x, y), z) +
                           scaled(graded_commutator(y, graded_commutator(x, z)),
                                  sign_of_parity((long)x.degree * y.degree));
          EXPECT_EQ(lhs, rhs);
        }
      }
  }
}

TEST(AlgebraDifferential, IsADerivation)
{
  AlgebraPtr A = acyclic_pair();
  Derivation d = algebra_differential(*A);
  EXPECT_EQ(d.degree, -1);
  EXPECT_FALSE(leibniz_violation(*A, d));
  EXPECT_FALSE(d.is_zero());
}
