#include "mdca/graded_core.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace mdca;

namespace {

int brute_koszul(const std::vector<int> &perm, const std::vector<int> &degs)
{
  int s = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j] && degs[i] % 2 && degs[j] % 2)
        s = -s;
  return s;
}

GradedBasis flat(int n, const std::string &p = "b")
{
  std::vector<Generator> g;
  for (int i = 0; i < n; ++i)
    g.push_back({p + std::to_string(i), 0});
  return GradedBasis(g);
}

} // namespace

TEST(Rational, ParsesCanonicalForms)
{
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("2/4"), InputError);
  EXPECT_THROW(parse_rational("0.5"), InputError);
  Rational r(-6, 4);
  r.canonicalize();
  EXPECT_EQ(format_rational(r), "-3/2");
}

TEST(Rational, ExactWith256BitNumerators)
{
  std::mt19937_64 rng(7);
  gmp_randclass r(gmp_randinit_default);
  r.seed(42);
  for (int i = 0; i < 200; ++i) {
    Rational a(r.get_z_bits(256) - r.get_z_bits(256), r.get_z_bits(64) + 1);
    Rational b(r.get_z_bits(256), r.get_z_bits(80) + 1);
    a.canonicalize();
    b.canonicalize();
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ((a * b) / b == a, b != 0);
  }
}

TEST(GradedBasis, RejectsDuplicateLabels)
{
  EXPECT_THROW(GradedBasis({{"x", 0}, {"x", 1}}), InputError);
}

TEST(KoszulSign, Examples)
{
  EXPECT_EQ(koszul_sign({1, 0}, {1, 1}), -1);
  EXPECT_EQ(koszul_sign({0, 1, 2}, {1, 3, 5}), 1);
  // 1 -> 2 -> 3 -> 1 on degrees (1,1,2)
  EXPECT_EQ(koszul_sign({1, 2, 0}, {1, 1, 2}), brute_koszul({1, 2, 0}, {1, 1, 2}));
  EXPECT_EQ(koszul_sign({1, 2, 0}, {1, 1, 2}), 1);
  EXPECT_EQ(koszul_sign({1, 2, 0}, {1, 1, 1}), 1);
  EXPECT_EQ(koszul_sign({2, 0, 1}, {1, 2, 1}), -1);
  EXPECT_THROW(koszul_sign({0, 1}, {1}), std::invalid_argument);
  EXPECT_THROW(koszul_sign({0, 0}, {1, 1}), std::invalid_argument);
}

TEST(KoszulSign, CompositionLaw)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + (int)(rng() % 7);
    std::vector<int> degs(n), sigma(n), tau(n);
    for (auto &d : degs)
      d = (int)(rng() % 5) - 2;
    std::iota(sigma.begin(), sigma.end(), 0);
    std::iota(tau.begin(), tau.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::shuffle(tau.begin(), tau.end(), rng);
    std::vector<int> moved(n), comp(n);
    for (int i = 0; i < n; ++i) {
      moved[tau[i]] = degs[i];
      comp[i] = sigma[tau[i]];
    }
    EXPECT_EQ(koszul_sign(comp, degs), koszul_sign(tau, degs) * koszul_sign(sigma, moved));
    EXPECT_EQ(koszul_sign(comp, degs), brute_koszul(comp, degs));
  }
}

TEST(LinearMap, RejectsDegreeViolations)
{
  GradedBasis b({{"a", 0}, {"b", 1}});
  LinearMap f(b, b, 1);
  EXPECT_NO_THROW(f.add(1, 0, 2));
  EXPECT_THROW(f.add(0, 0, 1), std::invalid_argument);
}

TEST(Compose, IdentityZeroAndRandomProducts)
{
  GradedBasis b = flat(3);
  std::mt19937_64 rng(3);
  auto random_map = [&] {
    LinearMap f(b, b, 0);
    for (int t = 0; t < 3; ++t)
      for (int s = 0; s < 3; ++s) {
        Rational c((long)(rng() % 11) - 5, 1 + (long)(rng() % 4));
        c.canonicalize();
        if (c != 0)
          f.add(t, s, c);
      }
    return f;
  };
  for (int trial = 0; trial < 20; ++trial) {
    LinearMap f = random_map(), g = random_map();
    EXPECT_EQ(compose(LinearMap::identity(b), f), f);
    EXPECT_TRUE(compose(f, LinearMap::zero(b, b, 0)).is_zero());
    LinearMap h = compose(f, g);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Rational naive = 0;
        for (int k = 0; k < 3; ++k)
          naive += f.at(i, k) * g.at(k, j);
        EXPECT_EQ(h.at(i, j), naive);
      }
  }
  GradedBasis other = flat(2, "c");
  EXPECT_THROW(compose(LinearMap::identity(b), LinearMap::identity(other)), std::invalid_argument);
}

TEST(RankAndKernel, Examples)
{
  GradedBasis b = flat(2);
  auto zero = rank_and_kernel(LinearMap::zero(b, b, 0), 0, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].rank, 0);
  EXPECT_EQ(zero[0].kernel.size(), 2u);
  auto id = rank_and_kernel(LinearMap::identity(b), 0, 0);
  EXPECT_EQ(id[0].rank, 2);
  EXPECT_TRUE(id[0].kernel.empty());
  LinearMap m(b, b, 0);
  m.add(0, 0, 1);
  m.add(0, 1, 2);
  m.add(1, 0, 2);
  m.add(1, 1, 4);
  auto r = rank_and_kernel(m, 0, 0);
  EXPECT_EQ(r[0].rank, 1);
  ASSERT_EQ(r[0].kernel.size(), 1u);
  EXPECT_TRUE(m.apply(r[0].kernel[0]).empty());
}

TEST(RankAndKernel, RankNullityPerDegree)
{
  std::mt19937_64 rng(5);
  std::vector<Generator> g;
  for (int i = 0; i < 12; ++i)
    g.push_back({"g" + std::to_string(i), i % 4});
  GradedBasis b(g);
  for (int trial = 0; trial < 20; ++trial) {
    LinearMap f(b, b, -1);
    for (int t = 0; t < 12; ++t)
      for (int s = 0; s < 12; ++s)
        if (b.degree(t) == b.degree(s) - 1 && rng() % 2)
          f.add(t, s, Rational((long)(rng() % 7) - 3));
    for (const auto &d : rank_and_kernel(f, 0, 3)) {
      EXPECT_EQ(d.rank + (int)d.kernel.size(), d.source_dim);
      for (const auto &v : d.kernel)
        EXPECT_TRUE(f.apply(v).empty());
    }
  }
}

TEST(SparseMatrix, ProductMatchesDense)
{
  std::mt19937_64 rng(9);
  SparseMatrix a(4, 3), b(3, 5);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j)
      if (rng() % 2)
        a.add(i, j, Rational((long)(rng() % 9) - 4));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j)
      if (rng() % 2)
        b.add(i, j, Rational((long)(rng() % 9) - 4));
  SparseMatrix c = a * b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) {
      Rational s = 0;
      for (int k = 0; k < 3; ++k)
        s += a.at(i, k) * b.at(k, j);
      EXPECT_EQ(c.at(i, j), s);
    }
}
