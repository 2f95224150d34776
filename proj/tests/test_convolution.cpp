#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace mdca;
using fixtures::random_rational;

namespace {

Form random_form(const FormSpace &fs, std::mt19937_64 &rng, int max_len)
{
  Form f;
  for (int v = 0; v < fs.size(); ++v)
    if (fs.length(v) <= max_len && rng() % 4 == 0)
      add_entry(f, v, random_rational(rng));
  return f;
}

// single-degree piece of a form
Form homogeneous(const FormSpace &fs, const Form &f, int deg)
{
  Form out;
  for (const auto &[v, c] : f)
    if (fs.degree(v) == deg)
      out.emplace(v, c);
  return out;
}

std::set<int> degrees(const FormSpace &fs, const Form &f)
{
  std::set<int> d;
  for (const auto &[v, c] : f)
    d.insert(fs.degree(v));
  return d;
}

struct Setup {
  fixtures::Instance inst;
  Workspace ws;
  ShLieRinehartData sh;
  std::vector<SparseMatrix> D;
};

Setup setup(fixtures::Instance inst, int W = 4)
{
  Workspace ws = Workspace::make(inst.L, W);
  auto sh = instance_sh(ws, inst);
  auto D = build_operators(*ws.forms, sh.del, sh.t);
  return {std::move(inst), std::move(ws), std::move(sh), std::move(D)};
}

} // namespace

TEST(Cup, UnitAndAssociativity)
{
  std::mt19937_64 rng(5);
  for (const auto &inst : {fixtures::catalog_instance("exterior_pair"), fixtures::sl2_action()}) {
    Workspace ws = Workspace::make(inst.L, 4);
    const FormSpace &fs = *ws.forms;
    const Form one = ws.sym->embed(unit_vector(ws.sym->constant(ws.algebra().unit)));
    for (int trial = 0; trial < 10; ++trial) {
      Form f = random_form(fs, rng, 4), g = random_form(fs, rng, 2), h = random_form(fs, rng, 2);
      EXPECT_EQ(cup(fs, one, f), f);
      EXPECT_EQ(cup(fs, f, one), f);
      EXPECT_EQ(cup(fs, cup(fs, f, g), h), cup(fs, f, cup(fs, g, h)));
    }
  }
}

TEST(Cup, GradedCommutative)
{
  std::mt19937_64 rng(6);
  auto inst = fixtures::catalog_instance("exterior_pair");
  Workspace ws = Workspace::make(inst.L, 4);
  const FormSpace &fs = *ws.forms;
  for (int trial = 0; trial < 20; ++trial) {
    Form f0 = random_form(fs, rng, 2), g0 = random_form(fs, rng, 2);
    for (int df : degrees(fs, f0))
      for (int dg : degrees(fs, g0)) {
        Form f = homogeneous(fs, f0, df), g = homogeneous(fs, g0, dg);
        EXPECT_EQ(cup(fs, f, g), scaled(cup(fs, g, f), sign_of_parity((long)df * dg)));
      }
  }
}

TEST(Cup, SymAMatchesAmbient)
{
  std::mt19937_64 rng(7);
  auto inst = fixtures::sl2_action();
  Workspace ws = Workspace::make(inst.L, 3);
  const SymAlgebra &S = *ws.sym;
  for (int trial = 0; trial < 20; ++trial) {
    SparseVec f, g;
    for (int s = 0; s < S.size(); ++s) {
      if (S.length(s) <= 1 && rng() % 3 == 0)
        add_entry(f, s, random_rational(rng));
      if (S.length(s) <= 2 && rng() % 3 == 0)
        add_entry(g, s, random_rational(rng));
    }
    Form prod = cup(S.ambient(), S.embed(f), S.embed(g));
    EXPECT_TRUE(is_A_multilinear(S, prod));
    EXPECT_EQ(S.embed(S.cup(f, g)), prod);
  }
}

TEST(HomDifferential, AcyclicPair)
{
  // span{1, v, u}, d v = u, |v| = 0, |u| = -1 homological
  auto A = std::make_shared<AlgebraSpec>(AlgebraSpec::make(
      GradedBasis({{"1", 0}, {"v", 0}, {"u", -1}}), 0,
      {{0, 0, 0, Rational(1)}, {0, 1, 1, Rational(1)}, {0, 2, 2, Rational(1)}, {1, 0, 1, Rational(1)},
       {2, 0, 2, Rational(1)}},
      {{2, 1, Rational(1)}}));
  auto L = std::make_shared<ModuleSpec>(ModuleSpec::make(A, GradedBasis({{"x", 0}}), {}));
  Workspace ws = Workspace::make(L, 2);
  const FormSpace &fs = *ws.forms;
  SparseMatrix D0 = hom_differential(fs);
  EXPECT_TRUE((D0 * D0).is_zero());
  // constant v has degree 0: D0 v = u
  const Form v = ws.sym->embed(unit_vector(ws.sym->constant(1)));
  const Form u = ws.sym->embed(unit_vector(ws.sym->constant(2)));
  EXPECT_EQ(D0.apply(v), u);
  EXPECT_TRUE(D0.apply(u).empty());
  EXPECT_TRUE(bigrade_check(fs, D0, 0).empty());
}

TEST(Operators, AnchorOnConstants)
{
  // (D_1 a)(s x) = ± (-1)^{|a||sx|} x(a) for every constant a and generator x
  for (const auto &inst : {fixtures::catalog_instance("exterior_pair"), fixtures::sl2_action()}) {
    auto s = setup(inst, 3);
    const SymAlgebra &S = *s.ws.sym;
    const FormSpace &fs = *s.ws.forms;
    const ModuleSpec &L = *inst.L;
    std::optional<int> sign;
    for (std::size_t m = 0; m < s.ws.algebra().dim(); ++m) {
      const Form a = S.embed(unit_vector(S.constant((int)m)));
      const Form img = s.D[1].apply(a);
      EXPECT_EQ(img, partial_t(fs, s.sh.t, 1).apply(a));
      for (int q = 0; q < (int)L.qbasis.size(); ++q) {
        const int w = fs.words().index_or_throw(SymWord{{q}});
        SparseVec expect = scaled(inst.lr.anchor[q].on((int)m),
                                  sign_of_parity((long)s.ws.algebra().degree((int)m) *
                                                 fs.words().degree(w)));
        SparseVec got = fs.value(img, w);
        if (expect.empty()) {
          EXPECT_TRUE(got.empty());
          continue;
        }
        const int sg = (got == expect) ? 1 : (got == scaled(expect, -1) ? -1 : 0);
        ASSERT_NE(sg, 0) << inst.name;
        if (!sign)
          sign = sg;
        EXPECT_EQ(*sign, sg);
      }
    }
    EXPECT_TRUE(sign.has_value());
  }
}

TEST(Operators, PartialBraSl2)
{
  auto s = setup(fixtures::sl2(), 3);
  const SymAlgebra &S = *s.ws.sym;
  const FormSpace &fs = *s.ws.forms;
  const Form phi_h = S.embed(unit_vector(S.dual_generator(2)));
  const Form img = partial_bra(fs, s.sh.del, 1).apply(phi_h);
  const auto &ctx = *s.ws.ctx;
  const int ef = fs.words().index_or_throw(normalize_labels(ctx, {"se", "sf"})->second);
  EXPECT_EQ(fs.value(img, ef), unit_vector(0));
  // only words whose bracket hits h
  for (const auto &[v, c] : img)
    EXPECT_EQ(fs.length(v), 2);
  EXPECT_TRUE(partial_t(fs, s.sh.t, 1).is_zero()); // anchors vanish over Q
}

TEST(Descent, MultilinearityWitness)
{
  auto inst = fixtures::catalog_instance("exterior_pair");
  Workspace ws = Workspace::make(inst.L, 3);
  const SymAlgebra &S = *ws.sym;
  const FormSpace &fs = *ws.forms;
  Form phi = S.embed(unit_vector(S.dual_generator(0)));
  EXPECT_TRUE(is_A_multilinear(S, phi));
  // drop the value on s(t1*d1)
  Form broken;
  std::string dropped;
  for (const auto &[v, c] : phi)
    if (dropped.empty() && !fs.words().is_pure(fs.word_of(v)))
      dropped = fs.label(v);
    else
      broken.emplace(v, c);
  ASSERT_FALSE(dropped.empty());
  auto w = multilinearity_defect(S, broken);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->slot, 0);
  EXPECT_FALSE(witness_slot(S, *w).empty());
  EXPECT_NE(w->actual, w->expected);
}

TEST(Descent, ExteriorPairPiecesFailSeparately)
{
  auto s = setup(fixtures::catalog_instance("exterior_pair"), 3);
  const SymAlgebra &S = *s.ws.sym;
  const FormSpace &fs = *s.ws.forms;
  EXPECT_TRUE(descent_check(S, s.D[1], 1, "D1").empty());
  auto bra = descent_check(S, partial_bra(fs, s.sh.del, 1), 1, "bra");
  auto tw = descent_check(S, partial_t(fs, s.sh.t, 1), 1, "t");
  EXPECT_FALSE(bra.empty());
  EXPECT_FALSE(tw.empty());
  EXPECT_EQ(bra[0].level, 1);
}

TEST(Operators, SquareAndBigrading)
{
  for (const auto &inst : fixtures::valid_instances()) {
    auto s = setup(inst, 4);
    const FormSpace &fs = *s.ws.forms;
    EXPECT_TRUE(square_check(fs, s.D, s.ws.W() - 1).empty()) << inst.name;
    for (int j = 0; j < (int)s.D.size(); ++j)
      EXPECT_TRUE(bigrade_check(fs, s.D[j], j).empty()) << inst.name << " j=" << j;
    std::vector<SparseMatrix> DS;
    for (const auto &M : s.D)
      DS.push_back(s.ws.sym->descend(M));
    EXPECT_TRUE(square_check_descended(*s.ws.sym, DS, s.ws.W() - 1, false).empty()) << inst.name;
  }
}

TEST(Operators, DerivationsOfCup)
{
  std::mt19937_64 rng(8);
  for (const auto &inst : {fixtures::catalog_instance("exterior_pair"), fixtures::sl2_action(),
                           fixtures::catalog_instance("quasi_sample")}) {
    auto s = setup(inst, 4);
    const FormSpace &fs = *s.ws.forms;
    for (int j = 0; j <= 2; ++j)
      for (int trial = 0; trial < 5; ++trial) {
        Form f0 = random_form(fs, rng, 1), g0 = random_form(fs, rng, 1);
        for (int df : degrees(fs, f0))
          for (int dg : degrees(fs, g0)) {
            Form f = homogeneous(fs, f0, df), g = homogeneous(fs, g0, dg);
            Form lhs = s.D[j].apply(cup(fs, f, g));
            Form rhs = cup(fs, s.D[j].apply(f), g);
            axpy(rhs, sign_of_parity(df), cup(fs, f, s.D[j].apply(g)));
            EXPECT_EQ(lhs, rhs) << inst.name << " j=" << j;
          }
      }
  }
}

TEST(Operators, SquareOnConstantsIsTheTwistingResidual)
{
  // scaling t_1 breaks the twisting equation at level 2; D^2 on constants reads it off
  auto inst = fixtures::sl2_action();
  Workspace ws = Workspace::make(inst.L, 3);
  auto sh = instance_sh(ws, inst);
  for (auto &[w, t] : sh.t.parts[1])
    t = scaled(t, 2);
  const FormSpace &fs = *ws.forms;
  auto D = build_operators(fs, sh.del, sh.t);
  SparseMatrix M = D[0] * D[2] + D[1] * D[1] + D[2] * D[0];
  auto res = twisting_residual(ws, sh.del, sh.t, 2);
  ASSERT_FALSE(res.empty());
  std::optional<int> sign;
  for (std::size_t m = 0; m < ws.algebra().dim(); ++m) {
    const Form a = ws.sym->embed(unit_vector(ws.sym->constant((int)m)));
    const Form img = M.apply(a);
    for (int w = 0; w < fs.words().size(); ++w) {
      if (fs.words().length(w) != 2)
        continue;
      auto it = res.find(fs.words().word(w));
      SparseVec expect = it == res.end() ? SparseVec{} : it->second.on((int)m);
      SparseVec got = fs.value(img, w);
      if (expect.empty()) {
        EXPECT_TRUE(got.empty());
        continue;
      }
      const int sg = got == expect ? 1 : (got == scaled(expect, -1) ? -1 : 0);
      ASSERT_NE(sg, 0) << fs.words().label(w);
      if (!sign)
        sign = sg;
      EXPECT_EQ(*sign, sg);
    }
  }
  EXPECT_TRUE(sign.has_value());
}

TEST(Cohomology, LieAlgebras)
{
  auto betti = [](const char *name, int qmin, int qmax) {
    auto s = setup(fixtures::catalog_instance(name), 4);
    SparseMatrix total(s.ws.sym->size(), s.ws.sym->size());
    for (const auto &M : s.D)
      total += s.ws.sym->descend(M);
    std::vector<int> out;
    for (const auto &e : cohomology_ranks(*s.ws.sym, total, qmin, qmax)) {
      EXPECT_FALSE(e.truncated) << name << " q=" << e.degree;
      out.push_back(e.betti);
    }
    return out;
  };
  EXPECT_EQ(betti("abelian", 0, 3), (std::vector<int>{1, 3, 3, 1}));
  EXPECT_EQ(betti("heisenberg", 0, 3), (std::vector<int>{1, 2, 2, 1}));
  EXPECT_EQ(betti("sl2", 0, 3), (std::vector<int>{1, 0, 0, 1}));
  // Poincaré lemma: Der of a free graded-commutative algebra resolves the constants
  EXPECT_EQ(betti("exterior_pair", 0, 7), (std::vector<int>{1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(Cohomology, TruncationFlags)
{
  auto s = setup(fixtures::catalog_instance("exterior_pair"), 4);
  SparseMatrix total(s.ws.sym->size(), s.ws.sym->size());
  for (const auto &M : s.D)
    total += s.ws.sym->descend(M);
  auto e = cohomology_ranks(*s.ws.sym, total, 0, 10);
  ASSERT_EQ(e.size(), 11u);
  EXPECT_EQ(e[0].betti, 1);
  EXPECT_FALSE(e[0].truncated);
  EXPECT_TRUE(e[10].truncated);
  EXPECT_TRUE(e[0].boundary);
  EXPECT_TRUE(e[10].boundary);
}
