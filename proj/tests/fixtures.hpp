#pragma once

#include "mdca/instance_io.hpp"

#include <random>

namespace fixtures {

using namespace mdca;

inline Instance sl2() { return catalog_instance("sl2"); }

// A = Q[u,v]/(u,v)^2 with sl2 acting by e = u d/dv, f = v d/du, h = u d/du - v d/dv;
// L = A ⊗ sl2 with the transformation bracket
inline Instance sl2_action()
{
  auto A = std::make_shared<AlgebraSpec>(AlgebraSpec::make(
      GradedBasis({{"1", 0}, {"u", 0}, {"v", 0}}), 0,
      {{0, 0, 0, Rational(1)}, {0, 1, 1, Rational(1)}, {0, 2, 2, Rational(1)}, {1, 0, 1, Rational(1)},
       {2, 0, 2, Rational(1)}},
      {}));
  Instance inst;
  inst.name = "sl2_action";
  inst.A = A;
  inst.L = std::make_shared<ModuleSpec>(
      ModuleSpec::make(A, GradedBasis({{"e", 0}, {"f", 0}, {"h", 0}}), {}));
  const ModuleSpec &L = *inst.L;
  std::vector<Derivation> act(3, Derivation(0, 3));
  add_entry(act[0].col[2], 1, 1);  // e(v) = u
  add_entry(act[1].col[1], 2, 1);  // f(u) = v
  add_entry(act[2].col[1], 1, 1);  // h(u) = u
  add_entry(act[2].col[2], 2, -1); // h(v) = -v
  std::map<std::pair<int, int>, SparseVec> g;
  add_entry(g[{0, 1}], 2, 1);
  add_entry(g[{1, 0}], 2, -1);
  add_entry(g[{2, 0}], 0, 2);
  add_entry(g[{0, 2}], 0, -2);
  add_entry(g[{2, 1}], 1, -2);
  add_entry(g[{1, 2}], 1, 2);
  inst.kind = StructureKind::lie_rinehart;
  inst.lr.L = inst.L;
  const int N = (int)L.qbasis.size();
  for (int q = 0; q < N; ++q)
    inst.lr.anchor.push_back(left_multiply(*A, unit_vector(L.a_part(q)), 0, act[L.x_part(q)]));
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      const int a = L.a_part(p), k = L.x_part(p), b = L.a_part(q), l = L.x_part(q);
      SparseVec v;
      for (const auto &[m, c] : multiply(*A, unit_vector(a), act[k].apply(unit_vector(b))))
        add_entry(v, L.qindex(m, l), c);
      for (const auto &[m, c] : multiply(*A, unit_vector(b), act[l].apply(unit_vector(a))))
        add_entry(v, L.qindex(m, k), -c);
      auto it = g.find({k, l});
      if (it != g.end())
        for (const auto &[z, c] : it->second)
          for (const auto &[m, c2] : basis_product(*A, a, b))
            add_entry(v, L.qindex(m, z), c * c2);
      if (!v.empty())
        inst.lr.bracket[{p, q}] = v;
    }
  return inst;
}

inline std::vector<Instance> valid_instances()
{
  std::vector<Instance> v;
  for (const char *n : {"abelian", "heisenberg", "sl2", "exterior_pair", "quasi_sample"})
    v.push_back(catalog_instance(n));
  v.push_back(sl2_action());
  return v;
}

inline Rational random_rational(std::mt19937_64 &rng, int range = 5)
{
  const long num = (long)(rng() % (2 * range + 1)) - range;
  const long den = 1 + (long)(rng() % 3);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

} // namespace fixtures
