#include "mdca/instance_io.hpp"

namespace mdca {

namespace {

void window(Instance &inst, int lo, int hi)
{
  inst.policy.W = 4;
  inst.policy.dmin = lo;
  inst.policy.dmax = hi;
  inst.policy.windowed = true;
}

Json truncated_poly()
{
  // Q[x]/(x^3) with x in degree 0; Der is not free over it
  Json doc;
  doc["name"] = "truncated_poly";
  doc["note"] = "Q[x]/(x^3): Der(A) is spanned by x d/dx and x^2 d/dx, not a free A-module. "
                "Loading this instance is expected to fail with an input error.";
  doc["algebra"] = {{"generators",
                     {{{"label", "1"}, {"degree", 0}},
                      {{"label", "x"}, {"degree", 0}},
                      {{"label", "x2"}, {"degree", 0}}}},
                    {"unit", 0},
                    {"mult",
                     {{0, 0, 0, "1"}, {0, 1, 1, "1"}, {0, 2, 2, "1"}, {1, 0, 1, "1"}, {1, 1, 2, "1"},
                      {2, 0, 2, "1"}}},
                    {"diff", Json::array()}};
  doc["module"] = {{"kind", "derivations"}};
  doc["structure"] = {{"kind", "lie_rinehart"}};
  doc["policy"] = {{"W", 4}};
  return doc;
}

} // namespace

std::vector<std::string> catalog_names()
{
  return {"abelian",       "heisenberg",     "sl2",         "jacobi_violator",
          "exterior_pair", "truncated_poly", "quasi_sample"};
}

QuasiCatalogEntry quasi_catalog_entry()
{
  QuasiSearch s = solve_quasi_sample(4);
  if (!s.found)
    throw std::logic_error("quasi search found no instance");
  Instance inst;
  inst.name = "quasi_sample";
  inst.note = "A = Lambda[t] with |t| = 1, Q of rank 2 in degree 0. Differential, bracket and "
              "pairing found by exhaustive search over {-1,0,1}; the triple coefficient is the "
              "unique solution of the level-2 equation D0 D2 + D1 D1 + D2 D0 = 0.";
  inst.A = s.found->L->over;
  inst.L = s.found->L;
  inst.kind = StructureKind::quasi;
  inst.quasi = *s.found;
  window(inst, 0, 4);
  Json cert;
  cert["instance"] = "quasi_sample";
  cert["search_space"] = "d(x_k) = t sum_l m_lk x_l, [x1,x2] = b1 x1 + b2 x2, x_k(t) = lambda_k t "
                         "with m, b, lambda in {-1,0,1}; triple <x1,x2;t> = c solved";
  cert["candidates_examined"] = s.candidates;
  cert["W"] = 4;
  cert["residuals"] = Json::array();
  for (const auto &r : s.certificate)
    cert["residuals"].push_back({r.identity, r.level, r.word});
  return {emit_instance(inst), cert};
}

Json catalog_json(const std::string &name)
{
  Instance inst;
  if (name == "abelian") {
    inst = lie_algebra_instance(name, {"x1", "x2", "x3"}, {});
    inst.note = "abelian Lie algebra of rank 3 over Q";
    window(inst, 0, 3);
  } else if (name == "heisenberg") {
    inst = lie_algebra_instance(name, {"x", "y", "z"}, {{0, 1, 2, Rational(1)}});
    inst.note = "Heisenberg algebra [x,y] = z over Q";
    window(inst, 0, 3);
  } else if (name == "sl2") {
    inst = lie_algebra_instance(name, {"e", "f", "h"},
                                {{0, 1, 2, Rational(1)}, {2, 0, 0, Rational(2)}, {2, 1, 1, Rational(-2)}});
    inst.note = "sl2 over Q: [e,f] = h, [h,e] = 2e, [h,f] = -2f";
    window(inst, 0, 3);
  } else if (name == "jacobi_violator") {
    inst = lie_algebra_instance(name, {"x", "y", "z"},
                                {{0, 1, 0, Rational(1)}, {1, 2, 1, Rational(1)}, {2, 0, 2, Rational(1)}});
    inst.note = "[x,y] = x, [y,z] = y, [z,x] = z violates Jacobi: the cyclic sum is -(x+y+z)";
    window(inst, 0, 3);
  } else if (name == "exterior_pair") {
    inst = derivation_instance(name, exterior_algebra({"t1", "t2"}));
    inst.note = "A = Lambda[t1,t2] with |t_i| = 1, L = Der(A) free on d/dt1, d/dt2, "
                "commutator bracket, identity anchor";
    window(inst, 0, 4);
  } else if (name == "truncated_poly") {
    return truncated_poly();
  } else if (name == "quasi_sample") {
    return quasi_catalog_entry().instance;
  } else {
    throw InputError("catalog: no instance named \"" + name + "\"");
  }
  return emit_instance(inst);
}

Instance catalog_instance(const std::string &name)
{
  Instance inst = parse_instance(catalog_json(name));
  return inst;
}

} // namespace mdca
