#include "mdca/catalog.hpp"

#include <functional>

namespace mdca {

std::string kind_name(StructureKind k)
{
  switch (k) {
  case StructureKind::lie_rinehart: return "lie_rinehart";
  case StructureKind::sh_lie_rinehart: return "sh_lie_rinehart";
  case StructureKind::quasi: return "quasi";
  case StructureKind::mdca: return "mdca";
  }
  return "?";
}

MdcaTable mdca_to_table(const Workspace &ws, const MdcaStructure &m)
{
  const SymAlgebra &S = *ws.sym;
  auto conv = [&](const std::map<int, std::vector<SparseVec>> &src,
                  const std::function<std::string(int)> &key) {
    std::map<int, MdcaTable::Row> out;
    for (const auto &[j, row] : src)
      for (int i = 0; i < (int)row.size(); ++i) {
        if (row[i].empty())
          continue;
        auto &dst = out[j][key(i)];
        for (const auto &[s, c] : row[i])
          dst[S.label(s)] = c;
      }
    return out;
  };
  MdcaTable t;
  t.on_A = conv(m.on_A, [&](int i) { return ws.algebra().basis.label(i); });
  t.on_forms = conv(m.on_forms, [&](int k) { return ws.L->a_basis.label(k); });
  return t;
}

MdcaStructure mdca_from_table(const Workspace &ws, const MdcaTable &t)
{
  const SymAlgebra &S = *ws.sym;
  std::map<std::string, int> index;
  for (int s = 0; s < S.size(); ++s)
    index[S.label(s)] = s;
  auto conv = [&](const std::map<int, MdcaTable::Row> &src, const GradedBasis &keys, int maxj,
                  const char *what) {
    std::map<int, std::vector<SparseVec>> out;
    for (const auto &[j, row] : src) {
      if (j < 0 || j > maxj)
        throw InputError(std::string("structure.D.") + std::to_string(j) + "." + what +
                         ": level outside 0.." + std::to_string(maxj));
      auto &dst = out[j];
      dst.assign(keys.size(), {});
      for (const auto &[key, vals] : row) {
        auto i = keys.find(key);
        if (!i)
          throw InputError(std::string("structure.D.") + std::to_string(j) + "." + what +
                           ": unknown label '" + key + "'");
        for (const auto &[label, c] : vals) {
          auto s = index.find(label);
          if (s == index.end())
            throw InputError(std::string("structure.D.") + std::to_string(j) + "." + what +
                             ": '" + label + "' is not a basis form of Sym_A up to W = " +
                             std::to_string(ws.W()));
          add_entry(dst[*i], s->second, c);
        }
      }
    }
    return out;
  };
  MdcaStructure m;
  m.L = ws.L;
  m.on_A = conv(t.on_A, ws.algebra().basis, ws.W(), "on_A");
  m.on_forms = conv(t.on_forms, ws.L->a_basis, ws.W() - 1, "on_forms");
  return m;
}

ShLieRinehartData instance_sh(const Workspace &ws, const Instance &inst)
{
  switch (inst.kind) {
  case StructureKind::lie_rinehart:
    return lie_rinehart_to_sh(ws, inst.lr);
  case StructureKind::sh_lie_rinehart:
    return inst.sh_pure ? extend_from_pure(ws, inst.sh) : inst.sh;
  case StructureKind::quasi:
    return quasi_to_sh(ws, inst.quasi);
  case StructureKind::mdca:
    return extract_structure(ws, mdca_from_table(ws, inst.mdca));
  }
  throw std::logic_error("unknown structure kind");
}

AlgebraPtr rational_numbers()
{
  return std::make_shared<AlgebraSpec>(
      AlgebraSpec::make(GradedBasis({{"1", 0}}), 0, {{0, 0, 0, Rational(1)}}, {}));
}

AlgebraPtr exterior_algebra(const std::vector<std::string> &names)
{
  // basis: subsets in binary order, generators of upper degree 1
  const int n = (int)names.size();
  const int N = 1 << n;
  std::vector<Generator> gens;
  for (int m = 0; m < N; ++m) {
    std::string label;
    for (int b = 0; b < n; ++b)
      if (m >> b & 1)
        label += names[b];
    gens.push_back({m == 0 ? "1" : label, -__builtin_popcount(m)});
  }
  std::vector<std::tuple<int, int, int, Rational>> mult;
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      if (x & y)
        continue;
      // sign of merging: each bit of x passes the lower bits of y
      int swaps = 0;
      for (int b = 0; b < n; ++b)
        if (x >> b & 1)
          swaps += __builtin_popcount(y & ((1 << b) - 1));
      mult.emplace_back(x, y, x | y, Rational(sign_of_parity(swaps)));
    }
  return std::make_shared<AlgebraSpec>(AlgebraSpec::make(GradedBasis(gens), 0, mult, {}));
}

Instance lie_algebra_instance(const std::string &name, const std::vector<std::string> &gens,
                              const std::vector<std::tuple<int, int, int, Rational>> &brackets)
{
  Instance inst;
  inst.name = name;
  inst.A = rational_numbers();
  std::vector<Generator> g;
  for (const auto &s : gens)
    g.push_back({s, 0});
  inst.L = std::make_shared<ModuleSpec>(ModuleSpec::make(inst.A, GradedBasis(g), {}));
  inst.kind = StructureKind::lie_rinehart;
  inst.lr.L = inst.L;
  for (const auto &[i, j, k, c] : brackets)
    add_entry(inst.lr.bracket[{i, j}], k, c);
  complete_skew(inst.lr);
  inst.lr.anchor.assign(gens.size(), Derivation(0, 1));
  return inst;
}

Instance derivation_instance(const std::string &name, AlgebraPtr A)
{
  DerModule M = derivation_module(*A);
  if (!M.free)
    throw InputError("module: Der(A) is not a free A-module (" + M.reason +
                     "); structures need a free module of finite rank");
  const int n = (int)A->dim(), r = (int)M.basis.size();
  std::vector<Generator> g;
  for (int k = 0; k < r; ++k)
    g.push_back({"d" + std::to_string(k + 1), M.basis[k].degree});
  Instance inst;
  inst.name = name;
  inst.A = A;
  inst.L = std::make_shared<ModuleSpec>(ModuleSpec::make(A, GradedBasis(g), {}));
  inst.kind = StructureKind::lie_rinehart;
  const ModuleSpec &L = *inst.L;
  const int N = (int)L.qbasis.size();
  std::vector<Derivation> as_der(N);
  QMatrix cols(n * n, std::vector<Rational>(N, 0));
  for (int q = 0; q < N; ++q) {
    as_der[q] = left_multiply(*A, unit_vector(L.a_part(q)), A->degree(L.a_part(q)),
                              M.basis[L.x_part(q)]);
    for (int i = 0; i < n; ++i)
      for (const auto &[k, c] : as_der[q].col[i])
        cols[i * n + k][q] = c;
  }
  auto coords = [&](const Derivation &D) {
    std::vector<Rational> b(n * n, 0);
    for (int i = 0; i < n; ++i)
      for (const auto &[k, c] : D.col[i])
        b[i * n + k] = c;
    auto x = solve(cols, b, N);
    if (!x)
      throw std::logic_error("derivation outside the span of the module basis");
    SparseVec v;
    for (int q = 0; q < N; ++q)
      add_entry(v, q, (*x)[q]);
    return v;
  };
  inst.lr.L = inst.L;
  inst.lr.anchor = as_der;
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      SparseVec v = coords(graded_commutator(as_der[p], as_der[q]));
      if (!v.empty())
        inst.lr.bracket[{p, q}] = v;
    }
  return inst;
}

} // namespace mdca
