// one line per acceptance criterion; exit status 1 if any fails
#include "perturb.hpp"

#include "mdca/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace mdca;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::vector<SparseMatrix> operators(const Workspace &ws, const fixtures::Instance &inst)
{
  auto sh = instance_sh(ws, inst);
  return build_operators(*ws.forms, sh.del, sh.t);
}

Outcome square_zero()
{
  const auto start = std::chrono::steady_clock::now();
  std::size_t residuals = 0, forms = 0;
  for (const char *name : {"abelian", "heisenberg", "sl2", "exterior_pair"}) {
    auto inst = catalog_instance(name);
    Workspace ws = Workspace::make(inst.L, 4);
    residuals += square_check(*ws.forms, operators(ws, inst), ws.W() - 1).size();
    forms += ws.forms->size();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << forms << " basis forms, " << residuals << " residuals, " << secs << " s";
  return {residuals == 0 && secs < 10, os.str()};
}

Outcome negative_control()
{
  auto inst = catalog_instance("jacobi_violator");
  Workspace ws = Workspace::make(inst.L, 4);
  auto rep = check_sh_lie_rinehart(ws, instance_sh(ws, inst));
  bool seen = false;
  for (const auto &r : rep.direct.residuals)
    if (r.level == 2 && r.word == "sx·sy·sz" &&
        (r.value == "(-1) sx + (-1) sy + (-1) sz" || r.value == "sx + sy + sz"))
      seen = true;
  const int code = cmd_check(inst, KindRequest::automatic, 4).exit_code();
  const std::string cmd = std::string(MDCA_BINARY) + " check catalog:jacobi_violator > /dev/null";
  const int st = std::system(cmd.c_str());
  const int cli = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ostringstream os;
  os << "first level " << (rep.direct.first_level ? *rep.direct.first_level : -1)
     << ", residual at sx·sy·sz " << (seen ? "= -(sx+sy+sz)" : "missing") << ", exit " << cli;
  return {seen && rep.direct.first_level == 2 && rep.indirect.first_level == 2 && code == 1 &&
              cli == 1,
          os.str()};
}

Outcome descent_witness()
{
  auto inst = catalog_instance("exterior_pair");
  Workspace ws = Workspace::make(inst.L, 4);
  auto sh = instance_sh(ws, inst);
  auto D = build_operators(*ws.forms, sh.del, sh.t);
  auto whole = descent_check(*ws.sym, D[1], 1, "D1");
  auto t = descent_check(*ws.sym, partial_t(*ws.forms, sh.t, 1), 1, "t");
  auto b = descent_check(*ws.sym, partial_bra(*ws.forms, sh.del, 1), 1, "bracket");
  std::ostringstream os;
  os << "D1 on " << descent_test_forms(*ws.sym, 1).size() << " forms: " << whole.size()
     << " defects";
  if (!t.empty())
    os << "; t1 alone: " << t[0].word << " (" << t[0].slot << ") " << t[0].value;
  if (!b.empty())
    os << "; bracket alone: " << b[0].word << " (" << b[0].slot << ") " << b[0].value;
  return {whole.empty() && !t.empty() && !b.empty(), os.str()};
}

Outcome round_trips()
{
  int n = 0;
  std::string bad;
  for (const auto &inst : fixtures::valid_instances()) {
    Workspace ws = Workspace::make(inst.L, 4);
    auto sh = instance_sh(ws, inst);
    MdcaStructure m = build_maurer_cartan(ws, sh);
    auto back = extract_structure(ws, m);
    if (!structure_difference(ws, sh, back).empty() || !(build_maurer_cartan(ws, back) == m))
      bad += " " + inst.name;
    ++n;
  }
  return {bad.empty(), std::to_string(n) + " instances at W = 4" + (bad.empty() ? "" : ", failing:" + bad)};
}

// catalog plus seeded perturbations, shared by the route and corollary criteria
struct Sample {
  std::string label;
  std::shared_ptr<Workspace> ws;
  ShLieRinehartData data;
};

std::vector<Sample> samples()
{
  std::vector<Sample> out;
  std::vector<fixtures::Instance> base = fixtures::valid_instances();
  for (auto inst : base) {
    auto ws = std::make_shared<Workspace>(Workspace::make(inst.L, 4));
    out.push_back({inst.name, ws, instance_sh(*ws, inst)});
  }
  auto bad = catalog_instance("jacobi_violator");
  auto wsb = std::make_shared<Workspace>(Workspace::make(bad.L, 4));
  out.push_back({bad.name, wsb, instance_sh(*wsb, bad)});
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 100; ++i) {
    const auto &inst = base[rng() % base.size()];
    auto ws = std::make_shared<Workspace>(Workspace::make(inst.L, 4));
    auto p = fixtures::perturb(*ws, instance_sh(*ws, inst), rng);
    out.push_back({inst.name + " + " + p.what, ws, p.data});
  }
  return out;
}

Outcome route_equivalence(const std::vector<Sample> &all)
{
  int failing = 0, disagree = 0;
  std::string first;
  for (const auto &s : all) {
    auto rep = check_sh_lie_rinehart(*s.ws, s.data);
    failing += !rep.passed();
    if (!rep.agree()) {
      ++disagree;
      if (first.empty())
        first = s.label;
    }
  }
  std::ostringstream os;
  os << all.size() << " instances (" << failing << " failing), " << disagree << " disagreements";
  if (!first.empty())
    os << ", first: " << first;
  return {disagree == 0, os.str()};
}

Outcome ambient_follows(const std::vector<Sample> &all)
{
  int eligible = 0, broken = 0;
  for (const auto &s : all) {
    const Workspace &ws = *s.ws;
    auto D = build_operators(*ws.forms, s.data.del, s.data.t);
    bool descends = true;
    for (int j = 1; j <= ws.W() && descends; ++j)
      descends = descent_check(*ws.sym, D[j], j, "", 1).empty();
    if (!descends)
      continue;
    std::vector<SparseMatrix> DS;
    for (const auto &M : D)
      DS.push_back(ws.sym->descend(M));
    if (!square_check_descended(*ws.sym, DS, ws.W() - 1, false, 1).empty())
      continue;
    ++eligible;
    // every ambient basis form, the non-A-multilinear ones included
    if (!square_check(*ws.forms, D, ws.W() - 1, 1).empty())
      ++broken;
  }
  return {eligible > 0 && broken == 0, std::to_string(eligible) +
                                           " instances with D^2 = 0 on Sym_A, ambient failures: " +
                                           std::to_string(broken)};
}

std::vector<int> betti(const fixtures::Instance &inst, int lo, int hi)
{
  Workspace ws = Workspace::make(inst.L, 4);
  auto D = operators(ws, inst);
  SparseMatrix total(ws.sym->size(), ws.sym->size());
  for (const auto &M : D)
    total += ws.sym->descend(M);
  std::vector<int> b;
  for (const auto &e : cohomology_ranks(*ws.sym, total, lo, hi))
    b.push_back(e.truncated ? -1 : e.betti);
  return b;
}

std::string join(const std::vector<int> &v)
{
  std::string s;
  for (int x : v)
    s += (s.empty() ? "" : ",") + std::to_string(x);
  return "(" + s + ")";
}

Outcome cohomology()
{
  auto s = betti(catalog_instance("sl2"), 0, 3);
  auto a3 = betti(catalog_instance("abelian"), 0, 3);
  auto a4 = betti(lie_algebra_instance("abelian4", {"x1", "x2", "x3", "x4"}, {}), 0, 4);
  const bool ok = s == std::vector<int>{1, 0, 0, 1} && a3 == std::vector<int>{1, 3, 3, 1} &&
                  a4 == std::vector<int>{1, 4, 6, 4, 1};
  return {ok, "sl2 " + join(s) + ", abelian rank 3 " + join(a3) + ", rank 4 " + join(a4)};
}

Outcome sign_laws()
{
  std::mt19937_64 rng(99);
  // graded case for commutativity, ungraded case for the 1-form product formula
  auto ext = catalog_instance("exterior_pair");
  Workspace we = Workspace::make(ext.L, 2);
  auto act = fixtures::sl2_action();
  Workspace wa = Workspace::make(act.L, 2);
  int bad_comm = 0, bad_formula = 0;
  auto random_form = [&](const FormSpace &fs, int len) {
    Form f;
    for (int v = 0; v < fs.size(); ++v)
      if (fs.length(v) <= len && rng() % 3 == 0)
        add_entry(f, v, fixtures::random_rational(rng));
    return f;
  };
  for (int i = 0; i < 1000; ++i) {
    const FormSpace &fs = *we.forms;
    Form f0 = random_form(fs, 1), g0 = random_form(fs, 1);
    std::map<int, Form> fh, gh;
    for (const auto &[v, c] : f0)
      fh[fs.degree(v)].emplace(v, c);
    for (const auto &[v, c] : g0)
      gh[fs.degree(v)].emplace(v, c);
    for (const auto &[df, f] : fh)
      for (const auto &[dg, g] : gh)
        if (cup(fs, f, g) != scaled(cup(fs, g, f), sign_of_parity((long)df * dg)))
          ++bad_comm;

    const FormSpace &fa = *wa.forms;
    const WordSpace &W = fa.words();
    Form alpha, beta;
    for (int v = 0; v < fa.size(); ++v)
      if (fa.length(v) == 1) {
        if (rng() % 2)
          add_entry(alpha, v, fixtures::random_rational(rng));
        if (rng() % 2)
          add_entry(beta, v, fixtures::random_rational(rng));
      }
    Form prod = cup(fa, alpha, beta);
    const AlgebraSpec &A = wa.algebra();
    for (int w = 0; w < W.size(); ++w) {
      if (W.length(w) != 2)
        continue;
      const auto &g = W.word(w).gens;
      const int X = W.index_or_throw(SymWord{{g[0]}}), Y = W.index_or_throw(SymWord{{g[1]}});
      SparseVec expect = multiply(A, fa.value(beta, X), fa.value(alpha, Y));
      axpy(expect, -1, multiply(A, fa.value(alpha, X), fa.value(beta, Y)));
      if (fa.value(prod, w) != expect)
        ++bad_formula;
    }
  }
  return {bad_comm == 0 && bad_formula == 0,
          "1000 pairs: commutativity failures " + std::to_string(bad_comm) +
              ", 1-form product failures " + std::to_string(bad_formula)};
}

Outcome bracket_round_trip()
{
  std::mt19937_64 rng(7);
  std::vector<Generator> gens{{"a", 0}, {"b", 1}, {"c", -1}, {"d", 2}};
  auto L = std::make_shared<ModuleSpec>(ModuleSpec::make(rational_numbers(), GradedBasis(gens), {}));
  SymContext ctx(L);
  TruncationPolicy p;
  p.W = 4;
  auto words = word_basis(ctx, p);
  int trials = 0, bad = 0;
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 50; ++trial, ++trials) {
      Coderivation del;
      auto &c = del.parts[n - 1];
      for (const auto &w : words)
        if ((int)w.length() == n)
          for (int g = 0; g < ctx.size(); ++g)
            if (ctx.degree(g) == word_degree(ctx, w) - 1 && rng() % 2)
              add_entry(c[w], g, fixtures::random_rational(rng));
      for (auto it = c.begin(); it != c.end();)
        it = it->second.empty() ? c.erase(it) : std::next(it);
      Bracket b = brackets_from_coderivation(ctx, del, n);
      Coderivation back;
      back.parts[n - 1] = coderivation_from_brackets(ctx, b);
      if (back.parts[n - 1] != c || brackets_from_coderivation(ctx, back, n).values != b.values)
        ++bad;
    }
  // sl2: ∂(sx·sy) = s[x,y]
  auto sl2 = catalog_instance("sl2");
  auto wctx = std::make_shared<SymContext>(sl2.L);
  WordSpace W(wctx, 2);
  Workspace ws = Workspace::make(sl2.L, 2);
  auto sh = instance_sh(ws, sl2);
  SparseMatrix D = extend_coderivation(W, *sh.del.part(1), 1);
  int sl2_bad = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = x + 1; y < 3; ++y) {
      SparseVec expect;
      for (const auto &[z, c] : sl2.lr.bracket_of(unit_vector(x), unit_vector(y)))
        add_entry(expect, W.index_or_throw(SymWord{{z}}), c);
      if (D.col[W.index_or_throw(SymWord{{x, y}})] != expect)
        ++sl2_bad;
    }
  return {bad == 0 && sl2_bad == 0, std::to_string(trials) + " random coderivations of arity 2-4, " +
                                        std::to_string(bad) + " mismatches; sl2 pairs off: " +
                                        std::to_string(sl2_bad)};
}

Outcome quasi_layer()
{
  auto inst = catalog_instance("quasi_sample");
  Workspace ws = Workspace::make(inst.L, 4);
  const SymAlgebra &S = *ws.sym;
  auto Q = build_quasi_mc(ws, inst.quasi);
  const bool genuine = !(Q[1] * Q[1]).is_zero();
  SparseMatrix level2 = Q[0] * Q[2] + Q[1] * Q[1] + Q[2] * Q[0];
  while ((int)Q.size() <= ws.W())
    Q.emplace_back(S.size(), S.size());
  auto sq = square_check_descended(S, Q, ws.W() - 1, false);
  auto ops = mdca_operators(ws, build_maurer_cartan(ws, quasi_to_sh(ws, inst.quasi)));
  int table_diff = 0;
  for (int j = 0; j <= ws.W(); ++j)
    table_diff += !(ops[j] == Q[j]);
  auto jd = jacobi_defect_identity(ws, inst.quasi);
  std::ostringstream os;
  os << "D0D2+D1D1+D2D0 " << (level2.is_zero() ? "= 0" : "!= 0") << " (D1D1 "
     << (genuine ? "!= 0" : "= 0") << "), square residuals " << sq.size()
     << ", differing tables " << table_diff << ", Jacobi mismatches " << jd.mismatches.size()
     << ", sign " << (jd.sign ? std::to_string(*jd.sign) : "undetermined (both sides vanish)");
  return {level2.is_zero() && genuine && sq.empty() && table_diff == 0 && jd.mismatches.empty(),
          os.str()};
}

} // namespace

int main()
{
  const auto all = samples();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"square zero on catalog Lie algebras", square_zero},
      {"negative control (jacobi_violator)", negative_control},
      {"D1 descends, its summands do not", descent_witness},
      {"build/extract round trips", round_trips},
      {"route equivalence", [&] { return route_equivalence(all); }},
      {"ambient square follows from Sym_A square", [&] { return ambient_follows(all); }},
      {"cohomology", cohomology},
      {"sign laws", sign_laws},
      {"bracket round trip", bracket_round_trip},
      {"quasi layer", quasi_layer},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
