#include "mdca/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace mdca {

namespace {

constexpr std::size_t kShown = 25;

Section section(std::string name, std::vector<Residual> rs)
{
  Section s;
  s.name = std::move(name);
  s.passed = rs.empty();
  s.residuals = std::move(rs);
  return s;
}

Section verdict(std::string name, bool ok, Json detail = Json::object())
{
  Section s;
  s.name = std::move(name);
  s.passed = ok;
  s.detail = std::move(detail);
  return s;
}

Json level_json(const std::optional<int> &l) { return l ? Json(*l) : Json(nullptr); }

void add_sh_routes(Report &r, const Workspace &ws, const ShLieRinehartData &sh)
{
  ShReport rep = check_sh_lie_rinehart(ws, sh);
  Section a = section("route a: sh Lie-Rinehart axioms", rep.direct.residuals);
  a.detail["first_failing_level"] = level_json(rep.direct.first_level);
  Section b = section("route b: Maurer-Cartan algebra (descent and D squared)", rep.indirect.residuals);
  b.detail["first_failing_level"] = level_json(rep.indirect.first_level);
  r.sections.push_back(std::move(a));
  r.sections.push_back(std::move(b));
  r.sections.push_back(verdict("routes a and b agree", rep.agree(),
                               {{"route_a_passed", rep.direct.residuals.empty()},
                                {"route_b_passed", rep.indirect.residuals.empty()}}));
}

std::vector<Residual> bigrading(const SymAlgebra &S, const std::vector<SparseMatrix> &ops)
{
  std::vector<Residual> out;
  for (int j = 0; j < (int)ops.size(); ++j)
    for (int s = 0; s < S.size(); ++s)
      for (const auto &[t, c] : ops[j].col[s])
        if (S.length(t) != S.length(s) + j || S.degree(t) != S.degree(s) - 1) {
          out.push_back({"D_j raises word length by j and lowers degree by one", j, S.label(s), "",
                         "(" + format_rational(c) + ") " + S.label(t)});
          break;
        }
  return out;
}

std::vector<Residual> operator_mismatch(const SymAlgebra &S, const std::vector<SparseMatrix> &a,
                                        const std::vector<SparseMatrix> &b,
                                        const std::string &identity)
{
  std::vector<Residual> out;
  for (std::size_t j = 0; j < std::max(a.size(), b.size()); ++j) {
    SparseMatrix x = j < a.size() ? a[j] : SparseMatrix(S.size(), S.size());
    SparseMatrix y = j < b.size() ? b[j] : SparseMatrix(S.size(), S.size());
    for (int s = 0; s < S.size(); ++s)
      if (x.col[s] != y.col[s]) {
        out.push_back({identity, (int)j, S.label(s), "",
                       S.vector_label(x.col[s]) + " vs " + S.vector_label(y.col[s])});
        break;
      }
  }
  return out;
}

void check_mdca_tables(Report &r, const Workspace &ws, const MdcaStructure &m)
{
  const SymAlgebra &S = *ws.sym;
  auto ops = mdca_operators(ws, m);
  r.sections.push_back(section("D squared on Sym_A, every basis form",
                               square_check_descended(S, ops, ws.W() - 1, false)));
  r.sections.push_back(section("bigrading", bigrading(S, ops)));
  std::vector<SparseMatrix> d0{ops[0]}, ref{S.descend(hom_differential(*ws.forms))};
  r.sections.push_back(section("D_0 is the Hom-differential", operator_mismatch(S, d0, ref, "D_0")));
  ShLieRinehartData sh = extract_structure(ws, m);
  add_sh_routes(r, ws, sh);
  MdcaStructure again = build_maurer_cartan(ws, sh, false);
  std::string diff = mdca_difference(ws, m, again);
  Section s = verdict("build(extract(m)) = m", diff.empty());
  if (!diff.empty())
    s.residuals.push_back({"round trip", 0, diff, "", ""});
  r.sections.push_back(std::move(s));
}

void check_quasi(Report &r, const Workspace &ws, const QuasiData &q)
{
  const SymAlgebra &S = *ws.sym;
  r.sections.push_back(section("quasi data shapes", validate_quasi(q)));
  auto Q = build_quasi_mc(ws, q);
  auto padded = Q;
  while ((int)padded.size() <= ws.W())
    padded.emplace_back(S.size(), S.size());
  r.sections.push_back(section("D0 D2 + D1 D1 + D2 D0 = 0 and lower levels (closed formulas)",
                               square_check_descended(S, padded, ws.W() - 1, false)));
  ShLieRinehartData sh = quasi_to_sh(ws, q);
  try {
    auto ops = mdca_operators(ws, build_maurer_cartan(ws, sh));
    r.sections.push_back(section("closed formulas equal the Maurer-Cartan operators",
                                 operator_mismatch(S, padded, ops, "D_j tables")));
  } catch (const StructureError &e) {
    r.sections.push_back(section("closed formulas equal the Maurer-Cartan operators",
                                 {{"descent", 0, e.what(), "", ""}}));
  }
  add_sh_routes(r, ws, sh);
  JacobiDefect jd = jacobi_defect_identity(ws, q);
  Section s = section("Jacobi defect controlled by the 3-bracket", jd.mismatches);
  s.detail["global_sign"] = jd.sign ? Json(*jd.sign) : Json("undetermined (both sides vanish)");
  r.sections.push_back(std::move(s));
}

std::string certified(int W)
{
  return "verified on all words of length <= " + std::to_string(W) + " (levels 0.." +
         std::to_string(W - 1) + ")";
}

} // namespace

bool Report::passed() const
{
  return std::all_of(sections.begin(), sections.end(), [](const Section &s) { return s.passed; });
}

Json Report::to_json() const
{
  Json j;
  j["command"] = command;
  j["instance"] = instance;
  j["kind"] = kind;
  j["W"] = W;
  j["certified"] = certified(W);
  j["verdict"] = passed() ? "pass" : "fail";
  j["seconds"] = std::round(seconds * 1e4) / 1e4;
  Json secs = Json::array();
  for (const auto &s : sections) {
    Json x;
    x["name"] = s.name;
    x["verdict"] = s.passed ? "pass" : "fail";
    x["residual_count"] = s.residuals.size();
    Json rs = Json::array();
    for (std::size_t i = 0; i < s.residuals.size() && i < kShown; ++i) {
      const auto &q = s.residuals[i];
      rs.push_back({{"identity", q.identity},
                    {"level", q.level},
                    {"word", q.word},
                    {"slot", q.slot},
                    {"value", q.value}});
    }
    x["residuals"] = rs;
    x["detail"] = s.detail;
    secs.push_back(x);
  }
  j["sections"] = secs;
  j["data"] = data;
  return j;
}

std::string render_text(const Json &r)
{
  std::ostringstream o;
  auto scalar = [](const Json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  o << "mdca " << scalar(r["command"]) << ": " << scalar(r["instance"]) << " (" << scalar(r["kind"])
    << "), W = " << r["W"] << "\n";
  o << r["certified"].get<std::string>() << "\n";
  for (const auto &s : r["sections"]) {
    o << (s["verdict"] == "pass" ? "  [pass] " : "  [FAIL] ") << s["name"].get<std::string>();
    if (s["residual_count"].get<std::size_t>() > 0)
      o << "  (" << s["residual_count"] << (s["residual_count"] == 1 ? " residual)" : " residuals)");
    o << "\n";
    for (const auto &[k, v] : s["detail"].items())
      o << "      " << k << ": " << scalar(v) << "\n";
    for (const auto &q : s["residuals"]) {
      o << "      level " << q["level"] << "  " << q["identity"].get<std::string>() << "  at "
        << q["word"].get<std::string>();
      if (!q["slot"].get<std::string>().empty())
        o << " [" << q["slot"].get<std::string>() << "]";
      if (!q["value"].get<std::string>().empty())
        o << "  value " << q["value"].get<std::string>();
      o << "\n";
    }
    const std::size_t shown = s["residuals"].size(), total = s["residual_count"];
    if (shown < total)
      o << "      ... " << total - shown << " more\n";
  }
  if (r.contains("data") && r["data"].contains("betti")) {
    o << "  degree  dim  betti\n";
    for (const auto &b : r["data"]["betti"]) {
      o << "  " << std::setw(6) << b["degree"].dump() << " " << std::setw(4) << b["dimension"].dump()
        << " " << std::setw(6) << b["betti"].dump();
      if (b["boundary"].get<bool>())
        o << "  window edge";
      if (b["truncated"].get<bool>())
        o << "  longer words contribute";
      o << "\n";
    }
  }
  if (r.contains("data"))
    for (const auto &[k, v] : r["data"].items())
      if (k != "betti")
        o << "  " << k << ": " << scalar(v) << "\n";
  o << "verdict: " << (r["verdict"] == "pass" ? "PASS" : "FAIL") << " (" << r["seconds"].dump()
    << " s)\n";
  return o.str();
}

KindRequest parse_kind(const std::string &s)
{
  if (s == "auto")
    return KindRequest::automatic;
  if (s == "lr")
    return KindRequest::lr;
  if (s == "shlr")
    return KindRequest::shlr;
  if (s == "quasi")
    return KindRequest::quasi;
  if (s == "mdca")
    return KindRequest::mdca;
  throw InputError("--kind: expected auto|lr|shlr|quasi|mdca, got \"" + s + "\"");
}

std::vector<SparseMatrix> instance_operators(const Workspace &ws, const Instance &inst)
{
  if (inst.kind == StructureKind::mdca)
    return mdca_operators(ws, mdca_from_table(ws, inst.mdca));
  return mdca_operators(ws, build_maurer_cartan(ws, instance_sh(ws, inst)));
}

Report cmd_check(const Instance &inst, KindRequest kind, int W)
{
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = "check";
  r.instance = inst.name;
  r.W = W;
  Workspace ws = Workspace::make(inst.L, W);
  if (kind == KindRequest::automatic)
    switch (inst.kind) {
    case StructureKind::lie_rinehart: kind = KindRequest::lr; break;
    case StructureKind::sh_lie_rinehart: kind = KindRequest::shlr; break;
    case StructureKind::quasi: kind = KindRequest::quasi; break;
    case StructureKind::mdca: kind = KindRequest::mdca; break;
    }
  auto mismatch = [&](const char *k) {
    throw InputError("--kind " + std::string(k) + " does not apply to a " + kind_name(inst.kind) +
                     " instance");
  };
  switch (kind) {
  case KindRequest::lr:
    if (inst.kind != StructureKind::lie_rinehart)
      mismatch("lr");
    r.kind = "lie_rinehart";
    r.sections.push_back(section("Lie-Rinehart axioms on L", check_lie_rinehart(inst.lr)));
    add_sh_routes(r, ws, instance_sh(ws, inst));
    break;
  case KindRequest::shlr:
    if (inst.kind == StructureKind::mdca)
      mismatch("shlr");
    r.kind = "sh_lie_rinehart";
    add_sh_routes(r, ws, instance_sh(ws, inst));
    break;
  case KindRequest::quasi:
    if (inst.kind != StructureKind::quasi)
      mismatch("quasi");
    r.kind = "quasi";
    check_quasi(r, ws, inst.quasi);
    break;
  case KindRequest::mdca:
    r.kind = "mdca";
    try {
      MdcaStructure m = inst.kind == StructureKind::mdca
                            ? mdca_from_table(ws, inst.mdca)
                            : build_maurer_cartan(ws, instance_sh(ws, inst));
      check_mdca_tables(r, ws, m);
    } catch (const StructureError &e) {
      r.sections.push_back(section("build the Maurer-Cartan algebra", {{"descent", 0, e.what(), "", ""}}));
    }
    break;
  case KindRequest::automatic:
    break;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report cmd_roundtrip(const Instance &inst, int W)
{
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = "roundtrip";
  r.instance = inst.name;
  r.kind = kind_name(inst.kind);
  r.W = W;
  Workspace ws = Workspace::make(inst.L, W);
  const SymAlgebra &S = *ws.sym;
  auto diff_section = [](const std::string &name, const std::string &diff) {
    Section s = verdict(name, diff.empty());
    if (!diff.empty())
      s.residuals.push_back({"first difference", 0, diff, "", ""});
    return s;
  };
  try {
    if (inst.kind == StructureKind::mdca) {
      MdcaStructure m = mdca_from_table(ws, inst.mdca);
      ShLieRinehartData d = extract_structure(ws, m);
      MdcaStructure m2 = build_maurer_cartan(ws, d);
      r.sections.push_back(diff_section("build(extract(m)) = m", mdca_difference(ws, m, m2)));
      ShLieRinehartData d2 = extract_structure(ws, m2);
      r.sections.push_back(diff_section("extract(build(d)) = d", structure_difference(ws, d, d2)));
      r.sections.push_back(section("operator tables agree",
                                   operator_mismatch(S, mdca_operators(ws, m),
                                                     mdca_operators(ws, m2), "D_j tables")));
    } else {
      ShLieRinehartData d = instance_sh(ws, inst);
      MdcaStructure m = build_maurer_cartan(ws, d);
      ShLieRinehartData d2 = extract_structure(ws, m);
      r.sections.push_back(diff_section("extract(build(d)) = d", structure_difference(ws, d, d2)));
      MdcaStructure m2 = build_maurer_cartan(ws, d2);
      r.sections.push_back(diff_section("build(extract(m)) = m", mdca_difference(ws, m, m2)));
      std::vector<SparseMatrix> direct;
      for (const auto &D : build_operators(*ws.forms, d.del, d.t))
        direct.push_back(S.descend(D));
      r.sections.push_back(section("operator tables agree",
                                   operator_mismatch(S, direct, mdca_operators(ws, m2), "D_j tables")));
    }
  } catch (const StructureError &e) {
    r.sections.push_back(section("build the Maurer-Cartan algebra", {{"descent", 0, e.what(), "", ""}}));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report cmd_cohomology(const Instance &inst, int W, int qmin, int qmax)
{
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = "cohomology";
  r.instance = inst.name;
  r.kind = kind_name(inst.kind);
  r.W = W;
  Workspace ws = Workspace::make(inst.L, W);
  const SymAlgebra &S = *ws.sym;
  try {
    auto ops = instance_operators(ws, inst);
    auto sq = square_check_descended(S, ops, W - 1, false);
    const bool ok = sq.empty();
    r.sections.push_back(section("D squared on Sym_A", std::move(sq)));
    if (ok) {
      SparseMatrix total(S.size(), S.size());
      for (const auto &D : ops)
        total += D;
      Json betti = Json::array();
      for (const auto &e : cohomology_ranks(S, total, qmin, qmax))
        betti.push_back({{"degree", e.degree},
                         {"dimension", e.dimension},
                         {"betti", e.betti},
                         {"boundary", e.boundary},
                         {"truncated", e.truncated}});
      r.data["betti"] = betti;
      r.data["window"] = std::to_string(qmin) + ".." + std::to_string(qmax);
    }
  } catch (const StructureError &e) {
    r.sections.push_back(section("build the Maurer-Cartan algebra", {{"descent", 0, e.what(), "", ""}}));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

} // namespace mdca
