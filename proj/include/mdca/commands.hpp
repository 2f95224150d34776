#pragma once

#include "mdca/instance_io.hpp"

namespace mdca {

struct Section {
  std::string name;
  bool passed = true;
  std::vector<Residual> residuals;
  Json detail = Json::object();
};

struct Report {
  std::string command;
  std::string instance;
  std::string kind;
  int W = 0;
  std::vector<Section> sections;
  Json data = Json::object();
  double seconds = 0;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
  Json to_json() const;
};

// the text rendering is produced from the JSON so both carry the same content
std::string render_text(const Json &report);

enum class KindRequest { automatic, lr, shlr, quasi, mdca };
KindRequest parse_kind(const std::string &s); // InputError on unknown names

Report cmd_check(const Instance &inst, KindRequest kind, int W);
Report cmd_roundtrip(const Instance &inst, int W);
Report cmd_cohomology(const Instance &inst, int W, int qmin, int qmax);

// the Sym_A operators D_0..D_W of an instance; StructureError when they cannot be formed
std::vector<SparseMatrix> instance_operators(const Workspace &ws, const Instance &inst);

} // namespace mdca
