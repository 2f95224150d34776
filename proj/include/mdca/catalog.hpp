#pragma once

#include "mdca/structures.hpp"

namespace mdca {

enum class StructureKind { lie_rinehart, sh_lie_rinehart, quasi, mdca };

std::string kind_name(StructureKind k);

// D_j tables keyed by labels: A basis label / generator label -> Sym_A form label -> coefficient
struct MdcaTable {
  using Row = std::map<std::string, std::map<std::string, Rational>>;
  std::map<int, Row> on_A, on_forms;
};

struct Instance {
  std::string name;
  std::string note;
  AlgebraPtr A;
  ModulePtr L;
  StructureKind kind = StructureKind::lie_rinehart;
  LieRinehartData lr;
  ShLieRinehartData sh;   // words may be impure unless sh_pure
  bool sh_pure = false;   // given on pure words, extended on load
  QuasiData quasi;
  MdcaTable mdca;
  TruncationPolicy policy;
};

MdcaTable mdca_to_table(const Workspace &ws, const MdcaStructure &m);
MdcaStructure mdca_from_table(const Workspace &ws, const MdcaTable &t);

// the sh data an instance stands for (lie_rinehart, sh_lie_rinehart, quasi kinds)
ShLieRinehartData instance_sh(const Workspace &ws, const Instance &inst);

AlgebraPtr rational_numbers();
AlgebraPtr exterior_algebra(const std::vector<std::string> &names);

// degree-0 Lie algebra over Q from structure constants [x_i, x_j] = sum c x_k (i < j)
Instance lie_algebra_instance(const std::string &name, const std::vector<std::string> &gens,
                              const std::vector<std::tuple<int, int, int, Rational>> &brackets);

// L = Der(A) when free, with commutator bracket and identity anchor
Instance derivation_instance(const std::string &name, AlgebraPtr A);

} // namespace mdca
