#pragma once

#include "mdca/convolution.hpp"

namespace mdca {

// refusal of a construction on inconsistent input (exit code 1 at the CLI)
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// spaces shared by all checks of one instance at one truncation bound
struct Workspace {
  ModulePtr L;
  std::shared_ptr<const SymContext> ctx;
  std::shared_ptr<const WordSpace> words;
  std::shared_ptr<const FormSpace> forms;
  std::shared_ptr<const SymAlgebra> sym;

  static Workspace make(ModulePtr L, int W);
  int W() const { return words->W(); }
  const AlgebraSpec &algebra() const { return *L->over; }
};

// bracket on the full Q-basis of L, anchor per Q-basis element
struct LieRinehartData {
  ModulePtr L;
  std::map<std::pair<int, int>, SparseVec> bracket; // both orders present
  std::vector<Derivation> anchor;

  SparseVec bracket_of(const SparseVec &x, const SparseVec &y) const;
  Derivation anchor_of(const SparseVec &x) const;
};

// fills the reversed pairs by graded skew-symmetry; conflicting entries are an input error
void complete_skew(LieRinehartData &d);

std::vector<Residual> check_lie_rinehart(const LieRinehartData &d);

struct ShLieRinehartData {
  ModulePtr L;
  Coderivation del;
  TwistingCochain t;
};

ShLieRinehartData lie_rinehart_to_sh(const Workspace &ws, const LieRinehartData &d);

// values on pure words only; the rest follows from A-multilinearity of t and the anomaly law
ShLieRinehartData extend_from_pure(const Workspace &ws, const ShLieRinehartData &pure);
ShLieRinehartData restrict_to_pure(const Workspace &ws, const ShLieRinehartData &d);

// t_j value on a word given by generator sequence (normalized with sign); zero if absent
Derivation twisting_value(const Workspace &ws, const TwistingCochain &t, int j,
                          const std::vector<int> &gens);
SparseVec corestriction_value(const Workspace &ws, const Coderivation &del, int j,
                              const std::vector<int> &gens);

// level-j value of D t + t∧t on words of length j, nonzero entries only
std::map<SymWord, Derivation> twisting_residual(const Workspace &ws, const Coderivation &del,
                                                const TwistingCochain &t, int j);
std::vector<Residual> check_twisting_cochain(const Workspace &ws, const Coderivation &del,
                                             const TwistingCochain &t);
std::vector<Residual> check_t_multilinear(const Workspace &ws, const TwistingCochain &t, int j);
std::vector<Residual> check_anomaly(const Workspace &ws, const ShLieRinehartData &d, int j);

struct RouteReport {
  std::vector<Residual> residuals;
  std::optional<int> first_level;
};

struct ShReport {
  RouteReport direct;   // axioms
  RouteReport indirect; // Maurer-Cartan algebra
  bool agree() const;
  bool passed() const { return direct.residuals.empty() && indirect.residuals.empty(); }
};

RouteReport check_direct(const Workspace &ws, const ShLieRinehartData &d);
RouteReport check_indirect(const Workspace &ws, const ShLieRinehartData &d);
ShReport check_sh_lie_rinehart(const Workspace &ws, const ShLieRinehartData &d);

// D_j on A (levels 0..W) and on the dual generators φ_k (levels 0..W-1), as Sym_A vectors
struct MdcaStructure {
  ModulePtr L;
  std::map<int, std::vector<SparseVec>> on_A;
  std::map<int, std::vector<SparseVec>> on_forms;
};

bool operator==(const MdcaStructure &a, const MdcaStructure &b);

MdcaStructure build_maurer_cartan(const Workspace &ws, const ShLieRinehartData &d,
                                  bool require_descent = true);
// Leibniz extension of the generator tables to every Sym_A basis form
std::vector<SparseMatrix> mdca_operators(const Workspace &ws, const MdcaStructure &m);
ShLieRinehartData extract_structure(const Workspace &ws, const MdcaStructure &m);

// first difference, empty when equal on every word up to W
std::string structure_difference(const Workspace &ws, const ShLieRinehartData &a,
                                 const ShLieRinehartData &b);
std::string mdca_difference(const Workspace &ws, const MdcaStructure &a, const MdcaStructure &b);

// quasi Lie-Rinehart data on Q = A ⊗ Q0 with Q0 in degree 0
struct QuasiData {
  ModulePtr L;                                        // generators x_k of degree 0
  std::map<std::pair<int, int>, SparseVec> bracket;   // on generators, both orders
  std::vector<Derivation> pairing;                    // x_k(-), degree 0
  std::map<std::pair<int, int>, Derivation> triple;   // <x_k, x_l; ->, both orders
};

std::vector<Residual> validate_quasi(const QuasiData &q);
ShLieRinehartData quasi_to_sh(const Workspace &ws, const QuasiData &q);
// D_0, D_1, D_2 on Sym_A from the closed formulas
std::vector<SparseMatrix> build_quasi_mc(const Workspace &ws, const QuasiData &q);

struct JacobiDefect {
  std::vector<Residual> mismatches;
  std::optional<int> sign; // nullopt when both sides vanish on every triple
};
JacobiDefect jacobi_defect_identity(const Workspace &ws, const QuasiData &q);

struct QuasiSearch {
  std::optional<QuasiData> found;
  std::vector<Residual> certificate; // residuals of the found instance (empty)
  long candidates = 0;
};
// rank-2 search over {-1,0,1} parameters with the triple coefficient solved linearly
QuasiSearch solve_quasi_sample(int W = 4);
QuasiData quasi_sample_from_parameters(const std::vector<int> &m, const std::vector<int> &b,
                                       const std::vector<int> &lambda, const Rational &c);

} // namespace mdca
