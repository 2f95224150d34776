#pragma once

#include "mdca/cdga.hpp"

#include <limits>

namespace mdca {

// one failing identity value, rendered for reports
struct Residual {
  std::string identity;
  int level = 0;
  std::string word;
  std::string slot;
  std::string value;
};

struct ModuleSpec {
  AlgebraPtr over;
  GradedBasis a_basis; // A-module generators x_k
  GradedBasis qbasis;  // a_i x_k at index k*dim(A) + i
  LinearMap diff_L;    // on qbasis, degree -1

  int dimA() const { return (int)over->dim(); }
  int rank() const { return (int)a_basis.size(); }
  int qindex(int i, int k) const { return k * dimA() + i; }
  int a_part(int q) const { return q % dimA(); }
  int x_part(int q) const { return q / dimA(); }
  SparseVec act(int i, const SparseVec &v) const; // a_i . v

  // gen_diff entries (i, l, k, c): d(x_k) += c a_i x_l; extended by the Leibniz rule
  static ModuleSpec make(AlgebraPtr A, GradedBasis gens,
                         const std::vector<std::tuple<int, int, int, Rational>> &gen_diff);
  static ModuleSpec from_full_diff(AlgebraPtr A, GradedBasis gens, LinearMap diff);
};

using ModulePtr = std::shared_ptr<const ModuleSpec>;

std::vector<Violation> validate_module(const ModuleSpec &L);

// the suspension sL with its Q-basis s(a_i x_k), same indices as L.qbasis
class SymContext {
public:
  explicit SymContext(ModulePtr L);

  const ModuleSpec &module() const { return *L_; }
  ModulePtr module_ptr() const { return L_; }
  const AlgebraSpec &algebra() const { return *L_->over; }
  int size() const { return (int)deg_.size(); }
  int degree(int g) const { return deg_[g]; }
  const std::string &label(int g) const { return label_[g]; }
  int rank_of(int g) const { return rank_[g]; }
  bool is_pure(int g) const { return L_->a_part(g) == L_->over->unit; }
  int pure(int k) const { return L_->qindex(L_->over->unit, k); }
  std::optional<int> find(const std::string &label) const;

  const SparseVec &differential(int g) const { return d_[g]; } // -s d_L s^{-1}
  const SparseVec &act(int a, int g) const { return act_[a][g]; } // a.g
  SparseVec act(const SparseVec &a, const SparseVec &v) const;

private:
  ModulePtr L_;
  std::vector<int> deg_;
  std::vector<std::string> label_;
  std::vector<int> rank_;
  std::vector<SparseVec> d_;
  std::vector<std::vector<SparseVec>> act_;
};

struct SymWord {
  std::vector<int> gens; // canonical order: by (degree, label)
  std::size_t length() const { return gens.size(); }
  bool operator<(const SymWord &o) const { return gens < o.gens; }
  bool operator==(const SymWord &o) const { return gens == o.gens; }
};

int word_degree(const SymContext &ctx, const SymWord &w);
std::string word_label(const SymContext &ctx, const SymWord &w);

// nullopt: the product vanishes (repeated odd generator)
std::optional<std::pair<int, SymWord>> normalize_word(const SymContext &ctx,
                                                      const std::vector<int> &gens);
std::optional<std::pair<int, SymWord>> normalize_labels(const SymContext &ctx,
                                                        const std::vector<std::string> &labels);

struct TruncationPolicy {
  int W = 4;
  int dmin = std::numeric_limits<int>::min() / 4;
  int dmax = std::numeric_limits<int>::max() / 4;
  bool windowed = false;
};

std::vector<SymWord> word_basis(const SymContext &ctx, const TruncationPolicy &policy);

struct DiagonalTerm {
  SymWord left, right;
  Rational coef;
};

std::vector<DiagonalTerm> shuffle_diagonal(const SymContext &ctx, const SymWord &w);

// a·w = ± a_{i1}...a_{ip} s(x_{k1})...s(x_{kp}) for words of sL
struct PureDecomposition {
  bool zero = true;
  int sign = 1;
  int a_parity = 0;
  SparseVec coefficient; // product of the A-parts, in slot order
  int pure_word = -1;    // index in the word space
};

// all words of length <= W with their diagonals
class WordSpace {
public:
  WordSpace(std::shared_ptr<const SymContext> ctx, int W);

  const SymContext &context() const { return *ctx_; }
  std::shared_ptr<const SymContext> context_ptr() const { return ctx_; }
  int W() const { return W_; }
  int size() const { return (int)words_.size(); }
  const SymWord &word(int i) const { return words_[i]; }
  int length(int i) const { return (int)words_[i].length(); }
  int degree(int i) const { return deg_[i]; }
  std::optional<int> index(const SymWord &w) const;
  int index_or_throw(const SymWord &w) const;
  std::string label(int i) const { return word_label(*ctx_, words_[i]); }

  struct Term {
    int left, right;
    Rational coef;
  };
  const std::vector<Term> &diagonal(int i) const { return diag_[i]; }
  const PureDecomposition &pure_decomposition(int i) const { return pure_[i]; }
  const std::vector<int> &pure_words() const { return pure_words_; }
  bool is_pure(int i) const;

private:
  std::shared_ptr<const SymContext> ctx_;
  int W_;
  std::vector<SymWord> words_;
  std::vector<int> deg_;
  std::map<SymWord, int> index_;
  std::vector<std::vector<Term>> diag_;
  std::vector<PureDecomposition> pure_;
  std::vector<int> pure_words_;
};

// corestrictions c_j : Sym^{j+1}[sL] -> sL, keyed by canonical words of length j+1
using Corestriction = std::map<SymWord, SparseVec>;

struct Coderivation {
  std::map<int, Corestriction> parts; // j >= 1
  const Corestriction *part(int j) const;
};

SparseMatrix extend_coderivation(const WordSpace &ws, const Corestriction &c, int j);
SparseMatrix suspended_differential(const WordSpace &ws); // d^0 on Sym[sL]

std::vector<Residual> check_coalgebra_perturbation(const WordSpace &ws, const Coderivation &del);

// n-ary brackets on L, keyed by ordered tuples of Q-basis indices
struct Bracket {
  int n = 2;
  std::map<std::vector<int>, SparseVec> values;
};

Bracket brackets_from_coderivation(const SymContext &ctx, const Coderivation &del, int n);
Corestriction coderivation_from_brackets(const SymContext &ctx, const Bracket &b);
SparseVec evaluate_bracket(const Bracket &b, const std::vector<SparseVec> &args);

std::string vector_label(const SymContext &ctx, const SparseVec &v, bool suspended);
std::string element_label(const AlgebraSpec &A, const SparseVec &v);

} // namespace mdca
