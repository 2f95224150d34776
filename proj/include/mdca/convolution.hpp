#pragma once

#include "mdca/sym_coalgebra.hpp"

#include <set>

namespace mdca {

// t_j: words of length j -> Der(A), each value of degree |w| - 1
struct TwistingCochain {
  std::map<int, std::map<SymWord, Derivation>> parts;
  const std::map<SymWord, Derivation> *part(int j) const;
};

// forms are SparseVec over FormSpace indices
using Form = SparseVec;

// Hom(Sym[sL]_{<=W}, A), basis index = word * dim(A) + m, value a_m on that word
class FormSpace {
public:
  explicit FormSpace(std::shared_ptr<const WordSpace> ws);

  const WordSpace &words() const { return *ws_; }
  std::shared_ptr<const WordSpace> words_ptr() const { return ws_; }
  const SymContext &context() const { return ws_->context(); }
  const AlgebraSpec &algebra() const { return ws_->context().algebra(); }
  int W() const { return ws_->W(); }
  int dimA() const { return dimA_; }
  int size() const { return ws_->size() * dimA_; }
  int index(int w, int m) const { return w * dimA_ + m; }
  int word_of(int v) const { return v / dimA_; }
  int a_of(int v) const { return v % dimA_; }
  int degree(int v) const { return algebra().degree(a_of(v)) - ws_->degree(word_of(v)); }
  int length(int v) const { return ws_->length(word_of(v)); }
  std::string label(int v) const;

  SparseVec value(const Form &f, int w) const;
  const SparseMatrix &d0_words() const { return d0_; }

private:
  std::shared_ptr<const WordSpace> ws_;
  int dimA_;
  SparseMatrix d0_;
};

std::string form_label(const FormSpace &fs, const Form &f);

// (f∪g)(w) = sum over Δw of ± f(w1) g(w2), sign (-1)^{|g||w1|}
Form cup(const FormSpace &fs, const Form &f, const Form &g);

// f -> (-1)^{|f|+1} f∘op for a word-space operator op
SparseMatrix precompose(const FormSpace &fs, const SparseMatrix &word_op);
SparseMatrix hom_differential(const FormSpace &fs);
SparseMatrix partial_bra(const FormSpace &fs, const Coderivation &del, int j);
SparseMatrix partial_t(const FormSpace &fs, const TwistingCochain &t, int j);
SparseMatrix build_D(const FormSpace &fs, const Coderivation &del, const TwistingCochain &t, int j);

// levels 0..W
std::vector<SparseMatrix> build_operators(const FormSpace &fs, const Coderivation &del,
                                          const TwistingCochain &t);

// Sym_A(sL, A): A-multilinear forms, basis (pure word u, a_m)
class SymAlgebra {
public:
  explicit SymAlgebra(std::shared_ptr<const FormSpace> fs);

  const FormSpace &ambient() const { return *fs_; }
  std::shared_ptr<const FormSpace> ambient_ptr() const { return fs_; }
  int size() const { return (int)word_.size(); }
  int word_of(int s) const { return word_[s]; } // index in the word space
  int a_of(int s) const { return a_[s]; }
  int degree(int s) const;
  int length(int s) const { return fs_->words().length(word_[s]); }
  std::string label(int s) const { return fs_->label(fs_->index(word_[s], a_[s])); }
  std::optional<int> find(int word, int m) const;
  int constant(int m) const { return *find(0, m); }
  int dual_generator(int k) const; // φ_k, value 1 on s x_k

  SparseVec embed(const SparseVec &s) const { return E_.apply(s); }
  SparseVec restrict(const Form &f) const { return R_.apply(f); }
  const SparseMatrix &embedding() const { return E_; }
  const SparseMatrix &restriction() const { return R_; }
  SparseMatrix descend(const SparseMatrix &op) const; // R op E
  SparseVec cup(const SparseVec &f, const SparseVec &g) const;
  GradedBasis basis() const;
  std::string vector_label(const SparseVec &s) const;

private:
  std::shared_ptr<const FormSpace> fs_;
  std::vector<int> word_, a_;
  std::map<std::pair<int, int>, int> index_;
  SparseMatrix E_, R_;
};

struct MultilinearWitness {
  int word = -1;
  int slot = -1;
  int a = -1;
  SparseVec actual, expected;
};

std::optional<MultilinearWitness> multilinearity_defect(const SymAlgebra &S, const Form &f);
inline bool is_A_multilinear(const SymAlgebra &S, const Form &f)
{
  return !multilinearity_defect(S, f).has_value();
}
std::string witness_slot(const SymAlgebra &S, const MultilinearWitness &w);

// Sym_A basis forms of length <= W - j, constants first, then the φ_k, then the rest
std::vector<int> descent_test_forms(const SymAlgebra &S, int j);

// images of op that leave Sym_A; at most `limit` residuals
std::vector<Residual> descent_check(const SymAlgebra &S, const SparseMatrix &op, int j,
                                    const std::string &identity, std::size_t limit = 8);

// sum_{k<=j} D_k D_{j-k} on every ambient basis form, levels 0..max_level
std::vector<Residual> square_check(const FormSpace &fs, const std::vector<SparseMatrix> &D,
                                   int max_level, std::size_t limit = 8);
std::vector<Residual> square_check_descended(const SymAlgebra &S,
                                             const std::vector<SparseMatrix> &DS, int max_level,
                                             bool generators_only, std::size_t limit = 8);

// D_j shifts (length, degree) by (+j, -1) on every basis form
std::vector<Residual> bigrade_check(const FormSpace &fs, const SparseMatrix &Dj, int j);

struct BettiEntry {
  int degree;      // upper degree
  int dimension;
  int betti;
  bool boundary;   // at the window edge
  bool truncated;  // words beyond W could contribute
};

// total operator on Sym_A, degrees in upper convention
std::vector<BettiEntry> cohomology_ranks(const SymAlgebra &S, const SparseMatrix &total, int qmin,
                                         int qmax);

} // namespace mdca
