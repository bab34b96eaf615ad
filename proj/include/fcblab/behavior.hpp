#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fcblab/bml.hpp"
#include "fcblab/polynomial.hpp"

namespace fcblab {

// Sequence of letters in [n+1]. Letter n+1 is the frozen variable x(n+1) = 1.
using Word = std::vector<int>;

inline constexpr std::size_t kMaxEnumeratedWords = 1'000'000;
inline constexpr double kConstructedWitnessTolerance = 1e-9;
inline constexpr double kExtractedWitnessTolerance = 1e-6;

// Letters occurring an odd number of times, ignoring n+1.
Subset word_class(const Word& w, int n);

// Elements of s ascending, padded with n+1 up to length d.
Word canonical_word(const Subset& s, int d, int n);

// (n+1)^length; throws CapacityError past kMaxEnumeratedWords.
std::size_t word_count(int n, int length);

// Position of w in the lexicographic order of words of its length, with the
// first letter most significant and n+1 the largest letter.
std::size_t word_rank(const Word& w, int n);
Word word_from_rank(std::size_t rank, int n, int length);

struct WordClass {
  Subset subset;
  std::vector<Word> words;  // lexicographic; words.front() is the representative
};

// All length-d words grouped by class, ordered by subset.
std::vector<WordClass> enumerate_classes(int n, int d);

// A triple (u, v, A(1..n+1)) meant to have Boolean behavior of degree d.
struct Witness {
  int d = 0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  std::vector<Eigen::MatrixXd> A;  // A[k] holds A(k+1)

  Eigen::Index m() const { return u.size(); }
  int n() const { return static_cast<int>(A.size()) - 1; }
};

// The scalar witness (1, 1, (x, 1)).
Witness bit_string_witness(std::span<const int> x, int d);

// <u, A(w_1)...A(w_d) v> for every length-d word, indexed by word_rank.
std::vector<double> word_correlations(const Witness& w);

struct BehaviorReport {
  double max_relation_violation = 0.0;
  double max_contraction_excess = 0.0;
  double unit_norm_error = 0.0;
  bool pass = false;
};

inline constexpr std::size_t kFullPairwiseClassSize = 64;

BehaviorReport verify_bb(const Witness& w, double tol);

// Sum over |S| <= d of p^(S) <u, A(canonical word of S) v>.
double evaluate_on_witness(const Polynomial& p, const Witness& w);

// blocks[b-1][i-1] is the matrix substituted for x_b(i).
using BlockMatrices = std::vector<std::vector<Eigen::MatrixXd>>;

// <u, p(A_1, ..., A_d) v>, the constant term contributing p^(0) <u, v>.
double evaluate_bml_on_matrices(const BmlPolynomial& p, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v, const BlockMatrices& blocks);

void check_witness_shape(const Witness& w);

}  // namespace fcblab
