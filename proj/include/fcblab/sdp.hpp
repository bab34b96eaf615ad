#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fcblab/behavior.hpp"
#include "fcblab/polynomial.hpp"

namespace fcblab {

inline constexpr Eigen::Index kDefaultMaxSdpDim = 2000;

// Size guard for the moment matrix; FCBLAB_MAX_DIM overrides the default.
Eigen::Index sdp_size_limit();

// One scalar entry of a linear constraint on the symmetric moment matrix.
// The constraint reads sum(coef * M(row, col)) = rhs with row <= col.
struct MomentTerm {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<MomentTerm> terms;
  double rhs = 0.0;
};

// Gram dominance for one letter: M[base, base] - M[shifted, shifted] >= 0,
// where shifted[k] is the index of the word letter * (word at base[k]).
struct Localizer {
  int letter = 0;
  std::vector<Eigen::Index> base;
  std::vector<Eigen::Index> shifted;
};

// Moment-matrix encoding of the fcb d-norm. Index 0 is the vector u; index
// 1 + k is the k-th word of length <= d in shortlex order, so index 1 is the
// empty word, i.e. the vector v.
struct SdpProblem {
  int n = 0;
  int d = 0;
  Eigen::Index dim = 0;
  std::vector<Word> words;
  Eigen::MatrixXd objective;  // symmetric; objective value is <C, M>
  std::vector<LinearConstraint> equalities;
  std::vector<Localizer> localizers;

  Eigen::Index index_of(const Word& w) const;
};

struct SdpParams {
  double tol = 1e-6;
  int max_iters = 200000;
  double relaxation = 1.6;
};

struct SdpSolution {
  double value = 0.0;
  Eigen::MatrixXd moment;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  double equality_residual = 0.0;
  double localizer_min_eig_slack = 0.0;
  int iterations = 0;
  bool converged = false;
};

SdpProblem build_fcb_sdp(const Polynomial& p, int d);
SdpSolution solve_sdp(const SdpProblem& prob, const SdpParams& params = {});

// Convenience composition of build_fcb_sdp and solve_sdp.
SdpSolution fcb_solve(const Polynomial& p, int d, const SdpParams& params = {});
double fcb_norm(const Polynomial& p, int d, const SdpParams& params = {});

inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kClampableExcess = 1e-6;

// Factor the moment matrix into vectors and read off A(i) as the least
// squares map v_w -> v_{i.w}. Throws ExtractionError when some A(i) exceeds
// norm 1 by more than kClampableExcess.
Witness extract_witness(const SdpSolution& sol, const SdpProblem& prob);

}  // namespace fcblab
