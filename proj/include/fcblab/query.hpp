#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fcblab/polynomial.hpp"
#include "fcblab/sdp.hpp"

namespace fcblab {

// d-query algorithm on n input bits with a w-dimensional workspace. The state
// space is C^{(n+1) w}; basis index (i-1) * w + j is |i> (x) |j>, and the
// oracle multiplies the |i> branch by x(i), leaving i = n+1 unphased.
struct QueryAlgorithm {
  int n = 0;
  int d = 0;
  int w = 1;
  std::vector<Eigen::MatrixXcd> unitaries;  // U_0, ..., U_d
  Eigen::MatrixXcd observable;              // Hermitian, spectrum in [-1, 1]

  Eigen::Index dim() const { return static_cast<Eigen::Index>(n + 1) * w; }
};

inline constexpr Eigen::Index kMaxStateDim = 4096;
inline constexpr int kMaxExtractVariables = 14;
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kImaginaryTolerance = 1e-10;
inline constexpr double kDegreeTolerance = 1e-9;

// Throws DimensionError, CapacityError or ConsistencyError.
void validate(const QueryAlgorithm& alg);

QueryAlgorithm random_algorithm(int n, int d, int w, std::uint64_t seed);

// One query computing x(i) x(j): prepare (|i> + |j>)/sqrt(2), query, then
// measure |i><j| + |j><i|.
QueryAlgorithm pair_parity_algorithm(int n, int i, int j);

double run(const QueryAlgorithm& alg, std::span<const int> x);

// Interpolates run() over all 2^n inputs; coefficients beyond degree 2d are
// zeroed after checking they vanish.
Polynomial extract_polynomial(const QueryAlgorithm& alg);

struct CharacterizationReport {
  Polynomial polynomial;
  bool degree_ok = false;
  double fcb_value = 0.0;
  bool fcb_ok = false;
  bool solver_converged = false;
};

CharacterizationReport check_characterization(const QueryAlgorithm& alg, double tol,
                                              const SdpParams& params = {});

}  // namespace fcblab
