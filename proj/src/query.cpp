#include "fcblab/query.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "fcblab/errors.hpp"

namespace fcblab {
namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd gaussian_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

// QR of a complex Gaussian matrix with the phases of R's diagonal folded
// back into Q.
Eigen::MatrixXcd random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gaussian_matrix(dim, rng));
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace

void validate(const QueryAlgorithm& alg) {
  if (alg.n < 0 || alg.d < 0 || alg.w < 1) throw ParameterError("query algorithm needs n >= 0, d >= 0, w >= 1");
  const Eigen::Index dim = alg.dim();
  if (dim > kMaxStateDim) throw CapacityError("state dimension exceeds " + std::to_string(kMaxStateDim));
  if (static_cast<int>(alg.unitaries.size()) != alg.d + 1) throw DimensionError("expected d + 1 unitaries");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& u : alg.unitaries) {
    if (u.rows() != dim || u.cols() != dim) throw DimensionError("unitary has wrong dimension");
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > kUnitarityTolerance) {
      throw ConsistencyError("matrix is not unitary");
    }
  }
  const auto& m = alg.observable;
  if (m.rows() != dim || m.cols() != dim) throw DimensionError("observable has wrong dimension");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kUnitarityTolerance) throw ConsistencyError("observable is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + kUnitarityTolerance) {
    throw ConsistencyError("observable spectrum leaves [-1, 1]");
  }
}

QueryAlgorithm random_algorithm(int n, int d, int w, std::uint64_t seed) {
  QueryAlgorithm alg;
  alg.n = n;
  alg.d = d;
  alg.w = w;
  if (n < 0 || d < 0 || w < 1) throw ParameterError("query algorithm needs n >= 0, d >= 0, w >= 1");
  const Eigen::Index dim = alg.dim();
  if (dim > kMaxStateDim) throw CapacityError("state dimension exceeds " + std::to_string(kMaxStateDim));

  std::mt19937_64 rng(seed);
  for (int t = 0; t <= d; ++t) alg.unitaries.push_back(random_unitary(dim, rng));
  const Eigen::MatrixXcd basis = random_unitary(dim, rng);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXcd signs(dim);
  for (Eigen::Index k = 0; k < dim; ++k) signs(k) = coin(rng) ? 1.0 : -1.0;
  alg.observable = basis * signs.asDiagonal() * basis.adjoint();
  alg.observable = (alg.observable + alg.observable.adjoint()) / 2.0;
  return alg;
}

QueryAlgorithm pair_parity_algorithm(int n, int i, int j) {
  if (i < 1 || i > n || j < 1 || j > n || i == j) throw IndexError("parity needs two distinct indices in [1, n]");
  QueryAlgorithm alg;
  alg.n = n;
  alg.d = 1;
  alg.w = 1;
  const Eigen::Index dim = alg.dim();
  const double h = 1.0 / std::sqrt(2.0);
  const Eigen::Index a = i - 1;
  const Eigen::Index b = j - 1;

  // Householder reflection sending |0> to (|i> + |j>)/sqrt(2).
  Eigen::VectorXd target = Eigen::VectorXd::Zero(dim);
  target(a) = h;
  target(b) = h;
  const Eigen::VectorXd normal = Eigen::VectorXd::Unit(dim, 0) - target;
  const Eigen::MatrixXd reflection =
      Eigen::MatrixXd::Identity(dim, dim) - 2.0 * normal * normal.transpose() / normal.squaredNorm();
  const Eigen::MatrixXcd prep = reflection.cast<Complex>();

  alg.unitaries = {prep, Eigen::MatrixXcd::Identity(dim, dim)};
  alg.observable = Eigen::MatrixXcd::Zero(dim, dim);
  alg.observable(a, b) = 1.0;
  alg.observable(b, a) = 1.0;
  return alg;
}

double run(const QueryAlgorithm& alg, std::span<const int> x) {
  if (static_cast<int>(x.size()) != alg.n) throw DimensionError("input length differs from n");
  const Eigen::Index dim = alg.dim();
  Eigen::VectorXcd oracle = Eigen::VectorXcd::Ones(dim);
  for (int i = 0; i < alg.n; ++i) {
    if (x[i] != 1 && x[i] != -1) throw ParameterError("input entries must be +1 or -1");
    oracle.segment(static_cast<Eigen::Index>(i) * alg.w, alg.w).setConstant(static_cast<double>(x[i]));
  }
  Eigen::VectorXcd psi = alg.unitaries.front().col(0);
  for (int t = 1; t <= alg.d; ++t) {
    psi = alg.unitaries[t] * oracle.cwiseProduct(psi);
  }
  const Complex value = psi.dot(alg.observable * psi);
  if (std::abs(value.imag()) > kImaginaryTolerance) {
    throw ConsistencyError("expectation value has imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

Polynomial extract_polynomial(const QueryAlgorithm& alg) {
  if (alg.n > kMaxExtractVariables) throw CapacityError("extraction supports at most 14 input bits");
  const std::size_t size = std::size_t{1} << alg.n;
  std::vector<double> table(size);
  for (std::size_t mask = 0; mask < size; ++mask) {
    table[mask] = run(alg, sign_vector(alg.n, static_cast<std::uint32_t>(mask)));
  }
  const Polynomial raw = fourier_transform(alg.n, table);
  std::map<Subset, double> kept;
  for (const auto& [s, c] : raw.coeffs()) {
    if (static_cast<int>(s.size()) > 2 * alg.d) {
      if (std::abs(c) > kDegreeTolerance) {
        throw ModelViolationError("coefficient " + std::to_string(c) + " at degree " + std::to_string(s.size()) +
                                  " exceeds the 2d bound");
      }
      continue;
    }
    kept.emplace(s, c);
  }
  return Polynomial(alg.n, std::move(kept));
}

CharacterizationReport check_characterization(const QueryAlgorithm& alg, double tol, const SdpParams& params) {
  CharacterizationReport report;
  report.polynomial = extract_polynomial(alg);
  report.degree_ok = report.polynomial.degree() <= 2 * alg.d;
  const SdpSolution sol = fcb_solve(report.polynomial, 2 * alg.d, params);
  report.fcb_value = sol.value;
  report.solver_converged = sol.converged;
  report.fcb_ok = sol.value <= 1.0 + tol;
  return report;
}

}  // namespace fcblab
