#include "fcblab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include <Eigen/Sparse>

#include "fcblab/errors.hpp"
#include "fcblab/linalg.hpp"

namespace fcblab {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr int kCheckInterval = 10;
constexpr int kRhoUpdateInterval = 100;
constexpr double kRhoBalance = 5.0;
constexpr int kAndersonMemory = 10;
constexpr double kSafeguardFactor = 1.0;

// Packed upper triangle, column by column, with off-diagonal entries scaled
// by sqrt(2) so that the Euclidean inner product matches the Frobenius one.
Eigen::Index svec_size(Eigen::Index k) { return k * (k + 1) / 2; }

Eigen::Index svec_index(Eigen::Index i, Eigen::Index j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

void pack(const Eigen::MatrixXd& a, Eigen::Ref<Eigen::VectorXd> out) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) out(svec_index(i, j)) = kSqrt2 * a(i, j);
    out(svec_index(j, j)) = a(j, j);
  }
}

Eigen::MatrixXd unpack(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index k) {
  Eigen::MatrixXd a(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double value = x(svec_index(i, j)) / kSqrt2;
      a(i, j) = value;
      a(j, i) = value;
    }
    a(j, j) = x(svec_index(j, j));
  }
  return a;
}

// Coordinates of the stacked variable (moment matrix, then one slack matrix
// per localizer).
struct Layout {
  Eigen::Index moment_dim = 0;
  Eigen::Index slack_dim = 0;
  std::size_t slack_count = 0;

  Eigen::Index slack_offset(std::size_t l) const {
    return svec_size(moment_dim) + static_cast<Eigen::Index>(l) * svec_size(slack_dim);
  }
  Eigen::Index size() const { return slack_offset(slack_count); }
};

// Euclidean projection onto {x : G x = h} via a cached factorisation of G G^T.
class AffineProjector {
 public:
  AffineProjector(Eigen::SparseMatrix<double, Eigen::RowMajor> g, Eigen::VectorXd h)
      : g_(std::move(g)), h_(std::move(h)) {
    const Eigen::SparseMatrix<double> ggt = g_ * g_.transpose();
    solver_.compute(ggt);
    if (solver_.info() != Eigen::Success) throw ConsistencyError("equality constraints are rank deficient");
  }

  void project(Eigen::VectorXd& x) const {
    const Eigen::VectorXd r = g_ * x - h_;
    const Eigen::VectorXd lambda = solver_.solve(r);
    x.noalias() -= g_.transpose() * lambda;
  }

  // Least squares multipliers nu with G^T nu closest to w.
  Eigen::VectorXd multipliers(const Eigen::VectorXd& w) const { return solver_.solve(g_ * w); }

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& g() const { return g_; }
  const Eigen::VectorXd& h() const { return h_; }

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor> g_;
  Eigen::VectorXd h_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

AffineProjector make_projector(const SdpProblem& prob, const Layout& layout) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> triplets;
  std::vector<double> rhs;
  Eigen::Index row = 0;
  auto moment_coef = [](const MomentTerm& t) { return t.row == t.col ? t.coef : t.coef / kSqrt2; };

  for (const auto& eq : prob.equalities) {
    for (const auto& t : eq.terms) triplets.emplace_back(row, svec_index(t.row, t.col), moment_coef(t));
    rhs.push_back(eq.rhs);
    ++row;
  }
  // S_l(a, b) - M(base_a, base_b) + M(shift_a, shift_b) = 0; the sqrt(2)
  // scaling is shared by all three coordinates.
  for (std::size_t l = 0; l < prob.localizers.size(); ++l) {
    const auto& loc = prob.localizers[l];
    const auto k = static_cast<Eigen::Index>(loc.base.size());
    for (Eigen::Index b = 0; b < k; ++b) {
      for (Eigen::Index a = 0; a <= b; ++a) {
        triplets.emplace_back(row, layout.slack_offset(l) + svec_index(a, b), 1.0);
        triplets.emplace_back(row, svec_index(loc.base[a], loc.base[b]), -1.0);
        triplets.emplace_back(row, svec_index(loc.shifted[a], loc.shifted[b]), 1.0);
        rhs.push_back(0.0);
        ++row;
      }
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> g(row, layout.size());
  g.setFromTriplets(triplets.begin(), triplets.end());
  return AffineProjector(std::move(g), Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size())));
}

// Type-II Anderson acceleration over the last kAndersonMemory steps.
class AndersonAccelerator {
 public:
  explicit AndersonAccelerator(Eigen::Index size)
      : iterates_(size, kAndersonMemory), residuals_(size, kAndersonMemory) {}

  void reset() {
    count_ = 0;
    have_previous_ = false;
  }

  // Records the pair (t, g = T(t) - t); returns true once extrapolation is possible.
  bool push(const Eigen::VectorXd& t, const Eigen::VectorXd& g) {
    if (have_previous_) {
      const Eigen::Index col = next_ % kAndersonMemory;
      iterates_.col(col) = t - previous_t_;
      residuals_.col(col) = g - previous_g_;
      ++next_;
      count_ = std::min<Eigen::Index>(count_ + 1, kAndersonMemory);
    }
    previous_t_ = t;
    previous_g_ = g;
    have_previous_ = true;
    return count_ > 0;
  }

  Eigen::VectorXd extrapolate(const Eigen::VectorXd& t, const Eigen::VectorXd& g) const {
    const auto dt = iterates_.leftCols(count_);
    const auto dg = residuals_.leftCols(count_);
    Eigen::MatrixXd normal = dg.transpose() * dg;
    normal.diagonal().array() += 1e-10 * std::max(normal.trace(), 1e-300);
    const Eigen::VectorXd gamma = normal.ldlt().solve(dg.transpose() * g);
    return t + g - (dt + dg) * gamma;
  }

 private:
  Eigen::MatrixXd iterates_;
  Eigen::MatrixXd residuals_;
  Eigen::VectorXd previous_t_;
  Eigen::VectorXd previous_g_;
  Eigen::Index count_ = 0;
  Eigen::Index next_ = 0;
  bool have_previous_ = false;
};

// Optimality measures of the normalised problem max <c, x> s.t. G x = h,
// x in the cone, with dual slack s = rho (z - t).
struct KktResiduals {
  double primal = std::numeric_limits<double>::infinity();
  double dual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
};

KktResiduals kkt_residuals(const AffineProjector& projector, const Eigen::VectorXd& cost, const Eigen::VectorXd& z,
                           const Eigen::VectorXd& t, double rho) {
  KktResiduals r;
  r.primal = (projector.g() * z - projector.h()).lpNorm<Eigen::Infinity>();
  const Eigen::VectorXd w = cost + rho * (z - t);
  const Eigen::VectorXd nu = projector.multipliers(w);
  r.dual = (w - projector.g().transpose() * nu).lpNorm<Eigen::Infinity>();
  r.gap = std::abs(cost.dot(z) - projector.h().dot(nu));
  return r;
}

void project_cone(Eigen::VectorXd& x, const Layout& layout) {
  auto project_block = [&x](Eigen::Index offset, Eigen::Index k) {
    auto seg = x.segment(offset, svec_size(k));
    pack(project_psd(unpack(seg, k)), seg);
  };
  project_block(0, layout.moment_dim);
  for (std::size_t l = 0; l < layout.slack_count; ++l) project_block(layout.slack_offset(l), layout.slack_dim);
}

Eigen::MatrixXd localizer_slack(const Eigen::MatrixXd& m, const Localizer& loc) {
  const auto k = static_cast<Eigen::Index>(loc.base.size());
  Eigen::MatrixXd s(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      s(a, b) = m(loc.base[a], loc.base[b]) - m(loc.shifted[a], loc.shifted[b]);
    }
  }
  return s;
}

double equality_residual(const Eigen::MatrixXd& m, const SdpProblem& prob) {
  double worst = 0.0;
  for (const auto& eq : prob.equalities) {
    double lhs = 0.0;
    for (const auto& t : eq.terms) lhs += t.coef * m(t.row, t.col);
    worst = std::max(worst, std::abs(lhs - eq.rhs));
  }
  return worst;
}

}  // namespace

Eigen::Index sdp_size_limit() {
  if (const char* env = std::getenv("FCBLAB_MAX_DIM")) {
    char* end = nullptr;
    const long long value = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<Eigen::Index>(value);
    throw ParameterError("FCBLAB_MAX_DIM must be a positive integer");
  }
  return kDefaultMaxSdpDim;
}

Eigen::Index SdpProblem::index_of(const Word& w) const {
  if (static_cast<int>(w.size()) > d) throw DegreeError("word longer than the SDP degree");
  Eigen::Index offset = 1;
  Eigen::Index level = 1;
  for (std::size_t s = 0; s < w.size(); ++s) {
    offset += level;
    level *= n + 1;
  }
  return offset + static_cast<Eigen::Index>(word_rank(w, n));
}

SdpProblem build_fcb_sdp(const Polynomial& p, int d) {
  if (d < 0) throw ParameterError("SDP degree must be nonnegative");
  if (p.degree() > d) {
    throw DegreeError("polynomial of degree " + std::to_string(p.degree()) + " exceeds d = " + std::to_string(d));
  }
  const int n = p.n();
  const Eigen::Index limit = sdp_size_limit();
  Eigen::Index dim = 1;
  Eigen::Index level = 1;
  for (int s = 0; s <= d; ++s) {
    dim += level;
    if (dim > limit) {
      throw CapacityError("moment matrix dimension exceeds " + std::to_string(limit) +
                          " (raise FCBLAB_MAX_DIM to override)");
    }
    level *= n + 1;
  }

  SdpProblem prob;
  prob.n = n;
  prob.d = d;
  prob.dim = dim;
  prob.words.reserve(static_cast<std::size_t>(dim - 1));
  for (int s = 0; s <= d; ++s) {
    const std::size_t count = word_count(n, s);
    for (std::size_t r = 0; r < count; ++r) prob.words.push_back(word_from_rank(r, n, s));
  }

  prob.objective = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [s, c] : p.coeffs()) {
    const Eigen::Index j = prob.index_of(canonical_word(s, d, n));
    prob.objective(0, j) += c / 2;
    prob.objective(j, 0) += c / 2;
  }

  for (const auto& cls : enumerate_classes(n, d)) {
    const Eigen::Index rep = prob.index_of(cls.words.front());
    for (std::size_t k = 1; k < cls.words.size(); ++k) {
      prob.equalities.push_back({{{0, prob.index_of(cls.words[k]), 1.0}, {0, rep, -1.0}}, 0.0});
    }
  }
  prob.equalities.push_back({{{0, 0, 1.0}}, 1.0});
  prob.equalities.push_back({{{1, 1, 1.0}}, 1.0});

  if (d >= 1) {
    std::vector<Eigen::Index> base;
    for (std::size_t k = 0; k < prob.words.size() && static_cast<int>(prob.words[k].size()) < d; ++k) {
      base.push_back(static_cast<Eigen::Index>(k) + 1);
    }
    for (int letter = 1; letter <= n + 1; ++letter) {
      Localizer loc;
      loc.letter = letter;
      loc.base = base;
      for (Eigen::Index b : base) {
        Word w{letter};
        const Word& tail = prob.words[static_cast<std::size_t>(b - 1)];
        w.insert(w.end(), tail.begin(), tail.end());
        loc.shifted.push_back(prob.index_of(w));
      }
      prob.localizers.push_back(std::move(loc));
    }
  }
  return prob;
}

SdpSolution solve_sdp(const SdpProblem& prob, const SdpParams& params) {
  if (params.tol <= 0.0 || params.max_iters < 1) throw ParameterError("solver needs tol > 0 and max_iters >= 1");
  if (prob.objective.rows() != prob.dim || prob.objective.cols() != prob.dim) {
    throw DimensionError("objective does not match the moment dimension");
  }

  Layout layout;
  layout.moment_dim = prob.dim;
  layout.slack_count = prob.localizers.size();
  layout.slack_dim = prob.localizers.empty() ? 0 : static_cast<Eigen::Index>(prob.localizers.front().base.size());

  const AffineProjector projector = make_projector(prob, layout);
  // The iteration runs on the objective scaled to unit Frobenius norm.
  const double cost_scale = prob.objective.norm();
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(layout.size());
  if (cost_scale > 0.0) pack(prob.objective / cost_scale, cost.head(svec_size(prob.dim)));

  // Over-relaxed Douglas-Rachford on the state t: z = P_cone(t),
  // x = P_affine(2z - t + c/rho), t <- t + alpha (x - z). The scaled dual
  // variable is t - z.
  const double alpha = params.relaxation;
  double rho = 1.0;
  Eigen::VectorXd t = Eigen::VectorXd::Zero(layout.size());
  Eigen::VectorXd z(layout.size());
  Eigen::VectorXd x(layout.size());
  AndersonAccelerator anderson(layout.size());
  Eigen::VectorXd fallback;  // plain iterate to fall back on after a rejected extrapolation
  double reference_residual = std::numeric_limits<double>::infinity();

  SdpSolution sol;
  KktResiduals kkt;
  for (int it = 1; it <= params.max_iters; ++it) {
    z = t;
    project_cone(z, layout);
    x = 2.0 * z - t + cost / rho;
    projector.project(x);
    const Eigen::VectorXd step = alpha * (x - z);
    const double residual = step.norm();
    sol.iterations = it;

    if (fallback.size() != 0 && residual > kSafeguardFactor * reference_residual) {
      t = std::move(fallback);
      fallback.resize(0);
      anderson.reset();
      continue;
    }
    fallback.resize(0);

    if (it % kCheckInterval == 0) {
      kkt = kkt_residuals(projector, cost, z, t, rho);
      if (kkt.primal <= params.tol && kkt.dual <= params.tol && kkt.gap * cost_scale <= params.tol) {
        sol.converged = true;
        break;
      }
      const double ratio = std::sqrt(kkt.primal / std::max(kkt.dual, 1e-300));
      if (it % kRhoUpdateInterval == 0 && (ratio > kRhoBalance || ratio < 1.0 / kRhoBalance)) {
        const double factor = std::clamp(ratio, 1e-3, 1e3);
        rho *= factor;
        t = z + (t - z) / factor;
        anderson.reset();
        reference_residual = std::numeric_limits<double>::infinity();
        continue;
      }
    }

    Eigen::VectorXd next = t + step;
    reference_residual = residual;
    if (anderson.push(t, step)) {
      fallback = next;
      next = anderson.extrapolate(t, step);
    }
    t = std::move(next);
  }
  sol.primal_residual = kkt.primal;
  sol.dual_residual = kkt.dual * cost_scale;
  sol.duality_gap = kkt.gap * cost_scale;

  sol.moment = unpack(z.head(svec_size(prob.dim)), prob.dim);
  sol.value = (prob.objective.array() * sol.moment.array()).sum();
  sol.equality_residual = equality_residual(sol.moment, prob);
  sol.localizer_min_eig_slack = 0.0;
  for (std::size_t l = 0; l < prob.localizers.size(); ++l) {
    const double slack = min_eigenvalue(localizer_slack(sol.moment, prob.localizers[l]));
    sol.localizer_min_eig_slack = l == 0 ? slack : std::min(sol.localizer_min_eig_slack, slack);
  }
  return sol;
}

SdpSolution fcb_solve(const Polynomial& p, int d, const SdpParams& params) {
  return solve_sdp(build_fcb_sdp(p, d), params);
}

double fcb_norm(const Polynomial& p, int d, const SdpParams& params) { return fcb_solve(p, d, params).value; }

Witness extract_witness(const SdpSolution& sol, const SdpProblem& prob) {
  if (sol.moment.rows() != prob.dim) throw DimensionError("solution does not belong to this problem");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sol.moment);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < prob.dim; ++k) {
    if (eig.eigenvalues()(k) >= kRankThreshold) kept.push_back(k);
  }
  if (kept.empty()) throw ExtractionError("moment matrix is numerically zero");
  const auto rank = static_cast<Eigen::Index>(kept.size());
  // Row k of `vectors` is the vector attached to moment index k.
  Eigen::MatrixXd vectors(prob.dim, rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    vectors.col(c) = eig.eigenvectors().col(kept[c]) * std::sqrt(eig.eigenvalues()(kept[c]));
  }

  Witness w;
  w.d = prob.d;
  w.u = vectors.row(0).transpose();
  w.v = vectors.row(1).transpose();
  w.A.assign(prob.n + 1, Eigen::MatrixXd::Zero(rank, rank));
  for (const auto& loc : prob.localizers) {
    const auto k = static_cast<Eigen::Index>(loc.base.size());
    Eigen::MatrixXd from(rank, k);
    Eigen::MatrixXd to(rank, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      from.col(c) = vectors.row(loc.base[c]).transpose();
      to.col(c) = vectors.row(loc.shifted[c]).transpose();
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(from, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    Eigen::VectorXd inverse = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index c = 0; c < sigma.size(); ++c) {
      if (sigma(c) * sigma(c) >= kRankThreshold) inverse(c) = 1.0 / sigma(c);
    }
    Eigen::MatrixXd a = to * svd.matrixV() * inverse.asDiagonal() * svd.matrixU().transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> asvd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double excess = asvd.singularValues()(0) - 1.0;
    if (excess > kClampableExcess) {
      throw ExtractionError("A(" + std::to_string(loc.letter) + ") exceeds norm 1 by " + std::to_string(excess) +
                            "; solve to a tighter tolerance");
    }
    if (excess > 0.0) {
      const Eigen::VectorXd clamped = asvd.singularValues().cwiseMin(1.0);
      a = asvd.matrixU() * clamped.asDiagonal() * asvd.matrixV().transpose();
    }
    w.A[loc.letter - 1] = std::move(a);
  }
  return w;
}

}  // namespace fcblab
