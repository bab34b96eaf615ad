#include "fcblab/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "fcblab/errors.hpp"
#include "fcblab/linalg.hpp"

namespace fcblab {

Subset word_class(const Word& w, int n) {
  std::vector<bool> odd(n + 1, false);
  for (int letter : w) {
    if (letter < 1 || letter > n + 1) {
      throw IndexError("letter " + std::to_string(letter) + " outside [1, " + std::to_string(n + 1) + "]");
    }
    if (letter <= n) odd[letter] = !odd[letter];
  }
  Subset s;
  for (int k = 1; k <= n; ++k) {
    if (odd[k]) s.push_back(k);
  }
  return s;
}

Word canonical_word(const Subset& s, int d, int n) {
  if (static_cast<int>(s.size()) > d) {
    throw DegreeError("subset of size " + std::to_string(s.size()) + " has no word of length " +
                      std::to_string(d));
  }
  Word w(s.begin(), s.end());
  w.resize(d, n + 1);
  return w;
}

std::size_t word_count(int n, int length) {
  std::size_t count = 1;
  for (int k = 0; k < length; ++k) {
    count *= static_cast<std::size_t>(n + 1);
    if (count > kMaxEnumeratedWords) {
      throw CapacityError("(n+1)^d exceeds the enumeration limit of " + std::to_string(kMaxEnumeratedWords));
    }
  }
  return count;
}

std::size_t word_rank(const Word& w, int n) {
  std::size_t rank = 0;
  for (int letter : w) {
    if (letter < 1 || letter > n + 1) throw IndexError("letter outside [1, n+1]");
    rank = rank * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(letter - 1);
  }
  return rank;
}

Word word_from_rank(std::size_t rank, int n, int length) {
  Word w(length);
  const auto base = static_cast<std::size_t>(n + 1);
  for (int k = length - 1; k >= 0; --k) {
    w[k] = static_cast<int>(rank % base) + 1;
    rank /= base;
  }
  return w;
}

std::vector<WordClass> enumerate_classes(int n, int d) {
  const std::size_t total = word_count(n, d);
  std::map<Subset, std::vector<Word>> groups;
  for (std::size_t r = 0; r < total; ++r) {
    Word w = word_from_rank(r, n, d);
    groups[word_class(w, n)].push_back(std::move(w));
  }
  std::vector<WordClass> out;
  out.reserve(groups.size());
  for (auto& [s, words] : groups) out.push_back({s, std::move(words)});
  return out;
}

Witness bit_string_witness(std::span<const int> x, int d) {
  Witness w;
  w.d = d;
  w.u = Eigen::VectorXd::Ones(1);
  w.v = Eigen::VectorXd::Ones(1);
  for (int xi : x) {
    if (xi != 1 && xi != -1) throw ParameterError("bit string entries must be +1 or -1");
    w.A.push_back(Eigen::MatrixXd::Constant(1, 1, xi));
  }
  w.A.push_back(Eigen::MatrixXd::Ones(1, 1));
  return w;
}

void check_witness_shape(const Witness& w) {
  const Eigen::Index m = w.u.size();
  if (w.d < 0) throw ParameterError("witness degree must be nonnegative");
  if (m == 0 || w.v.size() != m) throw DimensionError("u and v must be nonempty vectors of equal length");
  if (w.A.empty()) throw DimensionError("witness needs at least the frozen matrix A(n+1)");
  for (const auto& a : w.A) {
    if (a.rows() != m || a.cols() != m) throw DimensionError("witness matrices must be m x m");
  }
}

std::vector<double> word_correlations(const Witness& w) {
  check_witness_shape(w);
  const int n = w.n();
  const auto letters = static_cast<std::size_t>(n + 1);
  const std::size_t total = word_count(n, w.d);
  if (w.d == 0) return {w.u.dot(w.v)};

  // level holds A(w_1)...A(w_s) v for every word of length s, by rank.
  std::vector<Eigen::VectorXd> level{w.v};
  for (int s = 1; s < w.d; ++s) {
    std::vector<Eigen::VectorXd> next;
    next.reserve(level.size() * letters);
    for (std::size_t i = 0; i < letters; ++i) {
      for (const auto& x : level) next.push_back(w.A[i] * x);
    }
    level = std::move(next);
  }
  std::vector<double> out;
  out.reserve(total);
  for (std::size_t i = 0; i < letters; ++i) {
    const Eigen::VectorXd left = w.A[i].transpose() * w.u;
    for (const auto& x : level) out.push_back(left.dot(x));
  }
  return out;
}

BehaviorReport verify_bb(const Witness& w, double tol) {
  check_witness_shape(w);
  BehaviorReport report;
  report.unit_norm_error = std::max(std::abs(w.u.norm() - 1.0), std::abs(w.v.norm() - 1.0));
  for (const auto& a : w.A) {
    report.max_contraction_excess =
        std::max(report.max_contraction_excess, largest_singular_value(a) - 1.0);
  }

  const int n = w.n();
  const auto values = word_correlations(w);
  std::map<Subset, std::vector<double>> by_class;
  for (std::size_t r = 0; r < values.size(); ++r) {
    by_class[word_class(word_from_rank(r, n, w.d), n)].push_back(values[r]);
  }
  for (const auto& [s, vals] : by_class) {
    double violation = 0.0;
    if (vals.size() <= kFullPairwiseClassSize) {
      const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
      violation = *hi - *lo;
    } else {
      for (double x : vals) violation = std::max(violation, std::abs(x - vals.front()));
    }
    report.max_relation_violation = std::max(report.max_relation_violation, violation);
  }
  report.pass = report.max_relation_violation <= tol && report.max_contraction_excess <= tol &&
                report.unit_norm_error <= tol;
  return report;
}

double evaluate_on_witness(const Polynomial& p, const Witness& w) {
  check_witness_shape(w);
  if (p.n() != w.n()) {
    throw DimensionError("polynomial has " + std::to_string(p.n()) + " variables, witness has " +
                         std::to_string(w.n()));
  }
  if (p.degree() > w.d) throw DegreeError("polynomial degree exceeds witness degree");
  double total = 0.0;
  for (const auto& [s, c] : p.coeffs()) {
    if (c == 0.0) continue;
    const Word word = canonical_word(s, w.d, p.n());
    Eigen::VectorXd x = w.v;
    for (auto it = word.rbegin(); it != word.rend(); ++it) x = w.A[*it - 1] * x;
    total += c * w.u.dot(x);
  }
  return total;
}

double evaluate_bml_on_matrices(const BmlPolynomial& p, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v, const BlockMatrices& blocks) {
  const Eigen::Index m = u.size();
  if (v.size() != m) throw DimensionError("u and v must have equal length");
  if (static_cast<int>(blocks.size()) != p.d()) throw DimensionError("expected one matrix family per block");
  for (const auto& block : blocks) {
    if (static_cast<int>(block.size()) != p.n()) throw DimensionError("block has wrong number of matrices");
    for (const auto& a : block) {
      if (a.rows() != m || a.cols() != m) throw DimensionError("block matrices must be m x m");
    }
  }
  double total = 0.0;
  for (const auto& [key, c] : p.coeffs()) {
    if (c == 0.0) continue;
    Eigen::VectorXd x = v;
    for (auto it = key.rbegin(); it != key.rend(); ++it) x = blocks[it->block - 1][it->index - 1] * x;
    total += c * u.dot(x);
  }
  return total;
}

}  // namespace fcblab
