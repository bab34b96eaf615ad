#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace fcblab {

// Sorted, duplicate-free set of 1-based variable indices.
using Subset = std::vector<int>;

// Entries are +1 or -1; x[k] is the value of variable k+1.
using SignVector = std::vector<int>;

// Multilinear real polynomial on {-1,1}^n held as its Fourier coefficients.
//
// Points of the hypercube are also addressed by bitmask: bit k is set iff
// x(k+1) = -1. Truth tables are indexed the same way.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n);
  // Throws IndexError for a key outside [n] and StructureError for an
  // unsorted or repeated key.
  Polynomial(int n, std::map<Subset, double> coeffs);
  // As above, additionally rejecting duplicate keys.
  static Polynomial from_terms(int n, const std::vector<std::pair<Subset, double>>& terms);

  int n() const { return n_; }
  const std::map<Subset, double>& coeffs() const { return coeffs_; }
  double coeff(const Subset& s) const;

  bool is_zero() const;
  int degree() const;
  bool is_homogeneous() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  int n_ = 0;
  std::map<Subset, double> coeffs_;
};

struct Statistics {
  double variance = 0.0;
  std::vector<double> influences;  // influences[k] is Inf_{k+1}
  double max_influence = 0.0;
  int argmax_variable = 1;  // 1-based, smallest index among ties
};

struct GreedyResult {
  double estimate = 0.0;
  std::vector<int> queried;  // 1-based indices into the original variables
  double residual_variance = 0.0;
};

// Largest n for which full truth tables are materialised.
inline constexpr int kMaxTableVariables = 20;

SignVector sign_vector(int n, std::uint32_t mask);
std::uint32_t subset_mask(const Subset& s);
Subset mask_subset(std::uint32_t mask);

Polynomial fourier_transform(int n, std::span<const double> values);
std::vector<double> truth_table(const Polynomial& p);

double evaluate(const Polynomial& p, std::span<const int> x);
Statistics statistics(const Polynomial& p);
double variance(const Polynomial& p);
double sup_norm_bruteforce(const Polynomial& p);
double spectral_l1(const Polynomial& p);

Polynomial restrict(const Polynomial& p, int i, int y);
Polynomial degree_part(const Polynomial& p, int s);

GreedyResult greedy_simulate(const Polynomial& p, std::span<const int> y, int budget);

}  // namespace fcblab
