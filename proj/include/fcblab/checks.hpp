#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fcblab/bml.hpp"
#include "fcblab/polynomial.hpp"

namespace fcblab {

inline constexpr std::uint64_t kDefaultCheckSeed = 20240101;

// Random polynomial with every subset of size <= max_degree present with
// probability density, coefficients uniform in [-1, 1].
Polynomial random_polynomial(int n, int max_degree, double density, std::mt19937_64& rng);
// Nonzero homogeneous polynomial of degree d scaled to unit variance.
Polynomial random_homogeneous(int n, int d, std::mt19937_64& rng);
// Block-multilinear polynomial; homogeneous ones use only full keys.
BmlPolynomial random_bml(int n, int d, bool homogeneous, std::mt19937_64& rng);

// Zero, a constant and a single monomial, all on two variables.
std::vector<std::pair<std::string, Polynomial>> edge_case_corpus();

// One checked inequality lhs <= rhs; tolerances are folded into rhs and
// margin = rhs - lhs. Informational rows never fail.
struct CheckRow {
  std::string instance;
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool informational = false;

  bool pass() const { return informational || margin >= 0.0; }
};

struct SuiteReport {
  std::vector<CheckRow> rows;

  bool pass() const;
  int failures() const;
};

const std::vector<std::string>& suite_names();

// Throws ParameterError for an unknown suite; "all" runs every suite in
// order.
SuiteReport run_suite(std::string_view name, std::uint64_t seed = kDefaultCheckSeed);

// Header "instance,quantity,lhs,rhs,margin" followed by one line per row.
std::string format_csv(const SuiteReport& report);
// One line per quantity: "<quantity>: <passed>/<total>".
std::string format_summary(const SuiteReport& report);

}  // namespace fcblab
