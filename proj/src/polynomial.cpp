#include "fcblab/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "fcblab/errors.hpp"

namespace fcblab {
namespace {

void validate_subset(int n, const Subset& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 1 || s[k] > n) {
      throw IndexError("variable index " + std::to_string(s[k]) + " outside [1, " +
                       std::to_string(n) + "]");
    }
    if (k > 0 && s[k] <= s[k - 1]) {
      throw StructureError("subset not sorted");
    }
  }
}

void check_table_size(int n) {
  if (n < 0 || n > kMaxTableVariables) {
    throw CapacityError("hypercube of dimension " + std::to_string(n) + " exceeds the limit of " +
                        std::to_string(kMaxTableVariables));
  }
}

// In-place unnormalised Walsh-Hadamard transform.
void walsh_hadamard(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = a[j];
        const double y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

void check_sign_vector(int n, std::span<const int> x) {
  if (static_cast<int>(x.size()) != n) {
    throw DimensionError("sign vector has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(n));
  }
  for (int v : x) {
    if (v != 1 && v != -1) throw ParameterError("sign vector entries must be +1 or -1");
  }
}

}  // namespace

Polynomial::Polynomial(int n) : n_(n) {
  if (n < 0) throw ParameterError("number of variables must be nonnegative");
}

Polynomial::Polynomial(int n, std::map<Subset, double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  if (n < 0) throw ParameterError("number of variables must be nonnegative");
  for (const auto& [s, c] : coeffs_) validate_subset(n_, s);
}

Polynomial Polynomial::from_terms(int n, const std::vector<std::pair<Subset, double>>& terms) {
  std::map<Subset, double> coeffs;
  for (const auto& [s, c] : terms) {
    if (!coeffs.emplace(s, c).second) throw StructureError("duplicate subset key");
  }
  return Polynomial(n, std::move(coeffs));
}

double Polynomial::coeff(const Subset& s) const {
  auto it = coeffs_.find(s);
  return it == coeffs_.end() ? 0.0 : it->second;
}

bool Polynomial::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second == 0.0; });
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [s, c] : coeffs_) {
    if (c != 0.0) deg = std::max(deg, static_cast<int>(s.size()));
  }
  return deg;
}

bool Polynomial::is_homogeneous() const {
  const int deg = degree();
  return std::all_of(coeffs_.begin(), coeffs_.end(), [deg](const auto& kv) {
    return kv.second == 0.0 || static_cast<int>(kv.first.size()) == deg;
  });
}

SignVector sign_vector(int n, std::uint32_t mask) {
  SignVector x(n);
  for (int k = 0; k < n; ++k) x[k] = (mask >> k) & 1U ? -1 : 1;
  return x;
}

std::uint32_t subset_mask(const Subset& s) {
  std::uint32_t mask = 0;
  for (int i : s) {
    if (i < 1 || i > 32) throw IndexError("subset element does not fit in a 32-bit mask");
    mask |= 1U << (i - 1);
  }
  return mask;
}

Subset mask_subset(std::uint32_t mask) {
  Subset s;
  for (int k = 0; mask != 0; ++k, mask >>= 1) {
    if (mask & 1U) s.push_back(k + 1);
  }
  return s;
}

Polynomial fourier_transform(int n, std::span<const double> values) {
  check_table_size(n);
  const std::size_t size = std::size_t{1} << n;
  if (values.size() != size) {
    throw IncompleteTableError("truth table has " + std::to_string(values.size()) +
                               " entries, expected " + std::to_string(size));
  }
  std::vector<double> a(values.begin(), values.end());
  walsh_hadamard(a);
  const double scale = std::ldexp(1.0, -n);
  std::map<Subset, double> coeffs;
  for (std::size_t mask = 0; mask < size; ++mask) {
    const double c = a[mask] * scale;
    if (c != 0.0) coeffs.emplace(mask_subset(static_cast<std::uint32_t>(mask)), c);
  }
  return Polynomial(n, std::move(coeffs));
}

std::vector<double> truth_table(const Polynomial& p) {
  check_table_size(p.n());
  std::vector<double> a(std::size_t{1} << p.n(), 0.0);
  for (const auto& [s, c] : p.coeffs()) a[subset_mask(s)] += c;
  walsh_hadamard(a);
  return a;
}

double evaluate(const Polynomial& p, std::span<const int> x) {
  check_sign_vector(p.n(), x);
  double total = 0.0;
  for (const auto& [s, c] : p.coeffs()) {
    int sign = 1;
    for (int i : s) sign *= x[i - 1];
    total += sign * c;
  }
  return total;
}

Statistics statistics(const Polynomial& p) {
  Statistics st;
  st.influences.assign(p.n(), 0.0);
  for (const auto& [s, c] : p.coeffs()) {
    if (s.empty()) continue;
    const double sq = c * c;
    st.variance += sq;
    for (int i : s) st.influences[i - 1] += sq;
  }
  for (int k = 0; k < p.n(); ++k) {
    if (st.influences[k] > st.max_influence) {
      st.max_influence = st.influences[k];
      st.argmax_variable = k + 1;
    }
  }
  return st;
}

double variance(const Polynomial& p) {
  double v = 0.0;
  for (const auto& [s, c] : p.coeffs()) {
    if (!s.empty()) v += c * c;
  }
  return v;
}

double sup_norm_bruteforce(const Polynomial& p) {
  const auto table = truth_table(p);
  double best = 0.0;
  for (double v : table) best = std::max(best, std::abs(v));
  return best;
}

double spectral_l1(const Polynomial& p) {
  double total = 0.0;
  for (const auto& [s, c] : p.coeffs()) total += std::abs(c);
  return total;
}

Polynomial restrict(const Polynomial& p, int i, int y) {
  if (i < 1 || i > p.n()) {
    throw IndexError("restriction index " + std::to_string(i) + " outside [1, " +
                     std::to_string(p.n()) + "]");
  }
  if (y != 1 && y != -1) throw ParameterError("restriction value must be +1 or -1");
  std::map<Subset, double> out;
  for (const auto& [s, c] : p.coeffs()) {
    Subset t;
    t.reserve(s.size());
    double sign = 1.0;
    for (int k : s) {
      if (k == i) {
        sign = y;
      } else {
        t.push_back(k > i ? k - 1 : k);
      }
    }
    out[t] += sign * c;
  }
  return Polynomial(p.n() - 1, std::move(out));
}

Polynomial degree_part(const Polynomial& p, int s) {
  std::map<Subset, double> out;
  for (const auto& [key, c] : p.coeffs()) {
    if (static_cast<int>(key.size()) == s) out.emplace(key, c);
  }
  return Polynomial(p.n(), std::move(out));
}

GreedyResult greedy_simulate(const Polynomial& p, std::span<const int> y, int budget) {
  check_sign_vector(p.n(), y);
  if (budget < 0 || budget > p.n()) {
    throw ParameterError("query budget must lie in [0, n]");
  }
  std::vector<int> original(p.n());
  std::iota(original.begin(), original.end(), 1);

  GreedyResult result;
  Polynomial current = p;
  for (int step = 0; step < budget; ++step) {
    const Statistics st = statistics(current);
    if (st.variance == 0.0) break;
    const int local = st.argmax_variable;
    const int var = original[local - 1];
    result.queried.push_back(var);
    current = restrict(current, local, y[var - 1]);
    original.erase(original.begin() + (local - 1));
  }
  result.estimate = current.coeff({});
  result.residual_variance = variance(current);
  return result;
}

}  // namespace fcblab
