#include "fcblab/bml.hpp"

#include <algorithm>
#include <string>

#include "fcblab/errors.hpp"

namespace fcblab {
namespace {

void validate_key(int n, int d, const BlockKey& key) {
  for (std::size_t k = 0; k < key.size(); ++k) {
    const auto& [b, i] = key[k];
    if (b < 1 || b > d) throw IndexError("block label " + std::to_string(b) + " outside [1, d]");
    if (i < 1 || i > n) throw IndexError("variable index " + std::to_string(i) + " outside [1, n]");
    if (k > 0 && b <= key[k - 1].block) {
      throw StructureError("blocks within a monomial must be strictly increasing");
    }
  }
}

}  // namespace

BmlPolynomial::BmlPolynomial(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 1) throw ParameterError("block-multilinear polynomial needs n >= 1 and d >= 1");
}

BmlPolynomial::BmlPolynomial(int n, int d, std::map<BlockKey, double> coeffs)
    : BmlPolynomial(n, d) {
  coeffs_ = std::move(coeffs);
  for (const auto& [key, c] : coeffs_) validate_key(n_, d_, key);
}

BmlPolynomial BmlPolynomial::from_terms(int n, int d,
                                        const std::vector<std::pair<BlockKey, double>>& terms) {
  std::map<BlockKey, double> coeffs;
  for (const auto& [key, c] : terms) {
    if (!coeffs.emplace(key, c).second) throw StructureError("duplicate monomial key");
  }
  return BmlPolynomial(n, d, std::move(coeffs));
}

double BmlPolynomial::coeff(const BlockKey& key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int BmlPolynomial::degree() const {
  int deg = 0;
  for (const auto& [key, c] : coeffs_) {
    if (c != 0.0) deg = std::max(deg, static_cast<int>(key.size()));
  }
  return deg;
}

bool BmlPolynomial::is_homogeneous() const {
  const int deg = degree();
  return std::all_of(coeffs_.begin(), coeffs_.end(), [deg](const auto& kv) {
    return kv.second == 0.0 || static_cast<int>(kv.first.size()) == deg;
  });
}

double evaluate(const BmlPolynomial& p, const std::vector<std::vector<int>>& x) {
  if (static_cast<int>(x.size()) != p.d()) throw DimensionError("expected one sign vector per block");
  for (const auto& block : x) {
    if (static_cast<int>(block.size()) != p.n()) throw DimensionError("block sign vector has wrong length");
  }
  double total = 0.0;
  for (const auto& [key, c] : p.coeffs()) {
    double term = c;
    for (const auto& [b, i] : key) term *= x[b - 1][i - 1];
    total += term;
  }
  return total;
}

BmlStatistics statistics(const BmlPolynomial& p) {
  BmlStatistics st;
  st.influences.assign(p.d(), std::vector<double>(p.n(), 0.0));
  for (const auto& [key, c] : p.coeffs()) {
    if (key.empty()) continue;
    const double sq = c * c;
    st.variance += sq;
    for (const auto& [b, i] : key) st.influences[b - 1][i - 1] += sq;
  }
  for (int b = 0; b < p.d(); ++b) {
    for (int i = 0; i < p.n(); ++i) {
      if (st.influences[b][i] > st.max_influence) {
        st.max_influence = st.influences[b][i];
        st.argmax = {b + 1, i + 1};
      }
    }
  }
  return st;
}

double variance(const BmlPolynomial& p) {
  double v = 0.0;
  for (const auto& [key, c] : p.coeffs()) {
    if (!key.empty()) v += c * c;
  }
  return v;
}

BmlPolynomial degree_part(const BmlPolynomial& p, int s) {
  std::map<BlockKey, double> out;
  for (const auto& [key, c] : p.coeffs()) {
    if (static_cast<int>(key.size()) == s) out.emplace(key, c);
  }
  return BmlPolynomial(p.n(), p.d(), std::move(out));
}

}  // namespace fcblab
