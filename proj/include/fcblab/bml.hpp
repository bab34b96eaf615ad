#pragma once

#include <compare>
#include <map>
#include <utility>
#include <vector>

namespace fcblab {

// Variable x_block(index) of a block-multilinear polynomial; both 1-based.
struct BlockVar {
  int block = 1;
  int index = 1;
  friend auto operator<=>(const BlockVar&, const BlockVar&) = default;
};

// Monomial key: at most one variable per block, blocks strictly increasing.
using BlockKey = std::vector<BlockVar>;

// Real polynomial on ({-1,1}^n)^d in which every monomial touches each block
// at most once.
class BmlPolynomial {
 public:
  BmlPolynomial() = default;
  BmlPolynomial(int n, int d);
  // Throws IndexError for out-of-range pairs and StructureError when blocks
  // are not strictly increasing.
  BmlPolynomial(int n, int d, std::map<BlockKey, double> coeffs);
  static BmlPolynomial from_terms(int n, int d,
                                  const std::vector<std::pair<BlockKey, double>>& terms);

  int n() const { return n_; }
  int d() const { return d_; }
  const std::map<BlockKey, double>& coeffs() const { return coeffs_; }
  double coeff(const BlockKey& key) const;

  int degree() const;
  bool is_homogeneous() const;

  friend bool operator==(const BmlPolynomial&, const BmlPolynomial&) = default;

 private:
  int n_ = 0;
  int d_ = 0;
  std::map<BlockKey, double> coeffs_;
};

struct BmlStatistics {
  double variance = 0.0;
  // influences[b-1][i-1] is Inf_{b,i}.
  std::vector<std::vector<double>> influences;
  double max_influence = 0.0;
  BlockVar argmax{1, 1};
};

// x[b-1] is the sign vector of block b.
double evaluate(const BmlPolynomial& p, const std::vector<std::vector<int>>& x);
BmlStatistics statistics(const BmlPolynomial& p);
double variance(const BmlPolynomial& p);
BmlPolynomial degree_part(const BmlPolynomial& p, int s);

}  // namespace fcblab
