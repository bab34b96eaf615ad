#include "fcblab/certificates.hpp"

#include <cmath>
#include <map>
#include <string>

#include "fcblab/errors.hpp"
#include "fcblab/linalg.hpp"

namespace fcblab {
namespace {

// Every subset of [n] with at most max_size elements, lexicographic.
std::map<Subset, Eigen::Index> small_subsets(int n, int max_size, Eigen::Index first_index) {
  std::map<Subset, Eigen::Index> out;
  Subset current;
  auto recurse = [&](auto&& self, int next) -> void {
    out.emplace(current, 0);
    if (static_cast<int>(current.size()) == max_size) return;
    for (int k = next; k <= n; ++k) {
      current.push_back(k);
      self(self, k + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 1);
  Eigen::Index idx = first_index;
  for (auto& [s, i] : out) i = idx++;
  return out;
}

// Keys over the consecutive blocks first..last, every index choice.
void add_block_range_keys(int n, int first, int last, std::map<BlockKey, Eigen::Index>& out) {
  BlockKey key;
  auto recurse = [&](auto&& self, int block) -> void {
    if (block > last) {
      out.emplace(key, 0);
      return;
    }
    for (int i = 1; i <= n; ++i) {
      key.push_back({block, i});
      self(self, block + 1);
      key.pop_back();
    }
  };
  recurse(recurse, first);
}

// Keys with 1..max_size variables from distinct, increasing blocks.
void add_partial_keys(int n, int d, int max_size, std::map<BlockKey, Eigen::Index>& out) {
  BlockKey key;
  auto recurse = [&](auto&& self, int next_block) -> void {
    if (!key.empty()) out.emplace(key, 0);
    if (static_cast<int>(key.size()) == max_size) return;
    for (int b = next_block; b <= d; ++b) {
      for (int i = 1; i <= n; ++i) {
        key.push_back({b, i});
        self(self, b + 1);
        key.pop_back();
      }
    }
  };
  recurse(recurse, 1);
}

void number_keys(std::map<BlockKey, Eigen::Index>& keys, Eigen::Index first_index) {
  Eigen::Index idx = first_index;
  for (auto& [k, i] : keys) i = idx++;
}

Eigen::VectorXd basis_vector(Eigen::Index m, Eigen::Index i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e(i) = 1.0;
  return e;
}

}  // namespace

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::kHomogeneousFcb:
      return "fcb";
    case CertificateKind::kBmlHomogeneous:
      return "bml-hom";
    case CertificateKind::kBmlGeneral:
      return "bml-gen";
  }
  return "unknown";
}

CertificateKind certificate_kind_from_string(std::string_view name) {
  if (name == "fcb" || name == "homogeneous_fcb") return CertificateKind::kHomogeneousFcb;
  if (name == "bml-hom" || name == "bml_homogeneous") return CertificateKind::kBmlHomogeneous;
  if (name == "bml-gen" || name == "bml_general") return CertificateKind::kBmlGeneral;
  throw ParameterError("unknown certificate kind '" + std::string(name) + "'");
}

ContractionReport contraction_check(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() != a.cols()) throw DimensionError("contraction check expects a square matrix");
  ContractionReport r;
  r.sigma_max = largest_singular_value(a);
  r.pass = r.sigma_max <= 1.0 + tol;
  return r;
}

InfluenceCertificate homogeneous_fcb_witness(const Polynomial& p) {
  const Statistics st = statistics(p);
  if (st.variance == 0.0) throw DegenerateInputError("polynomial has zero variance");
  if (!p.is_homogeneous()) throw StructureError("polynomial is not homogeneous");
  const int n = p.n();
  const int d = p.degree();

  // Basis: v at 0, then f_S for |S| <= d-1.
  const auto f = small_subsets(n, d - 1, 1);
  const Eigen::Index m = 1 + static_cast<Eigen::Index>(f.size());
  const double scale = 1.0 / std::sqrt(st.max_influence);

  Witness w;
  w.d = d;
  w.u = basis_vector(m, f.at({}));
  w.v = basis_vector(m, 0);
  w.A.assign(n + 1, Eigen::MatrixXd::Zero(m, m));
  for (const auto& [s, c] : p.coeffs()) {
    if (c == 0.0) continue;
    for (int i : s) {
      Subset rest;
      for (int k : s) {
        if (k != i) rest.push_back(k);
      }
      w.A[i - 1](f.at(rest), 0) += c * scale;
    }
  }
  for (const auto& [s, col] : f) {
    for (int i : s) {
      Subset rest;
      for (int k : s) {
        if (k != i) rest.push_back(k);
      }
      w.A[i - 1](f.at(rest), col) = 1.0;
    }
  }

  InfluenceCertificate cert;
  cert.kind = CertificateKind::kHomogeneousFcb;
  cert.certified_value = evaluate_on_witness(p, w);
  cert.implied_bound = st.variance * st.variance;
  cert.s_or_D = d;
  cert.witness = std::move(w);
  return cert;
}

InfluenceCertificate bml_homogeneous_witness(const BmlPolynomial& p, int s) {
  const int n = p.n();
  const int d = p.d();
  if (s < 1 || s > d) throw IndexError("block index s must lie in [1, d]");
  for (const auto& [key, c] : p.coeffs()) {
    if (c != 0.0 && static_cast<int>(key.size()) != d) {
      throw StructureError("polynomial is not homogeneous of degree d");
    }
  }
  const BmlStatistics st = statistics(p);
  if (st.variance == 0.0) throw DegenerateInputError("polynomial has zero variance");

  // e-vectors: suffix sets over blocks r..d with r >= s+1 (plus e_empty);
  // f-vectors: prefix sets over blocks 1..r with r <= s-1 (plus f_empty).
  std::map<BlockKey, Eigen::Index> e{{{}, 0}};
  for (int r = s + 1; r <= d; ++r) add_block_range_keys(n, r, d, e);
  number_keys(e, 0);
  std::map<BlockKey, Eigen::Index> f{{{}, 0}};
  for (int r = 1; r <= s - 1; ++r) add_block_range_keys(n, 1, r, f);
  const auto f_offset = static_cast<Eigen::Index>(e.size());
  number_keys(f, f_offset);
  const Eigen::Index m = f_offset + static_cast<Eigen::Index>(f.size());

  const auto& block_inf = st.influences[s - 1];
  std::vector<Eigen::MatrixXd> a(n, Eigen::MatrixXd::Zero(m, m));
  for (const auto& [key, col] : e) {
    const int size = static_cast<int>(key.size());
    if (size >= d - s) continue;
    for (int i = 1; i <= n; ++i) {
      BlockKey grown{{d - size, i}};
      grown.insert(grown.end(), key.begin(), key.end());
      a[i - 1](e.at(grown), col) = 1.0;
    }
  }
  for (const auto& [key, c] : p.coeffs()) {
    if (c == 0.0) continue;
    const int i = key[s - 1].index;
    const BlockKey prefix(key.begin(), key.begin() + (s - 1));
    const BlockKey suffix(key.begin() + s, key.end());
    a[i - 1](f.at(prefix), e.at(suffix)) = c / std::sqrt(block_inf[i - 1]);
  }
  for (const auto& [key, col] : f) {
    if (key.empty()) continue;
    const BlockKey shorter(key.begin(), key.end() - 1);
    a[key.back().index - 1](f.at(shorter), col) = 1.0;
  }

  BmlWitness w;
  w.u = basis_vector(m, f.at({}));
  w.v = basis_vector(m, e.at({}));
  w.blocks.assign(d, a);

  InfluenceCertificate cert;
  cert.kind = CertificateKind::kBmlHomogeneous;
  cert.certified_value = evaluate_bml_on_matrices(p, w.u, w.v, w.blocks);
  cert.implied_bound = st.variance * st.variance;
  cert.s_or_D = s;
  cert.witness = std::move(w);
  return cert;
}

InfluenceCertificate bml_general_witness(const BmlPolynomial& p) {
  const int n = p.n();
  const int d = p.d();
  const double total_variance = variance(p);
  if (total_variance == 0.0) throw DegenerateInputError("polynomial has zero variance");

  int best_degree = 1;
  double best_variance = -1.0;
  for (int s = 1; s <= d; ++s) {
    const double v = variance(degree_part(p, s));
    if (v > best_variance) {
      best_variance = v;
      best_degree = s;
    }
  }
  const int D = best_degree;
  const BmlPolynomial part = degree_part(p, D);
  const BmlStatistics st = statistics(part);
  const double scale = 1.0 / std::sqrt(st.max_influence);

  // Basis: v at 0, f_empty at 1, then f_S for 1 <= |S| <= D-1.
  std::map<BlockKey, Eigen::Index> f{{{}, 0}};
  add_partial_keys(n, d, D - 1, f);
  number_keys(f, 1);
  const Eigen::Index m = 1 + static_cast<Eigen::Index>(f.size());

  BmlWitness w;
  w.u = basis_vector(m, f.at({}));
  w.v = basis_vector(m, 0);
  w.blocks.assign(d, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(m, m)));
  for (const auto& [key, c] : part.coeffs()) {
    if (c == 0.0) continue;
    for (std::size_t k = 0; k < key.size(); ++k) {
      BlockKey rest(key);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      w.blocks[key[k].block - 1][key[k].index - 1](f.at(rest), 0) += c * scale;
    }
  }
  for (const auto& [key, col] : f) {
    for (std::size_t k = 0; k < key.size(); ++k) {
      BlockKey rest(key);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      w.blocks[key[k].block - 1][key[k].index - 1](f.at(rest), col) = 1.0;
    }
  }

  InfluenceCertificate cert;
  cert.kind = CertificateKind::kBmlGeneral;
  cert.certified_value = evaluate_bml_on_matrices(part, w.u, w.v, w.blocks);
  cert.implied_bound = (total_variance / d) * (total_variance / d);
  cert.s_or_D = D;
  cert.witness = std::move(w);
  return cert;
}

BmlWitness degree_extraction_embed(const BmlWitness& w, int D, int d) {
  if (D < 1 || D > d) throw ParameterError("extraction degree D must lie in [1, d]");
  if (static_cast<int>(w.blocks.size()) != d) throw DimensionError("witness must carry d matrix families");
  const Eigen::Index k = D + 1;
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index s = 0; s < D; ++s) shift(s, s + 1) = 1.0;

  auto kron = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
      }
    }
    return out;
  };

  BmlWitness out;
  out.u = kron(w.u, basis_vector(k, 0));
  out.v = kron(w.v, basis_vector(k, D));
  out.blocks.reserve(w.blocks.size());
  for (const auto& block : w.blocks) {
    std::vector<Eigen::MatrixXd> embedded;
    embedded.reserve(block.size());
    for (const auto& a : block) embedded.push_back(kron(a, shift));
    out.blocks.push_back(std::move(embedded));
  }
  return out;
}

}  // namespace fcblab
