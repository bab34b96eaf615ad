#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "fcblab/behavior.hpp"
#include "fcblab/bml.hpp"
#include "fcblab/polynomial.hpp"

namespace fcblab {

enum class CertificateKind { kHomogeneousFcb, kBmlHomogeneous, kBmlGeneral };

std::string_view to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(std::string_view name);

// Vectors and per-block matrix families substituted into a block-multilinear
// polynomial.
struct BmlWitness {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  BlockMatrices blocks;
};

// An explicit matrix triple together with the value it achieves. With a norm
// bound of 1, implied_bound is the resulting lower bound on the maximum
// influence.
struct InfluenceCertificate {
  CertificateKind kind = CertificateKind::kHomogeneousFcb;
  std::variant<Witness, BmlWitness> witness;
  double certified_value = 0.0;
  double implied_bound = 0.0;
  int s_or_D = 0;  // degree d, chosen block s, or extracted degree D

  const Witness& fcb_witness() const { return std::get<Witness>(witness); }
  const BmlWitness& bml_witness() const { return std::get<BmlWitness>(witness); }
};

struct ContractionReport {
  double sigma_max = 0.0;
  bool pass = false;
};

ContractionReport contraction_check(const Eigen::MatrixXd& a, double tol);

// Creation/annihilation triple for a homogeneous degree-d polynomial, with
// Boolean behavior of degree d and value Var[p] / sqrt(MaxInf[p]).
InfluenceCertificate homogeneous_fcb_witness(const Polynomial& p);

// Triple for a homogeneous block-multilinear polynomial whose value is the
// root influence sum over block s. One matrix family is shared by all blocks.
InfluenceCertificate bml_homogeneous_witness(const BmlPolynomial& p, int s);

// Certificate for the degree part p_{=D} of largest variance, with value
// Var[p_{=D}] / sqrt(MaxInf[p_{=D}]).
InfluenceCertificate bml_general_witness(const BmlPolynomial& p);

// Tensor every matrix with the nilpotent shift on R^{D+1} so that evaluating
// the full polynomial keeps only its degree-D part.
BmlWitness degree_extraction_embed(const BmlWitness& w, int D, int d);

}  // namespace fcblab
