#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fcblab/behavior.hpp"
#include "fcblab/certificates.hpp"
#include "fcblab/checks.hpp"
#include "fcblab/errors.hpp"
#include "fcblab/io.hpp"
#include "fcblab/polynomial.hpp"
#include "fcblab/query.hpp"
#include "fcblab/sdp.hpp"

namespace {

using fcblab::Json;

constexpr int kExitFailure = 1;
constexpr int kExitError = 2;

std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int analyze(const std::string& path, const std::string& format, const std::vector<int>& point, int budget) {
  const fcblab::Polynomial p = fcblab::load_polynomial(path);
  if (!point.empty() && static_cast<int>(point.size()) != p.n()) {
    throw fcblab::DimensionError("--point needs n = " + std::to_string(p.n()) + " entries");
  }
  const fcblab::Statistics st = fcblab::statistics(p);
  const bool tabulate = p.n() <= fcblab::kMaxTableVariables;
  const double sup = tabulate ? fcblab::sup_norm_bruteforce(p) : std::nan("");
  const double l1 = fcblab::spectral_l1(p);

  std::optional<fcblab::GreedyResult> greedy;
  if (!point.empty()) greedy = fcblab::greedy_simulate(p, point, budget < 0 ? p.n() : budget);

  if (format == "csv") {
    std::cout << "quantity,value\n";
    std::cout << "n," << p.n() << "\n";
    std::cout << "degree," << p.degree() << "\n";
    std::cout << "homogeneous," << (p.is_homogeneous() ? 1 : 0) << "\n";
    std::cout << "variance," << csv_number(st.variance) << "\n";
    for (std::size_t k = 0; k < st.influences.size(); ++k) {
      std::cout << "influence_" << k + 1 << "," << csv_number(st.influences[k]) << "\n";
    }
    std::cout << "max_influence," << csv_number(st.max_influence) << "\n";
    std::cout << "argmax_variable," << st.argmax_variable << "\n";
    if (tabulate) std::cout << "sup_norm," << csv_number(sup) << "\n";
    std::cout << "spectral_l1," << csv_number(l1) << "\n";
    if (greedy) {
      std::cout << "greedy_estimate," << csv_number(greedy->estimate) << "\n";
      std::cout << "greedy_queries," << greedy->queried.size() << "\n";
      std::cout << "greedy_residual_variance," << csv_number(greedy->residual_variance) << "\n";
    }
    return 0;
  }

  Json out = {{"n", p.n()},
              {"degree", p.degree()},
              {"homogeneous", p.is_homogeneous()},
              {"variance", st.variance},
              {"influences", st.influences},
              {"max_influence", st.max_influence},
              {"argmax_variable", st.argmax_variable}};
  out["sup_norm"] = tabulate ? Json(sup) : Json(nullptr);
  out["spectral_l1"] = l1;
  if (greedy) {
    out["greedy"] = {{"estimate", greedy->estimate},
                     {"queried", greedy->queried},
                     {"residual_variance", greedy->residual_variance}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int fcb(const std::string& path, int d, double tol, int max_iters, const std::string& witness_out) {
  const fcblab::Polynomial p = fcblab::load_polynomial(path);
  const fcblab::SdpProblem prob = fcblab::build_fcb_sdp(p, d);
  const fcblab::SdpSolution sol = fcblab::solve_sdp(prob, {.tol = tol, .max_iters = max_iters});
  Json out = {{"d", d},
              {"dim", prob.dim},
              {"value", sol.value},
              {"converged", sol.converged},
              {"iterations", sol.iterations},
              {"primal_residual", sol.primal_residual},
              {"dual_residual", sol.dual_residual},
              {"duality_gap", sol.duality_gap},
              {"equality_residual", sol.equality_residual},
              {"localizer_min_eig_slack", sol.localizer_min_eig_slack}};
  int status = sol.converged ? 0 : kExitFailure;
  if (!witness_out.empty()) {
    try {
      const fcblab::Witness w = fcblab::extract_witness(sol, prob);
      const fcblab::BehaviorReport bb = fcblab::verify_bb(w, fcblab::kExtractedWitnessTolerance);
      fcblab::save_json_file(witness_out, fcblab::to_json(w));
      out["witness"] = {{"path", witness_out},
                        {"m", w.m()},
                        {"value", fcblab::evaluate_on_witness(p, w)},
                        {"max_relation_violation", bb.max_relation_violation},
                        {"max_contraction_excess", bb.max_contraction_excess},
                        {"unit_norm_error", bb.unit_norm_error},
                        {"pass", bb.pass}};
      if (!bb.pass) status = kExitFailure;
    } catch (const fcblab::ExtractionError& e) {
      out["witness"] = {{"error", e.what()}};
      status = kExitFailure;
    }
  }
  std::cout << out.dump(2) << "\n";
  return status;
}

int witness(const std::string& kind_name, const std::string& path, const std::string& out_path, int s) {
  const fcblab::CertificateKind kind = fcblab::certificate_kind_from_string(kind_name);
  fcblab::InfluenceCertificate cert;
  Json summary;
  if (kind == fcblab::CertificateKind::kHomogeneousFcb) {
    cert = fcblab::homogeneous_fcb_witness(fcblab::load_polynomial(path));
    const fcblab::BehaviorReport bb = fcblab::verify_bb(cert.fcb_witness(), fcblab::kConstructedWitnessTolerance);
    summary = {{"m", cert.fcb_witness().m()},
               {"max_relation_violation", bb.max_relation_violation},
               {"max_contraction_excess", bb.max_contraction_excess},
               {"unit_norm_error", bb.unit_norm_error},
               {"pass", bb.pass}};
  } else {
    const fcblab::BmlPolynomial p = fcblab::load_bml_polynomial(path);
    cert = kind == fcblab::CertificateKind::kBmlHomogeneous ? fcblab::bml_homogeneous_witness(p, s)
                                                            : fcblab::bml_general_witness(p);
    double sigma = 0.0;
    for (const auto& family : cert.bml_witness().blocks) {
      for (const auto& a : family) sigma = std::max(sigma, fcblab::contraction_check(a, 0.0).sigma_max);
    }
    const bool pass = sigma <= 1.0 + fcblab::kConstructedWitnessTolerance;
    summary = {{"m", cert.bml_witness().u.size()}, {"sigma_max", sigma}, {"pass", pass}};
  }
  fcblab::save_json_file(out_path, fcblab::to_json(cert));
  summary["kind"] = std::string(fcblab::to_string(cert.kind));
  summary["certified_value"] = cert.certified_value;
  summary["implied_bound"] = cert.implied_bound;
  summary["s_or_D"] = cert.s_or_D;
  summary["out"] = out_path;
  std::cout << summary.dump(2) << "\n";
  return summary["pass"].get<bool>() ? 0 : kExitFailure;
}

int simulate(int n, int queries, int workspace, std::uint64_t seed, bool check) {
  const fcblab::QueryAlgorithm alg = fcblab::random_algorithm(n, queries, workspace, seed);
  Json out;
  int status = 0;
  if (check) {
    const fcblab::CharacterizationReport r = fcblab::check_characterization(alg, 1e-3);
    out = fcblab::to_json(r.polynomial);
    out["validation"] = {{"degree", r.polynomial.degree()},
                         {"degree_ok", r.degree_ok},
                         {"fcb_degree", 2 * queries},
                         {"fcb_value", r.fcb_value},
                         {"fcb_ok", r.fcb_ok},
                         {"solver_converged", r.solver_converged}};
    if (!r.degree_ok || !r.fcb_ok || !r.solver_converged) status = kExitFailure;
  } else {
    const fcblab::Polynomial p = fcblab::extract_polynomial(alg);
    out = fcblab::to_json(p);
    out["validation"] = {{"degree", p.degree()}, {"degree_ok", p.degree() <= 2 * queries}};
  }
  std::cout << out.dump(2) << "\n";
  return status;
}

int check(const std::string& suite, std::uint64_t seed) {
  const fcblab::SuiteReport report = fcblab::run_suite(suite, seed);
  std::cout << fcblab::format_csv(report);
  std::cerr << fcblab::format_summary(report);
  return report.pass() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier completely bounded norms of Boolean polynomials"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string path;
  std::vector<int> point;
  int budget = -1;
  auto* analyze_cmd = app.add_subcommand("analyze", "Degree, variance, influences and norms of a polynomial");
  analyze_cmd->add_option("path", path, "Polynomial file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_option("--point", point, "Sign vector for a greedy simulation run")->delimiter(',');
  analyze_cmd->add_option("--budget", budget, "Greedy query budget (default n)");

  int d = 1;
  double tol = 1e-6;
  int max_iters = fcblab::SdpParams{}.max_iters;
  std::string witness_out;
  auto* fcb_cmd = app.add_subcommand("fcb", "Solve the moment SDP for the fcb d-norm");
  fcb_cmd->add_option("path", path, "Polynomial file")->required()->check(CLI::ExistingFile);
  fcb_cmd->add_option("--d", d, "Degree of the norm")->required()->check(CLI::NonNegativeNumber);
  fcb_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
  fcb_cmd->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  fcb_cmd->add_option("--extract-witness", witness_out, "Write a witness extracted from the solution");

  std::string kind;
  std::string out_path;
  int block = 1;
  auto* witness_cmd = app.add_subcommand("witness", "Build an influence certificate");
  witness_cmd->add_option("--kind", kind, "fcb, bml-hom or bml-gen")
      ->required()
      ->check(CLI::IsMember({"fcb", "bml-hom", "bml-gen"}));
  witness_cmd->add_option("path", path, "Polynomial file (BML format for bml kinds)")
      ->required()
      ->check(CLI::ExistingFile);
  witness_cmd->add_option("--out", out_path, "Certificate output file")->required();
  witness_cmd->add_option("--s", block, "Block for bml-hom");

  int n = 2;
  int queries = 1;
  int workspace = 1;
  std::uint64_t seed = fcblab::kDefaultCheckSeed;
  bool with_check = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "Extract the polynomial of a random query algorithm");
  simulate_cmd->add_option("--n", n, "Input bits")->required()->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--queries", queries, "Number of queries")->required()->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--workspace", workspace, "Workspace dimension")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", seed, "Random seed")->required();
  simulate_cmd->add_flag("--check", with_check, "Also check degree <= 2d and fcb <= 1");

  std::string suite;
  auto* check_cmd = app.add_subcommand(
      "check",
      "Run a randomized property suite.\n"
      "CSV columns: instance,quantity,lhs,rhs,margin. Each row asserts lhs <= rhs\n"
      "with tolerance folded into rhs; margin = rhs - lhs. Per-quantity counts go to stderr.");
  check_cmd->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(fcblab::suite_names()));
  check_cmd->add_option("--seed", seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return analyze(path, format, point, budget);
    if (*fcb_cmd) return fcb(path, d, tol, max_iters, witness_out);
    if (*witness_cmd) return witness(kind, path, out_path, block);
    if (*simulate_cmd) return simulate(n, queries, workspace, seed, with_check);
    if (*check_cmd) return check(suite, seed);
  } catch (const fcblab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
