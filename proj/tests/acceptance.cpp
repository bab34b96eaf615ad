// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fcblab/behavior.hpp"
#include "fcblab/certificates.hpp"
#include "fcblab/checks.hpp"
#include "fcblab/errors.hpp"
#include "fcblab/polynomial.hpp"
#include "fcblab/query.hpp"
#include "fcblab/sdp.hpp"
#include "oracles.hpp"

using namespace fcblab;

namespace {

constexpr std::uint64_t kSeed = 20240101;

struct Outcome {
  bool pass = true;
  std::string detail;
};

oracle::Function as_function(const Polynomial& p) {
  return [p](const oracle::Point& x) {
    double acc = 0.0;
    for (const auto& [s, c] : p.coeffs()) {
      double chi = c;
      for (int i : s) chi *= x[i - 1];
      acc += chi;
    }
    return acc;
  };
}

double oracle_max_influence(const Polynomial& p) {
  double best = 0.0;
  for (int i = 1; i <= p.n(); ++i) best = std::max(best, oracle::influence(p.n(), as_function(p), i));
  return best;
}

double sum_abs(const Polynomial& p) {
  double acc = 0.0;
  for (const auto& [s, c] : p.coeffs()) acc += std::abs(c);
  return acc;
}

double oracle_sup(const Polynomial& p) {
  double best = 0.0;
  for (unsigned m = 0; m < (1u << p.n()); ++m) best = std::max(best, std::abs(as_function(p)(oracle::point(p.n(), m))));
  return best;
}

// Inf_{b,i} and variance straight from the coefficient map.
double bml_influence(const BmlPolynomial& p, int b, int i) {
  double acc = 0.0;
  for (const auto& [key, c] : p.coeffs()) {
    for (const auto& var : key) {
      if (var.block == b && var.index == i) acc += c * c;
    }
  }
  return acc;
}

double bml_variance_of_degree(const BmlPolynomial& p, int degree) {
  double acc = 0.0;
  for (const auto& [key, c] : p.coeffs()) {
    if (static_cast<int>(key.size()) == degree) acc += c * c;
  }
  return acc;
}

double bml_max_influence_of_degree(const BmlPolynomial& p, int degree) {
  double best = 0.0;
  for (int b = 1; b <= p.d(); ++b) {
    for (int i = 1; i <= p.n(); ++i) {
      double acc = 0.0;
      for (const auto& [key, c] : p.coeffs()) {
        if (static_cast<int>(key.size()) != degree) continue;
        for (const auto& var : key) {
          if (var.block == b && var.index == i) acc += c * c;
        }
      }
      best = std::max(best, acc);
    }
  }
  return best;
}

void fail(Outcome& out, const std::string& why) {
  if (out.pass) out.detail = why;
  out.pass = false;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome homogeneous_certificates() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  double worst_value = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    const int d = std::uniform_int_distribution<int>(1, std::min(n, 4))(rng);
    const Polynomial p = random_homogeneous(n, d, rng);
    const InfluenceCertificate cert = homogeneous_fcb_witness(p);
    const Witness& w = cert.fcb_witness();
    if (!verify_bb(w, 1e-9).pass) fail(out, "verify_bb failed on instance " + std::to_string(k));
    for (const auto& a : w.A) {
      if (!contraction_check(a, 1e-12).pass) fail(out, "non-contraction on instance " + std::to_string(k));
    }
    const double target = oracle::variance(n, as_function(p)) / std::sqrt(oracle_max_influence(p));
    const double err = std::abs(evaluate_on_witness(p, w) - target);
    worst_value = std::max(worst_value, err);
    if (err > 1e-9) fail(out, "value off by " + fmt(err) + " on instance " + std::to_string(k));
  }
  if (out.pass) out.detail = "100 instances, worst value error " + fmt(worst_value);
  return out;
}

Outcome root_influence_equality() {
  Outcome out;
  std::mt19937_64 rng(kSeed + 1);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int d = std::uniform_int_distribution<int>(1, 4)(rng);
    const BmlPolynomial p = random_bml(n, d, true, rng);
    for (int s = 1; s <= d; ++s) {
      const InfluenceCertificate cert = bml_homogeneous_witness(p, s);
      double target = 0.0;
      for (int i = 1; i <= n; ++i) target += std::sqrt(bml_influence(p, s, i));
      const BmlWitness& w = cert.bml_witness();
      const double evaluated = evaluate_bml_on_matrices(p, w.u, w.v, w.blocks);
      const double err = std::max(std::abs(cert.certified_value - target), std::abs(evaluated - target));
      worst = std::max(worst, err);
      if (err > 1e-9) fail(out, "instance " + std::to_string(k) + " s=" + std::to_string(s) + " off by " + fmt(err));
      for (const auto& family : w.blocks) {
        for (const auto& a : family) {
          if (!contraction_check(a, 1e-9).pass) fail(out, "non-contraction on instance " + std::to_string(k));
        }
      }
    }
  }
  for (int d = 1; d <= 4; ++d) {
    BlockKey key;
    for (int b = 1; b <= d; ++b) key.push_back({b, 1});
    const BmlPolynomial p(3, d, {{key, 1.0}});
    for (int s = 1; s <= d; ++s) {
      const InfluenceCertificate cert = bml_homogeneous_witness(p, s);
      if (cert.certified_value != 1.0 || cert.implied_bound != 1.0) fail(out, "optimality instance is not exactly 1");
    }
  }
  if (out.pass) out.detail = "100 instances, every s, worst error " + fmt(worst) + "; optimality instance exact";
  return out;
}

Outcome general_bml_bound() {
  Outcome out;
  std::mt19937_64 rng(kSeed + 2);
  double worst_value = 0.0;
  double worst_embed = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const int d = std::uniform_int_distribution<int>(2, 4)(rng);
    const BmlPolynomial p = random_bml(n, d, false, rng);
    const InfluenceCertificate cert = bml_general_witness(p);
    const int D = cert.s_or_D;
    const double var_d = bml_variance_of_degree(p, D);
    double total = 0.0;
    for (int s = 1; s <= d; ++s) total += bml_variance_of_degree(p, s);
    if (!(var_d >= total / d)) fail(out, "Var[p_D] < Var/d on instance " + std::to_string(k));
    const double target = var_d / std::sqrt(bml_max_influence_of_degree(p, D));
    const double err = std::abs(cert.certified_value - target);
    worst_value = std::max(worst_value, err);
    if (err > 1e-9) fail(out, "value off by " + fmt(err) + " on instance " + std::to_string(k));

    const BmlWitness& w = cert.bml_witness();
    const BmlWitness e = degree_extraction_embed(w, D, d);
    const double full = evaluate_bml_on_matrices(p, e.u, e.v, e.blocks);
    const double part = evaluate_bml_on_matrices(degree_part(p, D), w.u, w.v, w.blocks);
    worst_embed = std::max(worst_embed, std::abs(full - part));
    if (std::abs(full - part) > 1e-12) fail(out, "embedding changed the value on instance " + std::to_string(k));
  }
  if (out.pass) {
    out.detail = "50 instances, worst value error " + fmt(worst_value) + ", worst embedding error " + fmt(worst_embed);
  }
  return out;
}

struct Anchor {
  std::string name;
  Polynomial p;
  int d;
  double expected;
  double tol;
};

std::vector<Anchor> sdp_anchors() {
  std::vector<Anchor> anchors;
  anchors.push_back({"x1", Polynomial(1, {{Subset{1}, 1.0}}), 1, 1.0, 1e-4});
  std::mt19937_64 rng(kSeed + 3);
  for (int k = 0; k < 30; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const Polynomial p = random_polynomial(n, 1, 0.8, rng);
    anchors.push_back({"deg1-" + std::to_string(k), p, 1, sum_abs(p), 1e-4});
  }
  anchors.push_back({"x1x2", Polynomial(2, {{Subset{1, 2}, 1.0}}), 2, 1.0, 1e-3});
  return anchors;
}

Outcome sdp_anchors_hold(std::vector<std::pair<Anchor, std::pair<SdpProblem, SdpSolution>>>& solved) {
  Outcome out;
  double worst = 0.0;
  for (const auto& anchor : sdp_anchors()) {
    SdpProblem prob = build_fcb_sdp(anchor.p, anchor.d);
    SdpSolution sol = solve_sdp(prob);
    const double err = std::abs(sol.value - anchor.expected);
    worst = std::max(worst, err);
    if (err > anchor.tol) fail(out, anchor.name + " off by " + fmt(err));
    solved.push_back({anchor, {std::move(prob), std::move(sol)}});
  }
  if (out.pass) out.detail = "32 anchors, worst deviation " + fmt(worst);
  return out;
}

Outcome sandwich_monotonicity_restriction() {
  Outcome out;
  std::mt19937_64 rng(kSeed + 4);
  int checks = 0;
  for (int k = 0; k < 30; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const Polynomial p = random_polynomial(n, 2, 0.7, rng);
    const std::string id = "instance " + std::to_string(k);
    const SdpSolution two = fcb_solve(p, 2);
    const SdpSolution three = fcb_solve(p, 3);
    if (!two.converged || !three.converged) fail(out, "solver did not converge on " + id);
    if (!(oracle_sup(p) <= two.value + 1e-4)) fail(out, "sup > fcb on " + id);
    if (!(two.value + 1e-4 <= sum_abs(p) + 2e-4)) fail(out, "fcb > l1 on " + id);
    if (!(three.value <= two.value + 1e-4)) fail(out, "fcb_3 > fcb_2 on " + id);
    checks += 3;
    for (int i = 1; i <= n; ++i) {
      for (int y : {1, -1}) {
        const double restricted = fcb_norm(restrict(p, i, y), 2);
        if (!(restricted <= two.value + 1e-4)) fail(out, "restriction increased fcb on " + id);
        ++checks;
      }
    }
  }
  if (out.pass) out.detail = "30 instances, " + std::to_string(checks) + " inequalities";
  return out;
}

Outcome query_forward_direction() {
  Outcome out;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int w = 1 + static_cast<int>(seed % 2);
    try {
      const CharacterizationReport r = check_characterization(random_algorithm(2, 1, w, seed), 1e-3);
      worst = std::max(worst, r.fcb_value);
      if (!r.degree_ok) fail(out, "degree above 2 for seed " + std::to_string(seed));
      if (!r.fcb_ok) fail(out, "fcb " + fmt(r.fcb_value) + " for seed " + std::to_string(seed));
    } catch (const ModelViolationError& e) {
      fail(out, e.what());
    }
  }
  const QueryAlgorithm parity = pair_parity_algorithm(2, 1, 2);
  const Polynomial p = extract_polynomial(parity);
  double err = std::abs(p.coeff({1, 2}) - 1.0);
  for (const auto& [s, c] : p.coeffs()) {
    if (s != Subset{1, 2}) err = std::max(err, std::abs(c));
  }
  if (err > 1e-10) fail(out, "parity coefficients off by " + fmt(err));
  const double parity_fcb = fcb_norm(p, 2);
  if (std::abs(parity_fcb - 1.0) > 1e-3) fail(out, "parity fcb " + fmt(parity_fcb));
  if (out.pass) {
    out.detail = "20 algorithms, largest fcb " + fmt(worst) + "; parity error " + fmt(err) + ", parity fcb " +
                 fmt(parity_fcb);
  }
  return out;
}

Outcome witness_consistency(const std::vector<std::pair<Anchor, std::pair<SdpProblem, SdpSolution>>>& solved) {
  Outcome out;
  int used = 0;
  double worst = 0.0;
  for (const auto& [anchor, pair] : solved) {
    const auto& [prob, sol] = pair;
    if (!sol.converged) continue;
    ++used;
    try {
      const Witness w = extract_witness(sol, prob);
      if (!verify_bb(w, kExtractedWitnessTolerance).pass) fail(out, anchor.name + " fails verify_bb");
      const double err = std::abs(evaluate_on_witness(anchor.p, w) - sol.value);
      worst = std::max(worst, err);
      if (err > 1e-4) fail(out, anchor.name + " value off by " + fmt(err));
    } catch (const ExtractionError& e) {
      fail(out, anchor.name + ": " + e.what());
    }
  }
  if (used == 0) fail(out, "no converged solutions");
  if (out.pass) out.detail = std::to_string(used) + " extracted witnesses, worst value gap " + fmt(worst);
  return out;
}

Outcome greedy_sanity() {
  Outcome out;
  std::mt19937_64 rng(kSeed + 5);
  double worst_exact = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    Polynomial raw = random_polynomial(n, std::min(n, 3), 0.3, rng);
    const double scale = oracle_sup(raw);
    std::map<Subset, double> coeffs = raw.coeffs();
    if (scale > 0.0) {
      for (auto& [s, c] : coeffs) c /= scale;
    }
    const Polynomial p(n, std::move(coeffs));
    const oracle::Function f = as_function(p);

    std::vector<double> mse(n + 1, 0.0);
    for (unsigned m = 0; m < (1u << n); ++m) {
      const oracle::Point y = oracle::point(n, m);
      const double truth = f(y);
      for (int budget = 0; budget <= n; ++budget) {
        const double e = greedy_simulate(p, y, budget).estimate - truth;
        mse[budget] += e * e;
      }
      worst_exact = std::max(worst_exact, std::abs(greedy_simulate(p, y, n).estimate - truth));
    }
    for (int budget = 1; budget <= n; ++budget) {
      if (mse[budget] > mse[budget - 1] + 1e-12) {
        fail(out, "MSE increased at budget " + std::to_string(budget) + " on instance " + std::to_string(k));
      }
    }
  }
  if (worst_exact > 1e-12) fail(out, "full-budget estimate off by " + fmt(worst_exact));
  if (out.pass) out.detail = "100 instances, full-budget error " + fmt(worst_exact) + ", MSE non-increasing";
  return out;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  std::vector<std::pair<Anchor, std::pair<SdpProblem, SdpSolution>>> solved;
  struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "homogeneous fcb certificates", 30, homogeneous_certificates},
      {2, "root influence equality", 60, root_influence_equality},
      {3, "general block-multilinear bound", 60, general_bml_bound},
      {4, "SDP anchors", 120, [&] { return sdp_anchors_hold(solved); }},
      {5, "sandwich, monotonicity, restriction", 600, sandwich_monotonicity_restriction},
      {6, "query algorithms: degree and fcb <= 1", 300, query_forward_direction},
      {7, "witness extraction matches SDP", 120, [&] { return witness_consistency(solved); }},
      {8, "greedy simulation sanity", 120, greedy_sanity},
  };

  bool all = true;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (seconds > c.limit_seconds) {
      out.pass = false;
      out.detail += " (exceeded " + fmt(c.limit_seconds) + " s)";
    }
    all = all && out.pass;
    std::printf("%s criterion %d: %s [%.2f s] %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, seconds,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
