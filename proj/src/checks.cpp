#include "fcblab/checks.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "fcblab/behavior.hpp"
#include "fcblab/certificates.hpp"
#include "fcblab/errors.hpp"
#include "fcblab/query.hpp"
#include "fcblab/sdp.hpp"

namespace fcblab {
namespace {

constexpr double kSdpSlack = 1e-4;
constexpr double kWitnessTolerance = 1e-9;
constexpr double kSimulatorSlack = 1e-3;

void add(SuiteReport& report, std::string instance, std::string quantity, double lhs, double rhs) {
  report.rows.push_back({std::move(instance), std::move(quantity), lhs, rhs, rhs - lhs, false});
}

void add_info(SuiteReport& report, std::string instance, std::string quantity, double lhs, double rhs) {
  report.rows.push_back({std::move(instance), std::move(quantity), lhs, rhs, rhs - lhs, true});
}

void add_converged(SuiteReport& report, const std::string& instance, const SdpSolution& sol) {
  add(report, instance, "solver_converged", sol.converged ? 0.0 : 1.0, 0.0);
}

std::string name(std::string_view prefix, int k) { return std::string(prefix) + "-" + std::to_string(k); }

void enumerate_subsets(int n, int max_degree, const std::function<void(const Subset&)>& visit) {
  Subset s;
  std::function<void(int)> rec = [&](int next) {
    visit(s);
    if (static_cast<int>(s.size()) == max_degree) return;
    for (int i = next; i <= n; ++i) {
      s.push_back(i);
      rec(i + 1);
      s.pop_back();
    }
  };
  rec(1);
}

void enumerate_block_keys(int n, int d, const std::function<void(const BlockKey&)>& visit) {
  BlockKey key;
  std::function<void(int)> rec = [&](int block) {
    if (block > d) {
      visit(key);
      return;
    }
    rec(block + 1);
    for (int i = 1; i <= n; ++i) {
      key.push_back({block, i});
      rec(block + 1);
      key.pop_back();
    }
  };
  rec(1);
}

int sdp_degree(const Polynomial& p) { return std::max(p.degree(), 1); }

void monotonicity(SuiteReport& report, std::mt19937_64& rng) {
  auto compare = [&](const std::string& id, const Polynomial& p, int d) {
    const SdpSolution low = fcb_solve(p, d);
    const SdpSolution high = fcb_solve(p, d + 1);
    add_converged(report, id + "/d=" + std::to_string(d), low);
    add_converged(report, id + "/d=" + std::to_string(d + 1), high);
    add(report, id, "fcb_d+1<=fcb_d", high.value, low.value + kSdpSlack);
  };
  for (const auto& [id, p] : edge_case_corpus()) compare(id, p, sdp_degree(p));
  for (int k = 0; k < 5; ++k) compare(name("mono-deg1", k), random_polynomial(2, 1, 1.0, rng), 1);
  for (int k = 0; k < 3; ++k) compare(name("mono-deg2", k), random_polynomial(2, 2, 0.8, rng), 2);
}

void restriction(SuiteReport& report, std::mt19937_64& rng) {
  auto check = [&](const std::string& id, const Polynomial& p) {
    const SdpSolution full = fcb_solve(p, 2);
    add_converged(report, id, full);
    for (int i = 1; i <= p.n(); ++i) {
      for (int y : {1, -1}) {
        const std::string sub = id + "/x" + std::to_string(i) + "=" + std::to_string(y);
        const SdpSolution restricted = fcb_solve(restrict(p, i, y), 2);
        add_converged(report, sub, restricted);
        add(report, sub, "fcb_restricted<=fcb", restricted.value, full.value + kSdpSlack);
      }
    }
  };
  for (const auto& [id, p] : edge_case_corpus()) check(id, p);
  for (int k = 0; k < 5; ++k) check(name("restrict", k), random_polynomial(3, 2, 0.6, rng));
}

void sandwich(SuiteReport& report, std::mt19937_64& rng) {
  auto check = [&](const std::string& id, const Polynomial& p) {
    const SdpSolution sol = fcb_solve(p, 2);
    add_converged(report, id, sol);
    add(report, id, "sup<=fcb", sup_norm_bruteforce(p), sol.value + kSdpSlack);
    add(report, id, "fcb<=l1", sol.value, spectral_l1(p) + kSdpSlack);
  };
  for (const auto& [id, p] : edge_case_corpus()) check(id, p);
  for (int k = 0; k < 8; ++k) check(name("sandwich", k), random_polynomial(3, 2, 0.7, rng));
}

void certificate_rows(SuiteReport& report, const std::string& id, const Polynomial& p) {
  const InfluenceCertificate cert = homogeneous_fcb_witness(p);
  const BehaviorReport bb = verify_bb(cert.fcb_witness(), kWitnessTolerance);
  add(report, id, "relation_violation", bb.max_relation_violation, kWitnessTolerance);
  add(report, id, "contraction_excess", bb.max_contraction_excess, kWitnessTolerance);
  add(report, id, "unit_norm_error", bb.unit_norm_error, kWitnessTolerance);
  const Statistics st = statistics(p);
  const double target = st.variance / std::sqrt(st.max_influence);
  add(report, id, "value_error", std::abs(cert.certified_value - target), kWitnessTolerance);
}

void certificates(SuiteReport& report, std::mt19937_64& rng) {
  for (const auto& [id, p] : edge_case_corpus()) {
    if (p.is_homogeneous() && variance(p) > 0.0) certificate_rows(report, id, p);
  }
  std::uniform_int_distribution<int> pick_n(1, 5);
  for (int k = 0; k < 100; ++k) {
    const int n = pick_n(rng);
    const int d = std::uniform_int_distribution<int>(1, std::min(n, 4))(rng);
    certificate_rows(report, name("fcb", k), random_homogeneous(n, d, rng));
  }
  std::uniform_int_distribution<int> pick_small(1, 3);
  for (int k = 0; k < 20; ++k) {
    const int n = pick_small(rng);
    const int d = pick_small(rng);
    const BmlPolynomial p = random_bml(n, d, true, rng);
    const BmlStatistics st = statistics(p);
    for (int s = 1; s <= d; ++s) {
      const InfluenceCertificate cert = bml_homogeneous_witness(p, s);
      double target = 0.0;
      for (double inf : st.influences[s - 1]) target += std::sqrt(inf);
      const std::string id = name("bml", k) + "/s=" + std::to_string(s);
      add(report, id, "value_error", std::abs(cert.certified_value - target), kWitnessTolerance);
      double sigma = 0.0;
      for (const auto& family : cert.bml_witness().blocks) {
        for (const auto& a : family) sigma = std::max(sigma, contraction_check(a, kWitnessTolerance).sigma_max);
      }
      add(report, id, "sigma_max", sigma, 1.0 + kWitnessTolerance);
    }
  }
}

void simulator(SuiteReport& report, std::mt19937_64& rng) {
  for (int k = 0; k < 5; ++k) {
    const int w = std::uniform_int_distribution<int>(1, 2)(rng);
    const std::uint64_t seed = rng();
    const std::string id = name("alg", k);
    const CharacterizationReport r = check_characterization(random_algorithm(2, 1, w, seed), kSimulatorSlack);
    add(report, id, "degree<=2d", r.polynomial.degree(), 2.0);
    add(report, id, "solver_converged", r.solver_converged ? 0.0 : 1.0, 0.0);
    add(report, id, "fcb<=1", r.fcb_value, 1.0 + kSimulatorSlack);
  }
  const Polynomial parity = extract_polynomial(pair_parity_algorithm(2, 1, 2));
  double err = std::abs(parity.coeff({1, 2}) - 1.0);
  for (const auto& [s, c] : parity.coeffs()) {
    if (s != Subset{1, 2}) err = std::max(err, std::abs(c));
  }
  add(report, "parity", "coefficient_error", err, 1e-10);
}

void hierarchy(SuiteReport& report, std::mt19937_64& rng) {
  auto walk = [&](const std::string& id, const Polynomial& p) {
    const int low = sdp_degree(p);
    const double l1 = spectral_l1(p);
    add_info(report, id, "sup/l1", sup_norm_bruteforce(p), l1);
    for (int d = low; d <= low + 1; ++d) add_info(report, id, "fcb_" + std::to_string(d) + "/l1", fcb_norm(p, d), l1);
  };
  for (const auto& [id, p] : edge_case_corpus()) walk(id, p);
  for (int k = 0; k < 3; ++k) walk(name("hier", k), random_polynomial(2, 2, 0.8, rng));
}

using SuiteFn = void (*)(SuiteReport&, std::mt19937_64&);

const std::map<std::string, SuiteFn, std::less<>>& suites() {
  static const std::map<std::string, SuiteFn, std::less<>> table = {
      {"monotonicity", monotonicity}, {"restriction", restriction}, {"sandwich", sandwich},
      {"certificates", certificates}, {"simulator", simulator},     {"hierarchy", hierarchy}};
  return table;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return buf;
}

}  // namespace

Polynomial random_polynomial(int n, int max_degree, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::map<Subset, double> coeffs;
  enumerate_subsets(n, max_degree, [&](const Subset& s) {
    if (keep(rng)) coeffs[s] = coef(rng);
  });
  return Polynomial(n, std::move(coeffs));
}

Polynomial random_homogeneous(int n, int d, std::mt19937_64& rng) {
  if (d < 1 || d > n) throw ParameterError("homogeneous degree must lie in [1, n]");
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::bernoulli_distribution keep(0.6);
  std::map<Subset, double> coeffs;
  while (coeffs.empty()) {
    enumerate_subsets(n, d, [&](const Subset& s) {
      if (static_cast<int>(s.size()) == d && keep(rng)) coeffs[s] = coef(rng);
    });
  }
  double norm = 0.0;
  for (const auto& [s, c] : coeffs) norm += c * c;
  norm = std::sqrt(norm);
  for (auto& [s, c] : coeffs) c /= norm;
  return Polynomial(n, std::move(coeffs));
}

BmlPolynomial random_bml(int n, int d, bool homogeneous, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::bernoulli_distribution keep(0.5);
  std::map<BlockKey, double> coeffs;
  while (coeffs.empty()) {
    enumerate_block_keys(n, d, [&](const BlockKey& key) {
      if (key.empty() || (homogeneous && static_cast<int>(key.size()) != d)) return;
      if (keep(rng)) coeffs[key] = coef(rng);
    });
  }
  return BmlPolynomial(n, d, std::move(coeffs));
}

std::vector<std::pair<std::string, Polynomial>> edge_case_corpus() {
  return {{"edge-zero", Polynomial(2)},
          {"edge-constant", Polynomial(2, {{Subset{}, 0.5}})},
          {"edge-monomial", Polynomial(2, {{Subset{1, 2}, 1.0}})}};
}

bool SuiteReport::pass() const { return failures() == 0; }

int SuiteReport::failures() const {
  int count = 0;
  for (const auto& row : rows) count += row.pass() ? 0 : 1;
  return count;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"monotonicity", "restriction", "sandwich", "certificates",
                                                 "simulator",    "hierarchy",   "all"};
  return names;
}

SuiteReport run_suite(std::string_view suite, std::uint64_t seed) {
  SuiteReport report;
  if (suite == "all") {
    for (const auto& [key, fn] : suites()) {
      std::mt19937_64 rng(seed);
      fn(report, rng);
    }
    return report;
  }
  auto it = suites().find(suite);
  if (it == suites().end()) throw ParameterError("unknown suite '" + std::string(suite) + "'");
  std::mt19937_64 rng(seed);
  it->second(report, rng);
  return report;
}

std::string format_csv(const SuiteReport& report) {
  std::string out = "instance,quantity,lhs,rhs,margin\n";
  for (const auto& row : report.rows) {
    out += row.instance + "," + row.quantity + "," + number(row.lhs) + "," + number(row.rhs) + "," +
           number(row.margin) + "\n";
  }
  return out;
}

std::string format_summary(const SuiteReport& report) {
  std::map<std::string, std::pair<int, int>> counts;
  for (const auto& row : report.rows) {
    auto& [passed, total] = counts[row.quantity];
    passed += row.pass() ? 1 : 0;
    ++total;
  }
  std::string out;
  for (const auto& [quantity, c] : counts) {
    out += quantity + ": " + std::to_string(c.first) + "/" + std::to_string(c.second) + "\n";
  }
  return out;
}

}  // namespace fcblab
