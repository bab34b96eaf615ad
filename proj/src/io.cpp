#include "fcblab/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fcblab/errors.hpp"

namespace fcblab {
namespace {

std::string at(std::string_view what, std::size_t k) { return std::string(what) + "[" + std::to_string(k) + "]"; }

const Json& field(const Json& j, const char* key, std::string_view context) {
  if (!j.is_object()) throw ParseError(std::string(context) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string(context) + ": missing field \"" + key + "\"");
  return *it;
}

int as_int(const Json& j, std::string_view context) {
  if (!j.is_number_integer()) throw ParseError(std::string(context) + ": expected an integer");
  return j.get<int>();
}

double as_double(const Json& j, std::string_view context) {
  if (!j.is_number()) throw ParseError(std::string(context) + ": expected a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, std::string_view context) {
  if (!j.is_array()) throw ParseError(std::string(context) + ": expected an array");
  return j;
}

Json vector_json(const Eigen::VectorXd& x) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < x.size(); ++k) out.push_back(x(k));
  return out;
}

Json matrix_json(const Eigen::MatrixXd& a) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::VectorXd vector_from(const Json& j, Eigen::Index m, std::string_view context) {
  as_array(j, context);
  if (static_cast<Eigen::Index>(j.size()) != m) {
    throw ParseError(std::string(context) + ": expected " + std::to_string(m) + " entries");
  }
  Eigen::VectorXd x(m);
  for (Eigen::Index k = 0; k < m; ++k) x(k) = as_double(j[k], at(context, k));
  return x;
}

Eigen::MatrixXd matrix_from(const Json& j, Eigen::Index m, std::string_view context) {
  as_array(j, context);
  if (static_cast<Eigen::Index>(j.size()) != m) {
    throw ParseError(std::string(context) + ": expected " + std::to_string(m) + " rows");
  }
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index r = 0; r < m; ++r) a.row(r) = vector_from(j[r], m, at(context, r)).transpose();
  return a;
}

int read_dimension(const Json& j, const char* key, int lo, std::string_view context) {
  const int value = as_int(field(j, key, context), std::string(context) + "." + key);
  if (value < lo) throw ParseError(std::string(context) + "." + key + ": must be at least " + std::to_string(lo));
  return value;
}

}  // namespace

Json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": malformed JSON");
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json to_json(const Polynomial& p) {
  Json coeffs = Json::array();
  for (const auto& [s, c] : p.coeffs()) coeffs.push_back({{"subset", s}, {"value", c}});
  return {{"n", p.n()}, {"coeffs", std::move(coeffs)}};
}

Polynomial polynomial_from_json(const Json& j) {
  const int n = read_dimension(j, "n", 0, "polynomial");
  const Json& list = as_array(field(j, "coeffs", "polynomial"), "coeffs");
  std::map<Subset, double> coeffs;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string ctx = at("coeffs", k);
    const Json& subset = as_array(field(list[k], "subset", ctx), ctx + ".subset");
    Subset s;
    for (std::size_t t = 0; t < subset.size(); ++t) {
      const int i = as_int(subset[t], ctx + ".subset");
      if (i < 1 || i > n) throw ParseError(ctx + ": index " + std::to_string(i) + " out of range");
      if (!s.empty() && i <= s.back()) throw ParseError(ctx + ": subset not sorted");
      s.push_back(i);
    }
    const double value = as_double(field(list[k], "value", ctx), ctx + ".value");
    if (!coeffs.emplace(std::move(s), value).second) throw ParseError(ctx + ": duplicate subset");
  }
  return Polynomial(n, std::move(coeffs));
}

Json to_json(const BmlPolynomial& p) {
  Json coeffs = Json::array();
  for (const auto& [key, c] : p.coeffs()) {
    Json pairs = Json::array();
    for (const auto& var : key) pairs.push_back({var.block, var.index});
    coeffs.push_back({{"pairs", std::move(pairs)}, {"value", c}});
  }
  return {{"n", p.n()}, {"d", p.d()}, {"coeffs", std::move(coeffs)}};
}

BmlPolynomial bml_polynomial_from_json(const Json& j) {
  const int n = read_dimension(j, "n", 1, "polynomial");
  const int d = read_dimension(j, "d", 1, "polynomial");
  const Json& list = as_array(field(j, "coeffs", "polynomial"), "coeffs");
  std::map<BlockKey, double> coeffs;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string ctx = at("coeffs", k);
    const Json& pairs = as_array(field(list[k], "pairs", ctx), ctx + ".pairs");
    BlockKey key;
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      const Json& pair = as_array(pairs[t], ctx + ".pairs");
      if (pair.size() != 2) throw ParseError(ctx + ": each pair needs [block, index]");
      const int b = as_int(pair[0], ctx + ".pairs");
      const int i = as_int(pair[1], ctx + ".pairs");
      if (b < 1 || b > d || i < 1 || i > n) throw ParseError(ctx + ": pair out of range");
      if (!key.empty() && b <= key.back().block) throw ParseError(ctx + ": blocks not strictly increasing");
      key.push_back({b, i});
    }
    const double value = as_double(field(list[k], "value", ctx), ctx + ".value");
    if (!coeffs.emplace(std::move(key), value).second) throw ParseError(ctx + ": duplicate key");
  }
  return BmlPolynomial(n, d, std::move(coeffs));
}

Json to_json(const Witness& w) {
  Json a = Json::array();
  for (const auto& m : w.A) a.push_back(matrix_json(m));
  return {{"m", w.m()}, {"d", w.d}, {"u", vector_json(w.u)}, {"v", vector_json(w.v)}, {"A", std::move(a)}};
}

Witness witness_from_json(const Json& j) {
  Witness w;
  const int m = read_dimension(j, "m", 1, "witness");
  w.d = read_dimension(j, "d", 0, "witness");
  w.u = vector_from(field(j, "u", "witness"), m, "u");
  w.v = vector_from(field(j, "v", "witness"), m, "v");
  const Json& list = as_array(field(j, "A", "witness"), "A");
  if (list.empty()) throw ParseError("A: need at least the matrix for the frozen variable");
  for (std::size_t k = 0; k < list.size(); ++k) w.A.push_back(matrix_from(list[k], m, at("A", k)));
  return w;
}

Json to_json(const InfluenceCertificate& cert) {
  Json out;
  if (cert.kind == CertificateKind::kHomogeneousFcb) {
    out = to_json(cert.fcb_witness());
  } else {
    const BmlWitness& w = cert.bml_witness();
    Json blocks = Json::array();
    for (const auto& family : w.blocks) {
      Json mats = Json::array();
      for (const auto& m : family) mats.push_back(matrix_json(m));
      blocks.push_back(std::move(mats));
    }
    const int n = w.blocks.empty() ? 0 : static_cast<int>(w.blocks.front().size());
    out = {{"m", w.u.size()}, {"d", w.blocks.size()}, {"n", n},
           {"u", vector_json(w.u)}, {"v", vector_json(w.v)}, {"A_blocks", std::move(blocks)}};
  }
  out["kind"] = std::string(to_string(cert.kind));
  out["certified_value"] = cert.certified_value;
  out["implied_bound"] = cert.implied_bound;
  out["s_or_D"] = cert.s_or_D;
  return out;
}

InfluenceCertificate certificate_from_json(const Json& j) {
  InfluenceCertificate cert;
  const Json& kind = field(j, "kind", "certificate");
  if (!kind.is_string()) throw ParseError("certificate.kind: expected a string");
  try {
    cert.kind = certificate_kind_from_string(kind.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(std::string("certificate.kind: ") + e.what());
  }
  cert.certified_value = as_double(field(j, "certified_value", "certificate"), "certified_value");
  cert.implied_bound = as_double(field(j, "implied_bound", "certificate"), "implied_bound");
  cert.s_or_D = as_int(field(j, "s_or_D", "certificate"), "s_or_D");
  if (cert.kind == CertificateKind::kHomogeneousFcb) {
    cert.witness = witness_from_json(j);
    return cert;
  }
  BmlWitness w;
  const int m = read_dimension(j, "m", 1, "certificate");
  const int d = read_dimension(j, "d", 1, "certificate");
  const int n = read_dimension(j, "n", 1, "certificate");
  w.u = vector_from(field(j, "u", "certificate"), m, "u");
  w.v = vector_from(field(j, "v", "certificate"), m, "v");
  const Json& blocks = as_array(field(j, "A_blocks", "certificate"), "A_blocks");
  if (static_cast<int>(blocks.size()) != d) throw ParseError("A_blocks: expected d blocks");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Json& family = as_array(blocks[b], at("A_blocks", b));
    if (static_cast<int>(family.size()) != n) throw ParseError(at("A_blocks", b) + ": expected n matrices");
    std::vector<Eigen::MatrixXd> mats;
    for (std::size_t i = 0; i < family.size(); ++i) mats.push_back(matrix_from(family[i], m, at(at("A_blocks", b), i)));
    w.blocks.push_back(std::move(mats));
  }
  cert.witness = std::move(w);
  return cert;
}

Polynomial load_polynomial(const std::string& path) {
  const Json j = load_json_file(path);
  try {
    return polynomial_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

BmlPolynomial load_bml_polynomial(const std::string& path) {
  const Json j = load_json_file(path);
  try {
    return bml_polynomial_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Witness load_witness(const std::string& path) {
  const Json j = load_json_file(path);
  try {
    return witness_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

InfluenceCertificate load_certificate(const std::string& path) {
  const Json j = load_json_file(path);
  try {
    return certificate_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace fcblab
