#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "fcblab/behavior.hpp"
#include "fcblab/bml.hpp"
#include "fcblab/certificates.hpp"
#include "fcblab/polynomial.hpp"

namespace fcblab {

using Json = nlohmann::ordered_json;

// Parses JSON text; syntax errors become ParseError with line and column.
Json parse_json_text(std::string_view text, std::string_view source = "<input>");
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

// {"n": int, "coeffs": [{"subset": [ints], "value": float}]}
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

// {"n": int, "d": int, "coeffs": [{"pairs": [[block, index], ...], "value": float}]}
Json to_json(const BmlPolynomial& p);
BmlPolynomial bml_polynomial_from_json(const Json& j);

// {"m", "d", "u", "v", "A"} with A[k] the row-major matrix A(k+1).
Json to_json(const Witness& w);
Witness witness_from_json(const Json& j);

// Witness fields plus kind, certified_value, implied_bound and s_or_D. BML
// certificates also carry "n" and "A_blocks" (A_blocks[b-1][i-1]) in place
// of "A".
Json to_json(const InfluenceCertificate& cert);
InfluenceCertificate certificate_from_json(const Json& j);

Polynomial load_polynomial(const std::string& path);
BmlPolynomial load_bml_polynomial(const std::string& path);
Witness load_witness(const std::string& path);
InfluenceCertificate load_certificate(const std::string& path);

}  // namespace fcblab
