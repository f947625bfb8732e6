#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "depgeo/anchor.hpp"
#include "depgeo/harness.hpp"

namespace depgeo::io {

using json = nlohmann::json;

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// group spec: {"rates": [...], "drift": [...], "conjugator": {"Q": [[..]], "t": [..]}}
// conjugator is optional and defaults to the identity
OneParamGroup group_from_json(const json& j);
json group_to_json(const OneParamGroup& g);

// product map spec: {"dim": n, "z": [...], "phi": {...}, "psi": {...}}
ProductMap product_map_from_json(const json& j);
json product_map_to_json(const ProductMap& pm);

// coefficients: {"lambda": x, "terms": [{"kappa": k, "weight": w}]}
ChordCoeffs coeffs_from_json(const json& j);
json coeffs_to_json(const ChordCoeffs& c);

// sampled map: {"dim_domain": m, "dim_range": n, "points": [{"x": [...], "hx": [...]}]}
// carrier is (R^m, +, 0)
SampledMonoidMap sampled_map_from_json(const json& j);
json sampled_map_to_json(const SampledMonoidMap& map);

json verdict_to_json(const DepVerdict& v);
json certificate_to_json(const TheoremCertificate& c);

/// CSV with header "r,C", one sample per row, round-trip doubles.
std::vector<std::pair<double, double>> read_samples_csv(std::istream& in);
void write_samples_csv(std::ostream& out,
                       const std::vector<std::pair<double, double>>& samples);

/// Curve CSV: header "x,h_1,..,h_n".
void write_curve_csv(std::ostream& out, const std::vector<double>& xs,
                     const std::vector<Vec>& points);

json parse_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace depgeo::io
