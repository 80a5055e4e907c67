// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "localsmith/recursion.hpp"
#include "localsmith/series.hpp"

namespace localsmith::cli {

using Json = nlohmann::ordered_json;

struct ParseError : Error {
  using Error::Error;
};

/// The on-disk input document, scalar entries still as strings. See the
/// README for the exact grammar.
struct InputDocument {
  std::string field = "rational";  // rational | gaussian-rational | float
  std::string kind = "polynomial"; // polynomial | jet
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::vector<std::string>>> coefficients;
  std::optional<int> order;        // jet order; defaults to the stored count
  std::optional<double> tolerance;
  std::vector<std::string> sample_points;
  std::optional<int> k_max;
  std::optional<std::string> shift;
  // optional curve for the artin command: list of coefficient vectors
  std::optional<std::vector<std::vector<std::string>>> curve;
};

inline std::string entry_to_string(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number_float()) return ScalarTraits<double>::str(j.get<double>());
  throw ParseError("matrix entry must be a string or a number");
}

inline InputDocument parse_input_document(const Json& j) {
  InputDocument doc;
  if (!j.is_object()) throw ParseError("input document must be a JSON object");
  auto need = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
  };
  doc.field = j.value("field", std::string("rational"));
  if (doc.field != "rational" && doc.field != "gaussian-rational" && doc.field != "float")
    throw ParseError("field must be rational, gaussian-rational or float");
  doc.kind = j.value("kind", std::string("polynomial"));
  if (doc.kind != "polynomial" && doc.kind != "jet")
    throw ParseError("kind must be polynomial or jet");
  if (!need("rows").is_number_integer() || !need("cols").is_number_integer())
    throw ParseError("rows/cols must be integers");
  doc.rows = j.at("rows").get<int>();
  doc.cols = j.at("cols").get<int>();
  if (doc.rows < 0 || doc.cols < 0) throw ParseError("rows/cols must be nonnegative");
  const Json& coeffs = need("coefficients");
  if (!coeffs.is_array() || coeffs.empty())
    throw ParseError("coefficients must be a nonempty array of matrices");
  for (const Json& mat : coeffs) {
    if (!mat.is_array() || static_cast<int>(mat.size()) != doc.rows)
      throw ParseError("each coefficient must have exactly \"rows\" rows");
    std::vector<std::vector<std::string>> rows;
    for (const Json& row : mat) {
      if (!row.is_array() || static_cast<int>(row.size()) != doc.cols)
        throw ParseError("each coefficient row must have exactly \"cols\" entries");
      std::vector<std::string> r;
      for (const Json& e : row) r.push_back(entry_to_string(e));
      rows.push_back(std::move(r));
    }
    doc.coefficients.push_back(std::move(rows));
  }
  if (j.contains("order")) doc.order = j.at("order").get<int>();
  if (j.contains("tolerance")) doc.tolerance = j.at("tolerance").get<double>();
  if (j.contains("sample_points"))
    for (const Json& s : j.at("sample_points")) doc.sample_points.push_back(entry_to_string(s));
  if (j.contains("k_max")) doc.k_max = j.at("k_max").get<int>();
  if (j.contains("shift")) doc.shift = entry_to_string(j.at("shift"));
  if (j.contains("curve")) {
    std::vector<std::vector<std::string>> curve;
    for (const Json& vec : j.at("curve")) {
      if (!vec.is_array() || static_cast<int>(vec.size()) != doc.cols)
        throw ParseError("each curve coefficient must be a vector of \"cols\" entries");
      std::vector<std::string> v;
      for (const Json& e : vec) v.push_back(entry_to_string(e));
      curve.push_back(std::move(v));
    }
    doc.curve = std::move(curve);
  }
  return doc;
}

template <Scalar K>
K parse_entry_or_throw(const std::string& s) {
  auto v = parse_scalar<K>(s);
  if (!v) throw ParseError("cannot parse scalar \"" + s + "\"");
  return *v;
}

/// Materialize the coefficient matrices over a concrete scalar backend.
template <Scalar K>
MatSeries<K> materialize(const InputDocument& doc) {
  std::vector<Mat<K>> coeffs;
  for (const auto& mat : doc.coefficients) {
    Mat<K> m(doc.rows, doc.cols);
    for (int i = 0; i < doc.rows; ++i)
      for (int j = 0; j < doc.cols; ++j) m(i, j) = parse_entry_or_throw<K>(mat[i][j]);
    coeffs.push_back(std::move(m));
  }
  if (doc.kind == "polynomial") return MatSeries<K>::polynomial(std::move(coeffs));
  int order = doc.order.value_or(static_cast<int>(coeffs.size()) - 1);
  if (order < 0) throw ParseError("jet order must be nonnegative");
  while (static_cast<int>(coeffs.size()) <= order)
    coeffs.push_back(Mat<K>(doc.rows, doc.cols));
  while (static_cast<int>(coeffs.size()) - 1 > order) coeffs.pop_back();
  return MatSeries<K>::jet(std::move(coeffs));
}

template <Scalar K>
std::optional<MatSeries<K>> materialize_curve(const InputDocument& doc) {
  if (!doc.curve) return std::nullopt;
  std::vector<Mat<K>> coeffs;
  for (const auto& vec : *doc.curve) {
    Mat<K> v(doc.cols, 1);
    for (int i = 0; i < doc.cols; ++i) v(i, 0) = parse_entry_or_throw<K>(vec[i]);
    coeffs.push_back(std::move(v));
  }
  return MatSeries<K>::jet(std::move(coeffs));
}

}  // namespace localsmith::cli
