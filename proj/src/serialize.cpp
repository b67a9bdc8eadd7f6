#include "chaoskit/serialize.hpp"

#include <json.hpp>

#include <cstdio>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

using Json = nlohmann::ordered_json;

Json truncation_header(const TruncationSpec& spec) {
  Json j;
  j["max_order"] = spec.max_order;
  j["max_dim"] = spec.max_dim;
  return j;
}

TruncationSpec truncation_from(const Json& j) {
  return TruncationSpec{j.at("max_order").get<int>(), j.at("max_dim").get<int>()};
}

}  // namespace

std::string to_json(const ChaosVector& v) {
  Json j;
  j["truncation"] = truncation_header(v.truncation);
  Json coeffs = Json::object();
  for (const auto& [alpha, c] : v.coeffs) {
    coeffs[std::to_string(rank_of(alpha, v.truncation))] = c;
  }
  j["coeffs"] = std::move(coeffs);
  return j.dump();
}

std::string to_json(const ChaosProcess& p) {
  Json j;
  j["truncation"] = truncation_header(p.truncation);
  j["grid"] = Json{{"horizon", p.grid.horizon()}, {"subintervals", p.grid.subintervals()}};
  Json coeffs = Json::object();
  for (const auto& [alpha, path] : p.coeffs) {
    coeffs[std::to_string(rank_of(alpha, p.truncation))] = path;
  }
  j["coeffs"] = std::move(coeffs);
  return j.dump();
}

ChaosVector chaos_vector_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  ChaosVector v;
  v.truncation = truncation_from(j.at("truncation"));
  for (const auto& [key, value] : j.at("coeffs").items()) {
    v.coeffs[unrank(std::stoull(key), v.truncation)] = value.get<double>();
  }
  return v;
}

ChaosProcess chaos_process_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  ChaosProcess p;
  p.truncation = truncation_from(j.at("truncation"));
  p.grid = TimeGrid(j.at("grid").at("horizon").get<double>(),
                    j.at("grid").at("subintervals").get<int>());
  for (const auto& [key, value] : j.at("coeffs").items()) {
    p.coeffs[unrank(std::stoull(key), p.truncation)] = value.get<std::vector<double>>();
  }
  return p;
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw Error("csv row width differs from the header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
  }
}

}  // namespace chaoskit
