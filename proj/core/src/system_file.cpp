#include "nhj/system_file.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "nhj/errors.hpp"
#include "nhj/expression.hpp"

namespace nhj {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::ParseError, "system file: " + what);
}

Expression entry(const json& j, int n, const std::string& where) {
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return Expression::parse(os.str(), n);
  }
  if (!j.is_string()) schema_error(where + " must be a string or number");
  try {
    return Expression::parse(j.get<std::string>(), n);
  } catch (const Error& e) {
    throw e.with_context("system file: " + where);
  }
}

}  // namespace

SystemDefinition parse_system_definition(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("top level must be an object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
    schema_error("'dimension' must be an integer");
  }
  const int n = doc["dimension"].get<int>();
  if (n <= 0) schema_error("'dimension' must be positive");

  SystemDefinition sys;
  sys.name = doc.value("name", std::string("user-system"));
  sys.n = n;

  // Metric.
  const json metric = doc.value("metric", json("euclidean"));
  if (metric.is_string() && metric.get<std::string>() == "euclidean") {
    sys.metric = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
    sys.metric_constant = true;
  } else {
    if (!metric.is_array() || static_cast<int>(metric.size()) != n) {
      schema_error("'metric' must be \"euclidean\" or an n x n array");
    }
    auto entries = std::make_shared<std::vector<Expression>>();
    bool constant = true;
    for (int i = 0; i < n; ++i) {
      const json& row = metric[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) schema_error("metric rows need n entries");
      for (int j = 0; j < n; ++j) {
        entries->push_back(entry(row[static_cast<size_t>(j)], n,
                                 "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        constant = constant && entries->back().is_constant();
      }
    }
    sys.metric = [entries, n](const Vec& q) -> Mat {
      Mat G(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = (*entries)[static_cast<size_t>(i * n + j)].evaluate(q);
      return G;
    };
    sys.metric_constant = constant;
  }

  // Potential.
  auto potential = std::make_shared<Expression>(entry(doc.value("potential", json("0")), n, "potential"));
  sys.potential_constant = potential->is_constant();
  sys.potential = [potential](const Vec& q) { return potential->evaluate(q); };

  // Frame.
  if (!doc.contains("frame") || !doc["frame"].is_array() || doc["frame"].empty()) {
    schema_error("'frame' must be a non-empty array of vectors");
  }
  const json& frame = doc["frame"];
  const int m = static_cast<int>(frame.size());
  if (m > n) schema_error("'frame' has more vectors than the dimension");
  sys.m = m;
  auto fields = std::make_shared<std::vector<Expression>>();
  for (int a = 0; a < m; ++a) {
    const json& vec = frame[static_cast<size_t>(a)];
    if (!vec.is_array() || static_cast<int>(vec.size()) != n) schema_error("frame vectors need n entries");
    for (int i = 0; i < n; ++i) {
      fields->push_back(entry(vec[static_cast<size_t>(i)], n,
                              "frame[" + std::to_string(a) + "][" + std::to_string(i) + "]"));
    }
  }
  sys.frame = [fields, n, m](const Vec& q) -> Mat {
    Mat X(n, m);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < n; ++i) X(i, a) = (*fields)[static_cast<size_t>(a * n + i)].evaluate(q);
    return X;
  };

  // Coordinate bounds.
  if (doc.contains("coordinates")) {
    const json& coords = doc["coordinates"];
    if (!coords.is_array() || static_cast<int>(coords.size()) != n) {
      schema_error("'coordinates' needs one entry per dimension");
    }
    sys.bounds.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const json& c = coords[static_cast<size_t>(i)];
      if (!c.is_object()) schema_error("coordinate entries must be objects");
      auto& b = sys.bounds[static_cast<size_t>(i)];
      b.periodic = c.value("periodic", false);
      if (c.contains("lower")) b.lower = c["lower"].get<double>();
      if (c.contains("upper")) b.upper = c["upper"].get<double>();
      if (!(b.lower < b.upper)) schema_error("coordinate bounds need lower < upper");
    }
  }
  return sys;
}

SystemDefinition load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open system file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_definition(buf.str());
}

}  // namespace nhj
