#pragma once

#include <fstream>
#include <string>

#include "json.hpp"
#include "srlfuse/bio.hpp"
#include "srlfuse/embedding.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/nn/parameters.hpp"

namespace srlfuse::detail {

using json = nlohmann::json;

inline json params_to_json(const nn::ParameterSet& params) {
  json out = json::array();
  for (const auto* p : params.all()) {
    json data = json::array();
    for (Eigen::Index r = 0; r < p->value.rows(); ++r)
      for (Eigen::Index c = 0; c < p->value.cols(); ++c) data.push_back(p->value(r, c));
    out.push_back({{"name", p->name()}, {"rows", p->value.rows()}, {"cols", p->value.cols()}, {"data", data}});
  }
  return out;
}

inline void params_from_json(nn::ParameterSet& params, const json& arr) {
  if (arr.size() != params.size())
    fail(ErrorKind::kModel, "checkpoint has " + std::to_string(arr.size()) + " parameters, model expects " +
                                std::to_string(params.size()));
  for (const auto& entry : arr) {
    auto& p = params.at(entry.at("name").get<std::string>());
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    if (rows != p.value.rows() || cols != p.value.cols())
      fail(ErrorKind::kModel, "checkpoint shape mismatch for " + p.name());
    const auto& data = entry.at("data");
    if (data.size() != static_cast<std::size_t>(rows * cols)) fail(ErrorKind::kModel, "truncated parameter " + p.name());
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) p.value(r, c) = data[k++].get<double>();
  }
}

inline json contextual_to_json(const ContextualSpec& s) {
  return {{"kind", s.kind}, {"dim", s.dim}, {"seed", s.seed}, {"window", s.window}, {"path", s.path}};
}

inline ContextualSpec contextual_from_json(const json& j) {
  ContextualSpec s;
  s.kind = j.value("kind", s.kind);
  s.dim = j.value("dim", s.dim);
  s.seed = j.value("seed", s.seed);
  s.window = j.value("window", s.window);
  s.path = j.value("path", s.path);
  return s;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path);
  out << j.dump() << '\n';
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::kData, path + ": " + e.what());
  }
}

inline void check_header(const json& j, const std::string& format, int version, const std::string& path) {
  if (j.value("format", std::string{}) != format)
    fail(ErrorKind::kModel, path + " is not a " + format + " file");
  if (j.value("version", 0) != version)
    fail(ErrorKind::kModel, path + ": unsupported " + format + " version " + std::to_string(j.value("version", 0)));
}

}  // namespace srlfuse::detail
