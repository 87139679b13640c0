#include "symmcal/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace symmcal {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field_of(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

Grid grid_of(const json& j) {
  const auto dim = field_of<int>(j, "dim");
  auto shape = field_of<std::vector<std::size_t>>(j, "shape");
  auto spacing = field_of<std::vector<double>>(j, "spacing");
  std::vector<double> origin;
  if (j.contains("origin")) origin = field_of<std::vector<double>>(j, "origin");
  if (static_cast<std::size_t>(dim) != shape.size()) throw IoError("\"dim\" does not match \"shape\"");
  try {
    return Grid(std::move(shape), std::move(spacing), std::move(origin));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

json grid_json(const Grid& g) {
  return json{{"dim", g.dim()}, {"shape", g.shape()}, {"spacing", g.spacing()}, {"origin", g.origin()}};
}

}  // namespace

ScalarField field_from_json(const std::string& text) {
  const json j = parse(text);
  Grid g = grid_of(j);
  try {
    return ScalarField(std::move(g), field_of<std::vector<double>>(j, "values"));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

std::string field_to_json(const ScalarField& f) {
  json j = grid_json(f.grid);
  j["values"] = f.values;
  return j.dump();
}

RegionMask mask_from_json(const std::string& text) {
  const json j = parse(text);
  Grid g = grid_of(j);
  const auto raw = field_of<std::vector<int>>(j, "members");
  std::vector<std::uint8_t> m(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != 0 && raw[i] != 1) throw IoError("\"members\" entries must be 0 or 1");
    m[i] = static_cast<std::uint8_t>(raw[i]);
  }
  try {
    return RegionMask(std::move(g), std::move(m));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

std::string mask_to_json(const RegionMask& m) {
  json j = grid_json(m.grid);
  std::vector<int> members(m.members.begin(), m.members.end());
  j["members"] = members;
  return j.dump();
}

manifold::WeightedRadialGrid radial_grid_from_json(const std::string& text) {
  const json j = parse(text);
  auto edges = field_of<std::vector<double>>(j, "r_edges");
  auto phi = field_of<std::vector<double>>(j, "phi");
  const auto sigma = field_of<double>(j, "sigma_measure");
  std::vector<double> cells;
  if (j.contains("sigma_cells") && !j.at("sigma_cells").is_null())
    cells = field_of<std::vector<double>>(j, "sigma_cells");
  try {
    return manifold::WeightedRadialGrid(std::move(edges), std::move(phi), sigma, std::move(cells));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

std::string radial_grid_to_json(const manifold::WeightedRadialGrid& g) {
  return json{{"r_edges", g.r_edges()},
              {"phi", g.phi()},
              {"sigma_measure", g.sigma_measure()},
              {"sigma_cells", g.sigma_cells()}}
      .dump();
}

Polygon polygon_from_json(const std::string& text) {
  const json j = parse(text);
  const json& v = j.is_object() ? (j.contains("vertices") ? j.at("vertices") : json()) : j;
  if (!v.is_array()) throw IoError("polygon must be a vertex list");
  Polygon p;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw IoError("polygon vertices must be [x, y] pairs");
    p.vertices.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return p;
}

std::string polygon_to_json(const Polygon& p) {
  json v = json::array();
  for (const auto& q : p.vertices) v.push_back({q[0], q[1]});
  return json{{"vertices", v}}.dump();
}

}  // namespace symmcal
