#include "scenery/spec_io.hpp"

#include "scenery/constructions.hpp"

namespace scenery {
namespace {

Point point_from(const json& j, int dim) {
  Point p{};
  if (j.is_null()) return p;
  require(j.is_array() && static_cast<int>(j.size()) == dim, "point has the wrong dimension");
  for (int a = 0; a < dim; ++a) p[a] = j[a].get<double>();
  return p;
}

Frame frame_from(const json& j, int dim) {
  Frame f;
  if (j.contains("origin")) f.origin = point_from(j.at("origin"), dim);
  f.size = j.value("size", 1.0);
  return f;
}

int depth_of(const json& j) {
  const int d = j.value("depth", kDefaultMaxDepth);
  require(d >= 1 && d <= 60, "depth must lie in [1, 60]");
  return d;
}

// Caps the depth of a nested spec by an outer one.
json capped(json j, int depth) {
  j["depth"] = std::min(depth, j.value("depth", kDefaultMaxDepth));
  return j;
}

Measure build(const json& j);

Measure build_view(const json& j) {
  const Measure base = build(j.at("base"));
  std::vector<BallRestriction> balls;
  for (const auto& b : j.value("balls", json::array())) {
    balls.push_back({point_from(b.at("center"), base.dim()), b.at("log_radius").get<double>()});
  }
  return base.with_view(point_from(j.at("center"), base.dim()), j.at("log_scale").get<double>(),
                        std::move(balls));
}

Measure build(const json& j) {
  require(j.is_object() && j.contains("type"), "measure spec needs a type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "view") return build_view(j);
  const int depth = depth_of(j);
  if (type == "lebesgue_ball") return lebesgue_ball(j.at("dim").get<int>(), depth);
  if (type == "point_mass") {
    const int dim = j.at("dim").get<int>();
    return point_mass(dim, point_from(j.value("at", json()), dim), depth);
  }
  if (type == "plane") return plane(j.at("dim").get<int>(), j.at("axes").get<std::vector<int>>(), depth);
  if (type == "ifs") {
    if (j.contains("salli_alpha")) return cantor_salli(j.at("salli_alpha").get<double>(), depth);
    IfsSpec s;
    s.dim = j.at("dim").get<int>();
    for (const auto& m : j.at("maps")) {
      s.maps.push_back({m.at("ratio").get<double>(), point_from(m.at("offset"), s.dim)});
    }
    s.weights = j.at("weights").get<std::vector<double>>();
    return ifs_measure(s, frame_from(j, s.dim), depth);
  }
  if (type == "grid") {
    const int dim = j.at("dim").get<int>();
    return grid_measure(dim, SubdivisionRule::from_json(j.at("rule")), frame_from(j, dim), depth);
  }
  if (type == "splice") {
    const int dim = j.at("dim").get<int>();
    return splice(dim, SubdivisionRule::from_json(j.at("rule_a")),
                  SubdivisionRule::from_json(j.at("rule_b")),
                  SpliceSchedule::from_json(j.at("schedule")), frame_from(j, dim), depth);
  }
  if (type == "product") {
    const json& f = j.at("factors");
    require(f.is_array() && f.size() == 2, "product needs two factors");
    return product_measure(build(capped(f[0], depth)), build(capped(f[1], depth)));
  }
  if (type == "mixture") {
    std::vector<Measure> parts;
    std::vector<double> weights;
    for (const auto& c : j.at("components")) {
      parts.push_back(build(capped(c.at("spec"), depth)));
      weights.push_back(c.at("weight").get<double>());
    }
    return mixture(parts, weights);
  }
  fail(ErrorCode::config_error, "unknown measure type '" + type + "'");
}

}  // namespace

Measure measure_from_json(const json& spec) {
  try {
    return build(spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_params || e.code() == ErrorCode::unsupported_kind) {
      fail(ErrorCode::config_error, e.what());
    }
    throw;
  } catch (const json::exception& e) {
    fail(ErrorCode::config_error, std::string("malformed measure spec: ") + e.what());
  }
}

json measure_to_json(const Measure& mu) { return mu.to_json(); }

}  // namespace scenery
