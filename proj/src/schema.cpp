#include "kobdyn/schema.hpp"

#include <cstdio>
#include <fstream>

#include "kobdyn/errors.hpp"

namespace kobdyn {

using nlohmann::json;

Complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ConfigError("expected a number or [re, im] pair", where);
}

Point parse_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a coordinate array", where);
  if (j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    // a single complex coordinate
    return point1(Complex(j[0].get<double>(), j[1].get<double>()));
  }
  Point p(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    p[static_cast<int>(i)] = parse_complex(j[i], where + "/" + std::to_string(i));
  if (!is_finite(p)) throw ConfigError("coordinates must be finite", where);
  return p;
}

json point_to_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back({p[i].real(), p[i].imag()});
  return a;
}

Domain parse_domain(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("domain needs a type field", "/domain/type");
  std::string type = j["type"].get<std::string>();
  if (type == "disk") return Domain::disk();
  if (type == "ball") {
    if (!j.contains("dim")) throw ConfigError("ball domain needs dim", "/domain/dim");
    return Domain::ball(j["dim"].get<int>());
  }
  if (type == "linear_image") {
    if (!j.contains("matrix")) throw ConfigError("linear_image needs matrix", "/domain/matrix");
    const json& m = j["matrix"];
    int n = static_cast<int>(m.size());
    CMat T(n, n);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(m[r].size()) != n)
        throw ConfigError("matrix must be square", "/domain/matrix");
      for (int c = 0; c < n; ++c)
        T(r, c) = parse_complex(m[r][c], "/domain/matrix");
    }
    return Domain::linear_image(T);
  }
  throw ConfigError("unknown domain type '" + type + "'", "/domain/type");
}

json domain_to_json(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::UnitDisk:
      return {{"type", "disk"}};
    case DomainKind::UnitBall:
      return {{"type", "ball"}, {"dim", d.dim()}};
    case DomainKind::LinearImage: {
      json rows = json::array();
      for (Eigen::Index r = 0; r < d.T().rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < d.T().cols(); ++c)
          row.push_back({d.T()(r, c).real(), d.T()(r, c).imag()});
        rows.push_back(row);
      }
      return {{"type", "linear_image"}, {"matrix", rows}};
    }
    case DomainKind::General:
      return {{"type", "general"}};
  }
  return {};
}

HolMap parse_map(const json& j, const std::optional<Domain>& hint) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("map needs a type field", "/map/type");
  std::string type = j["type"].get<std::string>();
  auto need = [&](const char* field) -> const json& {
    if (!j.contains(field))
      throw ConfigError(std::string("map '") + type + "' needs field '" + field + "'",
                        std::string("/map/") + field);
    return j[field];
  };
  if (type == "disk_mobius") return HolMap::disk_mobius(need("a").get<double>());
  if (type == "disk_blaschke_quad") return HolMap::disk_blaschke_quad(need("a").get<double>());
  if (type == "disk_parabolic") return HolMap::disk_parabolic();
  if (type == "ball_mobius_axis")
    return HolMap::ball_mobius_axis(need("a").get<double>(), need("dim").get<int>());
  if (type == "unitary") {
    const json& m = need("matrix");
    int n = static_cast<int>(m.size());
    CMat U(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) U(r, c) = parse_complex(m[r][c], "/map/matrix");
    return HolMap::unitary(U);
  }
  if (type == "scale") {
    Complex lambda = parse_complex(need("lambda"), "/map/lambda");
    Domain D = hint.value_or(Domain::disk());
    if (j.contains("dim") && !hint) D = Domain::ball(j["dim"].get<int>());
    return HolMap::scale(lambda, D);
  }
  if (type == "compose") {
    const json& arr = need("maps");
    std::vector<HolMap> parts;
    for (const auto& mj : arr) parts.push_back(parse_map(mj, hint));
    return HolMap::compose(parts);
  }
  throw ConfigError("unknown map type '" + type + "'", "/map/type");
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json orbit_to_json(const OrbitRecord& orbit) {
  json pts = json::array();
  for (const auto& p : orbit.points) pts.push_back(point_to_json(p));
  json j{{"schema_version", kSchemaVersion},
         {"direction", orbit.direction == OrbitDirection::Backward ? "backward" : "forward"},
         {"points", pts},
         {"steps", orbit.steps},
         {"residuals", orbit.residuals},
         {"step_sup", orbit.step_sup},
         {"converged_boundary", orbit.converged_boundary},
         {"truncated", orbit.truncated},
         {"distance_capped", orbit.distance_capped},
         {"note", orbit.note}};
  if (!orbit.t_seq.empty()) j["t_seq"] = orbit.t_seq;
  if (!orbit.s_seq.empty()) j["s_seq"] = orbit.s_seq;
  if (!orbit.gauges.empty()) j["gauges"] = orbit.gauges;
  if (orbit.boundary_limit) j["boundary_limit"] = point_to_json(*orbit.boundary_limit);
  return j;
}

std::string orbit_to_csv(const OrbitRecord& orbit) {
  std::string out;
  const int d = orbit.points.empty() ? 0 : static_cast<int>(orbit.points[0].size());
  out += "n";
  for (int c = 0; c < d; ++c)
    out += ",re_z" + std::to_string(c + 1) + ",im_z" + std::to_string(c + 1);
  out += ",step,residual,t_n,s_n,gauge\r\n";
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    out += std::to_string(i);
    for (int c = 0; c < d; ++c) {
      out += "," + fmt(orbit.points[i][c].real());
      out += "," + fmt(orbit.points[i][c].imag());
    }
    out += ",";
    if (i >= 1 && i - 1 < orbit.steps.size()) out += fmt(orbit.steps[i - 1]);
    out += ",";
    if (i >= 1 && i - 1 < orbit.residuals.size()) out += fmt(orbit.residuals[i - 1]);
    out += ",";
    if (i < orbit.t_seq.size()) out += fmt(orbit.t_seq[i]);
    out += ",";
    if (i < orbit.s_seq.size()) out += fmt(orbit.s_seq[i]);
    out += ",";
    if (i < orbit.gauges.size()) out += fmt(orbit.gauges[i]);
    out += "\r\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace kobdyn
