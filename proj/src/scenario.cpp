#include "svdkit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "svdkit/errors.hpp"

namespace svdkit {

using nlohmann::json;

namespace {

[[noreturn]] void type_error(const std::string& path, const std::string& what) {
  throw ScenarioParseError(path + ": " + what);
}

[[noreturn]] void semantic_error(const std::string& path, const std::string& what) {
  throw ScenarioSemanticError(path + ": " + what);
}

const json& child(const json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) type_error(path, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) type_error(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) type_error(path, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) type_error(path, "expected true or false");
  return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) type_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

Point point(const json& j, const std::string& path) {
  const auto v = numbers(j, path);
  if (v.size() != 2) type_error(path, "expected [x, y]");
  return {v[0], v[1]};
}

std::vector<Point> points(const json& j, const std::string& path) {
  if (!j.is_array()) type_error(path, "expected an array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], path + "/" + std::to_string(i)));
  return out;
}

json to_json(Point p) { return json::array({p.x, p.y}); }

json to_json(const std::vector<Point>& ps) {
  json a = json::array();
  for (Point p : ps) a.push_back(to_json(p));
  return a;
}

SmoothSpec read_smooth(const json& j, const std::string& path) {
  SmoothSpec s;
  if (!j.is_object()) type_error(path, "expected an object");
  const json& kind = child(j, path, "type");
  if (!kind.is_string()) type_error(path + "/type", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "constant") {
    s.kind = SmoothSpec::Kind::constant;
    s.value = number(child(j, path, "value"), path + "/value");
  } else if (k == "polynomial") {
    s.kind = SmoothSpec::Kind::polynomial;
    s.coefficients = numbers(child(j, path, "coefficients"), path + "/coefficients");
    s.nx = integer(child(j, path, "nx"), path + "/nx");
    s.ny = integer(child(j, path, "ny"), path + "/ny");
  } else if (k == "grid") {
    s.kind = SmoothSpec::Kind::grid;
    s.nx = integer(child(j, path, "nx"), path + "/nx");
    s.ny = integer(child(j, path, "ny"), path + "/ny");
    s.values = numbers(child(j, path, "values"), path + "/values");
  } else {
    type_error(path + "/type", "unknown smooth type '" + k + "'");
  }
  return s;
}

json write_smooth(const SmoothSpec& s) {
  switch (s.kind) {
    case SmoothSpec::Kind::constant: return {{"type", "constant"}, {"value", s.value}};
    case SmoothSpec::Kind::polynomial:
      return {{"type", "polynomial"}, {"coefficients", s.coefficients}, {"nx", s.nx}, {"ny", s.ny}};
    case SmoothSpec::Kind::grid: return {{"type", "grid"}, {"nx", s.nx}, {"ny", s.ny}, {"values", s.values}};
  }
  return {};
}

FieldSpec read_field(const json& j, const std::string& path) {
  if (!j.is_object()) type_error(path, "expected an object");
  FieldSpec f;
  if (j.contains("smooth")) f.smooth = read_smooth(j["smooth"], path + "/smooth");
  if (j.contains("cantor_depth")) f.cantor_depth = integer(j["cantor_depth"], path + "/cantor_depth");
  if (j.contains("walls")) {
    const json& ws = j["walls"];
    if (!ws.is_array()) type_error(path + "/walls", "expected an array");
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string p = path + "/walls/" + std::to_string(i);
      WallSpec w;
      w.vertices = points(child(ws[i], p, "vertices"), p + "/vertices");
      if (ws[i].contains("closed")) w.closed = boolean(ws[i]["closed"], p + "/closed");
      if (ws[i].contains("heights")) {
        w.heights = numbers(ws[i]["heights"], p + "/heights");
      } else {
        w.heights = {number(child(ws[i], p, "height"), p + "/height")};
      }
      f.walls.push_back(std::move(w));
    }
  }
  if (j.contains("channels")) {
    const json& cs = j["channels"];
    if (!cs.is_array()) type_error(path + "/channels", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string p = path + "/channels/" + std::to_string(i);
      ChannelSpec c;
      c.direction = point(child(cs[i], p, "direction"), p + "/direction");
      const auto band = numbers(child(cs[i], p, "band"), p + "/band");
      if (band.size() != 2) type_error(p + "/band", "expected [a, b]");
      c.band_lo = band[0];
      c.band_hi = band[1];
      c.weight = number(child(cs[i], p, "weight"), p + "/weight");
      const double len = norm(c.direction);
      if (!(len > 0.0) || !std::isfinite(len)) semantic_error(p + "/direction", "direction must be a nonzero vector");
      if (std::abs(len - 1.0) > 1e-15) c.direction = (1.0 / len) * c.direction;
      if (c.weight == 0.0) semantic_error(p + "/weight", "channel weight must be nonzero");
      if (!(c.band_lo < c.band_hi)) semantic_error(p + "/band", "band needs a < b");
      f.channels.push_back(c);
    }
  }
  return f;
}

json write_field(const FieldSpec& f) {
  json walls = json::array();
  for (const WallSpec& w : f.walls) {
    json jw{{"vertices", to_json(w.vertices)}, {"closed", w.closed}};
    if (w.heights.size() == 1) {
      jw["height"] = w.heights.front();
    } else {
      jw["heights"] = w.heights;
    }
    walls.push_back(std::move(jw));
  }
  json channels = json::array();
  for (const ChannelSpec& c : f.channels) {
    channels.push_back({{"direction", to_json(c.direction)}, {"band", {c.band_lo, c.band_hi}}, {"weight", c.weight}});
  }
  return {{"smooth", write_smooth(f.smooth)}, {"walls", walls}, {"channels", channels}, {"cantor_depth", f.cantor_depth}};
}

ProfileSpec read_profile(const json& j, const std::string& path) {
  ProfileSpec p;
  p.breakpoints = numbers(child(j, path, "breakpoints"), path + "/breakpoints");
  const json& pieces = child(j, path, "pieces");
  if (!pieces.is_array()) type_error(path + "/pieces", "expected an array");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string q = path + "/pieces/" + std::to_string(i);
    p.pieces.emplace_back(number(child(pieces[i], q, "value"), q + "/value"),
                          pieces[i].contains("slope") ? number(pieces[i]["slope"], q + "/slope") : 0.0);
  }
  if (j.contains("jumps")) {
    for (std::size_t i = 0; i < j["jumps"].size(); ++i) {
      const std::string q = path + "/jumps/" + std::to_string(i);
      p.jumps.emplace_back(number(child(j["jumps"][i], q, "t"), q + "/t"),
                           number(child(j["jumps"][i], q, "height"), q + "/height"));
    }
  }
  if (j.contains("cantor")) {
    for (std::size_t i = 0; i < j["cantor"].size(); ++i) {
      const std::string q = path + "/cantor/" + std::to_string(i);
      const json& c = j["cantor"][i];
      CantorAtom a;
      a.s0 = number(child(c, q, "s0"), q + "/s0");
      a.s1 = number(child(c, q, "s1"), q + "/s1");
      a.weight = number(child(c, q, "weight"), q + "/weight");
      a.level0 = c.contains("level0") ? number(c["level0"], q + "/level0") : 0.0;
      a.level1 = c.contains("level1") ? number(c["level1"], q + "/level1") : 1.0;
      p.cantor.push_back(a);
    }
  }
  return p;
}

json write_profile(const ProfileSpec& p) {
  json pieces = json::array();
  for (const auto& [v, s] : p.pieces) pieces.push_back({{"value", v}, {"slope", s}});
  json jumps = json::array();
  for (const auto& [t, h] : p.jumps) jumps.push_back({{"t", t}, {"height", h}});
  json cantor = json::array();
  for (const CantorAtom& a : p.cantor) {
    cantor.push_back({{"s0", a.s0}, {"s1", a.s1}, {"weight", a.weight}, {"level0", a.level0}, {"level1", a.level1}});
  }
  return {{"breakpoints", p.breakpoints}, {"pieces", pieces}, {"jumps", jumps}, {"cantor", cantor}};
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

}  // namespace

bool ProfileSpec::operator==(const ProfileSpec& o) const {
  if (breakpoints != o.breakpoints || pieces != o.pieces || jumps != o.jumps || cantor.size() != o.cantor.size()) {
    return false;
  }
  for (std::size_t i = 0; i < cantor.size(); ++i) {
    const CantorAtom &a = cantor[i], &b = o.cantor[i];
    if (a.s0 != b.s0 || a.s1 != b.s1 || a.weight != b.weight || a.level0 != b.level0 || a.level1 != b.level1) {
      return false;
    }
  }
  return true;
}

Domain build_domain(const DomainSpec& d) {
  if (d.rectangle) return Domain::rectangle(d.vertices[0].x, d.vertices[0].y, d.vertices[1].x, d.vertices[1].y);
  return Domain::polygon(d.vertices);
}

StructuredBVField build_field(const Scenario& s, const FieldSpec& f) {
  Domain dom = build_domain(s.domain);
  SmoothGrid smooth = SmoothGrid::constant(f.smooth.value);
  if (f.smooth.kind == SmoothSpec::Kind::polynomial) {
    smooth = SmoothGrid::polynomial(dom.bounds(), f.smooth.nx, f.smooth.ny, f.smooth.coefficients);
  } else if (f.smooth.kind == SmoothSpec::Kind::grid) {
    smooth = SmoothGrid::samples(dom.bounds(), f.smooth.nx, f.smooth.ny, f.smooth.values);
  }
  std::vector<JumpWall> walls;
  for (const WallSpec& w : f.walls) {
    JumpWall jw;
    jw.vertices = w.vertices;
    jw.closed = w.closed;
    const std::size_t segs = w.vertices.size() < 2 ? 0 : (w.closed ? w.vertices.size() : w.vertices.size() - 1);
    jw.heights = w.heights.size() == 1 ? std::vector<double>(segs, w.heights.front()) : w.heights;
    walls.push_back(std::move(jw));
  }
  std::vector<CantorChannel> channels;
  for (const ChannelSpec& c : f.channels) channels.push_back({c.direction, c.band_lo, c.band_hi, c.weight});
  return StructuredBVField(std::move(dom), std::move(smooth), std::move(walls), std::move(channels), f.cantor_depth);
}

BVProfile build_profile(const ProfileSpec& p) {
  std::vector<AcPiece> pieces;
  for (const auto& [v, s] : p.pieces) {
    AcPiece a;
    a.value = v;
    a.slope = s;
    a.direction = {1.0, 0.0};
    pieces.push_back(a);
  }
  std::vector<JumpAtom> jumps;
  for (const auto& [t, h] : p.jumps) jumps.push_back({t, h});
  return BVProfile(p.breakpoints, std::move(pieces), std::move(jumps), p.cantor);
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) type_error("/", "scenario must be a JSON object");
  if (j.contains("schema_version") && integer(j["schema_version"], "/schema_version") != 1) {
    semantic_error("/schema_version", "only schema_version 1 is supported");
  }
  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) type_error("/name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  const json& d = child(j, "", "domain");
  const json& dtype = child(d, "/domain", "type");
  if (!dtype.is_string()) type_error("/domain/type", "expected a string");
  if (dtype == "rectangle") {
    s.domain.rectangle = true;
    s.domain.vertices = {point(child(d, "/domain", "min"), "/domain/min"), point(child(d, "/domain", "max"), "/domain/max")};
  } else if (dtype == "polygon") {
    s.domain.rectangle = false;
    s.domain.vertices = points(child(d, "/domain", "vertices"), "/domain/vertices");
  } else {
    type_error("/domain/type", "expected 'rectangle' or 'polygon'");
  }
  s.field = read_field(child(j, "", "field"), "/field");
  if (j.contains("barycenter")) s.barycenter = read_field(j["barycenter"], "/barycenter");
  if (j.contains("resolution")) s.resolution = number(j["resolution"], "/resolution");
  if (j.contains("connectivity")) s.connectivity = integer(j["connectivity"], "/connectivity");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("zero")) s.zero_tol = number(t["zero"], "/tolerances/zero");
    if (t.contains("coverage")) s.coverage_tol = number(t["coverage"], "/tolerances/coverage");
  }
  if (j.contains("queries")) {
    const json& q = j["queries"];
    if (q.contains("sources")) s.sources = points(q["sources"], "/queries/sources");
    if (q.contains("targets")) s.targets = points(q["targets"], "/queries/targets");
    if (q.contains("scale")) s.scale = number(q["scale"], "/queries/scale");
    if (q.contains("subrects")) {
      for (std::size_t i = 0; i < q["subrects"].size(); ++i) {
        const std::string p = "/queries/subrects/" + std::to_string(i);
        const json& r = q["subrects"][i];
        SubRectSpec b{point(child(r, p, "min"), p + "/min"), point(child(r, p, "max"), p + "/max"), false};
        if (r.contains("closed")) b.closed = boolean(r["closed"], p + "/closed");
        s.subrects.push_back(b);
      }
    }
  }
  if (j.contains("profile_1d")) s.profile_1d = read_profile(j["profile_1d"], "/profile_1d");
  if (j.contains("dense_balls")) {
    const json& b = j["dense_balls"];
    DenseBallSpec spec;
    if (b.contains("count")) spec.count = integer(b["count"], "/dense_balls/count");
    if (b.contains("epsilon")) spec.epsilon = number(b["epsilon"], "/dense_balls/epsilon");
    if (b.contains("resolution")) spec.resolution = number(b["resolution"], "/dense_balls/resolution");
    s.dense_balls = spec;
  }

  // Semantic validation.
  if (!(s.resolution > 0.0)) semantic_error("/resolution", "resolution must be positive");
  if (s.connectivity != 4 && s.connectivity != 8 && s.connectivity != 16) {
    semantic_error("/connectivity", "connectivity must be 4, 8 or 16");
  }
  if (!(s.scale >= 0.0 && s.scale <= 1.0)) semantic_error("/queries/scale", "scale must lie in [0, 1]");
  std::optional<Domain> dom;
  try {
    dom = build_domain(s.domain);
  } catch (const ContractError& e) {
    semantic_error("/domain", e.what());
  }
  try {
    build_field(s, s.field);
  } catch (const ContractError& e) {
    semantic_error("/field", e.what());
  }
  if (s.barycenter) {
    try {
      build_field(s, *s.barycenter);
    } catch (const ContractError& e) {
      semantic_error("/barycenter", e.what());
    }
  }
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    if (!dom->contains(s.sources[i])) semantic_error("/queries/sources/" + std::to_string(i), "point outside the domain");
  }
  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    if (!dom->contains(s.targets[i])) semantic_error("/queries/targets/" + std::to_string(i), "point outside the domain");
  }
  for (std::size_t i = 0; i < s.subrects.size(); ++i) {
    const SubRectSpec& b = s.subrects[i];
    if (!(b.min.x < b.max.x && b.min.y < b.max.y)) semantic_error("/queries/subrects/" + std::to_string(i), "empty rectangle");
  }
  if (s.profile_1d) {
    try {
      build_profile(*s.profile_1d);
    } catch (const ContractError& e) {
      semantic_error("/profile_1d", e.what());
    }
  }
  if (s.dense_balls && s.dense_balls->count < 1) semantic_error("/dense_balls/count", "count must be at least 1");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioParseError& e) {
    throw ScenarioParseError(path + ": " + e.what());
  } catch (const ScenarioSemanticError& e) {
    throw ScenarioSemanticError(path + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["schema_version"] = 1;
  j["name"] = s.name;
  if (s.domain.rectangle) {
    j["domain"] = {{"type", "rectangle"}, {"min", to_json(s.domain.vertices[0])}, {"max", to_json(s.domain.vertices[1])}};
  } else {
    j["domain"] = {{"type", "polygon"}, {"vertices", to_json(s.domain.vertices)}};
  }
  j["field"] = write_field(s.field);
  if (s.barycenter) j["barycenter"] = write_field(*s.barycenter);
  j["resolution"] = s.resolution;
  j["connectivity"] = s.connectivity;
  j["tolerances"] = {{"zero", s.zero_tol}, {"coverage", s.coverage_tol}};
  json subrects = json::array();
  for (const SubRectSpec& b : s.subrects) {
    subrects.push_back({{"min", to_json(b.min)}, {"max", to_json(b.max)}, {"closed", b.closed}});
  }
  j["queries"] = {{"sources", to_json(s.sources)}, {"targets", to_json(s.targets)}, {"subrects", subrects}, {"scale", s.scale}};
  if (s.profile_1d) j["profile_1d"] = write_profile(*s.profile_1d);
  if (s.dense_balls) {
    j["dense_balls"] = {{"count", s.dense_balls->count}, {"epsilon", s.dense_balls->epsilon},
                        {"resolution", s.dense_balls->resolution}};
  }
  return j.dump(2) + "\n";
}

}  // namespace svdkit
