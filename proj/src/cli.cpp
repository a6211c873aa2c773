#include "svdkit/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "svdkit/connectivity.hpp"
#include "svdkit/errors.hpp"
#include "svdkit/scenario.hpp"
#include "svdkit/steiner.hpp"

namespace svdkit::cli {

using Json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string command;
  std::string scenario;
  std::optional<double> resolution;
  std::optional<int> connectivity;
  std::optional<double> tol;
  std::string out_dir;
  std::string format = "json";
  std::uint64_t seed = 7;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string number_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json point_json(Point p) { return Json::array({p.x, p.y}); }

Json header(const Options& o, const Scenario& s) {
  return Json{{"schema_version", 1}, {"command", o.command}, {"scenario", s.name}};
}

Json walls_json(const std::vector<JumpWall>& walls) {
  Json out = Json::array();
  for (const JumpWall& w : walls) {
    Json verts = Json::array();
    for (Point p : w.vertices) verts.push_back(point_json(p));
    out.push_back({{"vertices", verts}, {"closed", w.closed}, {"heights", w.heights}});
  }
  return out;
}

Json verdict_json(const SvdGraph& g, const MinSingularVerdict& v) {
  Json j{{"minimally_singular", v.minimally_singular},
         {"class_count", v.class_count},
         {"node_count", v.node_count},
         {"largest_fraction", v.largest_fraction}};
  j["witness"] = v.witness >= 0 ? point_json(g.nodes[v.witness]) : Json(nullptr);
  j["violating_node"] = v.violating_node >= 0 ? point_json(g.nodes[v.violating_node]) : Json(nullptr);
  return j;
}

Json equality_json(const EqualityReport& r) {
  return {{"sections_are_segments", r.sections_are_segments},
          {"gradient_vanishes", r.gradient_vanishes},
          {"jumps_dominated", r.jumps_dominated},
          {"cantor_dominated", r.cantor_dominated},
          {"verdict", r.verdict},
          {"perimeter_e", r.perimeter_e},
          {"perimeter_fv", r.perimeter_fv},
          {"perimeters_equal", r.perimeters_equal},
          {"agrees", r.agrees()},
          {"detail", r.detail}};
}

Json breakdown_json(const PerimeterBreakdown& b) {
  return {{"ac", b.ac}, {"jump_vertical", b.jump}, {"cantor_vertical", b.cantor}, {"boundary", b.boundary},
          {"total", b.total()}};
}

void check_map_invariants(const SvdGraph& g, const SvdMap& m) {
  if (!monotone_along_optimal(m)) throw InvariantBreach("distances decrease along an optimal path");
  for (const SvdEdge& e : g.edges) {
    if (m.dist[e.v] > m.dist[e.u] + e.weight || m.dist[e.u] > m.dist[e.v] + e.weight) {
      throw InvariantBreach("distance map violates an edge triangle inequality");
    }
  }
}

class Emitter {
 public:
  Emitter(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const std::string& ext, const std::string& bytes) {
    if (o_.out_dir.empty()) {
      if (ext == "pgm") throw UsageError("--format pgm needs --out");
      out_ << bytes;
      return;
    }
    std::filesystem::create_directories(o_.out_dir);
    const auto path = std::filesystem::path(o_.out_dir) / (o_.command + "." + ext);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << bytes;
    if (!f) throw std::runtime_error("cannot write " + path.string());
    out_ << path.string() << "\n";
  }

  void json(const Json& j) { emit("json", j.dump(2) + "\n"); }

 private:
  const Options& o_;
  std::ostream& out_;
};

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (o.format == a) return;
  }
  throw UsageError("format '" + o.format + "' is not available for " + o.command);
}

int command_svd_map(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json", "csv", "pgm", "svg"});
  const StructuredBVField f = build_field(s, s.field);
  const SvdGraph g = build_graph(f, o.resolution.value_or(s.resolution), o.connectivity.value_or(s.connectivity));
  if (g.size() == 0) throw ConstructionError("no admissible lattice nodes");
  const int src = s.sources.empty() ? 0 : g.nearest_node(s.sources.front());
  const SvdMap m = svd_map(g, src);
  check_map_invariants(g, m);
  if (o.format == "csv") {
    em.emit("csv", map_csv(g, m));
  } else if (o.format == "pgm") {
    em.emit("pgm", map_pgm(g, m));
  } else if (o.format == "svg") {
    em.emit("svg", map_svg(g, m));
  } else {
    Json j = header(o, s);
    j["resolution"] = g.resolution;
    j["connectivity"] = g.connectivity;
    j["source"] = point_json(g.nodes[src]);
    j["monotone_along_optimal"] = true;
    Json nodes = Json::array();
    for (std::size_t n = 0; n < g.size(); ++n) {
      nodes.push_back(Json::array({g.nodes[n].x, g.nodes[n].y, finite_or_null(m.dist[n])}));
    }
    j["nodes"] = nodes;
    em.json(j);
  }
  return kOk;
}

int command_svd(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  if (s.sources.empty() || s.targets.empty()) throw ScenarioSemanticError("svd needs queries.sources and queries.targets");
  const StructuredBVField f = build_field(s, s.field);
  const SvdGraph g = build_graph(f, o.resolution.value_or(s.resolution), o.connectivity.value_or(s.connectivity));
  Json j = header(o, s);
  Json pairs = Json::array();
  for (Point a : s.sources) {
    for (Point b : s.targets) {
      const int x1 = g.nearest_node(a), x2 = g.nearest_node(b);
      const SvdResult r = svd(g, x1, x2);
      Json chain = Json::array();
      for (Point p : r.chain) chain.push_back(point_json(p));
      pairs.push_back({{"from", point_json(g.nodes[x1])}, {"to", point_json(g.nodes[x2])},
                       {"distance", finite_or_null(r.distance)}, {"chain", chain}});
    }
  }
  j["pairs"] = pairs;
  em.json(j);
  return kOk;
}

int command_min_singular(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  const StructuredBVField f = build_field(s, s.field);
  const SvdGraph g = build_graph(f, o.resolution.value_or(s.resolution), o.connectivity.value_or(s.connectivity));
  const MinSingularVerdict v = is_minimally_singular(g, o.tol.value_or(s.coverage_tol));
  Json j = header(o, s);
  j["verdict"] = verdict_json(g, v);
  j["class_sizes"] = zero_classes(g, s.zero_tol).size;
  em.json(j);
  return kOk;
}

int command_rigidity(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  const StructuredBVField v = build_field(s, s.field);
  const double res = o.resolution.value_or(s.resolution);
  const int k = o.connectivity.value_or(s.connectivity);
  const RigidityVerdict r = rigidity_test(v, res, o.tol.value_or(s.coverage_tol), k);
  const SvdGraph g = build_graph(v, res, k);
  Json j = header(o, s);
  j["rigid"] = r.rigid;
  j["singularity"] = verdict_json(g, r.singularity);
  if (r.counterexample) {
    EqualityOptions eo;
    eo.resolution = res;
    const EqualityReport rep = check_equality_case(r.counterexample->v, r.counterexample->b, eo);
    j["counterexample"] = {{"barycenter_walls", walls_json(r.counterexample->b.walls())},
                           {"barycenter_offset", r.counterexample->b.smooth().value({0.0, 0.0})},
                           {"equality", equality_json(rep)}};
  } else {
    j["counterexample"] = nullptr;
  }
  em.json(j);
  return kOk;
}

int command_perimeter(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  const StructuredBVField v = build_field(s, s.field);
  const StructuredBVField b = s.barycenter ? build_field(s, *s.barycenter) : steiner_set(v).b;
  const VDistributedSet e{v, b};
  const VDistributedSet fv = steiner_set(v);
  std::vector<SubRect> rects;
  for (const SubRectSpec& r : s.subrects) rects.push_back({{r.min.x, r.min.y, r.max.x, r.max.y}, r.closed});
  if (rects.empty()) rects.push_back({v.domain().bounds(), false});
  Json j = header(o, s);
  Json list = Json::array();
  for (const SubRect& r : rects) {
    const PerimeterBreakdown pe = perimeter_breakdown(e, r), pf = perimeter_breakdown(fv, r);
    list.push_back({{"box", Json::array({r.box.xmin, r.box.ymin, r.box.xmax, r.box.ymax})},
                    {"closed", r.closed},
                    {"e", breakdown_json(pe)},
                    {"fv", breakdown_json(pf)},
                    {"excess", pe.total() - pf.total()}});
  }
  j["subrects"] = list;
  em.json(j);
  return kOk;
}

int command_equality(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  const StructuredBVField v = build_field(s, s.field);
  const StructuredBVField b = s.barycenter ? build_field(s, *s.barycenter) : steiner_set(v).b;
  EqualityOptions eo;
  eo.resolution = o.resolution.value_or(s.resolution);
  Json j = header(o, s);
  j["report"] = equality_json(check_equality_case(v, b, eo));
  em.json(j);
  return kOk;
}

int command_counterexample(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  const StructuredBVField v = build_field(s, s.field);
  const double res = o.resolution.value_or(s.resolution);
  const int k = o.connectivity.value_or(s.connectivity);
  Point source;
  if (!s.sources.empty()) {
    source = s.sources.front();
  } else {
    const SvdGraph g = build_graph(v, res, k);
    source = g.nodes[is_minimally_singular(g).witness];
  }
  const VDistributedSet e = counterexample(v, source, s.scale, res, k);
  const SubRect whole{v.domain().bounds(), false};
  const double pe = perimeter(e, whole), pf = perimeter(steiner_set(v), whole);
  Json j = header(o, s);
  j["scale"] = s.scale;
  j["barycenter_walls"] = walls_json(e.b.walls());
  j["barycenter_offset"] = e.b.smooth().value({0.0, 0.0});
  j["perimeter_e"] = pe;
  j["perimeter_fv"] = pf;
  j["perimeters_equal"] = std::abs(pe - pf) <= 1e-9 * pf;
  EqualityOptions eo;
  eo.resolution = res;
  try {
    j["equality"] = equality_json(check_equality_case(v, e.b, eo));
  } catch (const PreconditionViolation& ex) {
    j["equality"] = {{"precondition_violated", ex.what()}};
  }
  em.json(j);
  return kOk;
}

int command_disconnect(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json", "pgm"});
  const StructuredBVField v = build_field(s, s.field);
  const DisconnectReport r = disconnect_check(v, o.resolution.value_or(s.resolution));
  if (o.format == "pgm") {
    em.emit("pgm", r.singular.pgm());
    return kOk;
  }
  const Rect box = r.grid.box();
  Json j = header(o, s);
  j["grid"] = {{"box", Json::array({box.xmin, box.ymin, box.xmax, box.ymax})}, {"nx", r.grid.nx()}, {"ny", r.grid.ny()}};
  j["zero_set_disconnects"] = r.zero_set_disconnects;
  j["singular_set_disconnects"] = r.singular_set_disconnects;
  j["omega_candidate"] = {{"components", r.omega.components}, {"connected", r.omega.connected},
                          {"cells_rle", r.omega.cells.rle()}};
  j["zero_cells_rle"] = r.zero.rle();
  j["rigidity_precondition_flagged"] = r.rigidity_precondition_flagged;
  j["precondition_detail"] = r.precondition_failure;
  j["note"] = "interfaces stand in for essential boundaries at lattice scale";
  em.json(j);
  return kOk;
}

int command_positivity(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json"});
  if (!s.profile_1d) throw ScenarioSemanticError("positivity-1d needs a profile_1d section");
  const PositivityReport r = positivity_set_1d(build_profile(*s.profile_1d));
  Json j = header(o, s);
  j["hypothesis_holds"] = r.hypothesis_holds;
  j["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
  Json iv = Json::array();
  for (const auto& [a, b] : r.intervals) iv.push_back(Json::array({a, b}));
  j["intervals"] = iv;
  j["single_interval"] = r.single_interval;
  if (r.single_interval) j["interval"] = Json::array({r.a, r.b});
  j["positive_sample_count"] = r.positive_samples.size();
  em.json(j);
  return r.hypothesis_holds ? kOk : kPrecondition;
}

int command_dense_balls(const Options& o, const Scenario& s, Emitter& em) {
  require_format(o, {"json", "pgm"});
  const DenseBallSpec spec = s.dense_balls.value_or(DenseBallSpec{});
  const DenseBallReport r = dense_ball_complement(spec.count, o.seed, spec.epsilon, o.resolution.value_or(spec.resolution));
  if (o.format == "pgm") {
    if (!r.constructed) throw ConstructionError(r.failure);
    em.emit("pgm", r.complement.pgm());
    return kOk;
  }
  Json j = header(o, s);
  j["count"] = spec.count;
  j["seed"] = o.seed;
  j["epsilon"] = spec.epsilon;
  j["constructed"] = r.constructed;
  j["failure"] = r.failure;
  j["perimeter_sum"] = r.bounds.perimeter_sum;
  j["perimeter_bound_ok"] = r.bounds.perimeter_ok;
  j["area_sum"] = r.bounds.area_sum;
  j["area_bound_ok"] = r.bounds.area_ok;
  j["union_area_estimate"] = r.union_area_estimate;
  j["union_area_ok"] = r.union_area_ok;
  j["interior_cells"] = r.interior_cells;
  j["probe_factor"] = r.probe_factor;
  j["limitation"] = "empty interior of the complement holds only in the limit of infinitely many balls";
  if (r.constructed) {
    j["grid"] = {{"nx", r.complement.nx()}, {"ny", r.complement.ny()}};
    j["complement_rle"] = r.complement.rle();
  }
  em.json(j);
  return r.constructed ? kOk : kSemantic;
}

}  // namespace

std::string map_csv(const SvdGraph& g, const SvdMap& m) {
  std::ostringstream s;
  s << "x,y,dist\n";
  for (std::size_t n = 0; n < g.size(); ++n) {
    s << number_text(g.nodes[n].x) << ',' << number_text(g.nodes[n].y) << ',' << number_text(m.dist[n]) << '\n';
  }
  return s.str();
}

namespace {

std::vector<double> normalized(const SvdMap& m) {
  double lo = kInf, hi = -kInf;
  for (double d : m.dist) {
    if (std::isfinite(d)) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  std::vector<double> out;
  for (double d : m.dist) {
    if (!std::isfinite(d)) {
      out.push_back(1.0);
    } else {
      out.push_back(hi > lo ? (d - lo) / (hi - lo) : 0.0);
    }
  }
  return out;
}

}  // namespace

std::string map_pgm(const SvdGraph& g, const SvdMap& m) {
  const auto level = normalized(m);
  std::ostringstream s;
  s << "P5\n" << g.nx << ' ' << g.ny << "\n65535\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      const int n = g.node_at(i, j);
      const auto v = static_cast<unsigned>(n < 0 ? 0 : std::lround(level[n] * 65535.0));
      s.put(static_cast<char>((v >> 8) & 0xff));
      s.put(static_cast<char>(v & 0xff));
    }
  }
  return s.str();
}

std::string map_svg(const SvdGraph& g, const SvdMap& m) {
  const auto level = normalized(m);
  const double r = g.resolution;
  const double w = g.nx * r, h = g.ny * r;
  std::ostringstream s;
  s << std::setprecision(10);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto [i, j] = g.lattice[n];
    const int grey = static_cast<int>(std::lround(level[n] * 255.0));
    s << "<rect x=\"" << i * r << "\" y=\"" << (g.ny - 1 - j) * r << "\" width=\"" << r << "\" height=\"" << r
      << "\" fill=\"rgb(" << grey << ',' << grey << ',' << grey << ")\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular vertical distance toolkit"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"svd-map", "one-to-all distance map from the first source"},
      {"svd", "distance and optimal chain between sources and targets"},
      {"min-singular", "minimal singularity verdict"},
      {"rigidity", "rigidity verdict with counterexample"},
      {"perimeter", "perimeter breakdown of (v, b) and F[v]"},
      {"equality-check", "equality-case conditions for (v, b)"},
      {"counterexample", "barycenter that keeps the perimeter"},
      {"disconnect-check", "essential disconnection and open-set candidate"},
      {"positivity-1d", "positivity set of a 1-D profile"},
      {"dense-balls", "dense-ball complement generator"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("scenario", o.scenario, "scenario file")->required();
    sub->add_option("--resolution", o.resolution, "lattice cell size");
    sub->add_option("--connectivity", o.connectivity, "stencil size")->check(CLI::IsMember({4, 8, 16}));
    sub->add_option("--tol", o.tol, "coverage tolerance");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json", "pgm", "svg"}));
    sub->add_option("--seed", o.seed, "random seed");
  }
  std::vector<const char*> argv{"svdkit"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kParse;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (o.resolution && !(*o.resolution > 0.0)) {
    err << "--resolution must be positive\n";
    return kParse;
  }

  try {
    const Scenario s = load_scenario(o.scenario);
    Emitter em(o, out);
    if (o.command == "svd-map") return command_svd_map(o, s, em);
    if (o.command == "svd") return command_svd(o, s, em);
    if (o.command == "min-singular") return command_min_singular(o, s, em);
    if (o.command == "rigidity") return command_rigidity(o, s, em);
    if (o.command == "perimeter") return command_perimeter(o, s, em);
    if (o.command == "equality-check") return command_equality(o, s, em);
    if (o.command == "counterexample") return command_counterexample(o, s, em);
    if (o.command == "disconnect-check") return command_disconnect(o, s, em);
    if (o.command == "positivity-1d") return command_positivity(o, s, em);
    if (o.command == "dense-balls") return command_dense_balls(o, s, em);
    return kOther;
  } catch (const ScenarioParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kParse;
  } catch (const ScenarioSemanticError& e) {
    err << "semantic error: " << e.what() << "\n";
    return kSemantic;
  } catch (const PreconditionViolation& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << "\n";
    return kInvariant;
  } catch (const ContractError& e) {
    err << "semantic error: " << e.what() << "\n";
    return kSemantic;
  } catch (const DomainError& e) {
    err << "semantic error: " << e.what() << "\n";
    return kSemantic;
  } catch (const ConstructionError& e) {
    err << "construction error: " << e.what() << "\n";
    return kSemantic;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kOther;
  }
}

}  // namespace svdkit::cli
