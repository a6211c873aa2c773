// One line per acceptance criterion; exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../support/fixtures.hpp"
#include "svdkit/cantor.hpp"
#include "svdkit/connectivity.hpp"
#include "svdkit/scenario.hpp"
#include "svdkit/steiner.hpp"
#include "svdkit/svd.hpp"

using namespace svdkit;
using namespace svdkit::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = SVDKIT_SCENARIO_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StructuredBVField fixture_field(const char* file) {
  const Scenario s = load_scenario((kScenarios / file).string());
  return build_field(s, s.field);
}

double brute_force(const SvdGraph& g, int from, int to) {
  std::vector<char> seen(g.size(), 0);
  double best = kInf;
  std::function<void(int, double)> dfs = [&](int n, double d) {
    if (n == to) {
      best = std::min(best, d);
      return;
    }
    for (const auto& [m, w] : g.adjacency[n]) {
      if (seen[m]) continue;
      seen[m] = 1;
      dfs(m, d + w);
      seen[m] = 0;
    }
  };
  seen[from] = 1;
  dfs(from, 0.0);
  return best;
}

Outcome pseudometric() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  long checks = 0;
  double worst_slack = kInf;
  for (int s = 0; s < 50; ++s) {
    const StructuredBVField f = random_field(rng);
    const SvdGraph g = build_graph(f, 0.05);
    if (g.size() < 3) return {false, "scenario with fewer than 3 nodes"};
    for (int k = 0; k < 10; ++k) {
      const int a = static_cast<int>(rng() % g.size()), b = static_cast<int>(rng() % g.size()),
                c = static_cast<int>(rng() % g.size());
      const SvdMap ma = svd_map(g, a), mb = svd_map(g, b);
      if (svd(g, a, b).distance != svd(g, b, a).distance) return {false, "asymmetric pair"};
      if (svd(g, a, a).distance != 0.0 || ma.dist[a] != 0.0) return {false, "nonzero self distance"};
      worst_slack = std::min(worst_slack, ma.dist[b] + mb.dist[c] - ma.dist[c]);
      ++checks;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << checks << " triples on 50 random 20x20 scenarios, min triangle slack " << worst_slack << ", " << secs << " s";
  return {worst_slack >= -1e-12 && secs < 30.0, d.str()};
}

Outcome brute_force_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  int pairs = 0;
  for (int s = 0; s < 10; ++s) {
    const StructuredBVField f = random_field(rng);
    const SvdGraph g = build_graph(f, 0.2, 4);
    for (int k = 0; k < 5; ++k) {
      const int a = static_cast<int>(rng() % g.size()), b = static_cast<int>(rng() % g.size());
      if (svd(g, a, b).distance != brute_force(g, std::min(a, b), std::max(a, b))) {
        return {false, "mismatch against brute force"};
      }
      ++pairs;
    }
  }
  const double secs = seconds_since(t0);
  return {secs < 60.0, std::to_string(pairs) + " pairs on 10 scenarios over 5x5 lattices, all exact"};
}

Outcome figures() {
  const MinSingularVerdict fig3 = is_minimally_singular(build_graph(fixture_field("fig3_crack.json"), 0.05));
  const MinSingularVerdict fig2 = is_minimally_singular(build_graph(fixture_field("fig2_enclosed.json"), 0.05));
  const DisconnectReport fig1 = disconnect_check(fixture_field("fig1_disconnected.json"), 0.05);
  std::ostringstream d;
  d << "fig3 minimally singular " << fig3.minimally_singular << " coverage " << fig3.largest_fraction
    << "; fig2 minimally singular " << fig2.minimally_singular << " classes " << fig2.class_count
    << "; fig1 disconnects " << fig1.zero_set_disconnects << " flagged " << fig1.rigidity_precondition_flagged;
  const bool ok = fig3.minimally_singular && fig3.largest_fraction == 1.0 && !fig2.minimally_singular &&
                  fig2.class_count == 2 && fig1.zero_set_disconnects && fig1.rigidity_precondition_flagged;
  return {ok, d.str()};
}

Outcome one_dimensional() {
  AcPiece a, b;
  a.slope = 1.5;
  a.curvature = -2.0;
  a.direction = b.direction = {1.0, 0.0};
  b.value = 0.75 - 0.25;
  b.slope = -0.5;
  const BVProfile smooth({0.0, 0.5, 1.0}, {a, b});
  const bool smooth_ok = is_minimally_singular(build_graph_1d(smooth, 0.01)).minimally_singular;
  AcPiece flat;
  flat.direction = {1.0, 0.0};
  const double h = -0.8125;
  const SvdGraph g = build_graph_1d(BVProfile({0.0, 1.0}, {flat}, {{0.503, h}}), 0.01);
  const MinSingularVerdict v = is_minimally_singular(g);
  const int left = g.nearest_node({0.495, 0.0}), right = g.nearest_node({0.505, 0.0});
  const double across = svd(g, left, right).distance;
  const double end_to_end = svd(g, 0, static_cast<int>(g.size()) - 1).distance;
  std::ostringstream d;
  d << "smooth profile minimally singular " << smooth_ok << "; jump profile minimally singular "
    << v.minimally_singular << ", SVD across jump " << across << " (|h| = " << std::abs(h) << ")";
  return {smooth_ok && !v.minimally_singular && across == std::abs(h) && end_to_end == std::abs(h), d.str()};
}

Outcome cantor_channel() {
  const Scenario s = load_scenario((kScenarios / "cantor_channel.json").string());
  const StructuredBVField f = build_field(s, s.field);
  if (f.cantor_depth() != 40) return {false, "fixture depth is not 40"};
  const SvdGraph g = build_graph(f, 0.05);
  double worst = 0.0;
  int pairs = 0;
  for (double p : {0.025, 0.125, 0.275, 0.475}) {
    for (double q : {0.525, 0.675, 0.875, 0.975}) {
      const int a = g.nearest_node({p, 0.525}), b = g.nearest_node({q, 0.475});
      const double expected = std::abs(cantor_eval(g.nodes[b].x) - cantor_eval(g.nodes[a].x));
      worst = std::max(worst, std::abs(svd(g, a, b).distance - expected));
      ++pairs;
    }
  }
  const bool ms = is_minimally_singular(g).minimally_singular;
  std::ostringstream d;
  d << pairs << " pairs, max |SVD - |C(q) - C(p)|| = " << worst << "; minimally singular " << ms;
  return {worst <= 1e-9 && !ms, d.str()};
}

Outcome saturation() {
  const auto t0 = std::chrono::steady_clock::now();
  const StructuredBVField v = fixture_field("fig2_enclosed.json");
  const Domain dom = v.domain();
  const SubRect whole{dom.bounds(), false};
  const double base = perimeter(steiner_set(v), whole);
  const double length = 1.6;  // perimeter of the enclosed square
  std::ostringstream d;
  bool ok = true;
  for (double t : {0.0, 0.25, 0.5, 0.6, 1.0}) {
    const StructuredBVField b =
        t == 0.0 ? StructuredBVField(dom, SmoothGrid::constant(0.0))
                 : StructuredBVField(dom, SmoothGrid::constant(0.0), {square_loop(0.3, 0.3, 0.7, 0.7, t)});
    const double excess = perimeter({v, b}, whole) - base;
    if (t <= 0.5) {
      ok = ok && std::abs(excess) <= 1e-9 * base;
    } else {
      const double analytic = 2.0 * length * (t - 0.5);
      ok = ok && excess > 0.0 && std::abs(excess - analytic) <= 1e-6 * analytic;
    }
    d << "t=" << t << " excess " << excess << "; ";
  }
  const double secs = seconds_since(t0);
  d << secs << " s";
  return {ok && secs < 10.0, d.str()};
}

struct Curated {
  const char* name;
  StructuredBVField v;
  StructuredBVField b;
};

std::vector<Curated> curated_cases() {
  const Domain sq = unit_square();
  auto constant = [&](double c) { return StructuredBVField(sq, SmoothGrid::constant(c)); };
  auto loop = [&](double base, double h) {
    return StructuredBVField(sq, SmoothGrid::constant(base), {square_loop(0.3, 0.3, 0.7, 0.7, h)});
  };
  auto poly = [&](std::vector<double> c) {
    c.resize(10, 0.0);
    return StructuredBVField(sq, SmoothGrid::polynomial({0, 0, 1, 1}, 9, 9, c));
  };
  auto nested = [&](double outer, double inner, double base) {
    return StructuredBVField(sq, SmoothGrid::constant(base),
                             {square_loop(0.2, 0.2, 0.8, 0.8, outer), square_loop(0.4, 0.4, 0.6, 0.6, inner)});
  };
  const StructuredBVField fig2 = loop(1.0, 1.0);
  const StructuredBVField smooth_v = poly({1.0, 0.3, 0.2});
  const StructuredBVField cantor_v = cantor_field(1.0, 1.0);
  return {
      {"fig2, b = 0", fig2, constant(0.0)},
      {"fig2, b = 0.25 inside", fig2, loop(0.0, 0.25)},
      {"fig2, b = 0.5 inside", fig2, loop(0.0, 0.5)},
      {"fig2, b = -0.5 inside", fig2, loop(0.0, -0.5)},
      {"fig2, b = 0.6 inside", fig2, loop(0.0, 0.6)},
      {"fig2, b = 1 inside", fig2, loop(0.0, 1.0)},
      {"fig2, b jumps off the wall", fig2,
       StructuredBVField(sq, SmoothGrid::constant(0.0), {square_loop(0.25, 0.25, 0.75, 0.75, 0.2)})},
      {"constant v, b = 0.3", constant(1.0), constant(0.3)},
      {"constant v, b = 0.2 x", constant(1.0), poly({0.0, 0.2})},
      {"constant v, b jumps", constant(1.0), loop(0.0, 0.3)},
      {"crack v, b = 0", crack_field(), constant(0.0)},
      {"crack v, b = 0.1", crack_field(), constant(0.1)},
      {"smooth v, b = 0", smooth_v, constant(0.0)},
      {"smooth v, b = 0.1 y", smooth_v, poly({0.0, 0.0, 0.1})},
      {"Cantor v, b = 0", cantor_v, constant(0.0)},
      {"Cantor v, b = 0.5 C", cantor_v, cantor_field(0.0, 0.5)},
      {"Cantor v, b = -0.3 C", cantor_v, cantor_field(0.0, -0.3)},
      {"Cantor v, b = 0.6 C", cantor_v, cantor_field(0.0, 0.6)},
      {"nested v, b = 0.5 and 1", nested(1.0, 1.0, 1.0),
       StructuredBVField(sq, SmoothGrid::constant(0.0),
                         {square_loop(0.2, 0.2, 0.8, 0.8, 0.5), square_loop(0.4, 0.4, 0.6, 0.6, 0.5)})},
      {"nested v, b = 0.5 and 1.2", nested(1.0, 1.0, 1.0),
       StructuredBVField(sq, SmoothGrid::constant(0.0),
                         {square_loop(0.2, 0.2, 0.8, 0.8, 0.5), square_loop(0.4, 0.4, 0.6, 0.6, 0.7)})},
  };
}

Outcome equality_agreement() {
  int agree = 0, equal_cases = 0, total = 0;
  std::string first_bad;
  for (const Curated& c : curated_cases()) {
    const EqualityReport r = check_equality_case(c.v, c.b);
    ++total;
    if (r.perimeters_equal) ++equal_cases;
    if (r.agrees()) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = std::string(", first disagreement: ") + c.name + " (" + r.detail + ")";
    }
  }
  std::ostringstream d;
  d << agree << "/" << total << " verdicts match perimeter equality (" << equal_cases << " equality cases)" << first_bad;
  return {agree == total && total == 20, d.str()};
}

Outcome independence_homogeneity() {
  std::mt19937_64 rng(4242);
  double worst_rel = 0.0;
  long compared = 0;
  for (int s = 0; s < 10; ++s) {
    const StructuredBVField f = random_field(rng);
    const SvdGraph g = build_graph(f, 0.05);
    const SvdGraph gs = build_graph(f.with_smooth(f.smooth().plus(random_smooth(rng, 2.0))), 0.05);
    const SvdGraph gl = build_graph(f.scaled_singular(2.5), 0.05);
    const int src = static_cast<int>(rng() % g.size());
    const SvdMap m = svd_map(g, src), ms = svd_map(gs, src), ml = svd_map(gl, src);
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (ms.dist[n] != m.dist[n]) return {false, "smooth part changed a distance"};
      if (m.dist[n] > 0.0) worst_rel = std::max(worst_rel, std::abs(ml.dist[n] / m.dist[n] - 2.5) / 2.5);
      if (m.dist[n] == 0.0 && ml.dist[n] != 0.0) return {false, "scaling moved a zero distance"};
      ++compared;
    }
  }
  std::ostringstream d;
  d << compared << " distances: smooth addition bitwise identical; scaling by 2.5 max relative deviation " << worst_rel
    << " (floating rounding of scaled heights)";
  return {worst_rel <= 1e-14, d.str()};
}

Outcome constant_corollary() {
  std::mt19937_64 rng(9001);
  std::uniform_real_distribution<double> base(0.5, 2.0), h(0.2, 1.5), u(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(1, 19), walls(1, 3);
  int accepted = 0, rejected = 0;
  double worst = 0.0;
  while (accepted < 10 && rejected < 1000) {
    std::vector<JumpWall> ws;
    for (int k = walls(rng); k > 0; --k) {
      const double x = lattice(rng) * 0.05, y = lattice(rng) * 0.05;
      const double half = 0.3 * u(rng) * 0.05 + (rng() % 4 == 0 ? 0.05 * lattice(rng) / 10.0 : 0.0);
      const double lo_x = std::max(0.01, x - half), lo_y = std::max(0.01, y - half);
      ws.push_back(square_loop(lo_x, lo_y, std::min(0.99, x + half), std::min(0.99, y + half),
                               (rng() & 1U) ? h(rng) : -h(rng)));
    }
    const StructuredBVField f(unit_square(), SmoothGrid::constant(base(rng)), ws);
    const SvdGraph g = build_graph(f, 0.05);
    const MinSingularVerdict v = is_minimally_singular(g);
    if (!v.minimally_singular) {
      ++rejected;
      continue;
    }
    const ZeroClasses z = zero_classes(g);
    double lo = kInf, hi = -kInf;
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (z.label[n] != z.largest()) continue;
      const double e = f.eval_lower(g.nodes[n]);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    worst = std::max(worst, hi - lo);
    ++accepted;
  }
  std::ostringstream d;
  d << accepted << " pure-jump minimally singular scenarios (" << rejected
    << " generated candidates were not), max eval_lower spread on the zero-class " << worst;
  return {accepted == 10 && worst <= 1e-12, d.str()};
}

Outcome dense_balls() {
  const auto t0 = std::chrono::steady_clock::now();
  const DenseBallReport r = dense_ball_complement(1000, 7, 0.1);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "sum 2 pi r = " << r.bounds.perimeter_sum << ", sum pi r^2 = " << r.bounds.area_sum
    << ", union area estimate " << r.union_area_estimate << ", " << secs << " s";
  return {r.constructed && r.bounds.perimeter_ok && r.bounds.area_ok && r.union_area_ok && secs < 10.0, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"svd-map", {"json", "csv", "pgm", "svg"}}, {"svd", {"json"}},           {"min-singular", {"json"}},
      {"rigidity", {"json"}},                     {"perimeter", {"json"}},      {"equality-check", {"json"}},
      {"counterexample", {"json"}},               {"disconnect-check", {"json", "pgm"}},
      {"positivity-1d", {"json"}},                {"dense-balls", {"json", "pgm"}}};
  const fs::path work = fs::temp_directory_path() / "svdkit_determinism";
  fs::remove_all(work);
  int runs = 0, files = 0;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".json") continue;
    for (const auto& [cmd, formats] : commands) {
      for (const std::string& fmt : formats) {
        std::string outputs[2];
        int codes[2];
        for (int rep = 0; rep < 2; ++rep) {
          const fs::path dir = work / std::to_string(rep);
          fs::remove_all(dir);
          const std::string line = std::string("\"") + SVDKIT_CLI + "\" " + cmd + " \"" + entry.path().string() +
                                   "\" --format " + fmt + " --out \"" + dir.string() + "\" > /dev/null 2> \"" +
                                   (work / "stderr").string() + std::to_string(rep) + "\"";
          fs::create_directories(work);
          codes[rep] = std::system(line.c_str());
          const fs::path file = dir / (cmd + "." + fmt);
          outputs[rep] = fs::exists(file) ? slurp(file) : std::string();
          outputs[rep] += slurp(work / ("stderr" + std::to_string(rep)));
          ++runs;
        }
        if (codes[0] != codes[1] || outputs[0] != outputs[1]) {
          return {false, cmd + " --format " + fmt + " on " + entry.path().filename().string() + " differs"};
        }
        if (codes[0] == 0) ++files;
      }
    }
  }
  fs::remove_all(work);
  return {files > 0, std::to_string(runs) + " CLI runs, " + std::to_string(files) +
                         " successful outputs byte-identical across repeats, failing runs identical too"};
}

}  // namespace

int main() {
  report(1, "pseudometric suite", pseudometric);
  report(2, "brute-force oracle", brute_force_oracle);
  report(3, "figure reproductions", figures);
  report(4, "one-dimensional characterization", one_dimensional);
  report(5, "Cantor channel", cantor_channel);
  report(6, "Steiner saturation", saturation);
  report(7, "equality-case agreement", equality_agreement);
  report(8, "smooth independence and homogeneity", independence_homogeneity);
  report(9, "constant-function corollary", constant_corollary);
  report(10, "dense-ball generator", dense_balls);
  report(11, "CLI determinism", determinism);
  return failures == 0 ? 0 : 1;
}
