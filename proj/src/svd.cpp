#include "svdkit/svd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "svdkit/errors.hpp"
#include "svdkit/parallel.hpp"

namespace svdkit {

namespace {

constexpr int kMaxSkipped = 2;

int lattice_count(double extent, double r) { return static_cast<int>(std::floor(extent / r + 1e-9)); }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

int SvdGraph::node_at(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
  return index[static_cast<std::size_t>(j) * nx + i];
}

int SvdGraph::nearest_node(Point p) const {
  int best = -1;
  double best_d = kInf;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const double d = norm(nodes[n] - p);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(n);
    }
  }
  return best;
}

void SvdGraph::link(std::vector<SvdEdge> all_edges) {
  edges = std::move(all_edges);
  adjacency.assign(nodes.size(), {});
  for (const SvdEdge& e : edges) {
    adjacency[e.u].emplace_back(e.v, e.weight);
    adjacency[e.v].emplace_back(e.u, e.weight);
  }
  for (auto& a : adjacency) std::sort(a.begin(), a.end());
}

std::vector<std::pair<int, int>> stencil(int connectivity) {
  switch (connectivity) {
    case 4: return {{1, 0}, {0, 1}};
    case 8: return {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    case 16: return {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}, {2, 1}, {1, -2}, {2, -1}};
    default: throw ContractError("connectivity must be 4, 8 or 16");
  }
}

SvdGraph build_graph(const StructuredBVField& f, double resolution, int connectivity) {
  if (!(resolution > 0.0)) throw ContractError("resolution must be positive");
  const auto dirs = stencil(connectivity);
  SvdGraph g;
  g.resolution = resolution;
  g.connectivity = connectivity;
  const Rect box = f.domain().bounds();
  g.origin = {box.xmin, box.ymin};
  g.nx = lattice_count(box.width(), resolution);
  g.ny = lattice_count(box.height(), resolution);
  if (g.nx < 1 || g.ny < 1) throw ConstructionError("resolution is coarser than the domain");

  const std::size_t slots = static_cast<std::size_t>(g.nx) * g.ny;
  std::vector<char> admissible(slots, 0);
  auto slot_point = [&g, resolution](int i, int j) {
    return Point{g.origin.x + (i + 0.5) * resolution, g.origin.y + (j + 0.5) * resolution};
  };
  parallel_for(slots, [&](std::size_t s) {
    const int i = static_cast<int>(s % g.nx), j = static_cast<int>(s / g.nx);
    admissible[s] = is_admissible_node(f, slot_point(i, j)) ? 1 : 0;
  });
  g.index.assign(slots, -1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t s = static_cast<std::size_t>(j) * g.nx + i;
      if (!admissible[s]) continue;
      g.index[s] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(slot_point(i, j));
      g.lattice.emplace_back(i, j);
    }
  }
  if (g.nodes.empty()) throw ConstructionError("no admissible lattice nodes");

  std::vector<SvdEdge> candidates;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const auto [i, j] = g.lattice[n];
    for (const auto& [dx, dy] : dirs) {
      for (int step = 1; step <= kMaxSkipped + 1; ++step) {
        const int ti = i + step * dx, tj = j + step * dy;
        if (ti < 0 || tj < 0 || ti >= g.nx || tj >= g.ny) break;
        const int target = g.node_at(ti, tj);
        if (target >= 0) {
          candidates.push_back({static_cast<int>(n), target, 0.0});
          break;
        }
      }
    }
  }
  std::vector<char> valid(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t e) {
    try {
      const PolygonalChain c = validate_chain(f.domain(), {g.nodes[candidates[e].u], g.nodes[candidates[e].v]});
      candidates[e].weight = singular_variation(f, c);
      valid[e] = 1;
    } catch (const ChainRejected&) {
      valid[e] = 0;
    }
  });
  std::vector<SvdEdge> edges;
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    if (valid[e]) edges.push_back(candidates[e]);
  }
  g.link(std::move(edges));
  return g;
}

SvdGraph build_graph_1d(const BVProfile& p, double resolution) {
  if (!(resolution > 0.0)) throw ContractError("resolution must be positive");
  SvdGraph g;
  g.resolution = resolution;
  g.connectivity = 2;
  g.origin = {p.start(), 0.0};
  g.nx = lattice_count(p.end() - p.start(), resolution);
  g.ny = 1;
  if (g.nx < 1) throw ConstructionError("resolution is coarser than the interval");
  g.index.assign(static_cast<std::size_t>(g.nx), -1);
  for (int i = 0; i < g.nx; ++i) {
    const double t = p.start() + (i + 0.5) * resolution;
    bool ok = true;
    for (const JumpAtom& j : p.jumps()) ok = ok && std::abs(j.t - t) > kGeomTol;
    for (const CantorAtom& c : p.cantor_atoms()) {
      if (t >= c.s0 && t <= c.s1 && in_cantor_set(c.level(t), p.cantor_depth())) ok = false;
    }
    if (!ok) continue;
    g.index[static_cast<std::size_t>(i)] = static_cast<int>(g.nodes.size());
    g.nodes.push_back({t, 0.0});
    g.lattice.emplace_back(i, 0);
  }
  if (g.nodes.empty()) throw ConstructionError("no admissible samples");
  std::vector<SvdEdge> edges;
  for (std::size_t n = 1; n < g.nodes.size(); ++n) {
    const double w = p.restricted(g.nodes[n - 1].x, g.nodes[n].x).variation(VariationPart::singular);
    edges.push_back({static_cast<int>(n - 1), static_cast<int>(n), w});
  }
  g.link(std::move(edges));
  return g;
}

SvdMap svd_map(const SvdGraph& g, int source) { return svd_map(g, source, std::vector<bool>(g.size(), true)); }

SvdMap svd_map(const SvdGraph& g, int source, const std::vector<bool>& allowed) {
  if (source < 0 || static_cast<std::size_t>(source) >= g.size()) throw DomainError("source is not a graph node");
  if (!allowed[source]) throw DomainError("source is excluded");
  SvdMap m;
  m.source = source;
  m.dist.assign(g.size(), kInf);
  m.pred.assign(g.size(), -1);
  m.dist[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, source);
  std::vector<char> done(g.size(), 0);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& [v, w] : g.adjacency[u]) {
      if (!allowed[v] || done[v]) continue;
      const double nd = d + w;
      if (nd < m.dist[v]) {
        m.dist[v] = nd;
        m.pred[v] = u;
        heap.emplace(nd, v);
      }
    }
  }
  return m;
}

SvdResult svd(const SvdGraph& g, int x1, int x2) {
  const int n = static_cast<int>(g.size());
  if (x1 < 0 || x2 < 0 || x1 >= n || x2 >= n) throw DomainError("svd query node is not in the graph");
  if (x1 == x2) return {0.0, {}};
  // Always solve from the smaller index so that svd(x, y) == svd(y, x) bit for bit.
  const int a = std::min(x1, x2), b = std::max(x1, x2);
  const SvdMap m = svd_map(g, a);
  SvdResult r;
  r.distance = m.dist[b];
  if (r.distance == kInf) return r;
  for (int v = b; v != -1; v = m.pred[v]) r.chain.push_back(g.nodes[v]);
  if (x1 == a) std::reverse(r.chain.begin(), r.chain.end());
  return r;
}

int ZeroClasses::largest() const {
  return static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
}

ZeroClasses zero_classes(const SvdGraph& g, double zero_tol) {
  UnionFind uf(g.size());
  for (const SvdEdge& e : g.edges) {
    if (e.weight <= zero_tol) uf.unite(e.u, e.v);
  }
  ZeroClasses z;
  z.label.assign(g.size(), -1);
  std::map<int, int> ids;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const int root = uf.find(static_cast<int>(n));
    auto [it, fresh] = ids.emplace(root, static_cast<int>(ids.size()));
    if (fresh) z.size.push_back(0);
    z.label[n] = it->second;
    ++z.size[it->second];
  }
  return z;
}

MinSingularVerdict is_minimally_singular(const SvdGraph& g, double tol) {
  const ZeroClasses z = zero_classes(g);
  MinSingularVerdict v;
  const int big = z.largest();
  v.class_count = z.count();
  v.node_count = g.size();
  v.largest_fraction = static_cast<double>(z.size[big]) / static_cast<double>(g.size());
  v.minimally_singular = v.largest_fraction >= 1.0 - tol;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (z.label[n] == big && v.witness < 0) v.witness = static_cast<int>(n);
    if (z.label[n] != big && v.violating_node < 0) v.violating_node = static_cast<int>(n);
  }
  return v;
}

MinSingularVerdict is_minimally_singular(const StructuredBVField& f, double resolution, double tol,
                                         int connectivity) {
  return is_minimally_singular(build_graph(f, resolution, connectivity), tol);
}

bool monotone_along_optimal(const SvdMap& m) {
  const std::size_t n = m.dist.size();
  // 0 unknown, 1 on stack, 2 verified to reach the source
  std::vector<char> state(n, 0);
  state[m.source] = 2;
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start] == 2 || m.pred[start] < 0) continue;
    std::vector<int> path;
    int v = static_cast<int>(start);
    while (state[v] == 0) {
      const int p = m.pred[v];
      if (p < 0) return false;
      if (!(m.dist[p] <= m.dist[v])) return false;
      state[v] = 1;
      path.push_back(v);
      v = p;
    }
    if (state[v] == 1) return false;  // cycle
    for (int u : path) state[u] = 2;
  }
  return true;
}

// ----------------------------------------------------------- interface field

namespace {

class VertexTable {
 public:
  int id(Point p) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (norm(points_[i] - p) <= 1e-10) return static_cast<int>(i);
    }
    points_.push_back(p);
    return static_cast<int>(points_.size()) - 1;
  }
  Point at(int i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Point> points_;
};

struct Flow {
  int from, to;
  double h;
};

}  // namespace


StructuredBVField interface_field(const StructuredBVField& f, const SvdGraph& g, const std::vector<double>& values) {
  if (values.size() != g.size()) throw ContractError("one value per graph node is required");
  if (!f.channels().empty()) throw ConstructionError("interface fields are only built for pure-jump data");
  const Domain& dom = f.domain();
  const double delta = 1e-7 * dom.diameter();

  std::vector<Point> wall_a, wall_b;
  for (const JumpWall& w : f.walls()) {
    for (std::size_t k = 0; k < w.segment_count(); ++k) {
      wall_a.push_back(w.seg_a(k));
      wall_b.push_back(w.seg_b(k));
    }
  }
  std::vector<std::size_t> order(g.size());
  auto side_value = [&](Point p) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      const double dl = norm(g.nodes[l] - p), dr = norm(g.nodes[r] - p);
      return dl != dr ? dl < dr : l < r;
    });
    for (std::size_t n : order) {
      const Point q = g.nodes[n];
      if (!dom.contains_segment(p, q)) continue;
      bool clear = true;
      for (std::size_t k = 0; k < wall_a.size() && clear; ++k) {
        clear = classify_segments(p, q, wall_a[k], wall_b[k]) == Contact::none;
      }
      if (clear) return values[n];
    }
    throw ConstructionError("no lattice node is visible from one side of a wall");
  };

  VertexTable vt;
  std::vector<Flow> flows;
  for (const Segment& pc : arrangement_pieces(f.walls())) {
    const Point mid = 0.5 * (pc.a + pc.b);
    if (dom.boundary_distance(mid) <= 1e-9) continue;
    const Point n = (1.0 / norm(pc.b - pc.a)) * perp_left(pc.b - pc.a);
    const double h = side_value(mid - delta * n) - side_value(mid + delta * n);
    if (std::abs(h) <= kZeroTol) continue;
    const int ia = vt.id(pc.a), ib = vt.id(pc.b);
    flows.push_back(h > 0 ? Flow{ia, ib, h} : Flow{ib, ia, -h});
  }

  auto net_inflow = [&flows](int v) {
    double net = 0.0;
    for (const Flow& fl : flows) net += (fl.to == v ? fl.h : 0.0) - (fl.from == v ? fl.h : 0.0);
    return net;
  };
  // (boundary coordinate, vertex, net inflow before any boundary routing)
  std::vector<std::tuple<double, int, double>> boundary;
  const std::size_t piece_vertices = vt.size();
  for (std::size_t v = 0; v < piece_vertices; ++v) {
    const auto s = dom.boundary_coordinate(vt.at(static_cast<int>(v)));
    const double net = net_inflow(static_cast<int>(v));
    if (s) {
      boundary.emplace_back(*s, static_cast<int>(v), net);
    } else if (std::abs(net) > 1e-9) {
      throw ConstructionError("interface heights do not balance at an interior vertex");
    }
  }
  std::sort(boundary.begin(), boundary.end());
  double carried = 0.0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    carried += std::get<2>(boundary[i]);
    if (std::abs(carried) <= kZeroTol) continue;
    const double s0 = std::get<0>(boundary[i]);
    const double s1 = i + 1 < boundary.size() ? std::get<0>(boundary[i + 1]) : std::get<0>(boundary.front()) + dom.boundary_length();
    const std::vector<Point> path = dom.boundary_path(s0, s1);
    for (std::size_t k = 1; k < path.size(); ++k) {
      const int u = vt.id(path[k - 1]), v = vt.id(path[k]);
      if (u == v) continue;
      flows.push_back(carried > 0 ? Flow{u, v, carried} : Flow{v, u, -carried});
    }
  }
  if (!boundary.empty() && std::abs(carried) > 1e-9) throw ConstructionError("interface heights do not balance along the boundary");

  // Peel simple cycles off the balanced flow; each becomes a closed uniform wall.
  std::vector<JumpWall> loops;
  const double eps = 1e-12;
  for (;;) {
    auto first = std::find_if(flows.begin(), flows.end(), [eps](const Flow& fl) { return fl.h > eps; });
    if (first == flows.end()) break;
    std::vector<int> verts{first->from};
    std::vector<std::size_t> used{static_cast<std::size_t>(first - flows.begin())};
    int cur = first->to;
    std::map<int, std::size_t> pos{{first->from, 0}};
    while (!pos.contains(cur)) {
      pos[cur] = verts.size();
      verts.push_back(cur);
      std::size_t next = flows.size();
      for (std::size_t e = 0; e < flows.size(); ++e) {
        if (flows[e].from == cur && flows[e].h > eps) {
          next = e;
          break;
        }
      }
      if (next == flows.size()) throw ConstructionError("interface flow is not balanced");
      used.push_back(next);
      cur = flows[next].to;
    }
    const std::size_t p = pos[cur];
    std::vector<Point> loop;
    double h = kInf;
    for (std::size_t k = p; k < verts.size(); ++k) {
      loop.push_back(vt.at(verts[k]));
      h = std::min(h, flows[used[k]].h);
    }
    for (std::size_t k = p; k < verts.size(); ++k) flows[used[k]].h -= h;
    if (loop.size() < 3) throw ConstructionError("degenerate interface cycle");
    loops.push_back(JumpWall::polyline(std::move(loop), h, true));
  }

  StructuredBVField b(dom, SmoothGrid::constant(0.0), std::move(loops));
  const double offset = values.front() - b.value(g.nodes.front());
  b = b.with_smooth(SmoothGrid::constant(offset));
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (std::abs(b.value(g.nodes[n]) - values[n]) > 1e-9) {
      throw ConstructionError("interface field does not reproduce the class values");
    }
  }
  return b;
}

}  // namespace svdkit
