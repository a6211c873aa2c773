#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "svdkit/bv1d.hpp"
#include "svdkit/bvfield.hpp"

namespace svdkit {

inline constexpr double kZeroTol = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SvdEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

/// Admissible lattice nodes with singular-variation edge weights. Nodes sit at
/// cell centres origin + (i + 1/2, j + 1/2) * resolution.
class SvdGraph {
 public:
  double resolution = 0.0;
  int connectivity = 8;
  Point origin{};
  int nx = 0;
  int ny = 0;
  std::vector<Point> nodes;
  std::vector<std::pair<int, int>> lattice;  // (i, j) of every node
  std::vector<int> index;                    // lattice slot -> node or -1
  std::vector<SvdEdge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;

  std::size_t size() const { return nodes.size(); }
  int node_at(int i, int j) const;
  /// Node closest to p (lowest index on ties).
  int nearest_node(Point p) const;
  void link(std::vector<SvdEdge> all_edges);
};

/// Lattice offsets of the half-stencil for k in {4, 8, 16}.
std::vector<std::pair<int, int>> stencil(int connectivity);

SvdGraph build_graph(const StructuredBVField& f, double resolution, int connectivity = 8);
/// Samples of a 1-D profile at a0 + (i + 1/2) r joined to their neighbours.
SvdGraph build_graph_1d(const BVProfile& p, double resolution);

struct SvdMap {
  int source = 0;
  std::vector<double> dist;
  std::vector<int> pred;  // -1 at the source and at unreachable nodes
};

SvdMap svd_map(const SvdGraph& g, int source);
/// Restricts Dijkstra to nodes where `allowed` is true.
SvdMap svd_map(const SvdGraph& g, int source, const std::vector<bool>& allowed);

struct SvdResult {
  double distance = 0.0;
  std::vector<Point> chain;  // empty when x1 == x2 or unreachable
};

SvdResult svd(const SvdGraph& g, int x1, int x2);

struct ZeroClasses {
  std::vector<int> label;  // class id per node, numbered by first node
  std::vector<int> size;
  int count() const { return static_cast<int>(size.size()); }
  int largest() const;
};

ZeroClasses zero_classes(const SvdGraph& g, double zero_tol = kZeroTol);

struct MinSingularVerdict {
  bool minimally_singular = false;
  int witness = -1;          // first node of the largest class
  double largest_fraction = 0.0;
  int violating_node = -1;   // first node outside the largest class
  int class_count = 0;
  std::size_t node_count = 0;
};

MinSingularVerdict is_minimally_singular(const SvdGraph& g, double tol = 0.01);
MinSingularVerdict is_minimally_singular(const StructuredBVField& f, double resolution, double tol = 0.01,
                                         int connectivity = 8);

bool monotone_along_optimal(const SvdMap& m);

/// Piecewise-constant field taking value `values[n]` around every graph node,
/// with walls only on the walls of `f` (closed along the domain boundary).
/// Requires `values` to be constant across every wall-free region.
StructuredBVField interface_field(const StructuredBVField& f, const SvdGraph& g, const std::vector<double>& values);

}  // namespace svdkit
