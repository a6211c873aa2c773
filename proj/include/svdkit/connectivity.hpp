#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svdkit/bv1d.hpp"
#include "svdkit/bvfield.hpp"

namespace svdkit {

/// Bitmap of lattice cells over a box; cell (i, j) covers
/// [xmin + i h, xmin + (i + 1) h] x [ymin + j h, ymin + (j + 1) h].
class CellSet {
 public:
  CellSet() = default;
  CellSet(Rect box, int nx, int ny);
  static CellSet over(Rect box, double resolution);

  Rect box() const { return box_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_width() const { return box_.width() / nx_; }
  double cell_height() const { return box_.height() / ny_; }
  Point center(int i, int j) const;
  /// Cell containing p, or nullopt outside the box.
  std::optional<std::pair<int, int>> cell_of(Point p) const;

  bool contains(int i, int j) const;
  void insert(int i, int j);
  void erase(int i, int j);
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool same_grid(const CellSet& other) const;
  /// True when every member of this set is a member of `other`.
  bool subset_of(const CellSet& other) const;

  /// Number of 4-connected components.
  int components() const;
  /// Run lengths over row-major cells, starting with a run of empty cells.
  std::vector<std::size_t> rle() const;
  static CellSet from_rle(Rect box, int nx, int ny, const std::vector<std::size_t>& runs);
  /// 8-bit binary PGM, top row = largest y.
  std::string pgm() const;

 private:
  std::size_t slot(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  Rect box_{};
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Cut set: cells plus individual interfaces between 4-adjacent cells. An
/// interface is identified by its lower-left cell and an axis flag.
struct CutSet {
  CellSet cells;
  std::set<std::tuple<int, int, bool>> interfaces;  // (i, j, vertical): vertical = between (i,j) and (i+1,j)

  bool covers(int i, int j, bool vertical) const;
};

/// True when dropping every interface covered by K splits G into at least two
/// components. Cells of K are taken out of G; their interfaces count as covered.
bool essentially_disconnects(const CutSet& k, const CellSet& g);
int components_after_cut(const CutSet& k, const CellSet& g);

/// Cells met by the field's walls.
CellSet wall_cells(const StructuredBVField& f, const CellSet& grid);
/// Cells of the grid whose centre lies in the domain.
CellSet domain_cells(const Domain& d, Rect box, double resolution);
/// Cells where v^ vanishes somewhere among the probe points or on a wall trace.
CellSet zero_cells(const StructuredBVField& v, Rect box, double resolution);

struct PositivityReport {
  bool hypothesis_holds = true;
  std::optional<double> witness;  // zero point with positive mass on both sides
  std::vector<std::pair<double, double>> intervals;
  bool single_interval = false;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> positive_samples;
};

PositivityReport positivity_set_1d(const BVProfile& v, int samples = 4096);

struct BallBoundReport {
  double perimeter_sum = 0.0;  // sum of 2 pi r_h
  double area_sum = 0.0;       // sum of pi r_h^2
  bool perimeter_ok = false;
  bool area_ok = false;
};

BallBoundReport check_ball_bounds(const std::vector<double>& radii, double epsilon);

struct DenseBallReport {
  bool constructed = false;
  std::string failure;
  std::vector<Point> centers;
  std::vector<double> radii;
  BallBoundReport bounds;
  double union_area_estimate = 0.0;
  bool union_area_ok = false;
  CellSet complement;              // closed unit ball minus the balls
  std::size_t interior_cells = 0;  // complement cells that meet no ball even at the probe resolution
  int probe_factor = 8;
};

DenseBallReport dense_ball_complement(int count, std::uint64_t seed, double epsilon, double resolution = 1.0 / 64);

struct OmegaCandidate {
  CellSet cells;
  int components = 0;
  bool connected = false;
};

OmegaCandidate omega_candidate(const StructuredBVField& v, double resolution);

/// Lattice surrogate of the disconnection and open-set hypotheses for v >= 0.
struct DisconnectReport {
  CellSet grid;      // G: cells centred in the domain
  CellSet zero;      // cells where v^ vanishes
  CellSet singular;  // zero cells plus wall cells
  bool zero_set_disconnects = false;
  bool singular_set_disconnects = false;
  OmegaCandidate omega;
  std::string precondition_failure;  // empty when v^ > 0 at every admissible node
  bool rigidity_precondition_flagged = false;
};

DisconnectReport disconnect_check(const StructuredBVField& v, double resolution);

}  // namespace svdkit
