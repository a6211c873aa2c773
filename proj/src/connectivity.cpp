#include "svdkit/connectivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "svdkit/errors.hpp"
#include "svdkit/steiner.hpp"

namespace svdkit {

// ------------------------------------------------------------------- CellSet

CellSet::CellSet(Rect box, int nx, int ny) : box_(box), nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw ContractError("cell set needs at least one cell per axis");
  bits_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
}

CellSet CellSet::over(Rect box, double resolution) {
  if (!(resolution > 0.0)) throw ContractError("resolution must be positive");
  const int nx = std::max(1, static_cast<int>(std::lround(box.width() / resolution)));
  const int ny = std::max(1, static_cast<int>(std::lround(box.height() / resolution)));
  return CellSet(box, nx, ny);
}

Point CellSet::center(int i, int j) const {
  return {box_.xmin + (i + 0.5) * cell_width(), box_.ymin + (j + 0.5) * cell_height()};
}

std::optional<std::pair<int, int>> CellSet::cell_of(Point p) const {
  if (!box_.contains_closed(p)) return std::nullopt;
  const int i = std::min(nx_ - 1, static_cast<int>((p.x - box_.xmin) / cell_width()));
  const int j = std::min(ny_ - 1, static_cast<int>((p.y - box_.ymin) / cell_height()));
  return std::make_pair(i, j);
}

bool CellSet::contains(int i, int j) const {
  return i >= 0 && j >= 0 && i < nx_ && j < ny_ && bits_[slot(i, j)] != 0;
}

void CellSet::insert(int i, int j) {
  if (i >= 0 && j >= 0 && i < nx_ && j < ny_) bits_[slot(i, j)] = 1;
}

void CellSet::erase(int i, int j) {
  if (i >= 0 && j >= 0 && i < nx_ && j < ny_) bits_[slot(i, j)] = 0;
}

std::size_t CellSet::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

bool CellSet::same_grid(const CellSet& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && box_.xmin == o.box_.xmin && box_.ymin == o.box_.ymin &&
         box_.xmax == o.box_.xmax && box_.ymax == o.box_.ymax;
}

bool CellSet::subset_of(const CellSet& o) const {
  if (!same_grid(o)) throw ContractError("cell sets live on different grids");
  for (std::size_t s = 0; s < bits_.size(); ++s) {
    if (bits_[s] && !o.bits_[s]) return false;
  }
  return true;
}

int CellSet::components() const {
  return components_after_cut(CutSet{CellSet(box_, nx_, ny_), {}}, *this);
}

std::vector<std::size_t> CellSet::rle() const {
  std::vector<std::size_t> runs{0};
  std::uint8_t current = 0;
  for (std::uint8_t b : bits_) {
    if (b != current) {
      runs.push_back(0);
      current = b;
    }
    ++runs.back();
  }
  return runs;
}

CellSet CellSet::from_rle(Rect box, int nx, int ny, const std::vector<std::size_t>& runs) {
  CellSet c(box, nx, ny);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::size_t r : runs) {
    if (pos + r > c.bits_.size()) throw ContractError("run lengths exceed the grid");
    std::fill_n(c.bits_.begin() + static_cast<std::ptrdiff_t>(pos), r, value);
    pos += r;
    value ^= 1;
  }
  if (pos != c.bits_.size()) throw ContractError("run lengths do not cover the grid");
  return c;
}

std::string CellSet::pgm() const {
  std::ostringstream out;
  out << "P5\n" << nx_ << ' ' << ny_ << "\n255\n";
  for (int j = ny_ - 1; j >= 0; --j) {
    for (int i = 0; i < nx_; ++i) out.put(contains(i, j) ? static_cast<char>(255) : static_cast<char>(0));
  }
  return out.str();
}

bool CutSet::covers(int i, int j, bool vertical) const {
  if (interfaces.contains({i, j, vertical})) return true;
  if (cells.contains(i, j)) return true;
  return vertical ? cells.contains(i + 1, j) : cells.contains(i, j + 1);
}

// ---------------------------------------------------------- disconnection

int components_after_cut(const CutSet& k, const CellSet& g) {
  const bool has_cells = k.cells.nx() > 0;
  if (has_cells && !k.cells.same_grid(g)) throw ContractError("cut set and G live on different grids");
  const int nx = g.nx(), ny = g.ny();
  std::vector<int> label(static_cast<std::size_t>(nx) * ny, -1);
  auto id = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  auto covered = [&](int i, int j, bool vertical) {
    if (k.interfaces.contains({i, j, vertical})) return true;
    if (!has_cells) return false;
    return k.covers(i, j, vertical);
  };
  // Cells of K belong to the cut itself and may go to either side.
  auto open = [&](int i, int j) { return g.contains(i, j) && !(has_cells && k.cells.contains(i, j)); };
  int comps = 0;
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!open(i, j) || label[id(i, j)] >= 0) continue;
      label[id(i, j)] = comps;
      stack.emplace_back(i, j);
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        const std::array<std::tuple<int, int, int, int, bool>, 4> nbrs{{{ci + 1, cj, ci, cj, true},
                                                                         {ci - 1, cj, ci - 1, cj, true},
                                                                         {ci, cj + 1, ci, cj, false},
                                                                         {ci, cj - 1, ci, cj - 1, false}}};
        for (const auto& [ni, nj, ii, ij, vertical] : nbrs) {
          if (!open(ni, nj) || label[id(ni, nj)] >= 0) continue;
          if (covered(ii, ij, vertical)) continue;
          label[id(ni, nj)] = comps;
          stack.emplace_back(ni, nj);
        }
      }
      ++comps;
    }
  }
  return comps;
}

bool essentially_disconnects(const CutSet& k, const CellSet& g) {
  if (g.empty()) throw ContractError("G must be nonempty");
  return components_after_cut(k, g) >= 2;
}

CellSet wall_cells(const StructuredBVField& f, const CellSet& grid) {
  CellSet out(grid.box(), grid.nx(), grid.ny());
  const double step = 0.25 * std::min(grid.cell_width(), grid.cell_height());
  for (const JumpWall& w : f.walls()) {
    for (std::size_t k = 0; k < w.segment_count(); ++k) {
      const Point a = w.seg_a(k), b = w.seg_b(k);
      const int n = std::max(1, static_cast<int>(std::ceil(norm(b - a) / step)));
      for (int s = 0; s <= n; ++s) {
        const Point p = a + (static_cast<double>(s) / n) * (b - a);
        if (f.domain().boundary_distance(p) <= kGeomTol) continue;
        if (auto c = out.cell_of(p)) out.insert(c->first, c->second);
      }
    }
  }
  return out;
}

CellSet domain_cells(const Domain& d, Rect box, double resolution) {
  CellSet out = CellSet::over(box, resolution);
  for (int j = 0; j < out.ny(); ++j) {
    for (int i = 0; i < out.nx(); ++i) {
      if (d.contains(out.center(i, j))) out.insert(i, j);
    }
  }
  return out;
}

CellSet zero_cells(const StructuredBVField& v, Rect box, double resolution) {
  CellSet out = CellSet::over(box, resolution);
  const Domain& dom = v.domain();
  for (int j = 0; j < out.ny(); ++j) {
    for (int i = 0; i < out.nx(); ++i) {
      const Point c = out.center(i, j);
      const double hx = 0.5 * out.cell_width(), hy = 0.5 * out.cell_height();
      auto vanishes = [&] {
        for (double dx : {-hx, 0.0, hx}) {
          for (double dy : {-hy, 0.0, hy}) {
            const Point p{c.x + dx, c.y + dy};
            if (dom.contains(p) && v.eval_lower(p) <= 1e-12) return true;
          }
        }
        return false;
      };
      if (vanishes()) out.insert(i, j);
    }
  }
  const double step = 0.25 * std::min(out.cell_width(), out.cell_height());
  for (const Segment& s : arrangement_pieces(v.walls())) {
    if (dom.boundary_distance(0.5 * (s.a + s.b)) <= 1e-9) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(norm(s.b - s.a) / step)));
    for (int k = 0; k < n; ++k) {
      const Point p = s.a + ((k + 0.5) / n) * (s.b - s.a);
      if (!dom.contains(p)) continue;
      if (v.eval_lower(p) <= 1e-12) {
        if (auto c = out.cell_of(p)) out.insert(c->first, c->second);
      }
    }
  }
  return out;
}

// ------------------------------------------------------------- 1-D positivity

PositivityReport positivity_set_1d(const BVProfile& v, int samples) {
  std::vector<double> ts;
  const double a0 = v.start(), a1 = v.end();
  for (int k = 0; k <= samples; ++k) ts.push_back(a0 + (a1 - a0) * k / samples);
  for (double t : v.breakpoints()) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  PositivityReport r;
  std::vector<char> pos(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double lo = v.lower_limit(ts[k]);
    if (lo < -1e-12) throw ContractError("v must be nonnegative");
    pos[k] = lo > 1e-12;
    if (pos[k]) r.positive_samples.push_back(ts[k]);
  }
  auto refine = [&v](double inside, double outside) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (v.lower_limit(mid) > 1e-12) inside = mid; else outside = mid;
    }
    return outside;
  };
  for (std::size_t k = 0; k < ts.size();) {
    if (!pos[k]) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < ts.size() && pos[e + 1]) ++e;
    const double lo = k == 0 ? a0 : refine(ts[k], ts[k - 1]);
    const double hi = e + 1 == ts.size() ? a1 : refine(ts[e], ts[e + 1]);
    r.intervals.emplace_back(lo, hi);
    k = e + 1;
  }
  // A zero sample between two positive runs splits {v > 0} into two parts of positive length.
  for (std::size_t k = 1; k < r.intervals.size(); ++k) {
    const double gap_lo = r.intervals[k - 1].second, gap_hi = r.intervals[k].first;
    r.hypothesis_holds = false;
    r.witness = gap_lo == gap_hi ? gap_lo : 0.5 * (gap_lo + gap_hi);
    break;
  }
  if (r.hypothesis_holds && r.intervals.size() == 1) {
    r.single_interval = true;
    r.a = r.intervals.front().first;
    r.b = r.intervals.front().second;
  }
  return r;
}

// --------------------------------------------------------------- dense balls

BallBoundReport check_ball_bounds(const std::vector<double>& radii, double epsilon) {
  BallBoundReport r;
  for (double x : radii) {
    r.perimeter_sum += 2.0 * std::numbers::pi * x;
    r.area_sum += std::numbers::pi * x * x;
  }
  r.perimeter_ok = r.perimeter_sum <= 1.0 + 1e-12;
  r.area_ok = r.area_sum <= epsilon;
  return r;
}

namespace {

double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class BallIndex {
 public:
  BallIndex(const std::vector<Point>& c, const std::vector<double>& r, int buckets)
      : centers_(c), radii_(r), n_(buckets), cells_(static_cast<std::size_t>(buckets) * buckets) {
    for (std::size_t b = 0; b < c.size(); ++b) {
      const auto [i0, j0] = bucket({c[b].x - r[b], c[b].y - r[b]});
      const auto [i1, j1] = bucket({c[b].x + r[b], c[b].y + r[b]});
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) cells_[static_cast<std::size_t>(j) * n_ + i].push_back(b);
      }
    }
  }
  bool covered(Point p) const {
    const auto [i, j] = bucket(p);
    for (std::size_t b : cells_[static_cast<std::size_t>(j) * n_ + i]) {
      if (norm(p - centers_[b]) < radii_[b]) return true;
    }
    return false;
  }

 private:
  std::pair<int, int> bucket(Point p) const {
    auto idx = [this](double v) { return std::clamp(static_cast<int>((v + 1.0) * 0.5 * n_), 0, n_ - 1); };
    return {idx(p.x), idx(p.y)};
  }
  const std::vector<Point>& centers_;
  const std::vector<double>& radii_;
  int n_;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

DenseBallReport dense_ball_complement(int count, std::uint64_t seed, double epsilon, double resolution) {
  if (count < 1) throw ContractError("count must be at least 1");
  DenseBallReport r;
  if (!(epsilon > 0.0 && epsilon < std::numbers::pi)) {
    r.failure = "epsilon must lie in (0, pi), the area of the unit disk";
    return r;
  }
  std::mt19937_64 rng(seed);
  r.centers.push_back({0.0, 0.0});
  while (static_cast<int>(r.centers.size()) < count) {
    const Point p{2.0 * unit_real(rng) - 1.0, 2.0 * unit_real(rng) - 1.0};
    if (dot(p, p) < 1.0) r.centers.push_back(p);
  }
  double harmonic = 0.0;
  for (int h = 1; h <= count; ++h) harmonic += 1.0 / (static_cast<double>(h) * h);
  for (int h = 1; h <= count; ++h) {
    const double raw = 1.0 / (2.0 * std::numbers::pi * harmonic * h * h);
    r.radii.push_back(std::min(raw, 1.0 - norm(r.centers[h - 1])));
  }
  double area = 0.0;
  for (double x : r.radii) area += std::numbers::pi * x * x;
  if (area > epsilon) {
    const double shrink = std::sqrt(epsilon / area);
    for (double& x : r.radii) x *= shrink;
  }
  r.bounds = check_ball_bounds(r.radii, epsilon);
  if (!r.bounds.perimeter_ok || !r.bounds.area_ok) {
    r.failure = "radii violate the perimeter or area bound";
    return r;
  }

  const BallIndex index(r.centers, r.radii, 256);
  r.complement = CellSet::over({-1.0, -1.0, 1.0, 1.0}, resolution);
  const CellSet& k = r.complement;
  std::size_t covered_samples = 0, disk_samples = 0;
  const int probe = r.probe_factor;
  for (int j = 0; j < k.ny(); ++j) {
    for (int i = 0; i < k.nx(); ++i) {
      const Point c = k.center(i, j);
      if (dot(c, c) <= 1.0 && !index.covered(c)) r.complement.insert(i, j);
      // Finer probe: area estimate and interior test in one pass.
      bool meets_ball = false;
      bool inside_disk = true;
      for (int sj = 0; sj < probe; ++sj) {
        for (int si = 0; si < probe; ++si) {
          const Point p{k.box().xmin + (i + (si + 0.5) / probe) * k.cell_width(),
                        k.box().ymin + (j + (sj + 0.5) / probe) * k.cell_height()};
          if (dot(p, p) > 1.0) {
            inside_disk = false;
            continue;
          }
          ++disk_samples;
          if (index.covered(p)) {
            ++covered_samples;
            meets_ball = true;
          }
        }
      }
      if (r.complement.contains(i, j) && inside_disk && !meets_ball) ++r.interior_cells;
    }
  }
  r.union_area_estimate =
      std::numbers::pi * static_cast<double>(covered_samples) / static_cast<double>(std::max<std::size_t>(1, disk_samples));
  r.union_area_ok = r.union_area_estimate <= epsilon;
  r.constructed = true;
  return r;
}

// ------------------------------------------------------------ omega candidate

OmegaCandidate omega_candidate(const StructuredBVField& v, double resolution) {
  const Rect box = v.domain().bounds();
  const CellSet zero = zero_cells(v, box, resolution);
  const CellSet inside = domain_cells(v.domain(), box, resolution);
  OmegaCandidate out;
  out.cells = CellSet(zero.box(), zero.nx(), zero.ny());
  for (int j = 0; j < zero.ny(); ++j) {
    for (int i = 0; i < zero.nx(); ++i) {
      if (!inside.contains(i, j)) continue;
      bool clear = true;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) clear = clear && !zero.contains(i + di, j + dj);
      }
      if (clear) out.cells.insert(i, j);
    }
  }
  out.components = out.cells.components();
  out.connected = out.components == 1;
  return out;
}

DisconnectReport disconnect_check(const StructuredBVField& v, double resolution) {
  DisconnectReport r;
  const Rect box = v.domain().bounds();
  r.grid = domain_cells(v.domain(), box, resolution);
  r.zero = zero_cells(v, box, resolution);
  r.singular = wall_cells(v, r.zero);
  for (int j = 0; j < r.zero.ny(); ++j) {
    for (int i = 0; i < r.zero.nx(); ++i) {
      if (r.zero.contains(i, j)) r.singular.insert(i, j);
    }
  }
  r.zero_set_disconnects = essentially_disconnects(CutSet{r.zero, {}}, r.grid);
  r.singular_set_disconnects = essentially_disconnects(CutSet{r.singular, {}}, r.grid);
  r.omega = omega_candidate(v, resolution);
  try {
    check_positivity_precondition(v, resolution);
  } catch (const PreconditionViolation& e) {
    r.precondition_failure = e.what();
  }
  r.rigidity_precondition_flagged = !r.precondition_failure.empty() || !r.omega.connected;
  return r;
}

}  // namespace svdkit
