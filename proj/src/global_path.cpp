#include "gvfnav/global_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "gvfnav/errors.hpp"

namespace gvfnav {

namespace {

// Blocked-cell predicate over the inflated grid.
class InflatedGrid {
public:
  InflatedGrid(const VoxelGrid& grid, double inflation, const DistanceField* esdf)
      : geom_(grid.geometry()), inflation_(inflation) {
    if (!grid.any_occupied()) return;  // nothing to inflate
    if (esdf) {
      if (esdf->geometry().dims != geom_.dims)
        throw std::invalid_argument("obstacle ESDF geometry does not match grid");
      blocked_.resize(geom_.num_cells());
      for (int i = 0; i < geom_.num_cells(); ++i)
        blocked_[i] = esdf->values()[i] <= inflation_ ? 1 : 0;
    } else {
      const DistanceField own = euclidean_distance_transform(grid);
      blocked_.resize(geom_.num_cells());
      for (int i = 0; i < geom_.num_cells(); ++i)
        blocked_[i] = own.values()[i] <= inflation_ ? 1 : 0;
    }
  }

  bool blocked(const Eigen::Vector3i& c) const {
    return !blocked_.empty() && blocked_[geom_.linear(c)] != 0;
  }

  // A move from `c` by `d` (26-neighborhood) is legal when every cell of
  // the spanned block is inside and free; this keeps cell-center segments
  // between consecutive path cells collision-free.
  bool move_free(const Eigen::Vector3i& c, const Eigen::Vector3i& d) const {
    for (int bx = 0; bx <= std::abs(d.x()); ++bx)
      for (int by = 0; by <= std::abs(d.y()); ++by)
        for (int bz = 0; bz <= std::abs(d.z()); ++bz) {
          const Eigen::Vector3i cell = c + Eigen::Vector3i(bx * (d.x() < 0 ? -1 : 1),
                                                           by * (d.y() < 0 ? -1 : 1),
                                                           bz * (d.z() < 0 ? -1 : 1));
          if (!geom_.in_bounds(cell) || blocked(cell)) return false;
        }
    return true;
  }

  const GridGeometry& geometry() const { return geom_; }

private:
  GridGeometry geom_;
  double inflation_;
  std::vector<uint8_t> blocked_;
};

// Nearest free cell to `point` within a Chebyshev radius around its cell;
// ties broken by linear index so results are reproducible.
bool snap_free(const InflatedGrid& inflated, const Eigen::Vector3d& point, int radius,
               Eigen::Vector3i& out) {
  const GridGeometry& g = inflated.geometry();
  const Eigen::Vector3i c0 = g.cell_of(point);
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int dx = -radius; dx <= radius; ++dx)
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dz = -radius; dz <= radius; ++dz) {
        const Eigen::Vector3i c = c0 + Eigen::Vector3i(dx, dy, dz);
        if (!g.in_bounds(c) || inflated.blocked(c)) continue;
        const double dist = (g.cell_center(c) - point).squaredNorm();
        if (dist < best - 1e-15 ||
            (std::abs(dist - best) <= 1e-15 && (!found || g.linear(c) < g.linear(out)))) {
          best = dist;
          out = c;
          found = true;
        }
      }
  return found;
}

struct QueueNode {
  double f;
  double g;
  int idx;
};
struct QueueOrder {
  bool operator()(const QueueNode& a, const QueueNode& b) const {
    if (a.f != b.f) return a.f > b.f;
    return a.idx > b.idx;
  }
};

std::vector<Eigen::Vector3i> astar(const InflatedGrid& inflated, const Eigen::Vector3i& start,
                                   const Eigen::Vector3i& goal) {
  const GridGeometry& g = inflated.geometry();
  const int n = g.num_cells();
  std::vector<double> g_score(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<uint8_t> closed(n, 0);

  std::vector<Eigen::Vector3i> deltas;
  deltas.reserve(26);
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz)
        if (dx || dy || dz) deltas.emplace_back(dx, dy, dz);

  const Eigen::Vector3d goal_center = g.cell_center(goal);
  auto heuristic = [&](const Eigen::Vector3i& c) { return (g.cell_center(c) - goal_center).norm(); };

  std::priority_queue<QueueNode, std::vector<QueueNode>, QueueOrder> open;
  const int start_idx = g.linear(start);
  g_score[start_idx] = 0.0;
  open.push({heuristic(start), 0.0, start_idx});

  const int goal_idx = g.linear(goal);
  while (!open.empty()) {
    const QueueNode node = open.top();
    open.pop();
    if (closed[node.idx]) continue;
    closed[node.idx] = 1;
    if (node.idx == goal_idx) break;

    const int zi = node.idx % g.dims.z();
    const int yi = (node.idx / g.dims.z()) % g.dims.y();
    const int xi = node.idx / (g.dims.z() * g.dims.y());
    const Eigen::Vector3i cur(xi, yi, zi);
    for (const Eigen::Vector3i& d : deltas) {
      const Eigen::Vector3i nb = cur + d;
      if (!g.in_bounds(nb)) continue;
      const int nb_idx = g.linear(nb);
      if (closed[nb_idx] || !inflated.move_free(cur, d)) continue;
      const double tentative = node.g + g.resolution * d.cast<double>().norm();
      if (tentative < g_score[nb_idx]) {
        g_score[nb_idx] = tentative;
        parent[nb_idx] = node.idx;
        open.push({tentative + heuristic(nb), tentative, nb_idx});
      }
    }
  }

  if (!closed[goal_idx]) throw NoPathError("global planner: goal unreachable");

  std::vector<Eigen::Vector3i> cells;
  for (int idx = goal_idx; idx != -1; idx = parent[idx]) {
    const int zi = idx % g.dims.z();
    const int yi = (idx / g.dims.z()) % g.dims.y();
    const int xi = idx / (g.dims.z() * g.dims.y());
    cells.emplace_back(xi, yi, zi);
  }
  std::reverse(cells.begin(), cells.end());
  return cells;
}

bool segment_free(const InflatedGrid& inflated, const Eigen::Vector3d& a,
                  const Eigen::Vector3d& b) {
  for (const Eigen::Vector3i& c : traverse_segment(a, b, inflated.geometry()))
    if (!inflated.geometry().in_bounds(c) || inflated.blocked(c)) return false;
  return true;
}

std::vector<Eigen::Vector3d> shortcut(const InflatedGrid& inflated,
                                      const std::vector<Eigen::Vector3d>& pts) {
  if (pts.size() <= 2) return pts;
  std::vector<Eigen::Vector3d> out;
  out.push_back(pts.front());
  size_t i = 0;
  while (i + 1 < pts.size()) {
    size_t j = pts.size() - 1;
    for (; j > i + 1; --j)
      if (segment_free(inflated, pts[i], pts[j])) break;
    out.push_back(pts[j]);
    i = j;
  }
  return out;
}

std::vector<Eigen::Vector3d> plan_impl(const VoxelGrid& grid, const PathQuery& query,
                                       const DistanceField* esdf) {
  const GridGeometry& g = grid.geometry();
  if (!g.contains_point(query.start) || !g.contains_point(query.goal))
    throw OutOfBoundsError("global planner: query endpoints outside grid");
  if (query.inflation < 0.0) throw std::invalid_argument("inflation must be nonnegative");

  const InflatedGrid inflated(grid, query.inflation, esdf);

  Eigen::Vector3i start_cell, goal_cell;
  if (!snap_free(inflated, query.start, 3, start_cell))
    throw NoPathError("global planner: start blocked beyond snap radius");
  if (!snap_free(inflated, query.goal, 3, goal_cell))
    throw NoPathError("global planner: goal blocked beyond snap radius");

  if (start_cell == goal_cell) {
    const bool exact = g.cell_of(query.start) == start_cell;
    return {exact ? query.start : g.cell_center(start_cell)};
  }

  const std::vector<Eigen::Vector3i> cells = astar(inflated, start_cell, goal_cell);
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(cells.size());
  for (const auto& c : cells) pts.push_back(g.cell_center(c));
  // Use the exact endpoints when they live in the (free) snapped cells: the
  // segment to the adjacent center stays inside the same free cell block.
  if (g.cell_of(query.start) == start_cell) pts.front() = query.start;
  if (g.cell_of(query.goal) == goal_cell) pts.back() = query.goal;
  return shortcut(inflated, pts);
}

}  // namespace

std::vector<Eigen::Vector3d> plan(const VoxelGrid& grid, const PathQuery& query) {
  return plan_impl(grid, query, nullptr);
}

std::vector<Eigen::Vector3d> plan(const VoxelGrid& grid, const PathQuery& query,
                                  const DistanceField& obstacle_esdf) {
  return plan_impl(grid, query, &obstacle_esdf);
}

Eigen::Vector3d local_goal(const VoxelGrid& grid, const Eigen::Vector3d& global_goal,
                           const Eigen::Vector3d& position, double horizon,
                           const std::vector<Eigen::Vector3d>* previous_path) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if ((global_goal - position).norm() <= horizon) return global_goal;

  Eigen::Vector3d candidate;
  if (previous_path && previous_path->size() >= 2) {
    // Walk the previous path from its point nearest the vehicle.
    size_t k0 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < previous_path->size(); ++k) {
      const double d = ((*previous_path)[k] - position).squaredNorm();
      if (d < best) {
        best = d;
        k0 = k;
      }
    }
    double remaining = horizon;
    bool on_path = false;
    candidate = previous_path->back();
    for (size_t k = k0; k + 1 < previous_path->size(); ++k) {
      const Eigen::Vector3d seg = (*previous_path)[k + 1] - (*previous_path)[k];
      const double len = seg.norm();
      if (remaining <= len) {
        candidate = (*previous_path)[k] + (len > 0.0 ? remaining / len : 0.0) * seg;
        on_path = true;
        break;
      }
      remaining -= len;
    }
    if (!on_path) {
      // The previous path ran out before the horizon. Keep advancing straight
      // toward the global goal with the leftover budget; otherwise the target
      // would freeze at the old path end and the vehicle would orbit it.
      const Eigen::Vector3d tail = global_goal - candidate;
      const double len = tail.norm();
      if (len > 1e-12) candidate += (std::min(remaining, len) / len) * tail;
    }
  } else {
    candidate = position + horizon * (global_goal - position).normalized();
  }

  // Keep the target inside the map, off the outermost cell ring.
  const GridGeometry& g = grid.geometry();
  const Eigen::Vector3d lo = g.metric_min() + Eigen::Vector3d::Constant(1.5 * g.resolution);
  const Eigen::Vector3d hi = g.metric_max() - Eigen::Vector3d::Constant(1.5 * g.resolution);
  candidate = candidate.cwiseMax(lo).cwiseMin(hi);

  const Eigen::Vector3i cell = g.cell_of(candidate);
  if (!grid.occupied(cell)) return candidate;

  // Landed inside a known obstacle: take the nearest free cell, widening the
  // search until one appears (a deep block interior needs more than 1 m).
  for (double reach = 1.0; reach <= 4.0 + 1e-9; reach *= 2.0) {
    const int radius = static_cast<int>(std::ceil(reach / g.resolution));
    Eigen::Vector3i snapped = cell;
    double best = std::numeric_limits<double>::infinity();
    for (int dx = -radius; dx <= radius; ++dx)
      for (int dy = -radius; dy <= radius; ++dy)
        for (int dz = -radius; dz <= radius; ++dz) {
          const Eigen::Vector3i c = cell + Eigen::Vector3i(dx, dy, dz);
          if (!g.in_bounds(c) || grid.occupied(c)) continue;
          const double d = (g.cell_center(c) - candidate).norm();
          if (d <= reach && d < best) {
            best = d;
            snapped = c;
          }
        }
    if (std::isfinite(best)) return g.cell_center(snapped);
  }
  return candidate;
}

}  // namespace gvfnav
