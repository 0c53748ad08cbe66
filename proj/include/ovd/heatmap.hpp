#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ovd/env.hpp"

namespace ovd {

/// State-visitation counts over a fixed grid. Row-major with origin top-left:
/// row 0 covers the top of the map (maximum y).
struct VisitGrid {
  int width = 50;
  int height = 50;
  Box2 bounds;
  std::vector<long> counts;

  VisitGrid() : counts(static_cast<std::size_t>(width * height), 0) {}
  VisitGrid(int w, int h, Box2 b);

  void add(const Eigen::Vector2d& position);
  long total() const;
  long at(int row, int col) const { return counts[static_cast<std::size_t>(row * width + col)]; }
};

void write_grid_csv(const VisitGrid& grid, const std::string& path);
VisitGrid load_grid_csv(const std::string& path);

/// ASCII PGM, intensities normalized to the maximum count (0 when empty).
void write_pgm(const VisitGrid& grid, const std::string& path);

/// Writes the image and the matching numeric grid next to each other
/// (base_path + ".pgm" / ".csv").
void export_heatmap(const VisitGrid& grid, const std::string& base_path);

}  // namespace ovd
