#include "ovd/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ovd {

VisitGrid::VisitGrid(int w, int h, Box2 b)
    : width(w), height(h), bounds(b), counts(static_cast<std::size_t>(w * h), 0) {
  if (w < 1 || h < 1) throw std::invalid_argument("visit grid: dimensions must be positive");
}

void VisitGrid::add(const Eigen::Vector2d& position) {
  const double fx = (position.x() - bounds.lo.x()) / (bounds.hi.x() - bounds.lo.x());
  const double fy = (bounds.hi.y() - position.y()) / (bounds.hi.y() - bounds.lo.y());
  const int col = std::clamp(static_cast<int>(fx * width), 0, width - 1);
  const int row = std::clamp(static_cast<int>(fy * height), 0, height - 1);
  ++counts[static_cast<std::size_t>(row * width + col)];
}

long VisitGrid::total() const {
  long sum = 0;
  for (long c : counts) sum += c;
  return sum;
}

void write_grid_csv(const VisitGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("heatmap: cannot write " + path);
  out << "# visit grid " << grid.width << "x" << grid.height << ", row-major, origin top-left"
      << ", bounds " << grid.bounds.lo.x() << " " << grid.bounds.lo.y() << " "
      << grid.bounds.hi.x() << " " << grid.bounds.hi.y() << "\n";
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      if (c > 0) out << ',';
      out << grid.at(r, c);
    }
    out << "\n";
  }
}

VisitGrid load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("heatmap: cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# visit grid ", 0) != 0)
    throw std::runtime_error("heatmap: bad grid header in " + path);
  std::istringstream hs(header.substr(13));
  int w = 0, h = 0;
  char x = 0;
  hs >> w >> x >> h;
  if (w < 1 || h < 1 || x != 'x') throw std::runtime_error("heatmap: bad grid size in " + path);
  Box2 bounds;
  const auto bpos = header.find("bounds ");
  if (bpos != std::string::npos) {
    std::istringstream bs(header.substr(bpos + 7));
    bs >> bounds.lo.x() >> bounds.lo.y() >> bounds.hi.x() >> bounds.hi.y();
  }
  VisitGrid grid(w, h, bounds);
  std::string line;
  int r = 0;
  while (std::getline(in, line) && r < h) {
    std::istringstream ls(line);
    std::string field;
    int c = 0;
    while (std::getline(ls, field, ',') && c < w) {
      grid.counts[static_cast<std::size_t>(r * w + c)] = std::stol(field);
      ++c;
    }
    if (c != w) throw std::runtime_error("heatmap: short row in " + path);
    ++r;
  }
  if (r != h) throw std::runtime_error("heatmap: short grid in " + path);
  return grid;
}

void write_pgm(const VisitGrid& grid, const std::string& path) {
  long max_count = 0;
  for (long c : grid.counts) max_count = std::max(max_count, c);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("heatmap: cannot write " + path);
  out << "P2\n# visit-frequency heatmap, row-major, origin top-left (row 0 = max y)\n";
  out << grid.width << " " << grid.height << "\n255\n";
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      const long count = grid.at(r, c);
      const int level =
          max_count == 0
              ? 0
              : static_cast<int>(std::lround(255.0 * static_cast<double>(count) /
                                             static_cast<double>(max_count)));
      out << level << (c + 1 == grid.width ? "" : " ");
    }
    out << "\n";
  }
}

void export_heatmap(const VisitGrid& grid, const std::string& base_path) {
  write_pgm(grid, base_path + ".pgm");
  write_grid_csv(grid, base_path + ".csv");
}

}  // namespace ovd
