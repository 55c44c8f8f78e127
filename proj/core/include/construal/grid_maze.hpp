#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "construal/types.hpp"

namespace construal {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

// The four movement actions, in the index order used by every policy matrix,
// trajectory dump, and tie-break in this library.
enum Action : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kNumActions = 4;

Cell displaced(Cell c, int action);

// Grid world geometry: walls, a start, a goal, and indexed obstacle cell sets.
// States are all cells (walls included; they are simply unreachable), indexed
// x + y * width. Dynamics parameters live with the task composition, not here.
struct GridMaze {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> wall;           // per state
  std::vector<std::vector<int>> obstacles;  // obstacle id -> sorted state indices
  int start = -1;
  int goal = -1;

  int size() const { return width * height; }
  int index(int x, int y) const { return x + y * width; }
  int index(Cell c) const { return c.x + c.y * width; }
  Cell cell(int s) const { return {s % width, s / width}; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
  int num_obstacles() const { return static_cast<int>(obstacles.size()); }

  // Obstacle id covering state s, or -1. The text format gives each cell at
  // most one id.
  int obstacle_at(int s) const;
};

class MazeParseError : public ComputationError {
 public:
  MazeParseError(int line, int col, const std::string& msg);
  int line;  // 1-based
  int col;   // 1-based
};

// Text format, one row per line:
//   '#' wall, '.' free, 'S' start, 'G' goal, '0'..'9' obstacle cells.
// Rows must be equally long; exactly one S and one G; obstacle ids must be
// dense from 0. Throws MazeParseError with the offending position.
GridMaze parse_maze(std::string_view text);

// Canonical text with a trailing newline; parse_maze round-trips it.
std::string serialize_maze(const GridMaze& m);

GridMaze mirror_horizontal(const GridMaze& m);  // flips x
GridMaze mirror_vertical(const GridMaze& m);    // flips y
GridMaze rotate_cw(const GridMaze& m);          // 90 degrees clockwise

// Same geometry with every obstacle removed.
GridMaze strip_obstacles(const GridMaze& m);

}  // namespace construal
