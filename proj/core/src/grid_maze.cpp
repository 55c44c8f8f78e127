#include "construal/grid_maze.hpp"

#include <algorithm>
#include <cctype>

namespace construal {

Cell displaced(Cell c, int action) {
  switch (action) {
    case kUp: return {c.x, c.y - 1};
    case kDown: return {c.x, c.y + 1};
    case kLeft: return {c.x - 1, c.y};
    case kRight: return {c.x + 1, c.y};
    default: throw ComputationError("displaced: unknown action " + std::to_string(action));
  }
}

int GridMaze::obstacle_at(int s) const {
  for (int i = 0; i < num_obstacles(); ++i) {
    if (std::binary_search(obstacles[i].begin(), obstacles[i].end(), s)) return i;
  }
  return -1;
}

MazeParseError::MazeParseError(int line_, int col_, const std::string& msg)
    : ComputationError("maze parse error at line " + std::to_string(line_) + ", column " +
                       std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

GridMaze parse_maze(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw MazeParseError(1, 1, "empty maze");

  GridMaze m;
  m.height = static_cast<int>(lines.size());
  m.width = static_cast<int>(lines[0].size());
  if (m.width == 0) throw MazeParseError(1, 1, "empty row");
  m.wall.assign(static_cast<std::size_t>(m.width) * m.height, 0);

  std::vector<std::vector<int>> by_digit(10);
  for (int y = 0; y < m.height; ++y) {
    if (static_cast<int>(lines[y].size()) != m.width) {
      throw MazeParseError(y + 1, static_cast<int>(lines[y].size()) + 1,
                           "ragged row: expected width " + std::to_string(m.width));
    }
    for (int x = 0; x < m.width; ++x) {
      const char ch = lines[y][x];
      const int s = m.index(x, y);
      if (ch == '#') {
        m.wall[s] = 1;
      } else if (ch == '.') {
        // free
      } else if (ch == 'S') {
        if (m.start >= 0) throw MazeParseError(y + 1, x + 1, "duplicate start");
        m.start = s;
      } else if (ch == 'G') {
        if (m.goal >= 0) throw MazeParseError(y + 1, x + 1, "duplicate goal");
        m.goal = s;
      } else if (ch >= '0' && ch <= '9') {
        by_digit[ch - '0'].push_back(s);
      } else {
        throw MazeParseError(y + 1, x + 1, std::string("invalid character '") + ch + "'");
      }
    }
  }
  if (m.start < 0) throw MazeParseError(m.height, m.width, "missing start cell 'S'");
  if (m.goal < 0) throw MazeParseError(m.height, m.width, "missing goal cell 'G'");

  int top = 9;
  while (top >= 0 && by_digit[top].empty()) --top;
  for (int i = 0; i <= top; ++i) {
    if (by_digit[i].empty()) {
      throw MazeParseError(m.height, m.width,
                           "obstacle ids must be dense from 0: id " + std::to_string(i) + " missing");
    }
    m.obstacles.push_back(std::move(by_digit[i]));
  }
  return m;
}

std::string serialize_maze(const GridMaze& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>((m.width + 1)) * m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const int s = m.index(x, y);
      char ch = '.';
      if (m.wall[s]) ch = '#';
      else if (s == m.start) ch = 'S';
      else if (s == m.goal) ch = 'G';
      else {
        const int ob = m.obstacle_at(s);
        if (ob >= 0) ch = static_cast<char>('0' + ob);
      }
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

// Applies a cell bijection old -> new with the given output dimensions.
GridMaze remap(const GridMaze& m, int new_w, int new_h, auto&& map_cell) {
  GridMaze out;
  out.width = new_w;
  out.height = new_h;
  out.wall.assign(static_cast<std::size_t>(new_w) * new_h, 0);
  out.obstacles.resize(m.num_obstacles());
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const int s = m.index(x, y);
      const Cell nc = map_cell(Cell{x, y});
      const int ns = out.index(nc);
      if (m.wall[s]) out.wall[ns] = 1;
      if (s == m.start) out.start = ns;
      if (s == m.goal) out.goal = ns;
    }
  }
  for (int i = 0; i < m.num_obstacles(); ++i) {
    for (int s : m.obstacles[i]) {
      const Cell nc = map_cell(m.cell(s));
      out.obstacles[i].push_back(out.index(nc));
    }
    std::sort(out.obstacles[i].begin(), out.obstacles[i].end());
  }
  return out;
}

}  // namespace

GridMaze mirror_horizontal(const GridMaze& m) {
  return remap(m, m.width, m.height, [&](Cell c) { return Cell{m.width - 1 - c.x, c.y}; });
}

GridMaze mirror_vertical(const GridMaze& m) {
  return remap(m, m.width, m.height, [&](Cell c) { return Cell{c.x, m.height - 1 - c.y}; });
}

GridMaze rotate_cw(const GridMaze& m) {
  return remap(m, m.height, m.width, [&](Cell c) { return Cell{m.height - 1 - c.y, c.x}; });
}

GridMaze strip_obstacles(const GridMaze& m) {
  GridMaze out = m;
  out.obstacles.clear();
  return out;
}

}  // namespace construal
