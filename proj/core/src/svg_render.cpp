#include "construal/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace construal {
namespace {

constexpr int kCell = 24;  // pixels per grid cell

// Single-hue blue ramp: t=0 is a pale tint (still visibly distinct from a
// white free cell), t=1 is fully saturated.
std::string ramp_color(double t) {
  t = std::min(1.0, std::max(0.0, t));
  const double r0 = 222, g0 = 235, b0 = 247;
  const double r1 = 8, g1 = 48, b1 = 107;
  const int r = static_cast<int>(std::lround(r0 + (r1 - r0) * t));
  const int g = static_cast<int>(std::lround(g0 + (g1 - g0) * t));
  const int b = static_cast<int>(std::lround(b0 + (b1 - b0) * t));
  return "rgb(" + std::to_string(r) + "," + std::to_string(g) + "," + std::to_string(b) + ")";
}

void cell_rect(std::string& svg, Cell c, const std::string& fill) {
  svg += "  <rect x=\"" + std::to_string(c.x * kCell) + "\" y=\"" + std::to_string(c.y * kCell) +
         "\" width=\"" + std::to_string(kCell) + "\" height=\"" + std::to_string(kCell) +
         "\" fill=\"" + fill + "\"/>\n";
}

}  // namespace

std::string render_heatmap(const GridMaze& m, const std::vector<double>& scores,
                           Normalization norm) {
  const int n_obs = m.num_obstacles();
  if (static_cast<int>(scores.size()) != n_obs) {
    throw std::invalid_argument("render_heatmap: " + std::to_string(scores.size()) +
                                " scores for " + std::to_string(n_obs) + " obstacles");
  }

  std::vector<double> t(scores.begin(), scores.end());
  if (norm == Normalization::kMinMax && n_obs > 0) {
    const auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi > lo) {
      for (double& v : t) v = (v - lo) / (hi - lo);
    } else {
      for (double& v : t) v = 0.5;
    }
  }

  const int w = m.width * kCell;
  const int h = m.height * kCell;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" fill=\"white\"/>\n";

  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (m.wall[static_cast<std::size_t>(m.index(x, y))]) cell_rect(svg, {x, y}, "black");
    }
  }
  for (int i = 0; i < n_obs; ++i) {
    const std::string fill = ramp_color(t[static_cast<std::size_t>(i)]);
    for (int s : m.obstacles[static_cast<std::size_t>(i)]) cell_rect(svg, m.cell(s), fill);
  }

  // Grid lines on top of the fills keep cell boundaries legible.
  svg += "  <g stroke=\"#bbbbbb\" stroke-width=\"1\">\n";
  for (int x = 0; x <= m.width; ++x) {
    svg += "    <line x1=\"" + std::to_string(x * kCell) + "\" y1=\"0\" x2=\"" +
           std::to_string(x * kCell) + "\" y2=\"" + std::to_string(h) + "\"/>\n";
  }
  for (int y = 0; y <= m.height; ++y) {
    svg += "    <line x1=\"0\" y1=\"" + std::to_string(y * kCell) + "\" x2=\"" +
           std::to_string(w) + "\" y2=\"" + std::to_string(y * kCell) + "\"/>\n";
  }
  svg += "  </g>\n";

  if (m.start >= 0) {
    const Cell c = m.cell(m.start);
    svg += "  <circle cx=\"" + std::to_string(c.x * kCell + kCell / 2) + "\" cy=\"" +
           std::to_string(c.y * kCell + kCell / 2) + "\" r=\"" + std::to_string(kCell / 3) +
           "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  if (m.goal >= 0) {
    const Cell c = m.cell(m.goal);
    const int inset = kCell / 6;
    svg += "  <rect x=\"" + std::to_string(c.x * kCell + inset) + "\" y=\"" +
           std::to_string(c.y * kCell + inset) + "\" width=\"" + std::to_string(kCell - 2 * inset) +
           "\" height=\"" + std::to_string(kCell - 2 * inset) +
           "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace construal
