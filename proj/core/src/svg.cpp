#include "photocov/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace photocov {

namespace {

void append_fixed(std::string& out, double v, int precision = 2) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  out.append(buf, res.ptr);
}

struct Mapper {
  Point2 lo;
  double scale = 1.0;
  double height = 0.0;
  double margin = 0.0;

  // World to pixel, y flipped for SVG.
  double px(double x) const { return (x - lo.x) * scale + margin; }
  double py(double y) const { return height - ((y - lo.y) * scale + margin); }
};

void append_point(std::string& out, const Mapper& m, Point2 p) {
  append_fixed(out, m.px(p.x));
  out += ',';
  append_fixed(out, m.py(p.y));
}

void append_polygon(std::string& out, const Mapper& m, const ConvexPolygon& poly,
                    const char* style) {
  if (poly.size() < 2) return;
  out += "<polygon points=\"";
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (k) out += ' ';
    append_point(out, m, poly.vertices[k]);
  }
  out += "\" ";
  out += style;
  out += "/>\n";
}

// Marching squares on a sampled density grid; segments are emitted per
// grid cell and clipped to the region by the SVG clip path.
void append_contours(std::string& out, const Mapper& m, const ConvexPolygon& region,
                     const GaussianMixtureDensity& density, const FigureOptions& options) {
  const auto [lo, hi] = bounding_box(region);
  const int n = std::max(options.contour_samples, 8);
  const double hx = (hi.x - lo.x) / (n - 1);
  const double hy = (hi.y - lo.y) / (n - 1);
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  double vmin = 0.0, vmax = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double v = density.eval({lo.x + c * hx, lo.y + r * hy});
      values[static_cast<std::size_t>(r) * n + c] = v;
      if (r == 0 && c == 0) {
        vmin = vmax = v;
      } else {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
  }
  if (!(vmax > vmin)) return;  // flat density, nothing to contour

  out += "<g clip-path=\"url(#region-clip)\" stroke=\"#7f9fc4\" stroke-width=\"1\" "
         "fill=\"none\">\n";
  for (int level_idx = 1; level_idx <= options.contour_levels; ++level_idx) {
    const double level =
        vmin + (vmax - vmin) * level_idx / (options.contour_levels + 1.0);
    std::string path;
    for (int r = 0; r + 1 < n; ++r) {
      for (int c = 0; c + 1 < n; ++c) {
        const double v00 = values[static_cast<std::size_t>(r) * n + c];
        const double v10 = values[static_cast<std::size_t>(r) * n + c + 1];
        const double v11 = values[static_cast<std::size_t>(r + 1) * n + c + 1];
        const double v01 = values[static_cast<std::size_t>(r + 1) * n + c];
        const int mask = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) |
                         (v11 > level ? 4 : 0) | (v01 > level ? 8 : 0);
        if (mask == 0 || mask == 15) continue;
        const double x0 = lo.x + c * hx, y0 = lo.y + r * hy;
        const double x1 = x0 + hx, y1 = y0 + hy;
        auto lerp = [&](double va, double vb, double a, double b) {
          return a + (b - a) * ((level - va) / (vb - va));
        };
        const Point2 bottom{lerp(v00, v10, x0, x1), y0};
        const Point2 top{lerp(v01, v11, x0, x1), y1};
        const Point2 left{x0, lerp(v00, v01, y0, y1)};
        const Point2 right{x1, lerp(v10, v11, y0, y1)};
        auto seg = [&](Point2 a, Point2 b) {
          path += 'M';
          append_point(path, m, a);
          path += 'L';
          append_point(path, m, b);
        };
        switch (mask) {
          case 1: case 14: seg(left, bottom); break;
          case 2: case 13: seg(bottom, right); break;
          case 3: case 12: seg(left, right); break;
          case 4: case 11: seg(top, right); break;
          case 6: case 9: seg(bottom, top); break;
          case 7: case 8: seg(left, top); break;
          case 5: case 10: {
            const double center = 0.25 * (v00 + v10 + v11 + v01);
            const bool joined = (center > level) == (mask == 5);
            if (joined) {
              seg(left, bottom);
              seg(top, right);
            } else {
              seg(left, top);
              seg(bottom, right);
            }
            break;
          }
          default: break;
        }
      }
    }
    if (!path.empty()) {
      out += "<path d=\"";
      out += path;
      out += "\"/>\n";
    }
  }
  out += "</g>\n";
}

}  // namespace

std::string simulation_figure_svg(const ConvexPolygon& region,
                                  const GaussianMixtureDensity& density,
                                  const SimulationTrace& trace,
                                  const OrderTwoPartition& final_partition,
                                  const FigureOptions& options) {
  if (region.size() < 3) throw std::invalid_argument("empty region");
  const auto [lo, hi] = bounding_box(region);
  const double world_w = hi.x - lo.x;
  const double world_h = hi.y - lo.y;
  Mapper m;
  m.lo = lo;
  m.margin = options.width_px * 0.04;
  m.scale = (options.width_px - 2.0 * m.margin) / world_w;
  m.height = world_h * m.scale + 2.0 * m.margin;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  append_fixed(svg, options.width_px);
  svg += "\" height=\"";
  append_fixed(svg, m.height);
  svg += "\" viewBox=\"0 0 ";
  append_fixed(svg, options.width_px);
  svg += ' ';
  append_fixed(svg, m.height);
  svg += "\">\n";

  svg += "<defs><clipPath id=\"region-clip\">";
  {
    std::string poly;
    append_polygon(poly, m, region, "");
    svg += poly;
  }
  svg += "</clipPath></defs>\n";

  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  append_contours(svg, m, region, density, options);

  // Final partition cell boundaries.
  svg += "<g stroke=\"#888888\" stroke-width=\"1\" fill=\"none\">\n";
  for (const auto& [key, cell] : final_partition.cells) {
    (void)key;
    if (!cell.empty()) append_polygon(svg, m, cell, "");
  }
  svg += "</g>\n";

  append_polygon(svg, m, region, "fill=\"none\" stroke=\"#222222\" stroke-width=\"2\"");

  // Dashed trajectories from the recorded positions.
  if (!trace.records.empty()) {
    const std::size_t agents = trace.records.front().positions.size();
    svg += "<g stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" fill=\"none\">\n";
    for (std::size_t a = 0; a < agents; ++a) {
      svg += "<polyline points=\"";
      for (std::size_t rec = 0; rec < trace.records.size(); ++rec) {
        if (rec) svg += ' ';
        append_point(svg, m, trace.records[rec].positions[a]);
      }
      svg += "\"/>\n";
    }
    svg += "</g>\n";
  }

  // Final positions.
  svg += "<g fill=\"#1b4f9c\" stroke=\"white\" stroke-width=\"1\">\n";
  for (const auto& p : trace.final_configuration.positions) {
    svg += "<circle cx=\"";
    append_fixed(svg, m.px(p.x));
    svg += "\" cy=\"";
    append_fixed(svg, m.py(p.y));
    svg += "\" r=\"5\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void write_simulation_figure(const std::string& path, const ConvexPolygon& region,
                             const GaussianMixtureDensity& density, const SimulationTrace& trace,
                             const OrderTwoPartition& final_partition,
                             const FigureOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write figure file: " + path);
  out << simulation_figure_svg(region, density, trace, final_partition, options);
}

}  // namespace photocov
