#include "esclab/svg.hpp"

#include <cmath>
#include <cstdio>

namespace esclab {

namespace {

struct Mapper {
  const PlotStyle& s;
  double px(double x) const {
    return (x - s.x_min) / (s.x_max - s.x_min) * s.width;
  }
  double py(double y) const {
    return s.height - (y - s.y_min) / (s.y_max - s.y_min) * s.height;
  }
  bool inside(double x, double y) const {
    return x >= s.x_min && x <= s.x_max && y >= s.y_min && y <= s.y_max;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string header(const PlotStyle& s) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(s.width) + "\" height=\"" + std::to_string(s.height) +
         "\" viewBox=\"0 0 " + std::to_string(s.width) + " " +
         std::to_string(s.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  Mapper m{s};
  // axes through the origin when visible
  if (s.x_min < 0 && s.x_max > 0) {
    out += "<line x1=\"" + num(m.px(0)) + "\" y1=\"0\" x2=\"" + num(m.px(0)) +
           "\" y2=\"" + std::to_string(s.height) +
           "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  }
  if (s.y_min < 0 && s.y_max > 0) {
    out += "<line x1=\"0\" y1=\"" + num(m.py(0)) + "\" x2=\"" +
           std::to_string(s.width) + "\" y2=\"" + num(m.py(0)) +
           "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  }
  if (!s.title.empty()) {
    out += "<text x=\"12\" y=\"20\" font-family=\"monospace\" font-size=\"14\">" +
           s.title + "</text>\n";
  }
  return out;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts,
                     const Mapper& m, const char* color, double width) {
  if (pts.size() < 2) return "";
  std::string out = "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"" + num(width) + "\" points=\"";
  for (const auto& [x, y] : pts) {
    out += num(m.px(x)) + "," + num(m.py(y)) + " ";
  }
  out += "\"/>\n";
  return out;
}

}  // namespace

std::string trajectory_svg(const Trajectory& traj, const PlotStyle& style) {
  Mapper m{style};
  std::string out = header(style);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(traj.states.size());
  for (const auto& x : traj.states) {
    if (x.size() < 2) continue;
    pts.emplace_back(x[0], x[1]);
  }
  out += polyline(pts, m, "#1f77b4", 1.5);
  if (!pts.empty()) {
    out += "<circle cx=\"" + num(m.px(pts.front().first)) + "\" cy=\"" +
           num(m.py(pts.front().second)) + "\" r=\"4\" fill=\"#2ca02c\"/>\n";
    out += "<circle cx=\"" + num(m.px(pts.back().first)) + "\" cy=\"" +
           num(m.py(pts.back().second)) + "\" r=\"4\" fill=\"#d62728\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string stream_plot_svg(const std::function<Vec(const Vec&)>& field,
                            const PlotStyle& style) {
  Mapper m{style};
  std::string out = header(style);
  const double span_x = style.x_max - style.x_min;
  const double span_y = style.y_max - style.y_min;
  const double cell = std::min(span_x, span_y) / style.stream_grid;
  // Streamlines are integrated in arc length so fast and slow regions get
  // comparable line lengths.
  const double ds = cell / 12.0;

  for (int gi = 0; gi < style.stream_grid; ++gi) {
    for (int gj = 0; gj < style.stream_grid; ++gj) {
      const double sx = style.x_min + span_x * (gi + 0.5) / style.stream_grid;
      const double sy = style.y_min + span_y * (gj + 0.5) / style.stream_grid;
      std::vector<std::pair<double, double>> line;
      for (int dir : {-1, +1}) {
        Vec x(2);
        x << sx, sy;
        std::vector<std::pair<double, double>> half;
        for (int step = 0; step < style.stream_steps; ++step) {
          if (!m.inside(x[0], x[1])) break;
          half.emplace_back(x[0], x[1]);
          // unit-speed RK4 step along the (possibly reversed) field
          const auto unit = [&](const Vec& p) -> Vec {
            Vec f = field(p);
            const double n = f.norm();
            if (!std::isfinite(n) || n < 1e-14) return Vec::Zero(2);
            return (dir / n) * f;
          };
          const Vec k1 = unit(x);
          if (k1.isZero()) break;
          const Vec k2 = unit(x + 0.5 * ds * k1);
          const Vec k3 = unit(x + 0.5 * ds * k2);
          const Vec k4 = unit(x + ds * k3);
          x += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          if (!x.allFinite()) break;
        }
        if (dir < 0) {
          std::reverse(half.begin(), half.end());
          line = std::move(half);
        } else {
          if (!half.empty() && !line.empty()) half.erase(half.begin());
          line.insert(line.end(), half.begin(), half.end());
        }
      }
      out += polyline(line, m, "#1f77b4", 1.0);
      // direction arrow at the seed
      Vec p(2);
      p << sx, sy;
      Vec f = field(p);
      const double n = f.norm();
      if (std::isfinite(n) && n > 1e-14) {
        const double ax = f[0] / n, ay = f[1] / n;
        const double x0 = m.px(sx), y0 = m.py(sy);
        const double x1 = m.px(sx + 0.35 * cell * ax), y1 = m.py(sy + 0.35 * cell * ay);
        out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
               num(x1) + "\" y2=\"" + num(y1) +
               "\" stroke=\"#d62728\" stroke-width=\"1.2\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace esclab
