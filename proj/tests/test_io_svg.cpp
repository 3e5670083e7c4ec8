#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "esclab/report_io.hpp"
#include "esclab/svg.hpp"

using namespace esclab;

namespace {

Trajectory tiny_trajectory() {
  OdeSystem sys;
  sys.dim = 2;
  sys.description = "spiral";
  sys.rhs = [](double, const Vec& x, Vec& dx) {
    dx[0] = -0.2 * x[0] - x[1];
    dx[1] = x[0] - 0.2 * x[1];
  };
  IntegratorConfig cfg;
  cfg.step = 1e-2;
  cfg.t1 = 5.0;
  cfg.record_stride = 5;
  Vec x0(2);
  x0 << 1.0, 0.0;
  return integrate(sys, x0, cfg);
}

}  // namespace

TEST_SUITE("report_io") {

TEST_CASE("format_double round-trips doubles exactly") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  for (int i = 0; i < 100; ++i) {
    const double v = uni(rng) * std::pow(10.0, int(i % 13) - 6);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(std::strtod(format_double(0.1).c_str(), nullptr) == 0.1);
}

TEST_CASE("trajectory CSV layout") {
  const auto traj = tiny_trajectory();
  const std::string csv = trajectory_csv(traj);
  CHECK(csv.rfind("t,x1,x2\n", 0) == 0);
  // one line per sample plus the header
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(static_cast<std::size_t>(lines) == traj.size() + 1);
  // byte-identical on regeneration
  CHECK(trajectory_csv(traj) == csv);
}

TEST_CASE("validation report serializes to parseable JSON") {
  const auto report = validate_rates({1, 2}, RateOrder::First);
  const auto j = nlohmann::json::parse(to_json(report));
  CHECK(j["valid"] == false);
  CHECK(j["violations"][0]["rule"] == "double-rate");
  CHECK(j["violations"][0]["rates"][0] == 2);
}

TEST_CASE("atomic writes leave no temporaries behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "esclab_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string path = (dir / "report.json").string();
  atomic_write_file(path, "{\"ok\":true}");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "{\"ok\":true}");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  fs::remove_all(dir);
}

}  // TEST_SUITE

TEST_SUITE("svg") {

TEST_CASE("trajectory plots are valid, deterministic SVG") {
  const auto traj = tiny_trajectory();
  PlotStyle style;
  style.x_min = -1.5;
  style.x_max = 1.5;
  style.y_min = -1.5;
  style.y_max = 1.5;
  const std::string svg = trajectory_svg(traj, style);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(trajectory_svg(traj, style) == svg);
}

TEST_CASE("constant fields give parallel streamlines") {
  PlotStyle style;
  style.stream_grid = 4;
  style.stream_steps = 50;
  const std::string svg = stream_plot_svg(
      [](const Vec&) {
        Vec f(2);
        f << 1.0, 0.0;
        return f;
      },
      style);
  // every streamline of a constant horizontal field keeps its y coordinate
  std::size_t pos = 0;
  int polylines = 0;
  while ((pos = svg.find("points=\"", pos)) != std::string::npos) {
    pos += 8;
    const std::size_t end = svg.find('"', pos);
    std::stringstream pts(svg.substr(pos, end - pos));
    std::string pair;
    double y0 = std::numeric_limits<double>::quiet_NaN();
    while (pts >> pair) {
      const auto comma = pair.find(',');
      const double y = std::stod(pair.substr(comma + 1));
      if (std::isnan(y0)) y0 = y;
      CHECK(y == doctest::Approx(y0).epsilon(1e-9));
    }
    ++polylines;
  }
  CHECK(polylines == 16);
  CHECK(stream_plot_svg(
            [](const Vec&) {
              Vec f(2);
              f << 1.0, 0.0;
              return f;
            },
            style) == svg);
}

}  // TEST_SUITE
