#include "esclab/report_io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace esclab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (int i = 1; i <= traj.dim(); ++i) {
    out += ",x" + std::to_string(i);
  }
  out += "\n";
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out += format_double(traj.times[r]);
    for (Eigen::Index c = 0; c < traj.states[r].size(); ++c) {
      out += ",";
      out += format_double(traj.states[r][c]);
    }
    out += "\n";
  }
  return out;
}

namespace {

json violations_json(const std::vector<RateViolation>& vs) {
  json arr = json::array();
  for (const auto& v : vs) {
    arr.push_back({{"rule", v.rule}, {"indices", v.indices}, {"rates", v.rates}});
  }
  return arr;
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string to_json(const ValidationReport& report, int indent) {
  json j{{"valid", report.valid},
         {"violations", violations_json(report.violations)},
         {"nondistinct_warnings", violations_json(report.nondistinct_warnings)}};
  return j.dump(indent);
}

std::string to_json(const StabilityReport& report, int indent) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    json x0 = json::array();
    for (Eigen::Index i = 0; i < c.x0.size(); ++i) x0.push_back(c.x0[i]);
    cells.push_back({{"a", c.a},
                     {"omega", c.omega},
                     {"x0", x0},
                     {"max_norm", finite_or_string(c.max_norm)},
                     {"bound", finite_or_string(c.bound)},
                     {"entered_at", finite_or_string(c.entered_at)},
                     {"last_exit", c.last_exit},
                     {"diverged", c.diverged},
                     {"satisfied", c.satisfied}});
  }
  json thresholds;
  if (report.thresholds.a_star) thresholds["a_star"] = *report.thresholds.a_star;
  if (report.thresholds.omega_star) {
    thresholds["omega_star"] = *report.thresholds.omega_star;
  }
  if (report.thresholds.T) thresholds["T"] = *report.thresholds.T;
  json j{{"query",
          {{"c1", report.c1}, {"c2", report.c2}, {"mode", report.mode}}},
         {"grid", {{"a", report.a_grid}, {"omega", report.omega_grid}}},
         {"cells", cells},
         {"thresholds", thresholds},
         {"verdict", report.verdict},
         {"note", report.note}};
  if (!report.max_bounds.empty()) {
    json mb = json::array(), gc = json::array();
    for (double v : report.max_bounds) mb.push_back(finite_or_string(v));
    for (double v : report.gamma_caps) gc.push_back(finite_or_string(v));
    j["max_bounds"] = mb;
    j["gamma_caps"] = gc;
  }
  return j.dump(indent);
}

std::string to_json(const ClosenessResult& result, int indent) {
  json gaps = json::array();
  for (const auto& g : result.gaps) {
    gaps.push_back({{"omega", g.omega},
                    {"gap", finite_or_string(g.gap)},
                    {"diverged", g.diverged}});
  }
  json j{{"gaps", gaps}};
  if (result.omega_star) j["omega_star"] = *result.omega_star;
  return j.dump(indent);
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace esclab
