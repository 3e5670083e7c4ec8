#pragma once

#include <string>

#include "esclab/dither.hpp"
#include "esclab/integrate.hpp"
#include "esclab/stability.hpp"

namespace esclab {

/// Trajectory CSV: header "t,x1,...,xm", 17-significant-digit decimals.
std::string trajectory_csv(const Trajectory& traj);

/// Serializes a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

std::string to_json(const ValidationReport& report, int indent = 2);
std::string to_json(const StabilityReport& report, int indent = 2);
std::string to_json(const ClosenessResult& result, int indent = 2);

/// Writes via a temp file in the same directory followed by a rename, so an
/// interrupted run never leaves a truncated file.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace esclab
