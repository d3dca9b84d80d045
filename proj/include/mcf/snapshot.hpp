#pragma once

// Snapshot file: six text header lines (key=value: nx, ny, period_x,
// height_y, epsilon, time) followed by nx*ny row-major little-endian
// doubles, y-major (j outer, i inner).

#include <string>

#include "mcf/field.hpp"

namespace mcf {

struct Snapshot {
  ScalarField field;
  double epsilon = 0.0;
  double time = 0.0;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

}  // namespace mcf
