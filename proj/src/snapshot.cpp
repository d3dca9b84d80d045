#include "mcf/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mcf {

void write_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  char head[256];
  std::snprintf(head, sizeof(head),
                "nx=%d\nny=%d\nperiod_x=%.17g\nheight_y=%.17g\n"
                "epsilon=%.17g\ntime=%.17g\n",
                s.field.grid.nx, s.field.grid.ny, s.field.grid.period_x,
                s.field.grid.height_y, s.epsilon, s.time);
  out << head;
  const int nx = s.field.grid.nx, ny = s.field.grid.ny;
  std::vector<double> row(nx);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) row[i] = s.field(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(nx * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  int nx = 0, ny = 0;
  double lx = 0, ly = 0, eps = 0, t = 0;
  for (int k = 0; k < 6; ++k) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated header: " + path);
    auto pos = line.find('=');
    if (pos == std::string::npos) throw std::runtime_error("bad header line: " + line);
    const std::string key = line.substr(0, pos);
    const std::string val = line.substr(pos + 1);
    if (key == "nx") nx = std::stoi(val);
    else if (key == "ny") ny = std::stoi(val);
    else if (key == "period_x") lx = std::stod(val);
    else if (key == "height_y") ly = std::stod(val);
    else if (key == "epsilon") eps = std::stod(val);
    else if (key == "time") t = std::stod(val);
    else throw std::runtime_error("unknown header key: " + key);
  }
  Snapshot s;
  s.field = ScalarField(GridSpec(lx, ly, nx, ny));
  s.epsilon = eps;
  s.time = t;
  std::vector<double> row(nx);
  for (int j = 0; j < ny; ++j) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(nx * sizeof(double)));
    if (!in) throw std::runtime_error("truncated data: " + path);
    for (int i = 0; i < nx; ++i) s.field(i, j) = row[i];
  }
  if (!s.field.all_finite()) throw std::runtime_error("non-finite data: " + path);
  return s;
}

}  // namespace mcf
