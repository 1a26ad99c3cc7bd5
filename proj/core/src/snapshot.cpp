#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hypflow/error.hpp"
#include "hypflow/rsurface.hpp"

namespace hypflow {

void write_snapshot(std::ostream& out, const RadialSurface& surface) {
  const SphereGrid& grid = *surface.grid;
  const bool full = grid.mode() == GridMode::full2d;
  out << "# mode=" << to_string(grid.mode()) << " n=" << grid.dim()
      << " ntheta=" << grid.ntheta() << " nphi=" << grid.nphi()
      << " columns=" << (full ? "theta,phi,r" : "theta,r") << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < grid.ntheta(); ++i) {
    for (int j = 0; j < grid.nphi(); ++j) {
      out << grid.theta(i) << ',';
      if (full) out << grid.phi(j) << ',';
      out << surface.r[grid.index(i, j)] << '\n';
    }
  }
}

RadialSurface read_snapshot(std::istream& in, int fd_order) {
  std::string header;
  if (!std::getline(in, header) || header.rfind('#', 0) != 0) {
    throw ConfigError("snapshot: missing '#' header line");
  }
  std::map<std::string, std::string> keys;
  std::istringstream hs(header.substr(1));
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) keys[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* k : {"mode", "n", "ntheta", "nphi"}) {
    if (!keys.count(k)) throw ConfigError(std::string("snapshot: header lacks '") + k + "'");
  }
  const GridMode mode = grid_mode_from_string(keys["mode"]);
  int n = 0, ntheta = 0, nphi = 0;
  try {
    n = std::stoi(keys["n"]);
    ntheta = std::stoi(keys["ntheta"]);
    nphi = std::stoi(keys["nphi"]);
  } catch (const std::exception&) {
    throw ConfigError("snapshot: malformed header values");
  }
  auto grid = std::make_shared<const SphereGrid>(
      SphereGrid::build(mode, n, ntheta, mode == GridMode::full2d ? nphi : 1, fd_order));

  RadialSurface s;
  s.grid = grid;
  s.id = "snapshot";
  s.r.resize(grid->size());
  const std::size_t ncols = mode == GridMode::full2d ? 3 : 2;
  std::string line;
  std::size_t node = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (node >= grid->size()) throw ConfigError("snapshot: more rows than grid nodes");
    std::vector<double> cols;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("snapshot: bad number on row " + std::to_string(node + 2));
      }
    }
    if (cols.size() != ncols) {
      throw ConfigError("snapshot: expected " + std::to_string(ncols) + " columns on row " +
                        std::to_string(node + 2));
    }
    if (std::abs(cols[0] - grid->theta_of(node)) > 1e-9) {
      throw ConfigError("snapshot: theta does not match the grid on row " +
                        std::to_string(node + 2));
    }
    s.r[node++] = cols.back();
  }
  if (node != grid->size()) throw ConfigError("snapshot: fewer rows than grid nodes");
  return s;
}

}  // namespace hypflow
