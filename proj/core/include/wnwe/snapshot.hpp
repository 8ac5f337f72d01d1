#pragma once

// Column-text snapshot files.
//
//   # wnwe-snapshot v1
//   # equation=<name> n=<N> period=<P> dt=<dt> t=<t> components=<n>
//   x,re_u1,im_u1[,re_u2,im_u2...][,re_u,im_u]
//   <N comma-separated data rows>
//
// Reals use the shortest representation that round-trips, in scientific
// form with a bare exponent (5e0, -1.25e-3). Two-component Sine-Gordon files
// may carry a trailing reconstructed pair re_u,im_u = (u1 + u2) / 2, which
// the reader skips.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wnwe/spectral.hpp"

namespace wnwe {

/// Shortest round-trip scientific representation. Throws on non-finite input.
std::string format_real(double value);
/// Exact inverse of format_real (accepts any from_chars-parsable real).
double parse_real(std::string_view text);

struct SnapshotHeader {
  std::string equation;
  std::size_t n_points = 0;
  double period = 0.0;
  double dt = 0.0;
  double time = 0.0;
  std::size_t components = 0;
};

struct SnapshotOptions {
  std::string equation;
  double dt = 0.0;
  bool reconstructed_column = false;  // append (u1 + u2) / 2, two components only
  bool overwrite = false;
};

std::string render_snapshot(const SpectralGrid& grid, const Field& state, double t,
                            const SnapshotOptions& options);

/// Writes a snapshot. Refuses to replace an existing file unless
/// options.overwrite is set.
void write_snapshot(const std::filesystem::path& path, const SpectralGrid& grid, const Field& state,
                    double t, const SnapshotOptions& options);

struct SnapshotData {
  SnapshotHeader header;
  std::vector<double> x;
  Field state;
};

SnapshotData parse_snapshot(std::string_view text);
SnapshotData read_snapshot(const std::filesystem::path& path);

}  // namespace wnwe
