#include "wnwe/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wnwe/error.hpp"

namespace wnwe {

namespace {

constexpr std::string_view kMagic = "# wnwe-snapshot v1";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw IoError("snapshot: bad integer '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("format_real: non-finite value");
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  if (ec != std::errc{}) throw InvalidArgument("format_real: conversion failed");
  std::string_view raw(buf, static_cast<std::size_t>(end - buf));
  const std::size_t e = raw.find('e');
  std::string out(raw.substr(0, e + 1));
  std::string_view exponent = raw.substr(e + 1);
  if (exponent.front() == '-') {
    out += '-';
    exponent.remove_prefix(1);
  } else if (exponent.front() == '+') {
    exponent.remove_prefix(1);
  }
  while (exponent.size() > 1 && exponent.front() == '0') exponent.remove_prefix(1);
  out += exponent;
  return out;
}

double parse_real(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw IoError("bad real '" + std::string(text) + "'");
  }
  return v;
}

std::string render_snapshot(const SpectralGrid& grid, const Field& state, double t,
                            const SnapshotOptions& options) {
  const std::size_t n = state.n_components();
  for (const auto& comp : state.components) {
    if (comp.size() != grid.size()) throw ShapeMismatch("write_snapshot: state length != N");
  }
  if (options.reconstructed_column && n != 2) {
    throw InvalidArgument("write_snapshot: reconstructed column needs two components");
  }
  std::string out;
  out.reserve(grid.size() * (n + 1) * 48);
  out += kMagic;
  out += '\n';
  out += "# equation=" + options.equation + " n=" + std::to_string(grid.size()) +
         " period=" + format_real(grid.period()) + " dt=" + format_real(options.dt) +
         " t=" + format_real(t) + " components=" + std::to_string(n) + '\n';
  out += "x";
  for (std::size_t c = 1; c <= n; ++c) {
    out += ",re_u" + std::to_string(c) + ",im_u" + std::to_string(c);
  }
  if (options.reconstructed_column) out += ",re_u,im_u";
  out += '\n';
  const auto& x = grid.sample_points();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += format_real(x[j]);
    for (std::size_t c = 0; c < n; ++c) {
      out += ',';
      out += format_real(state[c][j].real());
      out += ',';
      out += format_real(state[c][j].imag());
    }
    if (options.reconstructed_column) {
      const Complex u = 0.5 * (state[0][j] + state[1][j]);
      out += ',';
      out += format_real(u.real());
      out += ',';
      out += format_real(u.imag());
    }
    out += '\n';
  }
  return out;
}

void write_snapshot(const std::filesystem::path& path, const SpectralGrid& grid, const Field& state,
                    double t, const SnapshotOptions& options) {
  const std::string text = render_snapshot(grid, state, t, options);
  if (!options.overwrite && std::filesystem::exists(path)) {
    throw IoError("refusing to overwrite existing snapshot '" + path.string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

SnapshotData parse_snapshot(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 3 || lines[0] != kMagic) throw IoError("snapshot: missing format line");

  SnapshotData data;
  std::string_view meta = lines[1];
  if (!meta.starts_with("# ")) throw IoError("snapshot: bad metadata line");
  meta.remove_prefix(2);
  bool seen_n = false, seen_components = false;
  for (std::string_view field : split(meta, ' ')) {
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) throw IoError("snapshot: bad metadata entry");
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    if (key == "equation") {
      data.header.equation = std::string(value);
    } else if (key == "n") {
      data.header.n_points = parse_count(value);
      seen_n = true;
    } else if (key == "period") {
      data.header.period = parse_real(value);
    } else if (key == "dt") {
      data.header.dt = parse_real(value);
    } else if (key == "t") {
      data.header.time = parse_real(value);
    } else if (key == "components") {
      data.header.components = parse_count(value);
      seen_components = true;
    } else {
      throw IoError("snapshot: unknown metadata key '" + std::string(key) + "'");
    }
  }
  if (!seen_n || !seen_components) throw IoError("snapshot: metadata lacks n or components");

  const std::size_t n = data.header.components;
  const std::size_t rows = data.header.n_points;
  if (lines.size() != 3 + rows) {
    throw IoError("snapshot: expected " + std::to_string(rows) + " data rows, found " +
                  std::to_string(lines.size() - 3));
  }
  const std::size_t header_cols = split(lines[2], ',').size();
  if (header_cols != 1 + 2 * n && header_cols != 3 + 2 * n) {
    throw IoError("snapshot: column header does not match component count");
  }
  data.x.resize(rows);
  data.state = Field(n, rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const auto cols = split(lines[3 + j], ',');
    if (cols.size() != header_cols) {
      throw IoError("snapshot: row " + std::to_string(j) + " has " + std::to_string(cols.size()) +
                    " columns");
    }
    data.x[j] = parse_real(cols[0]);
    for (std::size_t c = 0; c < n; ++c) {
      data.state[c][j] = Complex(parse_real(cols[1 + 2 * c]), parse_real(cols[2 + 2 * c]));
    }
  }
  return data;
}

SnapshotData read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

}  // namespace wnwe
