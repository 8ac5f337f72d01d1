#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wnwe/error.hpp"
#include "wnwe/snapshot.hpp"

using namespace wnwe;

namespace {

constexpr double kPi = std::numbers::pi;

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("wnwe_snap_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double random_finite(std::mt19937_64& rng) {
  while (true) {
    const double v = std::bit_cast<double>(rng());
    if (std::isfinite(v)) return v;
  }
}

}  // namespace

TEST_CASE("format_real examples") {
  CHECK(format_real(5.0) == "5e0");
  CHECK(format_real(500 * 0.01) == "5e0");
  CHECK(format_real(-1.25e-3) == "-1.25e-3");
  CHECK(format_real(0.0) == "0e0");
  CHECK(format_real(-0.0) == "-0e0");
  CHECK(format_real(0.1) == "1e-1");
  CHECK(format_real(1e300) == "1e300");
  CHECK(format_real(kPi) == "3.141592653589793e0");
  CHECK(format_real(std::numeric_limits<double>::denorm_min()) == "5e-324");
  CHECK_THROWS_AS(format_real(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(format_real(std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK_THROWS_AS(parse_real("1.0x"), IoError);
  CHECK_THROWS_AS(parse_real(""), IoError);
}

TEST_CASE("format_real round-trips every finite double (property)") {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 200; ++i) {
    const double v = random_finite(rng);
    const std::string s = format_real(v);
    CHECK_MESSAGE(std::bit_cast<std::uint64_t>(parse_real(s)) == std::bit_cast<std::uint64_t>(v), s);
  }
  // Bulk pass without per-assertion overhead.
  std::size_t mismatches = 0;
  for (int i = 0; i < 200000; ++i) {
    const double v = random_finite(rng);
    if (std::bit_cast<std::uint64_t>(parse_real(format_real(v))) != std::bit_cast<std::uint64_t>(v)) {
      ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("zero field on N = 4 renders seven exact lines") {
  const SpectralGrid g = make_grid(4, 2 * kPi);
  const std::string text = render_snapshot(g, Field(1, 4), 500 * 0.01, {"kdv", 0.01, false, false});
  const std::string expected =
      "# wnwe-snapshot v1\n"
      "# equation=kdv n=4 period=6.283185307179586e0 dt=1e-2 t=5e0 components=1\n"
      "x,re_u1,im_u1\n"
      "-3.141592653589793e0,0e0,0e0\n"
      "-1.5707963267948966e0,0e0,0e0\n"
      "0e0,0e0,0e0\n"
      "1.5707963267948966e0,0e0,0e0\n";
  CHECK(text == expected);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("sine-Gordon snapshots carry the reconstructed pair") {
  const SpectralGrid g = make_grid(4, 1.0);
  const Field f({ComplexVector{1.0, 2.0, 3.0, 4.0}, ComplexVector{3.0, 0.0, 1.0, Complex(0, 2)}});
  const std::string text = render_snapshot(g, f, 0.0, {"sge", 0.01, true, false});
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.find("components=2") != std::string::npos);
  std::getline(in, line);
  CHECK(line == "x,re_u1,im_u1,re_u2,im_u2,re_u,im_u");
  std::getline(in, line);
  CHECK(line == "-5e-1,1e0,0e0,3e0,0e0,2e0,0e0");
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "2.5e-1,4e0,0e0,0e0,2e0,2e0,1e0");

  const SnapshotData back = parse_snapshot(text);
  CHECK(back.state == f);
  CHECK_THROWS_AS(render_snapshot(g, Field(1, 4), 0.0, {"kdv", 0.01, true, false}), InvalidArgument);
}

TEST_CASE("write then read is bit-exact (property)") {
  TempDir dir;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = std::size_t{4} << (rng() % 6);
    const std::size_t comps = 1 + rng() % 2;
    const double period = std::exp(normal(rng));
    const SpectralGrid g = make_grid(n, period);
    Field f(comps, n);
    for (auto& comp : f.components) {
      for (auto& v : comp) {
        v = trial % 2 ? Complex(random_finite(rng), random_finite(rng))
                      : Complex(normal(rng), normal(rng) * 1e-9);
      }
    }
    const double t = std::abs(normal(rng)) * 10;
    const double dt = std::exp(normal(rng)) * 1e-3;
    const auto path = dir.path / ("s" + std::to_string(trial) + ".csv");
    write_snapshot(path, g, f, t, {"test", dt, false, false});
    const SnapshotData back = read_snapshot(path);
    CHECK(back.state == f);
    CHECK(back.header.time == t);
    CHECK(back.header.dt == dt);
    CHECK(back.header.period == period);
    CHECK(back.header.n_points == n);
    CHECK(back.header.components == comps);
    CHECK(back.header.equation == "test");
    CHECK(back.x == g.sample_points());
  }
}

TEST_CASE("write_snapshot protects existing files") {
  TempDir dir;
  const SpectralGrid g = make_grid(4, 1.0);
  const auto path = dir.path / "a.csv";
  write_snapshot(path, g, Field(1, 4), 0.0, {"kdv", 0.1, false, false});
  const std::string before = slurp(path);
  Field other(1, 4);
  other[0][0] = 1.0;
  CHECK_THROWS_AS(write_snapshot(path, g, other, 1.0, {"kdv", 0.1, false, false}), IoError);
  CHECK(slurp(path) == before);
  write_snapshot(path, g, other, 1.0, {"kdv", 0.1, false, true});
  CHECK(read_snapshot(path).state == other);
  CHECK_THROWS_AS(write_snapshot(dir.path / "no" / "such" / "dir.csv", g, other, 0.0, {"kdv", 0.1, false, false}),
                  IoError);
}

TEST_CASE("malformed snapshots are rejected") {
  const SpectralGrid g = make_grid(4, 1.0);
  const std::string good = render_snapshot(g, Field(1, 4), 0.0, {"kdv", 0.1, false, false});
  CHECK_NOTHROW(parse_snapshot(good));
  CHECK_THROWS_AS(parse_snapshot(""), IoError);
  CHECK_THROWS_AS(parse_snapshot("# other v1\n" + good.substr(good.find('\n') + 1)), IoError);
  CHECK_THROWS_AS(parse_snapshot(good.substr(0, good.rfind('\n', good.size() - 2) + 1)), IoError);
  std::string bad_num = good;
  bad_num.replace(bad_num.rfind("0e0"), 3, "zero");
  CHECK_THROWS_AS(parse_snapshot(bad_num), IoError);
  CHECK_THROWS_AS(read_snapshot("/nonexistent/snap.csv"), IoError);
}
