#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "support/fixtures.hpp"
#include "vfr/bundle_io.hpp"
#include "vfr/csv.hpp"
#include "vfr/errors.hpp"
#include "vfr/synth.hpp"

using namespace vfr;
using vfr::testing::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TimeVaryingField linear_field_on_grid(int n) {
  const std::vector<double> times{0.0};
  return sample_field(grid_mesh(n, n, {{0.0, 0.0}, {1.0, 1.0}}), times,
                      [](double x, double y, double) { return Vec2{x, y}; });
}

}  // namespace

TEST_CASE("unit square bundle: T=1, L=sqrt(2)") {
  const auto field = vfr::testing::unit_square_field({0.0, 0.0});
  TempDir dir("bundle");
  save_bundle(field, dir.path());
  const auto loaded = load_bundle(dir.path());
  CHECK(loaded.frame_count() == 1);
  CHECK(loaded.mesh.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(loaded.mesh.triangle_count() == 2);
}

TEST_CASE("row count mismatch is reported with the offending file") {
  const auto field = vfr::testing::unit_square_field({1.0, 0.0});
  TempDir dir("rows");
  save_bundle(field, dir.path());
  // Truncate the frame to 3 of 4 rows.
  std::ofstream out(dir.path() / "frame_0000.csv", std::ios::binary);
  out << "vx,vy\n1,0\n1,0\n1,0\n";
  out.close();
  CHECK_THROWS_WITH_AS(load_bundle(dir.path()),
                       doctest::Contains("row count mismatch"), DataError);
}

TEST_CASE("36-frame bundle loads ordered with strictly increasing times") {
  const auto elements = std::vector<FlowElement>{
      FlowElement::steady(ElementKind::Center, {0.5, 0.5}, 1.0, 0.1)};
  std::vector<double> times;
  for (int k = 0; k < 36; ++k) times.push_back(0.25 * k);
  const auto field = render(elements, grid_mesh(8, 8, {{0, 0}, {1, 1}}), times);
  TempDir dir("frames36");
  save_bundle(field, dir.path());
  const auto loaded = load_bundle(dir.path());
  REQUIRE(loaded.frame_count() == 36);
  for (int k = 0; k < 36; ++k) {
    CHECK(loaded.frames[k].frame_index == k);
    if (k > 0) CHECK(loaded.frames[k].time > loaded.frames[k - 1].time);
  }
}

TEST_CASE("missing frame file names the file") {
  const auto field = vfr::testing::unit_square_field({1.0, 0.0});
  TempDir dir("missing");
  save_bundle(field, dir.path());
  std::filesystem::remove(dir.path() / "frame_0000.csv");
  CHECK_THROWS_WITH_AS(load_bundle(dir.path()), doctest::Contains("frame_0000.csv"), DataError);
}

TEST_CASE("non-finite values are rejected") {
  const auto field = vfr::testing::unit_square_field({1.0, 0.0});
  TempDir dir("nonfinite");
  save_bundle(field, dir.path());
  std::ofstream out(dir.path() / "frame_0000.csv", std::ios::binary);
  out << "vx,vy\n1,0\nnan,0\n1,0\n1,0\n";
  out.close();
  CHECK_THROWS_AS(load_bundle(dir.path()), DataError);
}

TEST_CASE("interpolate: vertex value, centroid average, outside error") {
  TimeVaryingField field = vfr::testing::unit_square_field({0.0, 0.0});
  field.frames[0].vectors = {{1, 0}, {0, 1}, {0, 0}, {2, 2}};
  const MeshLocator locator(field.mesh);

  const Vec2 at_vertex = interpolate(field.frames[0], field.mesh, locator, {1.0, 0.0});
  CHECK(at_vertex.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(at_vertex.y == doctest::Approx(1.0).epsilon(1e-14));

  // Centroid of triangle (0,1,2) with values (1,0),(0,1),(0,0).
  const Vec2 centroid{(0.0 + 1.0 + 1.0) / 3.0, (0.0 + 0.0 + 1.0) / 3.0};
  const Vec2 at_centroid = interpolate(field.frames[0], field.mesh, locator, centroid);
  CHECK(at_centroid.x == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(at_centroid.y == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  CHECK_THROWS_WITH_AS(interpolate(field.frames[0], field.mesh, locator, {2.0, 2.0}),
                       "point outside mesh", DataError);
}

TEST_CASE("interpolate reproduces a globally linear field at 1000 random points") {
  const auto field = linear_field_on_grid(24);
  const MeshLocator locator(field.mesh);
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> coord(0.001, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{coord(rng), coord(rng)};
    const Vec2 v = interpolate(field.frames[0], field.mesh, locator, p);
    CHECK(std::abs(v.x - p.x) <= 1e-12);
    CHECK(std::abs(v.y - p.y) <= 1e-12);
  }
}

TEST_CASE("magnitude field: 3-4-5, zero, homogeneity, sign") {
  FieldFrame frame;
  frame.vectors = {{3, 4}, {0, 0}, {-1, 1}};
  const auto mags = magnitude_field(frame);
  CHECK(mags[0] == 5.0);
  CHECK(mags[1] == 0.0);

  FieldFrame scaled = frame;
  for (Vec2& v : scaled.vectors) v = v * 2.5;
  const auto scaled_mags = magnitude_field(scaled);
  for (size_t i = 0; i < mags.size(); ++i) {
    CHECK(scaled_mags[i] == doctest::Approx(2.5 * mags[i]).epsilon(1e-15));
    CHECK(scaled_mags[i] >= 0.0);
    const bool zero_vec = frame.vectors[i].x == 0.0 && frame.vectors[i].y == 0.0;
    CHECK((mags[i] == 0.0) == zero_vec);
  }
}

TEST_CASE("bundle round-trips byte-identically") {
  const auto base = vfr::testing::make_random_field(11, 3, 8, 24);
  TimeVaryingField field = base.field;
  // Attach a scalar channel to exercise the full format.
  std::vector<double> channel;
  for (const Vec2& v : field.mesh.vertices) channel.push_back(v.x + 2.0 * v.y);
  field.frames[0].scalars["speed"] = channel;

  TempDir dir("roundtrip");
  const auto d1 = dir.path() / "a";
  const auto d2 = dir.path() / "b";
  save_bundle(field, d1);
  save_bundle(load_bundle(d1), d2);
  for (const char* name : {"mesh.json", "bundle.json", "frame_0000.csv"}) {
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
}

TEST_CASE("mesh validation rejects bad input") {
  CHECK_THROWS_AS(TriangleMesh::create({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}), DataError);
  CHECK_THROWS_AS(TriangleMesh::create({{0, 0}, {1, 0}, {0.5, 0}}, {{0, 1, 2}}), DataError);
  // Two islands sharing no edge path.
  CHECK_THROWS_AS(TriangleMesh::create({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}, {5, 6}},
                                       {{0, 1, 2}, {3, 4, 5}}),
                  DataError);
  // Clockwise input is normalized, not rejected.
  const auto mesh = TriangleMesh::create({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(mesh.signed_area(0) > 0.0);
}

TEST_CASE("format_double round-trips and serializes infinity as inf") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(parse_double("inf", "t") == std::numeric_limits<double>::infinity());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::bit_cast<double>(rng() & 0x7fefffffffffffffULL);
    if (!std::isfinite(v)) continue;
    CHECK(parse_double(format_double(v), "t") == v);
  }
}
