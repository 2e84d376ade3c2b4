#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hillfila/geometry.hpp"
#include "oracles.hpp"

using namespace hillfila;

namespace {

Contour circle_contour(double radius, double center_r, double center_z, int n) {
  std::vector<HalfPlanePoint> nodes;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * pi * k / n;
    nodes.push_back({center_r + radius * std::cos(a), center_z + radius * std::sin(a)});
  }
  return make_closed_contour(std::move(nodes));
}

Contour translated(Contour c, double dz) {
  for (auto& p : c.nodes) p.z += dz;
  return c;
}

}  // namespace

TEST_CASE("revolved_diameter on the unit half-disk") {
  const Contour c = polygonize_half_disk(1.0, 0.0, 0.01);
  CHECK(revolved_diameter(c) == Catch::Approx(2.0).margin(1e-4));

  // degenerate two-node contour along the axis
  Contour seg{{{0.0, -1.0}, {0.0, 1.0}}, true};
  CHECK(revolved_diameter(seg) == Catch::Approx(2.0));

  // translation invariance at machine precision
  const Contour ct = translated(c, 3.7);
  CHECK(revolved_diameter(ct) == Catch::Approx(revolved_diameter(c)).epsilon(1e-14));

  CHECK_THROWS(revolved_diameter(Contour{}));
}

TEST_CASE("arc_length: half-disk boundary, square, resampling invariance") {
  const Contour c = polygonize_half_disk(1.0, 0.0, 0.002);
  CHECK(arc_length(c) == Catch::Approx(pi + 2.0).margin(1e-4));

  Contour square{{{1.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}}, true};
  CHECK(arc_length(square) == Catch::Approx(4.0));

  // node doubling on the same polyline leaves the length unchanged
  Contour doubled;
  doubled.closed = true;
  const std::size_t n = square.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = square.nodes[i];
    const auto& b = square.nodes[(i + 1) % n];
    doubled.nodes.push_back(a);
    doubled.nodes.push_back({0.5 * (a.r + b.r), 0.5 * (a.z + b.z)});
  }
  CHECK(arc_length(doubled) == Catch::Approx(4.0).epsilon(1e-13));

  CHECK_THROWS(arc_length(Contour{{{0.0, 0.0}}, false}));
}

TEST_CASE("revolved_volume: unit ball, scaling, translation") {
  const Contour c = polygonize_half_disk(1.0, 0.0, 0.002);
  const double v = revolved_volume(c);
  CHECK(v == Catch::Approx(4.0 * pi / 3.0).epsilon(2e-5));

  Contour scaled = c;
  for (auto& p : scaled.nodes) {
    p.r *= 2.0;
    p.z *= 2.0;
  }
  CHECK(revolved_volume(scaled) == Catch::Approx(8.0 * v).epsilon(1e-13));

  CHECK(revolved_volume(translated(c, -2.3)) == Catch::Approx(v).epsilon(1e-12));

  CHECK_THROWS(revolved_volume(Contour{{{1.0, 0.0}, {2.0, 0.0}}, false}));
}

TEST_CASE("polygon moment r^3 matches the closed form for the half-disk") {
  // integral of r^3 over the unit half-disk cross-section = 4/15
  const Contour c = polygonize_half_disk(1.0, 0.0, 0.002);
  CHECK(polygon_moment_rk(c, 3) == Catch::Approx(4.0 / 15.0).epsilon(5e-5));
}

TEST_CASE("remesh refines a coarse circle back to its arc") {
  const Contour c = circle_contour(1.0, 3.0, 0.0, 16);
  const double spacing = dist(c.nodes[0], c.nodes[1]);
  const Contour fine = remesh(c, spacing / 64.0, spacing / 4.0, 10.0);
  CHECK(fine.nodes.size() >= 64);
  CHECK(arc_length(fine) == Catch::Approx(2.0 * pi).epsilon(5e-3));
  // circular-arc insertion keeps nodes on the circle
  CHECK(oracles::hausdorff_to_circle(fine.nodes, 3.0, 0.0, 1.0) < 1e-9);
}

TEST_CASE("remesh is idempotent on conforming contours") {
  const Contour c = circle_contour(1.0, 3.0, 0.0, 128);
  const Contour r = remesh(c, 0.01, 0.2, 0.5);
  CHECK(r.nodes.size() == c.nodes.size());
}

TEST_CASE("remesh coarsens dense straight segments, preserving endpoints") {
  std::vector<HalfPlanePoint> nodes;
  for (int i = 0; i <= 100; ++i) nodes.push_back({1.0 + 0.01 * i, 2.0});
  Contour c{nodes, false};
  const Contour r = remesh(c, 0.1, 0.3, 0.5);
  CHECK(r.nodes.size() < c.nodes.size());
  CHECK(r.nodes.front().r == 1.0);
  CHECK(r.nodes.back().r == 2.0);
  CHECK(r.nodes.front().z == 2.0);
  CHECK(r.nodes.back().z == 2.0);
}

TEST_CASE("remesh rejects bad parameters") {
  const Contour c = circle_contour(1.0, 3.0, 0.0, 16);
  CHECK_THROWS(remesh(c, 0.0, 0.1, 0.5));
  CHECK_THROWS(remesh(c, 0.2, 0.1, 0.5));
  CHECK_THROWS(remesh(c, 0.01, 0.1, -1.0));
}

TEST_CASE("contains on the half-disk") {
  const Contour c = polygonize_half_disk(1.0, 0.0, 0.01);
  CHECK(contains(c, {0.5, 0.0}));
  CHECK_FALSE(contains(c, {0.5, 2.0}));
  CHECK_FALSE(contains(c, {50.0, 0.0}));
}

TEST_CASE("contains agrees with the analytic ball predicate away from the boundary") {
  const double h_min = 0.01;
  const Contour c = polygonize_half_disk(1.0, 0.5, h_min);
  const AxiBall ball{0.5, 1.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.0, 1.5), uz(-1.2, 2.2);
  int checked = 0;
  for (int i = 0; i < 40000 && checked < 10000; ++i) {
    const HalfPlanePoint p{ur(rng), uz(rng)};
    if (std::abs(ball.signed_distance(p)) < h_min) continue;  // boundary band excluded
    ++checked;
    CHECK(contains(c, p) == ball.contains(p));
  }
  CHECK(checked == 10000);
}

TEST_CASE("diameter and arc length are z-translation invariant; volume survives remesh") {
  const Contour c = polygonize_half_disk(1.0, 0.0, 0.05);
  const Contour ct = translated(c, 11.25);
  CHECK(arc_length(ct) == Catch::Approx(arc_length(c)).epsilon(1e-14));
  CHECK(revolved_diameter(ct) == Catch::Approx(revolved_diameter(c)).epsilon(1e-14));

  const double h_max = 0.1;
  const Contour r = remesh(c, 0.02, h_max, 0.4);
  CHECK(revolved_volume(r) ==
        Catch::Approx(revolved_volume(c)).epsilon(4.0 * h_max * h_max));
}

TEST_CASE("self-intersection detection") {
  Contour simple{{{1.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}}, true};
  CHECK_FALSE(self_intersects(simple));
  Contour bow{{{1.0, 0.0}, {2.0, 1.0}, {2.0, 0.0}, {1.0, 1.0}}, true};
  CHECK(self_intersects(bow));
}

TEST_CASE("axis snapping reflects and clamps") {
  Contour c{{{-1e-14, 0.0}, {0.5, 0.5}, {-0.2, 1.0}}, true};
  snap_axis(c, 1e-12);
  CHECK(c.nodes[0].r == 0.0);
  CHECK(c.nodes[1].r == 0.5);
  CHECK(c.nodes[2].r == 0.2);
}

TEST_CASE("shell and front-cap predicates") {
  CHECK(in_shell(0.0, 0.1, {1.0, 0.05}));
  CHECK_FALSE(in_shell(0.0, 0.1, {0.5, 0.0}));
  CHECK(in_front_cap(0.0, 0.1, {0.05, 1.0}));
  CHECK_FALSE(in_front_cap(0.0, 0.1, {0.5, 0.9}));   // r too large
  CHECK_FALSE(in_front_cap(0.0, 0.1, {0.05, -1.0})); // behind the center
  CHECK(in_front_cylinder(0.0, 0.1, {0.05, 1.05}));
}
