#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "roadside/coverage.hpp"
#include "roadside/geometry.hpp"

namespace {

using namespace roadside::geometry;

constexpr double kDeg = kPi / 180.0;

SensorFieldConfig field(double r, double omega, double alpha, double dpyl = 50.0,
                        double dsr = 0.5, double droad = 14.0) {
  return {r, omega, alpha, dsr, dpyl, droad};
}

// Alpha at its maximum for the given opening.
SensorFieldConfig max_rotated(double r, double omega) {
  return field(r, omega, max_rotation(omega));
}

TEST(EdgeAngles, SymmetricSector) {
  const auto e = edge_angles(field(10, kPi / 2, 0));
  EXPECT_DOUBLE_EQ(e.beta, kPi / 4);
  EXPECT_DOUBLE_EQ(e.gamma, kPi / 4);
}

TEST(EdgeAngles, MaximumRotation) {
  const auto e = edge_angles(field(10, kPi / 3, kPi / 3));
  EXPECT_NEAR(e.beta, kPi / 2, 1e-15);
  EXPECT_NEAR(e.gamma, -kPi / 6, 1e-15);
}

TEST(EdgeAngles, PartialRotation) {
  const auto e = edge_angles(field(10, kPi / 3, kPi / 6));
  EXPECT_NEAR(e.beta, kPi / 3, 1e-15);
  EXPECT_NEAR(e.gamma, 0.0, 1e-15);
  EXPECT_NEAR(e.beta + e.gamma, kPi / 3, 1e-15);
}

TEST(EdgeAngles, RejectsInvalidConfigsNamingTheField) {
  try {
    edge_angles(field(10, kPi / 3, kPi / 3 + 0.01));
    FAIL() << "expected InvalidConfig";
  } catch (const InvalidConfig& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].field, "rotation_alpha");
  }
  EXPECT_THROW(edge_angles(field(10, kPi + 0.1, 0)), InvalidConfig);
  EXPECT_THROW(edge_angles(field(10, kPi / 2, 0, 0.0)), InvalidConfig);
  EXPECT_THROW(edge_angles(field(10, kPi / 2, 0, 50, -1.0)), InvalidConfig);
  EXPECT_THROW(edge_angles(field(10, kPi / 2, 0, 50, 0.5, 0.0)), InvalidConfig);
  EXPECT_THROW(edge_angles(field(-1, kPi / 2, 0)), InvalidConfig);
}

TEST(Check, ListsEveryViolation) {
  const auto v = check({-1.0, 4.0, 0.0, -1.0, 0.0, 0.0});
  EXPECT_EQ(v.size(), 5u);
}

TEST(LowerLineLine, SymmetricCase) { EXPECT_NEAR(lower_line_line(field(10, kPi / 2, 0), 50), 25.0, 1e-12); }

TEST(LowerLineLine, EdgeParallelToSensorLineGivesZero) {
  EXPECT_EQ(lower_line_line(field(10, kPi / 3, kPi / 3), 50), 0.0);
}

TEST(LowerLineLine, MatchesCramerIntersection) {
  const auto cfg = field(10, kPi / 3, kPi / 6);
  EXPECT_NEAR(lower_line_line(cfg, 50), 50.0 / std::tan(kPi / 3), 1e-12);
  const auto p = oracle::line_line({0, 0}, {std::sin(kPi / 3), std::cos(kPi / 3)}, {50, 0},
                                   {0.0, 1.0});
  ASSERT_TRUE(p);
  EXPECT_NEAR(lower_line_line(cfg, 50), p->y, 1e-9);
  EXPECT_NEAR(lower_line_line(cfg, 50), 28.8675, 1e-4);
}

TEST(LowerLineLine, VanishesAtTheRotationBound) {
  for (double w = 5 * kDeg; w < kPi; w += 5 * kDeg) {
    EXPECT_LT(lower_line_line(max_rotated(50, w), 50), 1e-6) << "omega " << w;
  }
}

TEST(LowerUpperLineArc, CollapsedAngle) {
  // theta = omega/2 - |alpha| = 0
  const auto roots = lower_upper_line_arc(field(60, kPi / 2, kPi / 4), 50);
  ASSERT_TRUE(roots);
  EXPECT_NEAR(roots->y_minus, -std::sqrt(60.0 * 60 - 50 * 50), 1e-12);
  EXPECT_NEAR(roots->y_plus, 33.1662, 1e-4);
}

TEST(LowerUpperLineArc, MatchesNumericLineCircle) {
  const auto cfg = field(45, kPi / 3, 0.0);  // theta = pi/6
  const auto roots = lower_upper_line_arc(cfg, 50);
  ASSERT_TRUE(roots);
  EXPECT_NEAR(roots->y_minus, 11.044, 1e-3);
  EXPECT_NEAR(roots->y_plus, 32.2572, 1e-4);
  const auto pts = oracle::line_circle({50, 0}, {-std::sin(kPi / 6), std::cos(kPi / 6)}, {0, 0}, 45);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(std::min(pts[0].y, pts[1].y), roots->y_minus, 1e-9);
  EXPECT_NEAR(std::max(pts[0].y, pts[1].y), roots->y_plus, 1e-9);
}

TEST(LowerUpperLineArc, NoneWhenDiscriminantNegative) {
  EXPECT_FALSE(lower_upper_line_arc(field(40, kPi / 3, 0.0), 50));
}

TEST(UpperArcArc, WideOpening) {
  const auto y = upper_arc_arc(field(30, kPi, 0), 50);
  ASSERT_TRUE(y);
  EXPECT_NEAR(*y, 16.5831, 1e-4);
  const auto pts = oracle::circle_circle({0, 0}, 30, {50, 0}, 30);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(*y, std::max(pts[0].y, pts[1].y), 1e-9);
}

TEST(UpperArcArc, TangentCircles) {
  const auto y = upper_arc_arc(field(25, kPi, 0), 50);
  ASSERT_TRUE(y);
  EXPECT_NEAR(*y, 0.0, 1e-12);
}

TEST(UpperArcArc, DisjointCircles) { EXPECT_FALSE(upper_arc_arc(field(20, kPi, 0), 50)); }

TEST(UpperArcArc, NarrowSectorsMissTheApex) {
  // The apex sits at bearing asin(25/30) ~ 56 deg from boresight; a 60 deg
  // symmetric opening does not contain it.
  EXPECT_FALSE(upper_arc_arc(field(30, kPi / 3, 0), 50));
  EXPECT_TRUE(upper_arc_arc(field(30, 2 * 57 * kDeg, 0), 50));
}

TEST(Requirements, MaxRotationSixtyDegrees) {
  const auto cfg = max_rotated(100, 60 * kDeg);
  EXPECT_TRUE(lower_requirement(cfg, 50));
}

TEST(Requirements, SymmetricRightAngleLeavesStripNearSensors) {
  const auto cfg = field(100, kPi / 2, 0.0);
  EXPECT_FALSE(lower_requirement(cfg, 50));
  EXPECT_GT(lower_line_line(cfg, 50), cfg.sensor_to_road_dsr);
  // The oracle agrees: the point midway between two sensors at the road edge is uncovered.
  EXPECT_EQ(roadside::coverage::point_coverage_degree({25.0, 0.5}, cfg), 0);
}

TEST(Requirements, LowerBoundaryIsInclusive) {
  auto cfg = field(100, kPi / 2, 0.0);
  cfg.sensor_to_road_dsr = lower_line_line(cfg, 50);
  EXPECT_TRUE(lower_requirement(cfg, 50));
}

TEST(Requirements, UpperArcArcCase) {
  EXPECT_TRUE(upper_requirement(field(30, kPi, 0), 50));  // 16.58 >= 14.5
  EXPECT_FALSE(upper_requirement(field(25, kPi, 0), 50));
  EXPECT_FALSE(upper_requirement(field(20, kPi, 0), 50));
}

TEST(CoveredWithDegree, InsideRegionOne) {
  EXPECT_TRUE(covered_with_degree(max_rotated(100, 120 * kDeg), 1));
}

TEST(CoveredWithDegree, FalseBelowMinimumRange) {
  for (double w = 10 * kDeg; w <= kPi + 1e-9; w += 10 * kDeg) {
    auto cfg = max_rotated(0, std::min(w, kPi));
    cfg.range_r = min_range(cfg) - 1e-6;
    EXPECT_FALSE(covered_with_degree(cfg, 1)) << "omega " << w;
  }
}

TEST(CoveredWithDegree, RejectsDegreeZero) {
  EXPECT_THROW(covered_with_degree(max_rotated(100, kPi / 2), 0), std::invalid_argument);
}

TEST(MinRange, ReferenceHighway) {
  EXPECT_NEAR(min_range(field(0, kPi, 0)), 28.9006, 1e-4);
  EXPECT_NEAR(min_range(field(0, kPi, 0)), std::sqrt(625.0 + 14.5 * 14.5), 1e-12);
}

TEST(MinRange, DegenerateLimits) {
  EXPECT_NEAR(min_range(field(0, kPi, 0, 1e-9)), 14.5, 1e-9);
  EXPECT_DOUBLE_EQ(min_range(field(0, kPi, 0, 50, 0.0, 0.0)), 25.0);
}

TEST(GeometryProperties, TangentSumPositiveAndLineLineFinite) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto cfg = oracle::random_config(rng);
    const double y = lower_line_line(cfg, cfg.sensor_spacing_dpyl);
    EXPECT_TRUE(std::isfinite(y));
    EXPECT_GE(y, 0.0);
  }
}

TEST(GeometryProperties, DegreeMonotoneNonIncreasing) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 3000; ++i) {
    const auto cfg = oracle::random_config(rng);
    for (int n = 1; n < 4; ++n) {
      if (!covered_with_degree(cfg, n)) {
        EXPECT_FALSE(covered_with_degree(cfg, n + 1));
      }
    }
  }
}

TEST(GeometryProperties, RequirementsMonotoneInRange) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3000; ++i) {
    auto cfg = oracle::random_config(rng);
    const double d = cfg.sensor_spacing_dpyl;
    const bool lower = lower_requirement(cfg, d);
    const bool upper = upper_requirement(cfg, d);
    cfg.range_r *= 1.5;
    if (lower) EXPECT_TRUE(lower_requirement(cfg, d)) << i;
    if (upper) EXPECT_TRUE(upper_requirement(cfg, d)) << i;
  }
}

TEST(GeometryProperties, IntersectionsReproducedByNumericRoutines) {
  std::mt19937_64 rng(14);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto cfg = oracle::random_config(rng);
    worst = std::max(worst, oracle::max_intersection_error(cfg, cfg.sensor_spacing_dpyl));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(GeometryProperties, IntersectionOrderWhenBothPresent) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 3000; ++i) {
    const auto cfg = oracle::random_config(rng);
    const auto lo = lower_crossing(cfg, cfg.sensor_spacing_dpyl);
    const auto hi = upper_crossing(cfg, cfg.sensor_spacing_dpyl);
    if (lo.y_lower && hi.y_upper) EXPECT_LE(*lo.y_lower, *hi.y_upper + 1e-9);
  }
}

// Analytic verdicts agree with the point oracle away from the boundary.
TEST(GeometryProperties, AnalyticVerdictMatchesOracleAwayFromBoundary) {
  std::mt19937_64 rng(16);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto cfg = oracle::random_config(rng, 10 * kDeg);
    if (roadside::coverage::analytic_boundary_distance(cfg, 1) < 1.0) continue;
    const auto grid = roadside::coverage::build_grid(cfg, 0.5);
    EXPECT_EQ(covered_with_degree(cfg, 1), grid.min_degree() >= 1) << "config " << i;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
