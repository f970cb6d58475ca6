#include "pillarflow/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace pillarflow {
namespace {

DomainSpec unit_square(int m, double delta = 0.0, double rho = 0.25) {
  DomainSpec s;
  s.L_x = 1.0;
  s.L_y = 1.0;
  s.m = m;
  s.delta = delta;
  s.rho = rho;
  return s;
}

// Independent brute-force oracle: exhaustive scan over i,j in [-2m, 2m]
// testing the four cell corners against the channel rectangle.
std::set<std::pair<long long, long long>> brute_force_centers(const DomainSpec& s) {
  const double eps = 1.0 / s.m;
  const bool patterned = s.buffer.kind == BufferKind::Patterned;
  const double lo = patterned ? -s.buffer.L_b : 0.0;
  const double hi = patterned ? s.L_x + s.buffer.L_b : s.L_x;
  const double tol = 1e-9 * eps;
  std::set<std::pair<long long, long long>> centers;
  const int r = 2 * s.m + 4;
  for (int i = -r; i <= r; ++i) {
    for (int j = -r; j <= r; ++j) {
      const double cx[4] = {eps * i, eps * (i + 1), eps * i, eps * (i + 1)};
      const double cy[4] = {eps * (i * s.delta + j), eps * ((i + 1) * s.delta + j),
                            eps * (i * s.delta + j + 1), eps * ((i + 1) * s.delta + j + 1)};
      bool ok = true;
      for (int k = 0; k < 4; ++k)
        ok = ok && cx[k] >= lo - tol && cx[k] <= hi + tol && cy[k] >= -tol && cy[k] <= s.L_y + tol;
      if (ok) {
        const double px = eps * (i + 0.5);
        const double py = eps * (i * s.delta + j + 0.5);
        centers.insert({std::llround(px * 1e12), std::llround(py * 1e12)});
      }
    }
  }
  return centers;
}

std::set<std::pair<long long, long long>> quantize(const std::vector<PillarPlacement>& ps) {
  std::set<std::pair<long long, long long>> out;
  for (const auto& p : ps) out.insert({std::llround(p.center.x * 1e12), std::llround(p.center.y * 1e12)});
  return out;
}

TEST(Geometry, FourPillarsAtDensityTwo) {
  const auto ps = enumerate_pillars(unit_square(2));
  ASSERT_EQ(ps.size(), 4u);
  const auto got = quantize(ps);
  std::set<std::pair<long long, long long>> want;
  for (double x : {0.25, 0.75})
    for (double y : {0.25, 0.75}) want.insert({std::llround(x * 1e12), std::llround(y * 1e12)});
  EXPECT_EQ(got, want);
  for (const auto& p : ps) EXPECT_DOUBLE_EQ(p.radius, 0.125);
}

TEST(Geometry, SingleCell) {
  const auto ps = enumerate_pillars(unit_square(1));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_DOUBLE_EQ(ps[0].center.x, 0.5);
  EXPECT_DOUBLE_EQ(ps[0].center.y, 0.5);
  EXPECT_DOUBLE_EQ(ps[0].radius, 0.25);
}

TEST(Geometry, ShiftedLatticeMatchesBruteForce) {
  const auto spec = unit_square(3, 1.0 / 3.0);
  EXPECT_EQ(quantize(enumerate_pillars(spec)), brute_force_centers(spec));
}

TEST(Geometry, BruteForceAgreementAcrossParameters) {
  for (int m : {1, 2, 3, 5, 8}) {
    for (double delta : {0.0, 0.25, 1.0 / 3.0, 0.6}) {
      DomainSpec s = unit_square(m, delta);
      s.L_x = 2.0;
      EXPECT_EQ(quantize(enumerate_pillars(s)), brute_force_centers(s))
          << "m=" << m << " delta=" << delta;
    }
  }
}

TEST(Geometry, SquareArrayCountIsMSquared) {
  for (int m = 1; m <= 6; ++m) EXPECT_EQ(enumerate_pillars(unit_square(m)).size(), std::size_t(m) * m);
}

TEST(Geometry, RejectsFatPillars) {
  DomainSpec s = unit_square(2);
  s.rho = 0.5;
  EXPECT_THROW(enumerate_pillars(s), InvalidArgument);
}

TEST(Geometry, AsymptoticParameter) {
  DomainSpec s = unit_square(1);
  s.rho = std::exp(-1.0);
  EXPECT_NEAR(asymptotic_parameter(s), 1.0, 1e-15);
  s = unit_square(2);
  s.rho = std::exp(-4.0);
  EXPECT_NEAR(asymptotic_parameter(s), 1.0, 1e-15);
  s = unit_square(10);
  EXPECT_NEAR(asymptotic_parameter(s), 0.1 * std::sqrt(std::log(4.0)), 1e-15);
}

TEST(Geometry, PatternedBufferCellCount) {
  DomainSpec s = unit_square(2);
  s.L_x = 2.0;
  s.buffer = {BufferKind::Patterned, 0.5};
  const auto ps = enumerate_pillars(s);
  EXPECT_EQ(ps.size(), std::size_t(3 * s.m * s.m));  // 3m x m cells in total
  const auto pslg = build_pslg(s, NSegPolicy::exact(16));
  EXPECT_EQ(pslg.holes.size(), ps.size());
}

TEST(Geometry, EmptyBufferKeepsCentralArray) {
  DomainSpec s = unit_square(2);
  s.L_x = 2.0;
  s.buffer = {BufferKind::Empty, 0.5};
  EXPECT_EQ(enumerate_pillars(s).size(), std::size_t(2 * s.m * s.m));
  const auto pslg = build_pslg(s, NSegPolicy::exact(16));
  // rectangle extends into the buffers even though no pillars live there
  double x_min = 1e9, x_max = -1e9;
  for (const auto& p : pslg.points) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
  }
  EXPECT_DOUBLE_EQ(x_min, -0.5);
  EXPECT_DOUBLE_EQ(x_max, 2.5);
}

TEST(Geometry, PslgRectangleOnly) {
  DomainSpec s = unit_square(1);
  s.L_y = 0.9;  // unit cell no longer fits: no pillars
  ASSERT_TRUE(enumerate_pillars(s).empty());
  const auto g = build_pslg(s, NSegPolicy::exact(16));
  EXPECT_EQ(g.points.size(), 4u);
  EXPECT_EQ(g.segments.size(), 4u);
  EXPECT_TRUE(g.holes.empty());
}

TEST(Geometry, PslgSinglePillarCounts) {
  DomainSpec s = unit_square(1, 0.0, 0.125);
  const auto g = build_pslg(s, NSegPolicy::exact(16));
  EXPECT_EQ(g.points.size(), 20u);
  EXPECT_EQ(g.segments.size(), 20u);
  ASSERT_EQ(g.holes.size(), 1u);
  EXPECT_DOUBLE_EQ(g.holes[0].x, 0.5);
  EXPECT_DOUBLE_EQ(g.holes[0].y, 0.5);
}

TEST(Geometry, AutoSegmentPolicy) {
  EXPECT_EQ(NSegPolicy::auto_for(1.0).count(0.125), 16);  // floor of 16
  const double r = 0.1, h = 0.01;
  EXPECT_EQ(NSegPolicy::auto_for(h).count(r),
            static_cast<int>(std::ceil(2 * 3.14159265358979323846 * r / h)));
}

// Loop closure and hole-seed containment (point-in-polygon by ray crossing).
TEST(Geometry, LoopsClosedAndSeedsInside) {
  DomainSpec s = unit_square(3, 1.0 / 3.0);
  const auto g = build_pslg(s, NSegPolicy::exact(16));

  std::map<int, int> out_degree, in_degree;
  for (const auto& seg : g.segments) {
    out_degree[seg.a]++;
    in_degree[seg.b]++;
  }
  for (const auto& [v, d] : out_degree) EXPECT_EQ(d, 1) << "vertex " << v;
  for (const auto& [v, d] : in_degree) EXPECT_EQ(d, 1) << "vertex " << v;

  const auto pillars = enumerate_pillars(s);
  for (std::size_t p = 0; p < pillars.size(); ++p) {
    const Vec2 seed = g.holes[p];
    const int base = 4 + static_cast<int>(p) * 16;
    int crossings = 0;  // horizontal ray to +x against this pillar's polygon
    for (int k = 0; k < 16; ++k) {
      const Vec2 a = g.points[base + k];
      const Vec2 b = g.points[base + (k + 1) % 16];
      if ((a.y > seed.y) != (b.y > seed.y)) {
        const double x_at = a.x + (seed.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (x_at > seed.x) ++crossings;
      }
    }
    EXPECT_EQ(crossings % 2, 1) << "hole seed " << p << " not inside its loop";
  }
}

TEST(Geometry, MinimumGapBetweenPolygons) {
  DomainSpec s = unit_square(4);
  const auto pillars = enumerate_pillars(s);
  const double eps = s.eps();
  // polygonized pillars live inside the circles, so center distances bound gaps
  for (std::size_t i = 0; i < pillars.size(); ++i)
    for (std::size_t j = i + 1; j < pillars.size(); ++j) {
      const double gap = dist(pillars[i].center, pillars[j].center) - 2 * s.radius();
      EXPECT_GE(gap, eps * (1 - 2 * s.rho) - 1e-12);
    }
}

}  // namespace
}  // namespace pillarflow
