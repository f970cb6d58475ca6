#ifndef PILLARFLOW_GEOMETRY_HPP
#define PILLARFLOW_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "pillarflow/core.hpp"

namespace pillarflow {

/// Boundary classification. Values match the .edge file format.
enum class BoundaryLabel : int { Inlet = 1, Outlet = 2, Wall = 3 };

enum class BufferKind { None, Patterned, Empty };

/// Optional inlet/outlet extension of the channel by length L_b on each side.
/// Patterned continues the pillar lattice into the extension; Empty leaves it
/// obstacle-free.
struct BufferConfig {
  BufferKind kind = BufferKind::None;
  double L_b = 0.0;
};

/// Channel, lattice, pillar and buffer parameters; the single source of
/// geometric truth for a run.
///
/// The lattice has basis vectors e1 = (1, delta), e2 = (0, 1) scaled by
/// eps = 1/m; pillar centers follow the cell-center convention
/// c_{i,j} = eps*(i + 0.5, i*delta + j + 0.5) with radius rho*eps.
struct DomainSpec {
  double L_x = 1.0;
  double L_y = 1.0;
  int m = 1;          // pillar density per unit length
  double delta = 0.0; // row shift fraction, in [0, 1)
  double rho = 0.25;  // pillar radius as a fraction of eps, in (0, 0.5)
  BufferConfig buffer;

  double eps() const { return 1.0 / m; }
  double radius() const { return rho * eps(); }

  /// Half-open horizontal extent of the meshed rectangle (includes buffers).
  double x_lo() const { return buffer.kind == BufferKind::None ? 0.0 : -buffer.L_b; }
  double x_hi() const { return buffer.kind == BufferKind::None ? L_x : L_x + buffer.L_b; }

  void validate() const {
    PF_REQUIRE(L_x > 0 && L_y > 0, "DomainSpec: channel dimensions must be positive");
    PF_REQUIRE(m >= 1, "DomainSpec: m must be a positive integer, got ", m);
    PF_REQUIRE(delta >= 0.0 && delta < 1.0, "DomainSpec: delta must lie in [0,1), got ", delta);
    PF_REQUIRE(rho > 0.0 && rho < 0.5,
               "DomainSpec: rho must lie in (0, 0.5) so pillars stay inside their cell, got ", rho);
    PF_REQUIRE(buffer.L_b >= 0.0, "DomainSpec: buffer length must be nonnegative");
    PF_REQUIRE(buffer.kind != BufferKind::None || buffer.L_b == 0.0,
               "DomainSpec: kind=None requires L_b = 0");
    PF_REQUIRE(buffer.kind == BufferKind::None || buffer.L_b > 0.0,
               "DomainSpec: buffered channel requires L_b > 0");
  }
};

struct PillarPlacement {
  Vec2 center;
  double radius = 0.0;
};

/// The critical geometric parameter sigma_eps = eps * |log(a_eps/eps)|^(1/2),
/// with a_eps/eps = rho.
inline double asymptotic_parameter(const DomainSpec& spec) {
  PF_REQUIRE(spec.rho > 0.0 && spec.rho < 1.0, "asymptotic_parameter: rho must lie in (0,1)");
  return spec.eps() * std::sqrt(std::abs(std::log(spec.rho)));
}

/// Active-cell enumeration: a pillar is retained exactly when its closed unit
/// cell (the parallelogram spanned by eps*e1, eps*e2 anchored at the lattice
/// node) lies inside the channel rectangle. Patterned buffers extend the
/// admissible rectangle; Empty buffers keep the base channel.
inline std::vector<PillarPlacement> enumerate_pillars(const DomainSpec& spec) {
  spec.validate();
  const double eps = spec.eps();
  const double r = spec.radius();
  const double delta = spec.delta;

  const bool patterned = spec.buffer.kind == BufferKind::Patterned;
  const double cx_lo = patterned ? spec.x_lo() : 0.0;
  const double cx_hi = patterned ? spec.x_hi() : spec.L_x;
  const double tol = 1e-9 * eps;  // admits exactly touching cells

  std::vector<PillarPlacement> out;
  const int i_lo = static_cast<int>(std::floor(cx_lo / eps)) - 2;
  const int i_hi = static_cast<int>(std::ceil(cx_hi / eps)) + 2;
  for (int i = i_lo; i <= i_hi; ++i) {
    const int j_lo = static_cast<int>(std::floor(-i * delta)) - 2;
    const int j_hi = static_cast<int>(std::ceil(spec.L_y / eps - i * delta)) + 2;
    for (int j = j_lo; j <= j_hi; ++j) {
      // cell corners: node, node+eps*e1, node+eps*e2, node+eps*(e1+e2)
      const double nx = eps * i;
      const double ny = eps * (i * delta + j);
      const double min_x = nx;
      const double max_x = nx + eps;
      const double min_y = ny;                        // bottom-left corner (delta >= 0)
      const double max_y = ny + eps * (delta + 1.0);  // top-right corner
      if (min_x < cx_lo - tol || max_x > cx_hi + tol || min_y < -tol ||
          max_y > spec.L_y + tol)
        continue;
      out.push_back({Vec2(eps * (i + 0.5), eps * (i * delta + j + 0.5)), r});
    }
  }
  return out;
}

/// Planar straight-line graph: closed labeled loops plus one interior seed
/// point per pillar hole.
struct Pslg {
  struct Segment {
    int a = 0;
    int b = 0;
    BoundaryLabel label = BoundaryLabel::Wall;
  };
  std::vector<Vec2> points;
  std::vector<Segment> segments;
  std::vector<Vec2> holes;
};

/// Segment-count policy for polygonizing pillar circles. Auto keeps the chord
/// length at or below the target mesh edge length, with a floor of 16.
struct NSegPolicy {
  int fixed = 0;        // > 0: use exactly this count
  double h_target = 0;  // used when fixed == 0

  static NSegPolicy exact(int n) {
    PF_REQUIRE(n >= 3, "NSegPolicy: need at least 3 segments");
    return {n, 0.0};
  }
  static NSegPolicy auto_for(double h_target) {
    PF_REQUIRE(h_target > 0, "NSegPolicy: h_target must be positive");
    return {0, h_target};
  }

  int count(double radius) const {
    if (fixed > 0) return fixed;
    const double two_pi_r = 2.0 * 3.14159265358979323846 * radius;
    return std::max(16, static_cast<int>(std::ceil(two_pi_r / h_target)));
  }
};

/// Exact boundary description of the perforated channel: outer rectangle plus
/// one inscribed regular polygon per pillar, all segments labeled.
inline Pslg build_pslg(const DomainSpec& spec, const NSegPolicy& policy) {
  const auto pillars = enumerate_pillars(spec);

  const double x0 = spec.x_lo();
  const double x1 = spec.x_hi();
  const double y0 = 0.0;
  const double y1 = spec.L_y;

  Pslg g;
  g.points = {Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)};
  g.segments = {{0, 1, BoundaryLabel::Wall},
                {1, 2, BoundaryLabel::Outlet},
                {2, 3, BoundaryLabel::Wall},
                {3, 0, BoundaryLabel::Inlet}};

  for (const PillarPlacement& p : pillars) {
    // defensive: pillars may not reach the outer boundary
    PF_CHECK(p.center.x - p.radius > x0 && p.center.x + p.radius < x1 &&
                 p.center.y - p.radius > y0 && p.center.y + p.radius < y1,
             "build_pslg: pillar at (", p.center.x, ",", p.center.y, ") touches the outer boundary");
    const int n = policy.count(p.radius);
    const int base = static_cast<int>(g.points.size());
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * 3.14159265358979323846 * k / n;
      g.points.push_back(p.center + p.radius * Vec2(std::cos(th), std::sin(th)));
      g.segments.push_back({base + k, base + (k + 1) % n, BoundaryLabel::Wall});
    }
    g.holes.push_back(p.center);
  }

  // defensive pairwise separation check (circumscribed disks)
  for (std::size_t i = 0; i < pillars.size(); ++i)
    for (std::size_t j = i + 1; j < pillars.size(); ++j)
      PF_CHECK(dist(pillars[i].center, pillars[j].center) >
                   pillars[i].radius + pillars[j].radius,
               "build_pslg: pillars ", i, " and ", j, " overlap");
  return g;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_GEOMETRY_HPP
