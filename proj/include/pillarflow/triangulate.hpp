#ifndef PILLARFLOW_TRIANGULATE_HPP
#define PILLARFLOW_TRIANGULATE_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pillarflow/core.hpp"
#include "pillarflow/geometry.hpp"
#include "pillarflow/mesh.hpp"

namespace pillarflow {

struct TriangulateOptions {
  std::int64_t vertex_budget = 5'000'000;
};

namespace cdt {

// Region tags for the flood-fill classification.
enum : std::uint8_t { kUnknown = 0, kInside = 1, kOutside = 2 };

/// Incremental constrained Delaunay kernel (Bowyer-Watson cavity insertion)
/// with Ruppert-style refinement on top.
///
/// The working triangulation covers a super-rectangle that strictly contains
/// the input; domain triangles are identified by a flood fill that treats
/// recovered input segments as barriers. Input segments are recovered by
/// midpoint splitting: a subsegment missing from the Delaunay graph always
/// has a vertex inside its diametral circle, so the split loop doubles as
/// both recovery and encroachment handling. Every queue is processed in a
/// fixed order and cocircular ties keep the current mesh, so identical
/// inputs produce identical meshes.
class Kernel {
 public:
  Kernel(const Pslg& pslg, double h_target, double min_angle_deg,
         const TriangulateOptions& opt)
      : h_target_(h_target), min_angle_deg_(min_angle_deg), opt_(opt) {
    PF_REQUIRE(h_target > 0, "triangulate: h_target must be positive");
    PF_REQUIRE(min_angle_deg > 0 && min_angle_deg <= 30.0 + 1e-12,
               "triangulate: min_angle must lie in (0, 30] degrees, got ", min_angle_deg);
    PF_REQUIRE(pslg.points.size() >= 3 && !pslg.segments.empty(), "triangulate: degenerate PSLG");
    build_super_rectangle(pslg);
    insert_input_points(pslg);
    register_segments(pslg);
  }

  Mesh run() {
    recover_segments();
    classify_regions();
    refine();
    return extract();
  }

 private:
  struct Tri {
    int v[3];             // CCW vertices; edge i is (v[i+1], v[i+2]) opposite v[i]
    int adj[3];           // neighbor across edge i, -1 on the super-rectangle hull
    std::uint8_t cst;     // bit i set: edge i is a constrained subsegment
    std::uint8_t region;  // kUnknown / kInside / kOutside
    bool alive;
  };

  // --- predicates (tolerance-based; cocircular ties keep the current mesh) ---

  static double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
  }

  double orient_tol() const { return 1e-14 * scale_ * scale_; }

  bool incircle_strict(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) const {
    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    const double det = adx * (bdy * cd - cdy * bd) - ady * (bdx * cd - cdx * bd) +
                       ad * (bdx * cdy - cdx * bdy);
    const double u = std::max({std::abs(adx), std::abs(ady), std::abs(bdx), std::abs(bdy),
                               std::abs(cdx), std::abs(cdy)});
    return det > 1e-11 * u * u * u * u;
  }

  // --- construction ---

  void build_super_rectangle(const Pslg& pslg) {
    double x0 = pslg.points[0].x, x1 = x0, y0 = pslg.points[0].y, y1 = y0;
    for (const Vec2& p : pslg.points) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    const double margin = 0.5 * std::max(x1 - x0, y1 - y0) + 1.0;
    scale_ = std::max(x1 - x0, y1 - y0) + 2 * margin;
    pts_.push_back({x0 - margin, y0 - margin});
    pts_.push_back({x1 + margin, y0 - margin});
    pts_.push_back({x1 + margin, y1 + margin});
    pts_.push_back({x0 - margin, y1 + margin});
    vert2tri_ = {0, 0, 1, 1};
    tris_.push_back({{0, 1, 2}, {-1, 1, -1}, 0, kUnknown, true});
    tris_.push_back({{0, 2, 3}, {-1, -1, 0}, 0, kUnknown, true});
    visit_stamp_ = {0, 0};
  }

  void insert_input_points(const Pslg& pslg) {
    input_offset_ = 4;
    for (const Vec2& p : pslg.points) {
      const int before = static_cast<int>(pts_.size());
      const int vid = insert_point(p, last_tri_, /*two_sided=*/false);
      PF_CHECK(vid == before, "triangulate: duplicate input point at (", p.x, ",", p.y, ")");
    }
  }

  static std::uint64_t edge_key(int a, int b) {
    const std::uint32_t lo = static_cast<std::uint32_t>(std::min(a, b));
    const std::uint32_t hi = static_cast<std::uint32_t>(std::max(a, b));
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  void register_segments(const Pslg& pslg) {
    for (const auto& s : pslg.segments) {
      const int a = s.a + input_offset_, b = s.b + input_offset_;
      PF_REQUIRE(a != b, "triangulate: zero-length PSLG segment");
      segments_[edge_key(a, b)] = s.label;
      seg_queue_.push_back({a, b});
    }
    for (const Vec2& h : pslg.holes) holes_.push_back(h);
  }

  // --- point location ---

  int first_alive() const {
    for (int t = static_cast<int>(tris_.size()) - 1; t >= 0; --t)
      if (tris_[t].alive) return t;
    PF_CHECK(false, "triangulate: no alive triangles");
    return -1;
  }

  int valid_hint(int hint) const {
    return (hint >= 0 && hint < static_cast<int>(tris_.size()) && tris_[hint].alive)
               ? hint
               : first_alive();
  }

  int locate(const Vec2& p, int hint) const {
    int t = valid_hint(hint);
    const double tol = orient_tol();
    int steps = 0;
    const int max_steps = static_cast<int>(tris_.size()) * 4 + 64;
    int prev = -1;
    while (true) {
      PF_CHECK(++steps <= max_steps, "triangulate: point location failed to terminate");
      const Tri& tr = tris_[t];
      int next = -2;
      for (int j = 0; j < 3; ++j) {
        if (tr.adj[j] == prev && prev != -1) continue;
        const Vec2& ea = pts_[tr.v[(j + 1) % 3]];
        const Vec2& eb = pts_[tr.v[(j + 2) % 3]];
        if (orient(ea, eb, p) < -tol) {
          next = tr.adj[j];
          break;
        }
      }
      if (next == -2) return t;
      PF_CHECK(next != -1, "triangulate: point (", p.x, ",", p.y, ") outside super-rectangle");
      prev = t;
      t = next;
    }
  }

  /// Straight-walk from inside triangle t_start toward target. Returns false
  /// and the landing triangle when the walk arrives; returns true and the
  /// first crossed constrained edge otherwise.
  bool walk_blocked(int t_start, const Vec2& target, std::pair<int, int>& blocked,
                    int& landing) const {
    int t = valid_hint(t_start);
    const double tol = orient_tol();
    int steps = 0;
    const int max_steps = static_cast<int>(tris_.size()) * 4 + 64;
    int prev = -1;
    while (true) {
      PF_CHECK(++steps <= max_steps, "triangulate: directed walk failed to terminate");
      const Tri& tr = tris_[t];
      int j_cross = -1;
      for (int j = 0; j < 3; ++j) {
        if (tr.adj[j] == prev && prev != -1) continue;
        const Vec2& ea = pts_[tr.v[(j + 1) % 3]];
        const Vec2& eb = pts_[tr.v[(j + 2) % 3]];
        if (orient(ea, eb, target) < -tol) {
          j_cross = j;
          break;
        }
      }
      if (j_cross < 0) {
        landing = t;
        return false;
      }
      if (tr.cst & (1 << j_cross)) {
        blocked = {tr.v[(j_cross + 1) % 3], tr.v[(j_cross + 2) % 3]};
        return true;
      }
      PF_CHECK(tr.adj[j_cross] != -1,
               "triangulate: walk escaped the super-rectangle without crossing a constraint");
      prev = t;
      t = tr.adj[j_cross];
    }
  }

  // --- Bowyer-Watson insertion ---

  struct CavityEdge {
    int b;                        // directed edge (start -> b), cavity on the left
    int outer;                    // neighbor beyond the edge, -1 on hull
    bool cst;
    std::uint8_t region_for_new;  // region for the new fan triangle
  };

  /// Insert p via cavity retriangulation. For two_sided insertions (point on
  /// a constrained segment being split) the caller primes split_* members;
  /// the cavity then spans both sides and fans are classified per side.
  ///
  /// The cavity holds triangles whose circumcircle strictly contains p,
  /// reached across unconstrained edges that p lies on or left of (the
  /// visibility condition keeps the cavity star-shaped around p).
  int insert_point(const Vec2& p, int hint, bool two_sided) {
    PF_CHECK(static_cast<std::int64_t>(pts_.size()) < opt_.vertex_budget,
             "triangulate: vertex budget ", opt_.vertex_budget,
             " exceeded; the requested angle/size is infeasible for this geometry");

    int t0;
    Vec2 sa{}, sb{};
    if (two_sided) {
      t0 = split_tri_;
      sa = pts_[split_a_];
      sb = pts_[split_b_];
    } else {
      t0 = locate(p, hint);
    }

    // near-duplicate guard: return the existing vertex
    for (int j = 0; j < 3; ++j) {
      const int v = tris_[t0].v[j];
      if (dist2(pts_[v], p) < 1e-28 * scale_ * scale_) return v;
    }

    const double tol = orient_tol();
    ++stamp_;
    std::vector<int> cavity;
    std::deque<int> work{t0};
    visit_stamp_[t0] = stamp_;
    if (two_sided) {
      visit_stamp_[split_tri2_] = stamp_;
      work.push_back(split_tri2_);
    }
    while (!work.empty()) {
      const int t = work.front();
      work.pop_front();
      cavity.push_back(t);
      const Tri tr = tris_[t];
      for (int j = 0; j < 3; ++j) {
        const int nb = tr.adj[j];
        if (nb < 0 || visit_stamp_[nb] == stamp_) continue;
        if (tr.cst & (1 << j)) continue;
        const Vec2& ea = pts_[tr.v[(j + 1) % 3]];
        const Vec2& eb = pts_[tr.v[(j + 2) % 3]];
        if (orient(ea, eb, p) < -tol) continue;  // not visible through this edge
        const Tri& ntr = tris_[nb];
        if (incircle_strict(pts_[ntr.v[0]], pts_[ntr.v[1]], pts_[ntr.v[2]], p)) {
          visit_stamp_[nb] = stamp_;
          work.push_back(nb);
        }
      }
    }

    // collect the directed boundary loop of the cavity
    std::unordered_map<int, CavityEdge> by_start;
    by_start.reserve(cavity.size() * 2);
    int start = -1;
    for (int t : cavity) {
      const Tri& tr = tris_[t];
      for (int j = 0; j < 3; ++j) {
        const int nb = tr.adj[j];
        const bool interior = nb >= 0 && visit_stamp_[nb] == stamp_ && !(tr.cst & (1 << j));
        if (interior) continue;
        CavityEdge e;
        const int a = tr.v[(j + 1) % 3];
        e.b = tr.v[(j + 2) % 3];
        e.outer = nb;
        e.cst = (tr.cst & (1 << j)) != 0;
        e.region_for_new = tr.region;
        if (two_sided) {
          const Vec2 cen = third_point(pts_[a], pts_[e.b], p);
          e.region_for_new = orient(sa, sb, cen) > 0 ? split_regL_ : split_regR_;
        }
        PF_CHECK(by_start.emplace(a, e).second, "triangulate: cavity boundary is not a simple loop");
        start = start < 0 ? a : std::min(start, a);
      }
    }
    PF_CHECK(start >= 0, "triangulate: empty cavity boundary");

    const int vid = static_cast<int>(pts_.size());
    pts_.push_back(p);
    vert2tri_.push_back(-1);

    for (int t : cavity) tris_[t].alive = false;
    std::vector<int> fan;
    fan.reserve(by_start.size());
    int cur = start;
    for (std::size_t i = 0; i < by_start.size(); ++i) {
      auto it = by_start.find(cur);
      PF_CHECK(it != by_start.end(), "triangulate: broken cavity loop");
      const CavityEdge& e = it->second;
      const int nt = new_triangle(vid, cur, e.b, e.region_for_new);
      tris_[nt].adj[0] = e.outer;
      if (e.cst) tris_[nt].cst |= 1;
      if (e.outer >= 0) {
        Tri& o = tris_[e.outer];
        for (int j = 0; j < 3; ++j)
          if (o.v[(j + 1) % 3] == e.b && o.v[(j + 2) % 3] == cur) o.adj[j] = nt;
      }
      fan.push_back(nt);
      cur = e.b;
    }
    PF_CHECK(cur == start, "triangulate: cavity loop did not close");
    const int nf = static_cast<int>(fan.size());
    for (int i = 0; i < nf; ++i) {
      tris_[fan[i]].adj[1] = fan[(i + 1) % nf];       // edge (b, p)
      tris_[fan[i]].adj[2] = fan[(i + nf - 1) % nf];  // edge (p, a)
    }
    last_tri_ = fan.back();
    return vid;
  }

  static Vec2 third_point(const Vec2& a, const Vec2& b, const Vec2& p) {
    return {(a.x + b.x + p.x) / 3.0, (a.y + b.y + p.y) / 3.0};
  }

  int new_triangle(int a, int b, int c, std::uint8_t region) {
    Tri t;
    t.v[0] = a;
    t.v[1] = b;
    t.v[2] = c;
    t.adj[0] = t.adj[1] = t.adj[2] = -1;
    t.cst = 0;
    t.region = region;
    t.alive = true;
    const int id = static_cast<int>(tris_.size());
    tris_.push_back(t);
    visit_stamp_.push_back(0);
    vert2tri_[a] = id;
    vert2tri_[b] = id;
    vert2tri_[c] = id;
    return id;
  }

  // --- edge lookup by circulation around a vertex ---

  bool find_edge(int a, int b, int& tri_out, int& edge_out) const {
    const int t0 = vert2tri_[a];
    if (t0 < 0 || !tris_[t0].alive) return false;
    for (int dir = 0; dir < 2; ++dir) {
      int t = t0;
      int guard = 0;
      while (t >= 0) {
        PF_CHECK(++guard < 1'000'000, "triangulate: circulation failed around vertex ", a);
        const Tri& tr = tris_[t];
        int k = -1;
        for (int j = 0; j < 3; ++j)
          if (tr.v[j] == a) k = j;
        PF_CHECK(k >= 0, "triangulate: stale vertex-to-triangle link at ", a);
        if (tr.v[(k + 1) % 3] == b) {
          tri_out = t;
          edge_out = (k + 2) % 3;
          return true;
        }
        if (tr.v[(k + 2) % 3] == b) {
          tri_out = t;
          edge_out = (k + 1) % 3;
          return true;
        }
        t = tr.adj[dir == 0 ? (k + 1) % 3 : (k + 2) % 3];
        if (t == t0) return false;
      }
    }
    return false;
  }

  // --- segment recovery and encroachment ---

  bool encroached(int a, int b) const {
    int t, j;
    if (!find_edge(a, b, t, j)) return true;  // missing segments count as encroached
    const Vec2 mid = 0.5 * (pts_[a] + pts_[b]);
    const double lim = 0.25 * dist2(pts_[a], pts_[b]) * (1.0 - 1e-9);
    if (dist2(pts_[tris_[t].v[j]], mid) < lim) return true;
    const int nb = tris_[t].adj[j];
    if (nb >= 0) {
      const Tri& o = tris_[nb];
      for (int k = 0; k < 3; ++k)
        if (o.v[k] != a && o.v[k] != b && dist2(pts_[o.v[k]], mid) < lim) return true;
    }
    return false;
  }

  bool encroached_point(int a, int b, const Vec2& p) const {
    const Vec2 mid = 0.5 * (pts_[a] + pts_[b]);
    return dist2(p, mid) < 0.25 * dist2(pts_[a], pts_[b]) * (1.0 - 1e-9);
  }

  /// Split subsegment (a,b) at its midpoint and requeue the halves.
  void split_segment(int a, int b) {
    auto it = segments_.find(edge_key(a, b));
    PF_CHECK(it != segments_.end(), "triangulate: splitting a non-registered segment");
    const BoundaryLabel label = it->second;

    int t, j;
    const bool present = find_edge(a, b, t, j);
    const Vec2 mid = 0.5 * (pts_[a] + pts_[b]);
    int vid;
    if (present) {
      split_tri_ = t;
      split_tri2_ = tris_[t].adj[j];
      PF_CHECK(split_tri2_ >= 0, "triangulate: constrained edge with a single side");
      split_a_ = tris_[t].v[(j + 1) % 3];
      split_b_ = tris_[t].v[(j + 2) % 3];
      split_regL_ = tris_[t].region;
      split_regR_ = tris_[split_tri2_].region;
      // clear the flag so the cavity may span both sides of the split edge
      tris_[t].cst &= ~(1 << j);
      Tri& o = tris_[split_tri2_];
      for (int k = 0; k < 3; ++k)
        if (o.v[(k + 1) % 3] == split_b_ && o.v[(k + 2) % 3] == split_a_) o.cst &= ~(1 << k);
      vid = insert_point(mid, t, /*two_sided=*/true);
    } else {
      vid = insert_point(mid, last_tri_, false);
    }

    segments_.erase(edge_key(a, b));
    segments_[edge_key(a, vid)] = label;
    segments_[edge_key(vid, b)] = label;
    mark_constrained(a, vid);
    mark_constrained(vid, b);
    seg_queue_.push_back({a, vid});
    seg_queue_.push_back({vid, b});
  }

  void mark_constrained(int a, int b) {
    int t, j;
    if (!find_edge(a, b, t, j)) return;  // still missing: the queue will split it further
    tris_[t].cst |= (1 << j);
    const int nb = tris_[t].adj[j];
    if (nb >= 0) {
      Tri& o = tris_[nb];
      for (int k = 0; k < 3; ++k) {
        const int oa = o.v[(k + 1) % 3], ob = o.v[(k + 2) % 3];
        if ((oa == a && ob == b) || (oa == b && ob == a)) o.cst |= (1 << k);
      }
    }
  }

  void recover_segments() {
    while (!seg_queue_.empty()) {
      auto [a, b] = seg_queue_.front();
      seg_queue_.pop_front();
      if (!segments_.count(edge_key(a, b))) continue;  // superseded by a split
      mark_constrained(a, b);
      if (encroached(a, b)) split_segment(a, b);
    }
  }

  // --- region classification ---

  void classify_regions() {
    auto flood = [&](int seed, std::uint8_t region) {
      if (seed < 0 || !tris_[seed].alive || tris_[seed].region != kUnknown) return;
      std::deque<int> work{seed};
      tris_[seed].region = region;
      while (!work.empty()) {
        const int t = work.front();
        work.pop_front();
        const Tri& tr = tris_[t];
        for (int j = 0; j < 3; ++j) {
          const int nb = tr.adj[j];
          if (nb < 0 || (tr.cst & (1 << j))) continue;
          if (tris_[nb].region == kUnknown) {
            tris_[nb].region = region;
            work.push_back(nb);
          }
        }
      }
    };
    flood(vert2tri_[0], kOutside);
    for (const Vec2& h : holes_) flood(locate(h, last_tri_), kOutside);
    for (auto& t : tris_)
      if (t.alive && t.region == kUnknown) t.region = kInside;
  }

  // --- Ruppert refinement ---

  double min_angle_of(int t) const {
    const Vec2& a = pts_[tris_[t].v[0]];
    const Vec2& b = pts_[tris_[t].v[1]];
    const Vec2& c = pts_[tris_[t].v[2]];
    const double la = dist(b, c), lb = dist(c, a), lc = dist(a, b);
    const double ca =
        std::acos(std::clamp((lb * lb + lc * lc - la * la) / (2 * lb * lc), -1.0, 1.0));
    const double cb =
        std::acos(std::clamp((la * la + lc * lc - lb * lb) / (2 * la * lc), -1.0, 1.0));
    const double cc = 3.14159265358979323846 - ca - cb;
    return std::min({ca, cb, cc}) * (180.0 / 3.14159265358979323846);
  }

  double longest_edge_of(int t) const {
    const Vec2& a = pts_[tris_[t].v[0]];
    const Vec2& b = pts_[tris_[t].v[1]];
    const Vec2& c = pts_[tris_[t].v[2]];
    return std::max({dist(b, c), dist(c, a), dist(a, b)});
  }

  bool is_bad(int t) const {
    if (!tris_[t].alive || tris_[t].region != kInside) return false;
    return longest_edge_of(t) > h_target_ * (1 + 1e-12) ||
           min_angle_of(t) < min_angle_deg_ - 1e-9;
  }

  Vec2 circumcenter(int t) const {
    const Vec2& a = pts_[tris_[t].v[0]];
    const Vec2& b = pts_[tris_[t].v[1]];
    const Vec2& c = pts_[tris_[t].v[2]];
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    PF_CHECK(std::abs(d) > 0, "triangulate: degenerate triangle in refinement");
    const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
    return {a.x + (ac.y * ab2 - ab.y * ac2) / d, a.y + (ab.x * ac2 - ac.x * ab2) / d};
  }

  Vec2 centroid(int t) const {
    return third_point(pts_[tris_[t].v[0]], pts_[tris_[t].v[1]], pts_[tris_[t].v[2]]);
  }

  void refine() {
    // worst angle first; ties broken by push order
    using Entry = std::tuple<double, std::uint64_t, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> bad;
    std::uint64_t push_id = 0;
    auto push_if_bad = [&](int t) {
      if (is_bad(t)) bad.push({min_angle_of(t), push_id++, t});
    };

    auto drain_segments = [&]() {
      while (!seg_queue_.empty()) {
        auto [a, b] = seg_queue_.front();
        seg_queue_.pop_front();
        if (!segments_.count(edge_key(a, b))) continue;
        if (encroached(a, b)) {
          const std::size_t first_new = tris_.size();
          split_segment(a, b);
          for (std::size_t t = first_new; t < tris_.size(); ++t)
            push_if_bad(static_cast<int>(t));
        }
      }
    };

    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) push_if_bad(t);
    drain_segments();
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) push_if_bad(t);

    while (!bad.empty()) {
      const int t = std::get<2>(bad.top());
      bad.pop();
      if (!is_bad(t)) continue;  // stale entry

      const Vec2 c = circumcenter(t);
      std::pair<int, int> blk;
      int landing = -1;
      const std::size_t first_new = tris_.size();
      if (walk_blocked(t, c, blk, landing)) {
        // circumcenter hidden behind a boundary segment: split the occluder
        split_segment(blk.first, blk.second);
      } else {
        const auto hit = diametral_hits(c, landing);
        if (!hit.empty()) {
          for (auto [a, b] : hit)
            if (segments_.count(edge_key(a, b))) split_segment(a, b);
        } else {
          const int before = static_cast<int>(pts_.size());
          const int vid = insert_point(c, landing, false);
          if (vid < before) {
            // circumcenter coincides with an existing vertex (symmetric,
            // exactly cocircular configuration): split the longest edge
            split_longest_edge(t);
          }
        }
      }
      drain_segments();
      for (std::size_t tt = first_new; tt < tris_.size(); ++tt) push_if_bad(static_cast<int>(tt));
      push_if_bad(t);
    }
  }

  void split_longest_edge(int t) {
    const Tri& tr = tris_[t];
    int jbest = 0;
    double lbest = -1.0;
    for (int j = 0; j < 3; ++j) {
      const double l = dist2(pts_[tr.v[(j + 1) % 3]], pts_[tr.v[(j + 2) % 3]]);
      if (l > lbest) {
        lbest = l;
        jbest = j;
      }
    }
    const int a = tr.v[(jbest + 1) % 3], b = tr.v[(jbest + 2) % 3];
    if (tr.cst & (1 << jbest)) {
      split_segment(a, b);
      return;
    }
    const Vec2 mid = 0.5 * (pts_[a] + pts_[b]);
    const int before = static_cast<int>(pts_.size());
    const int vid = insert_point(mid, t, false);
    PF_CHECK(vid >= before, "triangulate: stalled refinement at a duplicate midpoint");
  }

  /// Constrained subsegments whose diametral circle contains p, collected on
  /// the boundary of p's would-be insertion cavity.
  std::vector<std::pair<int, int>> diametral_hits(const Vec2& p, int t0) {
    std::vector<std::pair<int, int>> out;
    const double tol = orient_tol();
    ++stamp_;
    std::deque<int> work{t0};
    visit_stamp_[t0] = stamp_;
    while (!work.empty()) {
      const int t = work.front();
      work.pop_front();
      const Tri& tr = tris_[t];
      for (int j = 0; j < 3; ++j) {
        const int nb = tr.adj[j];
        if (tr.cst & (1 << j)) {
          const int a = tr.v[(j + 1) % 3], b = tr.v[(j + 2) % 3];
          if (encroached_point(a, b, p)) out.push_back({std::min(a, b), std::max(a, b)});
          continue;
        }
        if (nb < 0 || visit_stamp_[nb] == stamp_) continue;
        const Vec2& ea = pts_[tr.v[(j + 1) % 3]];
        const Vec2& eb = pts_[tr.v[(j + 2) % 3]];
        if (orient(ea, eb, p) < -tol) continue;
        const Tri& ntr = tris_[nb];
        if (incircle_strict(pts_[ntr.v[0]], pts_[ntr.v[1]], pts_[ntr.v[2]], p)) {
          visit_stamp_[nb] = stamp_;
          work.push_back(nb);
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // --- output ---

  Mesh extract() {
    Mesh mesh;
    std::vector<int> new_id(pts_.size(), -1);
    for (const Tri& t : tris_) {
      if (!t.alive || t.region != kInside) continue;
      for (int j = 0; j < 3; ++j) new_id[t.v[j]] = 0;
    }
    int n = 0;
    for (std::size_t v = 0; v < pts_.size(); ++v)
      if (new_id[v] == 0) {
        new_id[v] = n++;
        mesh.vertices.push_back(pts_[v]);
      }
    for (const Tri& t : tris_) {
      if (!t.alive || t.region != kInside) continue;
      mesh.triangles.push_back({new_id[t.v[0]], new_id[t.v[1]], new_id[t.v[2]]});
      for (int j = 0; j < 3; ++j) {
        if (!(t.cst & (1 << j))) continue;
        const int nb = t.adj[j];
        if (nb >= 0 && tris_[nb].alive && tris_[nb].region == kInside) continue;
        const int a = t.v[(j + 1) % 3], b = t.v[(j + 2) % 3];
        auto it = segments_.find(edge_key(a, b));
        PF_CHECK(it != segments_.end(), "triangulate: unlabeled boundary edge");
        mesh.boundary_edges.push_back(
            {std::min(new_id[a], new_id[b]), std::max(new_id[a], new_id[b]), it->second});
      }
    }
    std::sort(mesh.boundary_edges.begin(), mesh.boundary_edges.end(),
              [](const Mesh::BoundaryEdge& x, const Mesh::BoundaryEdge& y) {
                return x.a != y.a ? x.a < y.a : x.b < y.b;
              });
    double h = 0.0;
    for (const auto& tv : mesh.triangles)
      h = std::max({h, dist(mesh.vertices[tv[0]], mesh.vertices[tv[1]]),
                    dist(mesh.vertices[tv[1]], mesh.vertices[tv[2]]),
                    dist(mesh.vertices[tv[2]], mesh.vertices[tv[0]])});
    mesh.h_max = h;
    PF_CHECK(!mesh.triangles.empty(), "triangulate: empty interior (bad hole seeds?)");
    return mesh;
  }

  double h_target_;
  double min_angle_deg_;
  TriangulateOptions opt_;
  double scale_ = 1.0;
  int input_offset_ = 4;
  int last_tri_ = 0;

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> vert2tri_;
  std::vector<std::uint32_t> visit_stamp_;
  std::uint32_t stamp_ = 0;

  std::unordered_map<std::uint64_t, BoundaryLabel> segments_;
  std::deque<std::pair<int, int>> seg_queue_;
  std::vector<Vec2> holes_;

  // scratch for two-sided (segment split) insertions
  int split_tri_ = -1, split_tri2_ = -1, split_a_ = -1, split_b_ = -1;
  std::uint8_t split_regL_ = kUnknown, split_regR_ = kUnknown;
};

}  // namespace cdt

/// Constrained Delaunay triangulation of the PSLG with Ruppert refinement:
/// every output triangle has minimum angle >= min_angle (degrees) and longest
/// edge <= h_target. Deterministic: identical inputs give identical meshes.
inline Mesh triangulate(const Pslg& pslg, double h_target, double min_angle_deg = 25.0,
                        const TriangulateOptions& opt = {}) {
  cdt::Kernel kernel(pslg, h_target, min_angle_deg, opt);
  return kernel.run();
}

}  // namespace pillarflow

#endif  // PILLARFLOW_TRIANGULATE_HPP
