#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "flatcount/siegel_veech.hpp"

namespace flatcount {

// Search exceeded its partner-search bound while completing a band.
struct IncompleteBandError : std::runtime_error {
  explicit IncompleteBandError(const std::string& msg)
      : std::runtime_error(msg) {}
};

namespace geo {

// Integer point/vector in the scaled plane.
struct Vec {
  BigInt x, y;
  friend Vec operator+(const Vec& a, const Vec& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec operator-(const Vec& a, const Vec& b) { return {a.x - b.x, a.y - b.y}; }
  Vec operator-() const { return {-x, -y}; }
  friend bool operator==(const Vec& a, const Vec& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }
};

inline BigInt cross(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }
inline BigInt dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y; }
inline BigInt norm_sq(const Vec& a) { return a.x * a.x + a.y * a.y; }
inline Vec rot_ccw(const Vec& v) { return {-v.y, v.x}; }
inline Vec rot_cw(const Vec& v) { return {v.y, -v.x}; }

// Orientation-preserving-or-reversing isometry (x,y) -> (ex*x+tx, ey*y+ty)
// with ex, ey in {+1,-1}: exactly the compositions of axis reflections and
// translations that arise from billiard unfolding of a rectilinear table.
struct Iso {
  int ex = 1, ey = 1;
  BigInt tx = 0, ty = 0;
  Vec apply(const Vec& p) const { return {ex * p.x + tx, ey * p.y + ty}; }
  Vec linear(const Vec& v) const { return {ex * v.x, ey * v.y}; }
  int orient() const { return ex * ey; }
};

// Compose a reflection across the axis-parallel line through the (already
// transformed) edge image [a, b] on the left of the current isometry.
inline Iso reflect_across(const Iso& iso, const Vec& a, const Vec& b) {
  Iso r = iso;
  if (a.x == b.x) {  // vertical image line x = a.x
    r.ex = -iso.ex;
    r.tx = 2 * a.x - iso.tx;
  } else {  // horizontal image line y = a.y
    r.ey = -iso.ey;
    r.ty = 2 * a.y - iso.ty;
  }
  return r;
}

}  // namespace geo

// Exact rational point in the input plane.
struct PointQ {
  Rational x, y;
};

// Raw input: a rectilinear simple polygon (either orientation), plus optional
// axis-parallel slit walls. Each slit has one endpoint ("base") in the
// relative interior of a boundary edge, perpendicular to it, and one interior
// endpoint ("tip", a 2*pi corner).
struct RectilinearPolygon {
  std::vector<PointQ> vertices;
  std::vector<std::pair<PointQ, PointQ>> slits;
};

// A validated table. Coordinates are scaled to integers by `scale`; the
// boundary is a single counter-clockwise cycle of corners in which a slit
// contributes two k=1 base corners (one per side of the wall) and one k=4
// tip corner, and its wall appears as two coincident, oppositely oriented
// edges.
class Table {
 public:
  struct Corner {
    geo::Vec pos;
    int k = 0;  // interior angle k * pi/2
  };
  struct Edge {
    int a = 0, b = 0;  // cycle: corners_[i] -> corners_[i+1]
    bool wall = false;
  };

  const BigInt& scale() const { return scale_; }
  const std::vector<Corner>& corners() const { return corners_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int size() const { return static_cast<int>(corners_.size()); }
  const Rational& area() const { return area_; }

  std::vector<int> family() const {
    std::vector<int> f;
    for (const Corner& c : corners_) f.push_back(c.k);
    return f;
  }

  geo::Vec edge_a(int e) const { return corners_[edges_[e].a].pos; }
  geo::Vec edge_b(int e) const { return corners_[edges_[e].b].pos; }
  // Unit axis direction of the boundary edge leaving corner i.
  geo::Vec out_dir(int i) const {
    geo::Vec d = edge_b(i) - edge_a(i);
    return {(d.x > 0) - (d.x < 0), (d.y > 0) - (d.y < 0)};
  }

  friend Table validate(const RectilinearPolygon& poly);

 private:
  BigInt scale_ = 1;
  std::vector<Corner> corners_;
  std::vector<Edge> edges_;
  Rational area_ = 0;
};

namespace detail {

inline geo::Vec unit_dir(const geo::Vec& d) {
  if ((d.x != 0) == (d.y != 0))
    throw InputError("edge is not axis-parallel or has zero length");
  return {(d.x > 0) - (d.x < 0), (d.y > 0) - (d.y < 0)};
}

// Smallest j in 1..4 with rot_ccw^j(out) == -in; the corner angle is j*pi/2.
inline int turn_k(const geo::Vec& in_dir, const geo::Vec& out_dir) {
  geo::Vec v = out_dir;
  for (int j = 1; j <= 4; ++j) {
    v = geo::rot_ccw(v);
    if (v == -in_dir) return j;
  }
  throw InputError("degenerate turn");  // unreachable for unit axis dirs
}

// Closed point-on-segment test for axis-parallel segments.
inline bool on_segment(const geo::Vec& p, const geo::Vec& a, const geo::Vec& b) {
  if (geo::cross(b - a, p - a) != 0) return false;
  return geo::dot(p - a, b - a) >= 0 && geo::dot(p - b, a - b) >= 0;
}

// Do two axis-parallel closed segments intersect?
inline bool segments_touch(const geo::Vec& a, const geo::Vec& b,
                           const geo::Vec& c, const geo::Vec& d) {
  auto rng = [](const BigInt& u, const BigInt& v) {
    return u <= v ? std::make_pair(u, v) : std::make_pair(v, u);
  };
  auto [ax1, ax2] = rng(a.x, b.x);
  auto [ay1, ay2] = rng(a.y, b.y);
  auto [cx1, cx2] = rng(c.x, d.x);
  auto [cy1, cy2] = rng(c.y, d.y);
  return ax1 <= cx2 && cx1 <= ax2 && ay1 <= cy2 && cy1 <= ay2 &&
         // bounding boxes meet; for axis-parallel segments this is exact
         // unless both are degenerate in the same line, which boxes handle too
         true;
}

}  // namespace detail

inline Table validate(const RectilinearPolygon& poly) {
  const int n = static_cast<int>(poly.vertices.size());
  if (n < 4) throw InputError("polygon needs at least 4 vertices");

  // scale all coordinates to integers
  BigInt s = 1;
  auto fold = [&s](const Rational& r) { s = lcm(s, den(r)); };
  for (const PointQ& p : poly.vertices) {
    fold(p.x);
    fold(p.y);
  }
  for (const auto& sl : poly.slits) {
    fold(sl.first.x);
    fold(sl.first.y);
    fold(sl.second.x);
    fold(sl.second.y);
  }
  auto scaled = [&s](const PointQ& p) {
    Rational x = p.x * s, y = p.y * s;
    return geo::Vec{num(x), num(y)};
  };

  std::vector<geo::Vec> v;
  for (const PointQ& p : poly.vertices) v.push_back(scaled(p));
  for (int i = 0; i < n; ++i)
    if (v[i] == v[(i + 1) % n]) throw InputError("repeated consecutive vertex");

  // orientation: make counter-clockwise
  BigInt twice_area = 0;
  for (int i = 0; i < n; ++i) twice_area += geo::cross(v[i], v[(i + 1) % n]);
  if (twice_area == 0) throw InputError("polygon has zero area");
  if (twice_area < 0) {
    std::reverse(v.begin(), v.end());
    twice_area = -twice_area;
  }

  // rectilinear with strict alternation (no collinear vertices, no spikes)
  std::vector<geo::Vec> dir(n);
  for (int i = 0; i < n; ++i) dir[i] = detail::unit_dir(v[(i + 1) % n] - v[i]);
  for (int i = 0; i < n; ++i) {
    int k = detail::turn_k(dir[(i + n - 1) % n], dir[i]);
    if (k != 1 && k != 3)
      throw InputError("vertices must alternate between left and right turns");
  }

  // simplicity: non-adjacent boundary edges must not touch
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (detail::segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw InputError("polygon boundary is self-intersecting");
    }

  Table t;
  t.scale_ = s;
  t.area_ = Rational(twice_area, 2 * s * s);
  for (int i = 0; i < n; ++i) t.corners_.push_back({v[i], 0});
  for (int i = 0; i < n; ++i) t.edges_.push_back({i, (i + 1) % n, false});

  // insert slit walls into the boundary cycle
  for (const auto& sl : poly.slits) {
    geo::Vec base = scaled(sl.first), tip = scaled(sl.second);
    if (base == tip) throw InputError("slit has zero length");
    detail::unit_dir(tip - base);  // must be axis-parallel

    // locate the unique non-wall edge containing base in its relative interior
    int host = -1;
    const int m = static_cast<int>(t.edges_.size());
    for (int e = 0; e < m; ++e) {
      const geo::Vec a = t.edge_a(e), b = t.edge_b(e);
      if (t.edges_[e].wall) {
        if (detail::on_segment(base, a, b))
          throw InputError("slit attached to another slit");
        continue;
      }
      if (base == a || base == b)
        throw InputError("slit base must not be a polygon vertex");
      if (detail::on_segment(base, a, b)) host = e;
    }
    if (host < 0) throw InputError("slit base is not on the boundary");
    const geo::Vec a = t.edge_a(host), b = t.edge_b(host);
    if (geo::dot(tip - base, b - a) != 0)
      throw InputError("slit must be perpendicular to its boundary edge");
    // interior of a CCW boundary lies to the left of the edge direction
    if (geo::cross(b - a, tip - base) <= 0)
      throw InputError("slit must point into the interior");
    // the wall may touch the boundary only at its base
    for (int e = 0; e < m; ++e) {
      if (e == host) continue;
      if (detail::segments_touch(base, tip, t.edge_a(e), t.edge_b(e)))
        throw InputError("slit intersects the boundary");
    }
    if (detail::on_segment(tip, a, b)) throw InputError("slit tip on boundary");

    // rebuild the cycle: ... a -> base1 -> tip -> base2 -> b ...
    std::vector<Table::Corner> nc;
    std::vector<Table::Edge> ne;
    for (int e = 0; e < m; ++e) {
      nc.push_back(t.corners_[t.edges_[e].a]);
      if (e != host) {
        ne.push_back({0, 0, t.edges_[e].wall});
        continue;
      }
      ne.push_back({0, 0, false});        // a -> base1
      nc.push_back({base, 0});            // base1
      ne.push_back({0, 0, true});         // base1 -> tip (wall side)
      nc.push_back({tip, 0});             // tip
      ne.push_back({0, 0, true});         // tip -> base2 (wall side)
      nc.push_back({base, 0});            // base2
      ne.push_back({0, 0, false});        // base2 -> b
    }
    const int nn = static_cast<int>(nc.size());
    for (int i = 0; i < nn; ++i) {
      ne[i].a = i;
      ne[i].b = (i + 1) % nn;
    }
    t.corners_ = std::move(nc);
    t.edges_ = std::move(ne);
  }
  // slits must be pairwise disjoint; with bases on distinct host positions the
  // wall-vs-wall case is covered by the boundary-touch test above, except two
  // identical slits, which the base-on-wall test rejects.

  // corner angles and Gauss-Bonnet
  const int nn = t.size();
  long defect = 0;
  for (int i = 0; i < nn; ++i) {
    int k = detail::turn_k(t.out_dir((i + nn - 1) % nn), t.out_dir(i));
    if (k == 2) throw InputError("straight angle in boundary cycle");
    t.corners_[i].k = k;
    defect += 2 - k;
  }
  if (defect != 4)
    throw InputError("Gauss-Bonnet violated: sum(2 - k_i) must equal 4");
  return t;
}

// Doubling across the boundary: corner angle k*pi/2 becomes a cone point of
// angle k*pi, i.e. a singularity of order k-2 of a quadratic differential.
inline StratumSignature doubled_stratum(const Table& t) {
  return family_stratum(t.family());
}

// A generalized diagonal: a billiard segment from corner `source` to corner
// `target` (possibly equal) meeting no corner in between. Holonomy (dx, dy)
// is the straight-line vector of the unfolded trajectory; `chain` lists the
// edges reflected across, in order; (lin_x, lin_y) is the linear part of the
// final unfolding isometry.
struct SaddleConnection {
  int source = 0, target = 0;
  Rational dx, dy, length_sq;
  std::vector<int> chain;
  int lin_x = 1, lin_y = 1;
  bool parallel_to_side = false;

  friend bool operator<(const SaddleConnection& a, const SaddleConnection& b) {
    auto key = [](const SaddleConnection& c) {
      return std::tie(c.length_sq, c.dx, c.dy, c.chain);
    };
    return key(a) < key(b);
  }
  friend bool operator==(const SaddleConnection& a, const SaddleConnection& b) {
    return a.source == b.source && a.target == b.target && a.dx == b.dx &&
           a.dy == b.dy && a.chain == b.chain;
  }
};

namespace detail {

inline long long max_search_nodes() {
  if (const char* env = std::getenv("FLATCOUNT_MAX_NODES")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 10'000'000;
}

// Sub-quadrant of the interior wedge of corner `cid`, transformed by the
// linear part (ex, ey), that contains `w` strictly; -1 if none (w along a
// sub-quadrant boundary or outside the wedge).
inline int wedge_quadrant(const Table& t, int cid, int ex, int ey,
                          const geo::Vec& w) {
  geo::Vec u = t.out_dir(cid);
  u = {ex * u.x, ey * u.y};
  const int o = ex * ey;
  for (int j = 0; j < t.corners()[cid].k; ++j) {
    geo::Vec nxt = (o == 1) ? geo::rot_ccw(u) : geo::rot_cw(u);
    if (o * geo::cross(u, w) > 0 && o * geo::cross(w, nxt) > 0) return j;
    u = nxt;
  }
  return -1;
}

// Shared state of one enumeration run.
struct SearchCtx {
  const Table& t;
  int source;
  Rational bound;  // L_sq * scale^2, compared against integer |p|^2
  long long cap;
  std::atomic<long long>& nodes;
  std::vector<SaddleConnection>& out;

  void record(const geo::Vec& p, int target, const std::vector<int>& chain,
              int ex, int ey, bool parallel) const {
    SaddleConnection c;
    c.source = source;
    c.target = target;
    c.dx = Rational(p.x, t.scale());
    c.dy = Rational(p.y, t.scale());
    c.length_sq = Rational(geo::norm_sq(p), t.scale() * t.scale());
    c.chain = chain;
    c.lin_x = ex;
    c.lin_y = ey;
    c.parallel_to_side = parallel;
    out.push_back(std::move(c));
  }
};

// Exact quotient with a denominator of either sign (the two-argument
// Rational constructor requires a positive denominator).
inline Rational ratio(const BigInt& n, const BigInt& d) {
  return Rational(n) / Rational(d);
}

// One DFS node: an unfolded copy of the table (image under iso, with all
// positions relative to the source corner), entered through `entry` (-1 at
// the root), restricted to the direction sector [lo, hi) -- lo included only
// when lo_closed. Sectors always lie inside one open coordinate quadrant.
struct SectorNode {
  geo::Iso iso;
  int entry = -1;
  geo::Vec lo, hi;
  bool lo_closed = false;
  std::vector<int> chain;
};

struct Shot {
  bool corner_first = false;
  std::vector<int> corner_ids;  // corners at the first hit (coincident twins)
  geo::Vec corner_p;
  int exit_edge = -1;
};

// First hit of the ray t*v, t > t_entry, against the node's copy: either a
// corner image of the copy or a strict exit crossing of one of its edges.
inline Shot shoot(const SearchCtx& ctx, const SectorNode& nd, const geo::Vec& v) {
  const Table& t = ctx.t;
  Rational t_entry = 0;
  if (nd.entry >= 0) {
    geo::Vec a = nd.iso.apply(t.edge_a(nd.entry));
    geo::Vec b = nd.iso.apply(t.edge_b(nd.entry));
    BigInt ca = geo::cross(v, a), cb = geo::cross(v, b);
    if ((ca > 0) == (cb > 0) || ca == 0 || cb == 0)
      throw VerificationError("ray does not enter through the entry edge");
    t_entry = ratio(geo::cross(a, b - a), geo::cross(v, b - a));
  }

  const int o = nd.iso.orient();
  bool have_edge = false;
  Rational edge_t;
  int edge_id = -1;
  for (int e = 0; e < static_cast<int>(t.edges().size()); ++e) {
    geo::Vec a = nd.iso.apply(t.edge_a(e)), b = nd.iso.apply(t.edge_b(e));
    BigInt ca = geo::cross(v, a), cb = geo::cross(v, b);
    if (ca == 0 || cb == 0 || (ca > 0) == (cb > 0)) continue;  // not strict
    if (o * geo::cross(b - a, v) >= 0) continue;               // not exiting
    Rational tt = ratio(geo::cross(a, b - a), geo::cross(v, b - a));
    if (tt <= t_entry) continue;
    if (!have_edge || tt < edge_t) {
      have_edge = true;
      edge_t = tt;
      edge_id = e;
    }
  }

  bool have_corner = false;
  Rational corner_t;
  Shot s;
  for (int c = 0; c < t.size(); ++c) {
    geo::Vec p = nd.iso.apply(t.corners()[c].pos);
    if (geo::cross(v, p) != 0 || geo::dot(v, p) <= 0) continue;
    Rational tt = (v.x != 0) ? ratio(p.x, v.x) : ratio(p.y, v.y);
    if (tt <= t_entry) continue;
    if (!have_corner || tt < corner_t) {
      have_corner = true;
      corner_t = tt;
      s.corner_ids.clear();
      s.corner_p = p;
    }
    if (tt == corner_t) s.corner_ids.push_back(c);
  }

  if (have_corner && (!have_edge || corner_t < edge_t)) {
    s.corner_first = true;
    return s;
  }
  if (!have_edge) throw VerificationError("ray escaped the table copy");
  s.exit_edge = edge_id;
  return s;
}

inline Rational segment_dist_sq(const geo::Vec& a, const geo::Vec& b) {
  geo::Vec ab = b - a;
  BigInt len2 = geo::norm_sq(ab);
  BigInt proj = -geo::dot(a, ab);
  if (proj <= 0) return Rational(geo::norm_sq(a));
  if (proj >= len2) return Rational(geo::norm_sq(b));
  BigInt cr = geo::cross(a, b);
  return Rational(cr * cr, len2);
}

inline void explore(const SearchCtx& ctx, SectorNode nd) {
  if (++ctx.nodes > ctx.cap)
    throw ResourceError("unfolding search exceeded node cap (" +
                        std::to_string(ctx.cap) +
                        "); raise FLATCOUNT_MAX_NODES to continue");
  const Table& t = ctx.t;

  auto in_sector = [&](const geo::Vec& d) {
    BigInt cl = geo::cross(nd.lo, d);
    if (cl < 0 || (cl == 0 && !nd.lo_closed)) return false;
    if (cl == 0 && geo::dot(nd.lo, d) <= 0) return false;
    return geo::cross(d, nd.hi) > 0;
  };

  // distinct corner-image directions inside the sector, sorted ccw
  std::vector<geo::Vec> dirs;
  for (int c = 0; c < t.size(); ++c) {
    geo::Vec p = nd.iso.apply(t.corners()[c].pos);
    if (p.x == 0 || p.y == 0) continue;  // axis or at the source: never in sector
    if (!in_sector(p)) continue;
    dirs.push_back(p);
  }
  std::sort(dirs.begin(), dirs.end(), [](const geo::Vec& a, const geo::Vec& b) {
    return geo::cross(a, b) > 0;
  });
  dirs.erase(std::unique(dirs.begin(), dirs.end(),
                         [](const geo::Vec& a, const geo::Vec& b) {
                           return geo::cross(a, b) == 0;
                         }),
             dirs.end());

  // classify each split direction: dead (first hit is a corner) or alive
  std::vector<bool> alive(dirs.size(), false);
  for (size_t i = 0; i < dirs.size(); ++i) {
    Shot s = shoot(ctx, nd, dirs[i]);
    if (!s.corner_first) {
      alive[i] = true;
      continue;
    }
    if (Rational(geo::norm_sq(s.corner_p)) > ctx.bound) continue;  // dead, far
    int hits = 0;
    for (int cid : s.corner_ids)
      if (wedge_quadrant(t, cid, nd.iso.ex, nd.iso.ey, -dirs[i]) >= 0) {
        ++hits;
        ctx.record(s.corner_p, cid, nd.chain, nd.iso.ex, nd.iso.ey, false);
      }
    if (hits != 1)
      throw VerificationError("corner hit matched " + std::to_string(hits) +
                              " interior wedges");
  }

  // recurse into each corner-free subsector across its (constant) exit edge
  auto recurse = [&](const geo::Vec& lo, const geo::Vec& hi, bool closed) {
    if (geo::cross(lo, hi) <= 0) return;  // empty
    Shot s = shoot(ctx, nd, lo + hi);
    if (s.corner_first)
      throw VerificationError("sample direction hit a corner");
    const int e = s.exit_edge;
    geo::Vec a = nd.iso.apply(t.edge_a(e)), b = nd.iso.apply(t.edge_b(e));
    if (segment_dist_sq(a, b) > ctx.bound) return;  // whole child out of range
    SectorNode child;
    child.iso = geo::reflect_across(nd.iso, a, b);
    child.entry = e;
    child.lo = lo;
    child.hi = hi;
    child.lo_closed = closed;
    child.chain = nd.chain;
    child.chain.push_back(e);
    explore(ctx, std::move(child));
  };

  geo::Vec cur_lo = nd.lo;
  bool cur_closed = nd.lo_closed;
  for (size_t i = 0; i < dirs.size(); ++i) {
    recurse(cur_lo, dirs[i], cur_closed);
    cur_lo = dirs[i];
    cur_closed = alive[i];
  }
  recurse(cur_lo, nd.hi, cur_closed);
}

// Axis-parallel diagonals: boundary edges slid from the corner, plus interior
// axis rays (present only at corners with k >= 2), which either reach a
// corner straight or bounce once off a perpendicular wall and return to the
// source as a back-and-forth loop. Loops of this kind coincide with their own
// reversal, so each is recorded exactly once.
inline void axis_records(const SearchCtx& ctx) {
  const Table& t = ctx.t;
  const int n = t.size();
  const int src = ctx.source;
  const geo::Vec P = t.corners()[src].pos;
  const int k = t.corners()[src].k;

  auto rec_straight = [&](int target, const geo::Vec& hol) {
    if (Rational(geo::norm_sq(hol)) <= ctx.bound)
      ctx.record(hol, target, {}, 1, 1, true);
  };
  rec_straight((src + 1) % n, t.edge_b(src) - P);                  // slide out-edge
  rec_straight((src + n - 1) % n, t.edge_a((src + n - 1) % n) - P);  // slide in-edge

  geo::Vec a = t.out_dir(src);
  for (int j = 1; j < k; ++j) {
    a = geo::rot_ccw(a);
    // nearest corner on the open ray
    bool have_c = false;
    BigInt ct;
    std::vector<int> ids;
    for (int c = 0; c < n; ++c) {
      geo::Vec d = t.corners()[c].pos - P;
      if (geo::cross(a, d) != 0) continue;
      BigInt s = geo::dot(a, d);
      if (s <= 0) continue;
      if (!have_c || s < ct) {
        have_c = true;
        ct = s;
        ids.clear();
      }
      if (s == ct) ids.push_back(c);
    }
    // nearest strict crossing of a perpendicular edge, facing the ray
    bool have_e = false;
    BigInt et;
    int eid = -1;
    for (int e = 0; e < static_cast<int>(t.edges().size()); ++e) {
      geo::Vec A = t.edge_a(e) - P, B = t.edge_b(e) - P;
      BigInt ca = geo::cross(a, A), cb = geo::cross(a, B);
      if (ca == 0 || cb == 0 || (ca > 0) == (cb > 0)) continue;
      if (geo::cross(B - A, a) >= 0) continue;  // wall faces away (wrong side)
      BigInt s = geo::dot(a, A);  // constant along a perpendicular edge
      if (s <= 0) continue;
      if (!have_e || s < et) {
        have_e = true;
        et = s;
        eid = e;
      }
    }
    if (have_c && (!have_e || ct < et)) {
      if (ids.size() != 1)
        throw VerificationError("ambiguous corner hit on axis ray");
      rec_straight(ids[0], {ct * a.x, ct * a.y});
    } else if (have_e) {
      geo::Vec hol{2 * et * a.x, 2 * et * a.y};
      if (Rational(geo::norm_sq(hol)) <= ctx.bound)
        ctx.record(hol, src, {eid}, a.y == 0 ? -1 : 1, a.x == 0 ? -1 : 1, true);
    } else {
      throw VerificationError("axis ray escaped the table");
    }
  }
}

}  // namespace detail

// All generalized diagonals starting at `source` with length^2 <= L_sq, each
// once per outgoing direction, sorted by (length_sq, dx, dy, chain). With
// workers > 1 the root sectors are explored concurrently; the sorted merge
// makes the result independent of the thread count.
inline std::vector<SaddleConnection> enumerate_diagonals(const Table& t,
                                                         int source,
                                                         const Rational& L_sq,
                                                         int workers = 1) {
  if (source < 0 || source >= t.size()) throw InputError("bad corner id");
  if (L_sq <= 0) throw InputError("L_sq must be positive");
  if (workers < 1) throw InputError("workers must be >= 1");
  const Rational bound = L_sq * t.scale() * t.scale();
  std::atomic<long long> nodes{0};
  const long long cap = detail::max_search_nodes();

  std::vector<SaddleConnection> out;
  detail::SearchCtx ctx{t, source, bound, cap, nodes, out};
  detail::axis_records(ctx);

  const int k = t.corners()[source].k;
  geo::Iso base;
  base.tx = -t.corners()[source].pos.x;
  base.ty = -t.corners()[source].pos.y;

  std::vector<std::vector<SaddleConnection>> parts(k);
  auto run_sector = [&](int j, std::vector<SaddleConnection>& sink) {
    geo::Vec lo = t.out_dir(source);
    for (int i = 0; i < j; ++i) lo = geo::rot_ccw(lo);
    detail::SectorNode root;
    root.iso = base;
    root.lo = lo;
    root.hi = geo::rot_ccw(lo);
    detail::SearchCtx sub{t, source, bound, cap, nodes, sink};
    detail::explore(sub, std::move(root));
  };
  if (workers <= 1 || k <= 1) {
    for (int j = 0; j < k; ++j) run_sector(j, parts[j]);
  } else {
    std::vector<std::future<void>> futs;
    for (int j = 0; j < k; ++j)
      futs.push_back(std::async(std::launch::async, run_sector, j,
                                std::ref(parts[j])));
    std::exception_ptr err;
    for (auto& f : futs) {
      try {
        f.get();
      } catch (...) {
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  }
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Classification into configurations I-IV.
// ---------------------------------------------------------------------------

enum class ConfigKind { I, II, IIIShort, IIILongOrIV };

struct Classification {
  ConfigKind kind = ConfigKind::I;
  int k_source = 0, k_target = 0;
};

namespace detail {

// Integer direction vector of a connection's holonomy.
inline geo::Vec holonomy_dir(const SaddleConnection& c) {
  return {num(c.dx) * den(c.dy), num(c.dy) * den(c.dx)};
}

// Exact angle of direction d within the interior wedge [0, k*pi/2] at corner
// cid (original frame), as angle = j*(pi/2) + theta with tan(theta) = cr/dt,
// theta in [0, pi/2).
struct WedgeAngle {
  int j = 0;
  BigInt cr, dt;
};

inline WedgeAngle wedge_angle(const Table& t, int cid, const geo::Vec& d) {
  geo::Vec u = t.out_dir(cid);
  const int k = t.corners()[cid].k;
  for (int j = 0; j < k; ++j) {
    geo::Vec nxt = geo::rot_ccw(u);
    BigInt cu = geo::cross(u, d);
    if (cu == 0 && geo::dot(u, d) > 0) return {j, 0, 1};
    if (cu > 0 && geo::cross(d, nxt) > 0) return {j, cu, geo::dot(u, d)};
    u = nxt;
  }
  if (geo::cross(u, d) == 0 && geo::dot(u, d) > 0) return {k, 0, 1};
  throw InputError("direction not inside the corner's interior wedge");
}

}  // namespace detail

inline Classification classify(const Table& t, const SaddleConnection& conn) {
  Classification res;
  res.k_source = t.corners()[conn.source].k;
  res.k_target = t.corners()[conn.target].k;
  if (conn.source != conn.target) {
    res.kind = (std::max(res.k_source, res.k_target) >= 3) ? ConfigKind::I
                                                           : ConfigKind::IIIShort;
    return res;
  }
  // On the doubled sphere the loop lifts to a saddle connection through the
  // cone point of angle k*pi. Its two rays there are the outgoing ray (angle
  // alpha inside the corner wedge) and, depending on the parity of the
  // reflections, either the reversed return ray (angle beta, even case) or
  // its mirror in the second copy (odd case). The loop bounds a band exactly
  // when one of the two sectors cut out of the cone angle equals pi:
  //   even (lin_x*lin_y = +1):  |alpha - beta| = pi
  //   odd  (lin_x*lin_y = -1):  alpha + beta = pi  or  (k-1)*pi
  const geo::Vec u = detail::holonomy_dir(conn);
  const geo::Vec w{-conn.lin_x * u.x, -conn.lin_y * u.y};
  detail::WedgeAngle au = detail::wedge_angle(t, conn.source, u);
  detail::WedgeAngle aw = detail::wedge_angle(t, conn.source, w);
  const int k = res.k_source;
  bool band = false;
  if (conn.lin_x * conn.lin_y == 1) {
    band = au.cr * aw.dt == aw.cr * au.dt && std::abs(au.j - aw.j) == 2;
  } else {
    // alpha + beta as j_u*90 + j_w*90 + (theta_u + theta_w), theta in [0,90)
    const int jsum = au.j + aw.j;
    const bool both_zero = au.cr == 0 && aw.cr == 0;
    const bool complementary =
        au.cr != 0 && aw.cr != 0 && au.cr * aw.cr == au.dt * aw.dt;
    auto sum_is = [&](int quads) {
      return (both_zero && jsum == quads) ||
             (complementary && jsum == quads - 1);
    };
    band = sum_is(2) || sum_is(2 * k - 2);
  }
  res.kind = band ? ConfigKind::IIILongOrIV : ConfigKind::II;
  return res;
}

// ---------------------------------------------------------------------------
// Counting by (source, target) pair.
// ---------------------------------------------------------------------------

using PairCounts = std::map<std::pair<int, int>, long>;

namespace detail {

// Fold one source's records into the count table. Distinct-endpoint diagonals
// are counted once per record; non-axis loops appear once per orientation
// except when the unfolding linear part is -id (self-reversed), so the
// non-oriented count is (records + self_reversed)/2. Axis bounce loops
// coincide with their reversal and are counted once.
inline void count_records(const std::vector<SaddleConnection>& recs, int source,
                          const Rational& L_sq, bool include_axis,
                          PairCounts& m) {
  long loop_records = 0, self_reversed = 0;
  for (const SaddleConnection& r : recs) {
    if (r.length_sq > L_sq) continue;
    if (r.parallel_to_side && !include_axis) continue;
    if (r.target != source) {
      ++m[{source, r.target}];
    } else if (r.parallel_to_side) {
      ++m[{source, source}];
    } else {
      ++loop_records;
      if (r.lin_x == -1 && r.lin_y == -1) ++self_reversed;
    }
  }
  if ((loop_records + self_reversed) % 2 != 0)
    throw VerificationError("unpaired loop records");
  if (loop_records > 0)
    m[{source, source}] += (loop_records + self_reversed) / 2;
}

}  // namespace detail

inline PairCounts count_by_pair(const Table& t, const Rational& L_sq,
                                bool include_axis_parallel = false,
                                int workers = 1) {
  PairCounts m;
  for (int src = 0; src < t.size(); ++src)
    detail::count_records(enumerate_diagonals(t, src, L_sq, workers), src, L_sq,
                          include_axis_parallel, m);
  return m;
}

// ---------------------------------------------------------------------------
// Chain reconstruction and bands.
// ---------------------------------------------------------------------------

// Unfolding isometries along a chain from `source`: copies[0] translates the
// source corner to the origin; copies[i+1] reflects copies[i] across the
// image of chain[i].
inline std::vector<geo::Iso> chain_copies(const Table& t, int source,
                                          const std::vector<int>& chain) {
  geo::Iso iso;
  iso.tx = -t.corners()[source].pos.x;
  iso.ty = -t.corners()[source].pos.y;
  std::vector<geo::Iso> copies{iso};
  for (int e : chain) {
    iso = geo::reflect_across(iso, iso.apply(t.edge_a(e)), iso.apply(t.edge_b(e)));
    copies.push_back(iso);
  }
  return copies;
}

// Does the chain reproduce the holonomy? The final copy must map the target
// corner to the holonomy vector and carry the recorded linear part.
inline bool verify_chain(const Table& t, const SaddleConnection& c) {
  geo::Iso last = chain_copies(t, c.source, c.chain).back();
  if (last.ex != c.lin_x || last.ey != c.lin_y) return false;
  geo::Vec p = last.apply(t.corners()[c.target].pos);
  return Rational(p.x, t.scale()) == c.dx && Rational(p.y, t.scale()) == c.dy;
}

enum class BandKind { III, IV };

// A band of parallel closed billiard trajectories, bounded on one side by a
// pole-pole diagonal (half the circumference) and on the other by a loop of
// holonomy twice the diagonal's -- or, degenerately, by a zero-pole
// connection of the same holonomy traversed twice.
struct Band {
  BandKind kind = BandKind::III;
  SaddleConnection boundary;
  std::optional<SaddleConnection> partner;
  Rational circumference_sq, width_sq, area_weight;
  bool degenerate = false;
};

inline Band trace_band(const Table& t, const SaddleConnection& conn,
                       Rational search_L_sq = 0, int workers = 1) {
  if (conn.parallel_to_side)
    throw InputError("trace_band: axis-parallel connection");
  if (classify(t, conn).kind != ConfigKind::IIIShort)
    throw InputError("trace_band requires a type III pole-pole diagonal");
  if (search_L_sq == 0) search_L_sq = 4 * conn.length_sq;

  const BigInt& s = t.scale();
  Rational hxq = conn.dx * s, hyq = conn.dy * s;
  geo::Vec h{num(hxq), num(hyq)};  // integral by construction

  // width: smallest nonzero perpendicular offset of a corner image from the
  // diagonal's line, over every copy the diagonal traverses. The second half
  // of the closed trajectory is the pi-rotation of the first about the target
  // pole, so its corner images realize the same offsets.
  BigInt best = 0;
  bool have = false;
  for (const geo::Iso& iso : chain_copies(t, conn.source, conn.chain))
    for (const Table::Corner& c : t.corners()) {
      BigInt cr = abs(geo::cross(h, iso.apply(c.pos)));
      if (cr == 0) continue;
      if (!have || cr < best) {
        have = true;
        best = cr;
      }
    }
  if (!have) throw VerificationError("no corner image off the band axis");

  Band band;
  band.boundary = conn;
  band.circumference_sq = 4 * conn.length_sq;
  band.width_sq = Rational(best * best, s * s * geo::norm_sq(h));
  band.area_weight = Rational(2 * best, s * s) / t.area();

  // partner: a loop with holonomy +-2h at some corner of angle >= 3*pi/2
  auto matches = [](const SaddleConnection& r, const Rational& dx,
                    const Rational& dy) {
    return (r.dx == dx && r.dy == dy) || (r.dx == -dx && r.dy == -dy);
  };
  std::vector<std::vector<SaddleConnection>> cached(t.size());
  for (int cid = 0; cid < t.size(); ++cid) {
    if (t.corners()[cid].k < 3) continue;
    cached[cid] = enumerate_diagonals(t, cid, search_L_sq, workers);
    for (const SaddleConnection& r : cached[cid])
      if (r.target == cid && !r.parallel_to_side &&
          matches(r, 2 * conn.dx, 2 * conn.dy)) {
        band.partner = r;
        return band;
      }
  }
  // Degenerate cases (cylinder boundaries that split on non-generic tables):
  // a loop of holonomy +-h whose two mirror copies on the doubled sphere
  // together close the band, or a zero-pole connection of holonomy +-h
  // covered twice. Both are flagged rather than asserted.
  for (int cid = 0; cid < t.size(); ++cid)
    for (const SaddleConnection& r : cached[cid])
      if (r.target == cid && !r.parallel_to_side &&
          matches(r, conn.dx, conn.dy)) {
        band.partner = r;
        band.degenerate = true;
        return band;
      }
  for (int cid = 0; cid < t.size(); ++cid)
    for (const SaddleConnection& r : cached[cid])
      if (t.corners()[r.target].k == 1 && matches(r, conn.dx, conn.dy)) {
        band.partner = r;
        band.degenerate = true;
        return band;
      }
  // boundary splits into several shorter connections: geometry is still
  // exact, but no single partner connection exists
  band.degenerate = true;
  return band;
}

// ---------------------------------------------------------------------------
// Empirical counts against predicted constants.
// ---------------------------------------------------------------------------

struct ReportRow {
  Rational l_sq;
  int source = 0, target = 0;
  long count = 0;
  Rational count_over_l2;
  PiValue predicted;  // constant per pair: c * 1/Area, to compare with N/L^2
};

inline std::vector<ReportRow> asymptotic_report(
    const Table& t, const std::vector<std::pair<int, int>>& pairs,
    const Rational& L_sq_max, int steps, bool include_axis_parallel = false,
    int workers = 1) {
  if (steps < 1) throw InputError("steps must be >= 1");
  if (L_sq_max <= 0) throw InputError("L_sq_max must be positive");
  std::vector<int> sources;
  for (auto& [i, j] : pairs) {
    if (i < 0 || i >= t.size() || j < 0 || j >= t.size())
      throw InputError("corner id out of range");
    if (std::find(sources.begin(), sources.end(), i) == sources.end())
      sources.push_back(i);
  }
  std::map<int, std::vector<SaddleConnection>> recs;
  for (int src : sources)
    recs[src] = enumerate_diagonals(t, src, L_sq_max, workers);

  const std::vector<int> fam = t.family();
  std::vector<ReportRow> rows;
  for (int step = 0; step < steps; ++step) {
    Rational l = L_sq_max;
    for (int d = 0; d < steps - 1 - step; ++d) l /= 2;
    PairCounts m;
    for (int src : sources)
      detail::count_records(recs[src], src, l, include_axis_parallel, m);
    for (auto& [i, j] : pairs) {
      ReportRow row;
      row.l_sq = l;
      row.source = i;
      row.target = j;
      auto it = m.find({i, j});
      row.count = (it == m.end()) ? 0 : it->second;
      row.count_over_l2 = Rational(row.count) / l;
      if (i != j)
        row.predicted = billiard_constant(fam, BilliardCount::DiagonalPair, i, j) /
                        PiValue(t.area());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace flatcount
