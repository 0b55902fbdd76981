#include "curvcomplex/cell_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace curvcomplex {

namespace {

using Int = std::int64_t;

Int cross(const LatticePoint& a, const LatticePoint& b) { return a.x * b.y - a.y * b.x; }

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) { return {a.x - b.x, a.y - b.y}; }

bool lex_less(const LatticePoint& a, const LatticePoint& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Strict weak order of direction vectors by polar angle in [0, 2pi).
bool angle_less(const LatticePoint& a, const LatticePoint& b) {
  const int ha = (a.y < 0 || (a.y == 0 && a.x < 0)) ? 1 : 0;
  const int hb = (b.y < 0 || (b.y == 0 && b.x < 0)) ? 1 : 0;
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0;
}

struct Segment {
  LatticePoint a, b;
};

// Faces of one pixel in local lattice coordinates [0, S]^2.
struct PixelTemplate {
  std::vector<LatticePoint> points;
  std::vector<std::vector<int>> faces;  // counter-clockwise rings
};

std::vector<Segment> pixel_segments(Connectivity c, Int s) {
  const LatticePoint c00{0, 0}, c10{s, 0}, c11{s, s}, c01{0, s};
  std::vector<Segment> segs;
  if (c == Connectivity::Conn8) {
    segs = {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}, {c00, c11}, {c10, c01}};
    return segs;
  }
  const Int h = s / 2;
  const LatticePoint mb{h, 0}, mr{s, h}, mt{h, s}, ml{0, h};
  // Sides split at their midpoints, the two diagonals, and every corner
  // joined to the midpoints of the two sides it does not touch.
  segs = {{c00, mb}, {mb, c10}, {c10, mr}, {mr, c11}, {c11, mt}, {mt, c01}, {c01, ml}, {ml, c00},
          {c00, c11}, {c10, c01},
          {c00, mr}, {c00, mt}, {c10, ml}, {c10, mt}, {c11, ml}, {c11, mb}, {c01, mr}, {c01, mb}};
  return segs;
}

PixelTemplate build_template(Connectivity c, Int s) {
  const std::vector<Segment> segs = pixel_segments(c, s);
  std::vector<std::vector<LatticePoint>> on_segment(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    on_segment[i].push_back(segs[i].a);
    on_segment[i].push_back(segs[i].b);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const LatticePoint r = segs[i].b - segs[i].a;
      const LatticePoint q = segs[j].b - segs[j].a;
      const Int denom = cross(r, q);
      if (denom == 0) continue;  // no collinear overlaps in these layouts
      const LatticePoint w = segs[j].a - segs[i].a;
      Int tn = cross(w, q);
      Int un = cross(w, r);
      Int d = denom;
      if (d < 0) {
        d = -d;
        tn = -tn;
        un = -un;
      }
      if (tn < 0 || tn > d || un < 0 || un > d) continue;
      const Int nx = segs[i].a.x * d + tn * r.x;
      const Int ny = segs[i].a.y * d + tn * r.y;
      if (nx % d != 0 || ny % d != 0) throw std::logic_error("cell complex: non-lattice intersection");
      const LatticePoint p{nx / d, ny / d};
      on_segment[i].push_back(p);
      on_segment[j].push_back(p);
    }
  }

  PixelTemplate t;
  std::map<std::pair<Int, Int>, int> point_id;
  auto id_of = [&](const LatticePoint& p) {
    auto [it, inserted] = point_id.try_emplace({p.x, p.y}, static_cast<int>(t.points.size()));
    if (inserted) t.points.push_back(p);
    return it->second;
  };
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    auto& pts = on_segment[i];
    const LatticePoint r = segs[i].b - segs[i].a;
    std::sort(pts.begin(), pts.end(), [&](const LatticePoint& p, const LatticePoint& q) {
      return (p.x - segs[i].a.x) * r.x + (p.y - segs[i].a.y) * r.y <
             (q.x - segs[i].a.x) * r.x + (q.y - segs[i].a.y) * r.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) edges.emplace_back(id_of(pts[k]), id_of(pts[k + 1]));
  }

  // Half-edge face tracing: at each vertex the next half-edge is the
  // clockwise neighbour of the reversed incoming one.
  const int nv = static_cast<int>(t.points.size());
  std::vector<std::vector<int>> out(nv);  // targets, sorted by angle
  for (auto [u, v] : edges) {
    out[u].push_back(v);
    out[v].push_back(u);
  }
  for (int v = 0; v < nv; ++v) {
    std::sort(out[v].begin(), out[v].end(), [&](int a, int b) {
      return angle_less(t.points[a] - t.points[v], t.points[b] - t.points[v]);
    });
  }
  std::map<std::pair<int, int>, bool> used;
  for (int u = 0; u < nv; ++u) {
    for (int v : out[u]) {
      if (used[{u, v}]) continue;
      std::vector<int> ring;
      int a = u, b = v;
      while (!used[{a, b}]) {
        used[{a, b}] = true;
        ring.push_back(a);
        const auto& nb = out[b];
        const auto k = std::find(nb.begin(), nb.end(), a) - nb.begin();
        const int next = nb[(k + nb.size() - 1) % nb.size()];
        a = b;
        b = next;
      }
      Int area2 = 0;
      for (std::size_t k = 0; k < ring.size(); ++k)
        area2 += cross(t.points[ring[k]], t.points[ring[(k + 1) % ring.size()]]);
      if (area2 > 0) t.faces.push_back(std::move(ring));
    }
  }
  return t;
}

const PixelTemplate& pixel_template(Connectivity c) {
  static const PixelTemplate conn8 = build_template(Connectivity::Conn8, lattice_scale(Connectivity::Conn8));
  static const PixelTemplate conn16 = build_template(Connectivity::Conn16, lattice_scale(Connectivity::Conn16));
  return c == Connectivity::Conn8 ? conn8 : conn16;
}

std::uint64_t point_key(const LatticePoint& p) {
  return (static_cast<std::uint64_t>(p.x) << 32) | static_cast<std::uint64_t>(p.y);
}

}  // namespace

std::int64_t lattice_scale(Connectivity c) { return c == Connectivity::Conn8 ? 2 : 60; }

int faces_per_pixel(Connectivity c) { return c == Connectivity::Conn8 ? 4 : 32; }

Eigen::Vector2d CellComplex::position(Index v) const {
  const auto s = static_cast<double>(scale_);
  return {static_cast<double>(vertices_[v].x) / s, static_cast<double>(vertices_[v].y) / s};
}

double CellComplex::face_area(Index f) const {
  const auto s = static_cast<double>(scale_);
  return static_cast<double>(faces_[f].twice_area) / (2.0 * s * s);
}

Index CellComplex::first_face_of_pixel(int x, int y) const {
  return (y * width_ + x) * faces_per_pixel(connectivity_);
}

std::span<const Face> CellComplex::pixel_faces(int x, int y) const {
  const auto k = static_cast<std::size_t>(faces_per_pixel(connectivity_));
  return std::span<const Face>(faces_).subspan(static_cast<std::size_t>(first_face_of_pixel(x, y)), k);
}

Index CellComplex::pixel_of_face(Index f) const { return f / faces_per_pixel(connectivity_); }

Index CellComplex::tail(Index l) const {
  const Edge& e = edges_[lines_[l].edge];
  return lines_[l].sign > 0 ? e.from : e.to;
}

Index CellComplex::head(Index l) const {
  const Edge& e = edges_[lines_[l].edge];
  return lines_[l].sign > 0 ? e.to : e.from;
}

LatticePoint CellComplex::lattice_delta(Index l) const { return vertices_[head(l)] - vertices_[tail(l)]; }

bool CellComplex::is_domain_corner(Index v) const {
  const LatticePoint& p = vertices_[v];
  const Int w = scale_ * width_;
  const Int h = scale_ * height_;
  return (p.x == 0 || p.x == w) && (p.y == 0 || p.y == h);
}

std::span<const Index> CellComplex::incident_edges(Index v) const {
  const auto b = static_cast<std::size_t>(vertex_edge_start_[v]);
  const auto e = static_cast<std::size_t>(vertex_edge_start_[v + 1]);
  return std::span<const Index>(vertex_edges_).subspan(b, e - b);
}

int CellComplex::incidence_region(Index e, Index f) const {
  if (edges_[e].positive_face == f) return +1;
  if (edges_[e].negative_face == f) return -1;
  return 0;
}

int CellComplex::incidence_line(Index e, Index l) const {
  if (lines_[l].edge != e) return 0;
  return lines_[l].sign;
}

int CellComplex::incidence_pair(Index e, Index p) const { return incidence_line(e, pairs_[p].first); }

CellComplex build_complex(int width, int height, Connectivity connectivity) {
  if (width < 1 || height < 1) throw std::invalid_argument("build_complex: width and height must be >= 1");
  const PixelTemplate& tpl = pixel_template(connectivity);
  const Int s = lattice_scale(connectivity);
  const Int pixels = static_cast<Int>(width) * height;
  // Every face contributes at most its ring length in edges; lines double that.
  Int ring_total = 0;
  for (const auto& f : tpl.faces) ring_total += static_cast<Int>(f.size());
  if (pixels * ring_total * 2 > std::numeric_limits<Index>::max() || s * std::max(width, height) >= (Int{1} << 31))
    throw std::overflow_error("build_complex: grid too large for the index range");

  CellComplex cx;
  cx.width_ = width;
  cx.height_ = height;
  cx.connectivity_ = connectivity;
  cx.scale_ = s;

  std::unordered_map<std::uint64_t, Index> vertex_id;
  std::unordered_map<std::uint64_t, Index> edge_id;
  vertex_id.reserve(static_cast<std::size_t>(pixels * static_cast<Int>(tpl.points.size())));
  cx.faces_.reserve(static_cast<std::size_t>(pixels * static_cast<Int>(tpl.faces.size())));

  std::vector<Index> local(tpl.points.size());
  for (int py = 0; py < height; ++py) {
    for (int px = 0; px < width; ++px) {
      for (std::size_t k = 0; k < tpl.points.size(); ++k) {
        const LatticePoint g{tpl.points[k].x + s * px, tpl.points[k].y + s * py};
        auto [it, inserted] = vertex_id.try_emplace(point_key(g), static_cast<Index>(cx.vertices_.size()));
        if (inserted) cx.vertices_.push_back(g);
        local[k] = it->second;
      }
      for (const auto& ring : tpl.faces) {
        Face face;
        face.pixel_x = px;
        face.pixel_y = py;
        const auto fid = static_cast<Index>(cx.faces_.size());
        for (std::size_t k = 0; k < ring.size(); ++k) {
          const Index u = local[ring[k]];
          const Index v = local[ring[(k + 1) % ring.size()]];
          face.ring.push_back(u);
          const LatticePoint& pu = cx.vertices_[u];
          const LatticePoint& pv = cx.vertices_[v];
          face.twice_area += cross(pu, pv);
          const bool forward = lex_less(pu, pv);
          const Index a = forward ? u : v;
          const Index b = forward ? v : u;
          const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
          auto [it, inserted] = edge_id.try_emplace(key, static_cast<Index>(cx.edges_.size()));
          if (inserted) {
            Edge e;
            e.from = a;
            e.to = b;
            const LatticePoint d = cx.vertices_[b] - cx.vertices_[a];
            e.length = std::hypot(static_cast<double>(d.x), static_cast<double>(d.y)) / static_cast<double>(s);
            cx.edges_.push_back(e);
          }
          Edge& e = cx.edges_[it->second];
          (forward ? e.positive_face : e.negative_face) = fid;
          face.edges.push_back(it->second);
          face.signs.push_back(forward ? +1 : -1);
        }
        cx.faces_.push_back(std::move(face));
      }
    }
  }

  const auto ne = static_cast<Index>(cx.edges_.size());
  const auto nv = static_cast<Index>(cx.vertices_.size());
  cx.lines_.resize(static_cast<std::size_t>(2 * ne));
  std::vector<Index> degree(static_cast<std::size_t>(nv) + 1, 0);
  for (Index e = 0; e < ne; ++e) {
    Edge& edge = cx.edges_[e];
    edge.on_border = edge.positive_face < 0 || edge.negative_face < 0;
    edge.at_corner = cx.is_domain_corner(edge.from) || cx.is_domain_corner(edge.to);
    const Eigen::Vector2d dir = (cx.position(edge.to) - cx.position(edge.from)).normalized();
    cx.lines_[2 * e] = OrientedLine{e, +1, dir};
    cx.lines_[2 * e + 1] = OrientedLine{e, -1, -dir};
    ++degree[edge.from + 1];
    ++degree[edge.to + 1];
  }
  cx.vertex_edge_start_.assign(degree.begin(), degree.end());
  for (Index v = 0; v < nv; ++v) cx.vertex_edge_start_[v + 1] += cx.vertex_edge_start_[v];
  cx.vertex_edges_.resize(static_cast<std::size_t>(2 * ne));
  std::vector<Index> fill(cx.vertex_edge_start_.begin(), cx.vertex_edge_start_.end() - 1);
  for (Index e = 0; e < ne; ++e) {
    cx.vertex_edges_[fill[cx.edges_[e].from]++] = e;
    cx.vertex_edges_[fill[cx.edges_[e].to]++] = e;
  }
  for (Index v = 0; v < nv; ++v) {
    auto first = cx.vertex_edges_.begin() + cx.vertex_edge_start_[v];
    auto last = cx.vertex_edges_.begin() + cx.vertex_edge_start_[v + 1];
    auto away = [&](Index e) {
      const Edge& ed = cx.edges_[e];
      const Index other = ed.from == v ? ed.to : ed.from;
      return cx.vertices_[other] - cx.vertices_[v];
    };
    std::sort(first, last, [&](Index a, Index b) { return angle_less(away(a), away(b)); });
  }

  cx.pairs_ = enumerate_pairs(cx);
  cx.line_in_use_.assign(cx.lines_.size(), 0);
  for (const LinePair& p : cx.pairs_) {
    cx.line_in_use_[p.first] = 1;
    cx.line_in_use_[p.second] = 1;
  }
  cx.crossings_ = crossing_pairs(cx);
  return cx;
}

namespace {

// Border edges keep only the orientation used by their single face.
bool orientation_allowed(const CellComplex& cx, Index l) {
  const Edge& e = cx.edges()[cx.lines()[l].edge];
  if (!e.on_border) return true;
  const int face_sign = e.positive_face >= 0 ? +1 : -1;
  return cx.lines()[l].sign == face_sign;
}

}  // namespace

std::vector<LinePair> enumerate_pairs(const CellComplex& cx) {
  std::vector<LinePair> pairs;
  std::vector<Index> in, out;
  for (Index v = 0; v < cx.num_vertices(); ++v) {
    in.clear();
    out.clear();
    for (Index e : cx.incident_edges(v)) {
      const Edge& ed = cx.edges()[e];
      // Positive orientation runs from -> to.
      const Index into = cx.line_of(e, ed.to == v ? +1 : -1);
      const Index outof = cx.reverse(into);
      if (orientation_allowed(cx, into)) in.push_back(into);
      if (orientation_allowed(cx, outof)) out.push_back(outof);
    }
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    for (Index l1 : in)
      for (Index l2 : out)
        if (cx.lines()[l1].edge != cx.lines()[l2].edge) pairs.push_back({l1, l2, v});
  }
  return pairs;
}

std::vector<std::pair<Index, Index>> crossing_pairs(const CellComplex& cx) {
  std::vector<std::pair<Index, Index>> result;
  const auto pairs = cx.pairs();
  std::size_t begin = 0;
  while (begin < pairs.size()) {
    const Index node = pairs[begin].node;
    std::size_t end = begin;
    while (end < pairs.size() && pairs[end].node == node) ++end;
    const auto around = cx.incident_edges(node);
    auto slot = [&](Index line) {
      const Index e = cx.lines()[line].edge;
      return static_cast<int>(std::find(around.begin(), around.end(), e) - around.begin());
    };
    std::vector<std::pair<int, int>> slots(end - begin);
    for (std::size_t i = begin; i < end; ++i) slots[i - begin] = {slot(pairs[i].first), slot(pairs[i].second)};
    for (std::size_t i = begin; i < end; ++i) {
      auto [a, b] = slots[i - begin];
      if (a > b) std::swap(a, b);
      for (std::size_t j = i + 1; j < end; ++j) {
        const auto [c, d] = slots[j - begin];
        if (c == a || c == b || d == a || d == b) continue;
        const bool c_in = a < c && c < b;
        const bool d_in = a < d && d < b;
        if (c_in != d_in) result.emplace_back(static_cast<Index>(i), static_cast<Index>(j));
      }
    }
    begin = end;
  }
  return result;
}

void write_mesh(const CellComplex& cx, std::ostream& out) {
  out << "curvcomplex-mesh 1\n";
  out << "connectivity " << (cx.connectivity() == Connectivity::Conn8 ? 8 : 16) << "\n";
  out << "size " << cx.width() << " " << cx.height() << "\n";
  out << "scale " << cx.scale() << "\n";
  out << "vertices " << cx.num_vertices() << "\n";
  for (const auto& p : cx.vertices()) out << p.x << " " << p.y << "\n";
  out << "faces " << cx.num_faces() << "\n";
  for (const auto& f : cx.faces()) {
    out << f.pixel_x << " " << f.pixel_y << " " << f.twice_area << " " << f.ring.size();
    for (Index v : f.ring) out << " " << v;
    out << "\n";
  }
  out << "edges " << cx.num_edges() << "\n";
  for (const auto& e : cx.edges())
    out << e.from << " " << e.to << " " << e.positive_face << " " << e.negative_face << " " << (e.on_border ? 1 : 0)
        << "\n";
}

}  // namespace curvcomplex
