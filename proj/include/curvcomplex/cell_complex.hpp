// Planar cell complex obtained by splitting every pixel into basic regions.
//
// Coordinates are kept as exact integers: a pixel (x, y) covers the square
// [S*x, S*(x+1)] x [S*y, S*(y+1)] where S is the connectivity's scale.
// Faces are traced counter-clockwise in the (x, y) frame, i.e. with positive
// shoelace area.

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace curvcomplex {

using Index = int;

enum class Connectivity { Conn8, Conn16 };

/// Integer coordinate scale per pixel side for a connectivity.
std::int64_t lattice_scale(Connectivity c);
/// Number of basic regions a pixel is split into (4 or 32).
int faces_per_pixel(Connectivity c);

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct Face {
  std::vector<Index> ring;   // vertex indices, counter-clockwise
  std::vector<Index> edges;  // edges[i] joins ring[i] and ring[i+1]
  std::vector<int> signs;    // +1 if the traversal uses edges[i] positively
  int pixel_x = 0;
  int pixel_y = 0;
  std::int64_t twice_area = 0;  // in squared lattice units
};

// The positive orientation of an edge runs from the lexicographically
// smaller endpoint (`from`) to the larger one (`to`).
struct Edge {
  Index from = -1;
  Index to = -1;
  double length = 0.0;  // pixel units
  bool on_border = false;
  bool at_corner = false;
  Index positive_face = -1;  // face whose traversal uses from -> to
  Index negative_face = -1;  // face whose traversal uses to -> from
};

struct OrientedLine {
  Index edge = -1;
  int sign = +1;
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();
};

/// Two line segments traversed one after the other through `node`.
struct LinePair {
  Index first = -1;
  Index second = -1;
  Index node = -1;
};

class CellComplex {
 public:
  int width() const { return width_; }
  int height() const { return height_; }
  Connectivity connectivity() const { return connectivity_; }
  std::int64_t scale() const { return scale_; }

  std::span<const LatticePoint> vertices() const { return vertices_; }
  std::span<const Face> faces() const { return faces_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const OrientedLine> lines() const { return lines_; }
  std::span<const LinePair> pairs() const { return pairs_; }
  std::span<const std::pair<Index, Index>> crossings() const { return crossings_; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index num_lines() const { return static_cast<Index>(lines_.size()); }
  Index num_pairs() const { return static_cast<Index>(pairs_.size()); }

  /// Vertex position in pixel units.
  Eigen::Vector2d position(Index v) const;
  /// Face area in pixel units.
  double face_area(Index f) const;
  /// Faces of pixel (x, y); contiguous index range.
  std::span<const Face> pixel_faces(int x, int y) const;
  Index first_face_of_pixel(int x, int y) const;
  Index pixel_of_face(Index f) const;

  Index line_of(Index e, int sign) const { return 2 * e + (sign > 0 ? 0 : 1); }
  Index reverse(Index l) const { return l ^ 1; }
  Index tail(Index l) const;
  Index head(Index l) const;
  /// Exact direction of a line in lattice units.
  LatticePoint lattice_delta(Index l) const;

  /// Lines that occur in at least one pair (border orientations that can
  /// never bound a region inside the domain are excluded).
  bool line_in_use(Index l) const { return line_in_use_[l] != 0; }
  bool is_domain_corner(Index v) const;
  std::span<const Index> incident_edges(Index v) const;

  /// m_e^f: +1 / -1 if f traverses e positively / negatively, else 0.
  int incidence_region(Index e, Index f) const;
  /// m_e^l: +1 / -1 if l is the positive / negative orientation of e, else 0.
  int incidence_line(Index e, Index l) const;
  /// m_e^{l1,l2}: depends only on the first line of the pair.
  int incidence_pair(Index e, Index p) const;

 private:
  friend CellComplex build_complex(int width, int height, Connectivity connectivity);

  int width_ = 0;
  int height_ = 0;
  Connectivity connectivity_ = Connectivity::Conn8;
  std::int64_t scale_ = 2;
  std::vector<LatticePoint> vertices_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<OrientedLine> lines_;
  std::vector<LinePair> pairs_;
  std::vector<std::pair<Index, Index>> crossings_;
  std::vector<Index> vertex_edge_start_;
  std::vector<Index> vertex_edges_;  // sorted by angle around each vertex
  std::vector<char> line_in_use_;
};

/// Builds the complex for a width x height pixel grid. Throws
/// std::invalid_argument for empty grids and std::overflow_error when the
/// element counts do not fit the index type.
CellComplex build_complex(int width, int height, Connectivity connectivity);

/// All traversable pairs (head(first) == tail(second)), excluding U-turns
/// and the border orientations that never bound a region inside the domain.
/// Sorted by node, then first, then second.
std::vector<LinePair> enumerate_pairs(const CellComplex& complex);

/// Unordered pairs (p, q), p < q, of line pairs through the same node whose
/// polylines cross transversally there.
std::vector<std::pair<Index, Index>> crossing_pairs(const CellComplex& complex);

/// Plain-text mesh dump (vertices, faces, edges with incidences).
void write_mesh(const CellComplex& complex, std::ostream& out);

}  // namespace curvcomplex
