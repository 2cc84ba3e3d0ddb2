#pragma once

// Shaped triangulations, edge classes and the shaped 2-3 / 3-2 moves.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tqft/weights.hpp"

namespace tqft {

/// Local edges of a tetrahedron, in the order 01, 02, 03, 12, 13, 23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int local_edge_index(int i, int j);

/// Angle fraction carried by a local edge: a on 01/23, b on 02/13, c on 03/12.
cd edge_angle(const Shape& s, int local_edge);

/// The three vertices of face f in increasing order.
std::array<int, 3> face_vertices(int f);

struct ShapedTetrahedron {
  std::string id;
  int sign = 1;
  Shape shape;
  bool operator==(const ShapedTetrahedron&) const = default;
};

struct FaceRef {
  int tet = 0;
  int face = 0;
  auto operator<=>(const FaceRef&) const = default;
};

/// Face `from` glued to face `to`; vertex_map[k] is the image in the target
/// tetrahedron of the k-th vertex (increasing order) of the source face.
struct FaceGluing {
  FaceRef from;
  FaceRef to;
  std::array<int, 3> vertex_map{};
  bool operator==(const FaceGluing&) const = default;
};

struct EdgeIncidence {
  int tet;
  int local_edge;
  bool flipped;  // orientation relative to the class representative
};

struct EdgeClass {
  std::vector<EdgeIncidence> members;
  bool boundary = false;
  bool orientable = true;
};

/// A boundary state entry: value on the edge class containing a given
/// tetrahedron edge.
struct BoundaryValue {
  std::string tet;
  std::array<int, 2> edge{};
  double value = 0.0;
  bool operator==(const BoundaryValue&) const = default;
};

class Triangulation {
 public:
  /// Validates and derives edge classes; throws ValidationError.
  static Triangulation build(std::vector<ShapedTetrahedron> tets,
                             std::vector<FaceGluing> gluings, double level);

  const std::vector<ShapedTetrahedron>& tetrahedra() const { return tets_; }
  /// One entry per glued pair, canonical direction (from < to), sorted.
  const std::vector<FaceGluing>& gluings() const { return gluings_; }
  double level() const { return level_; }

  int num_edge_classes() const { return int(classes_.size()); }
  const std::vector<EdgeClass>& edge_classes() const { return classes_; }
  int edge_class(int tet, int local_edge) const {
    return edge_class_[std::size_t(6 * tet + local_edge)];
  }
  std::vector<int> internal_edges() const;
  std::vector<int> boundary_edges() const;
  const std::vector<FaceRef>& boundary_faces() const { return boundary_faces_; }
  bool closed() const { return boundary_faces_.empty(); }

  /// The partner of a glued face, with the vertex map from this face to it.
  std::optional<FaceGluing> partner(FaceRef f) const;

  int tet_index(const std::string& id) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  // File-level extras carried along for round trips.
  std::optional<cd> b;
  std::vector<BoundaryValue> boundary_state;

  /// Same tetrahedra, gluings, level and file extras.
  bool operator==(const Triangulation& o) const {
    return tets_ == o.tets_ && gluings_ == o.gluings_ && level_ == o.level_ &&
           b == o.b && boundary_state == o.boundary_state;
  }

 private:
  std::vector<ShapedTetrahedron> tets_;
  std::vector<FaceGluing> gluings_;
  double level_ = 0.0;
  std::vector<int> edge_class_;
  std::vector<EdgeClass> classes_;
  std::vector<FaceRef> boundary_faces_;
  std::vector<std::optional<FaceGluing>> partner_;
  std::vector<std::string> warnings_;
};

struct EdgeAngle {
  cd omega;  // sum of 2 pi * angle fraction over incidences
  bool boundary = false;
  bool balanced = false;
};

EdgeAngle edge_angle_sum(const Triangulation& X, int edge_class);

/// Values of the state variables on edge classes, canonicalized to [0, 1).
struct EdgeState {
  std::vector<double> values;
  static double canonical(double v);
  explicit EdgeState(std::vector<double> v);
};

struct PachnerResult {
  Triangulation result;
  /// old edge class -> new edge class, -1 for the edge removed by 3-2.
  std::vector<int> edge_map;
  /// The internal edge created by 2-3 (index in the result), else -1.
  int new_edge = -1;
  cd pe;  // 2(c0 + a2 + c4) - 1/2 of the three-tetrahedron side
  std::vector<std::string> warnings;
};

/// 2-3 move on the glued pair containing face f. The free shape parameter
/// a0 defaults to a1 c3 / (c1 + c3), moved to the middle of the feasible
/// interval when that is not feasible.
PachnerResult pachner_23(const Triangulation& X, FaceRef f,
                         std::optional<cd> a0 = std::nullopt);

/// 3-2 move on an internal edge of valence three.
PachnerResult pachner_32(const Triangulation& X, int edge_class);

/// Feasible open interval of a0 for the 2-3 move (real parts).
std::array<double, 2> pachner_23_interval(const Shape& t1, const Shape& t3);

/// Sign of the level transport: l -> l + kLevelSign * sign * P_e / 3 for 2-3.
inline constexpr int kLevelSign = +1;

Triangulation parse_triangulation(const std::string& text);
std::string serialize_triangulation(const Triangulation& X);

}  // namespace tqft
