#include "tqft/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "json.hpp"

namespace tqft {

int local_edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int k = 0; k < 6; ++k) {
    if (kEdgeVertices[k][0] == i && kEdgeVertices[k][1] == j) return k;
  }
  throw DomainError("not an edge of a tetrahedron");
}

cd edge_angle(const Shape& s, int local_edge) {
  switch (local_edge) {
    case 0:
    case 5:
      return s.a;
    case 1:
    case 4:
      return s.b();
    default:
      return s.c;
  }
}

std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> v{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (i != f) v[k++] = i;
  }
  return v;
}

namespace {

using Perm = std::array<int, 4>;
using Labels = std::array<int, 4>;

Perm full_perm(const FaceGluing& g) {
  Perm p{};
  const auto fv = face_vertices(g.from.face);
  for (int k = 0; k < 3; ++k) p[fv[k]] = g.vertex_map[k];
  p[g.from.face] = g.to.face;
  return p;
}

FaceGluing from_perm(FaceRef from, FaceRef to, const Perm& p) {
  FaceGluing g{from, to, {}};
  const auto fv = face_vertices(from.face);
  for (int k = 0; k < 3; ++k) g.vertex_map[k] = p[fv[k]];
  return g;
}

FaceGluing inverse(const FaceGluing& g) {
  const Perm p = full_perm(g);
  Perm q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return from_perm(g.to, g.from, q);
}

// +1 if the face map preserves the increasing order of the face vertices.
int face_parity(const FaceGluing& g) {
  const auto tv = face_vertices(g.to.face);
  std::array<int, 3> pos{};
  for (int k = 0; k < 3; ++k) {
    pos[k] = int(std::find(tv.begin(), tv.end(), g.vertex_map[k]) - tv.begin());
  }
  int inv = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) inv += pos[i] > pos[j];
  return inv % 2 ? -1 : 1;
}

std::string face_name(const std::vector<ShapedTetrahedron>& t, FaceRef f) {
  return "face " + std::to_string(f.face) + " of tetrahedron '" + t[f.tet].id + "'";
}

struct ParityUnionFind {
  std::vector<int> parent;
  std::vector<int> parity;  // relative to parent
  std::vector<bool> bad;

  explicit ParityUnionFind(int n) : parent(n), parity(n, 0), bad(n, false) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  std::pair<int, int> find(int x) {
    int par = 0;
    int r = x;
    while (parent[r] != r) {
      par ^= parity[r];
      r = parent[r];
    }
    // path compression with parity bookkeeping
    int cur = x;
    int cp = par;
    while (parent[cur] != cur) {
      const int next = parent[cur];
      const int np = cp ^ parity[cur];
      parent[cur] = r;
      parity[cur] = cp;
      cur = next;
      cp = np;
    }
    return {r, par};
  }
  void unite(int a, int b, int flip) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) {
      if ((pa ^ pb) != flip) bad[ra] = true;
      return;
    }
    parent[ra] = rb;
    parity[ra] = pa ^ pb ^ flip;
    if (bad[ra]) bad[rb] = true;
  }
};

}  // namespace

Triangulation Triangulation::build(std::vector<ShapedTetrahedron> tets,
                                   std::vector<FaceGluing> gluings, double level) {
  Triangulation X;
  const int n = int(tets.size());
  std::set<std::string> ids;
  for (const auto& t : tets) {
    if (!ids.insert(t.id).second) throw ValidationError("duplicate tetrahedron id '" + t.id + "'");
    if (t.sign != 1 && t.sign != -1) {
      throw ValidationError("tetrahedron '" + t.id + "' has sign other than +1/-1");
    }
  }
  X.tets_ = std::move(tets);
  X.level_ = level;
  X.partner_.assign(std::size_t(4 * n), std::nullopt);

  auto check_ref = [&](FaceRef f) {
    if (f.tet < 0 || f.tet >= n || f.face < 0 || f.face > 3) {
      throw ValidationError("gluing refers to a nonexistent face");
    }
  };
  auto place = [&](const FaceGluing& h) {
    auto& s = X.partner_[std::size_t(4 * h.from.tet + h.from.face)];
    if (s) {
      if (*s == h) return;
      if (s->to == h.to) {
        throw ValidationError("non-involutive gluing at " + face_name(X.tets_, h.from));
      }
      throw ValidationError("double-glued " + face_name(X.tets_, h.from));
    }
    s = h;
  };

  for (const auto& g : gluings) {
    check_ref(g.from);
    check_ref(g.to);
    if (g.from == g.to) throw ValidationError(face_name(X.tets_, g.from) + " is glued to itself");
    std::array<int, 3> sorted = g.vertex_map;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != face_vertices(g.to.face)) {
      throw ValidationError("vertex_map of the gluing at " + face_name(X.tets_, g.from) +
                            " is not a bijection onto " + face_name(X.tets_, g.to));
    }
    const int lhs = X.tets_[g.from.tet].sign * (g.from.face % 2 ? -1 : 1) * face_parity(g);
    const int rhs = -X.tets_[g.to.tet].sign * (g.to.face % 2 ? -1 : 1);
    if (lhs != rhs) {
      throw ValidationError("orientation clash between " + face_name(X.tets_, g.from) + " and " +
                            face_name(X.tets_, g.to));
    }
    place(g);
    place(inverse(g));
  }

  ParityUnionFind uf(6 * n);
  for (int slot = 0; slot < 4 * n; ++slot) {
    const auto& g = X.partner_[std::size_t(slot)];
    if (!g) {
      X.boundary_faces_.push_back(FaceRef{slot / 4, slot % 4});
      continue;
    }
    if (!(g->from < g->to)) continue;
    X.gluings_.push_back(*g);
    const Perm p = full_perm(*g);
    for (int e = 0; e < 6; ++e) {
      const int i = kEdgeVertices[e][0];
      const int j = kEdgeVertices[e][1];
      if (i == g->from.face || j == g->from.face) continue;
      uf.unite(6 * g->from.tet + e, 6 * g->to.tet + local_edge_index(p[i], p[j]),
               p[i] > p[j] ? 1 : 0);
    }
  }

  X.edge_class_.assign(std::size_t(6 * n), -1);
  std::map<int, int> root_to_class;
  std::vector<int> rep_parity;
  for (int k = 0; k < 6 * n; ++k) {
    auto [r, par] = uf.find(k);
    auto [it, fresh] = root_to_class.try_emplace(r, int(X.classes_.size()));
    if (fresh) {
      X.classes_.push_back(EdgeClass{});
      X.classes_.back().orientable = !uf.bad[r];
      rep_parity.push_back(par);
    }
    X.edge_class_[std::size_t(k)] = it->second;
    X.classes_[std::size_t(it->second)].members.push_back(
        EdgeIncidence{k / 6, k % 6, (par ^ rep_parity[std::size_t(it->second)]) != 0});
  }
  for (const auto& f : X.boundary_faces_) {
    for (int e = 0; e < 6; ++e) {
      if (kEdgeVertices[e][0] != f.face && kEdgeVertices[e][1] != f.face) {
        X.classes_[std::size_t(X.edge_class(f.tet, e))].boundary = true;
      }
    }
  }
  for (int c = 0; c < X.num_edge_classes(); ++c) {
    if (!X.classes_[std::size_t(c)].orientable) {
      X.warnings_.push_back("edge class " + std::to_string(c) + " is non-orientable");
    }
  }
  return X;
}

std::vector<int> Triangulation::internal_edges() const {
  std::vector<int> out;
  for (int c = 0; c < num_edge_classes(); ++c)
    if (!classes_[std::size_t(c)].boundary) out.push_back(c);
  return out;
}

std::vector<int> Triangulation::boundary_edges() const {
  std::vector<int> out;
  for (int c = 0; c < num_edge_classes(); ++c)
    if (classes_[std::size_t(c)].boundary) out.push_back(c);
  return out;
}

std::optional<FaceGluing> Triangulation::partner(FaceRef f) const {
  if (f.tet < 0 || f.tet >= int(tets_.size()) || f.face < 0 || f.face > 3) {
    throw ValidationError("no such face");
  }
  return partner_[std::size_t(4 * f.tet + f.face)];
}

int Triangulation::tet_index(const std::string& id) const {
  for (std::size_t i = 0; i < tets_.size(); ++i)
    if (tets_[i].id == id) return int(i);
  return -1;
}

EdgeAngle edge_angle_sum(const Triangulation& X, int e) {
  if (e < 0 || e >= X.num_edge_classes()) throw ValidationError("no such edge class");
  EdgeAngle out;
  const auto& cls = X.edge_classes()[std::size_t(e)];
  for (const auto& m : cls.members) {
    out.omega += 2.0 * kPi * edge_angle(X.tetrahedra()[std::size_t(m.tet)].shape, m.local_edge);
  }
  out.boundary = cls.boundary;
  out.balanced = !cls.boundary && std::abs(out.omega - 2.0 * kPi) < 1e-12 * 2.0 * kPi;
  return out;
}

double EdgeState::canonical(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

EdgeState::EdgeState(std::vector<double> v) : values(std::move(v)) {
  for (auto& x : values) x = canonical(x);
}

// ---- Pachner moves ----

namespace {

// Vertex labels inside the bipyramid [01234]: T_i omits vertex i.
constexpr Labels kL0{1, 2, 3, 4};
constexpr Labels kL1{0, 2, 3, 4};
constexpr Labels kL2{0, 1, 3, 4};
constexpr Labels kL3{0, 1, 2, 4};
constexpr Labels kL4{0, 1, 2, 3};

int local_of(const Labels& L, int g) {
  for (int i = 0; i < 4; ++i)
    if (L[i] == g) return i;
  return -1;
}

struct PatternTet {
  int index;  // in the input triangulation
  Labels labels;
};

struct NewTet {
  ShapedTetrahedron tet;
  Labels labels;
};

// The gluing between two tetrahedra of the bipyramid along their common face.
std::optional<FaceGluing> label_gluing(int ia, const Labels& La, int ib, const Labels& Lb) {
  int fa = -1;
  int fb = -1;
  for (int i = 0; i < 4; ++i) {
    if (local_of(Lb, La[i]) < 0) {
      if (fa >= 0) return std::nullopt;
      fa = i;
    }
    if (local_of(La, Lb[i]) < 0) fb = i;
  }
  if (fa < 0 || fb < 0) return std::nullopt;
  Perm p{};
  for (int i = 0; i < 4; ++i) p[i] = i == fa ? fb : local_of(Lb, La[i]);
  return from_perm(FaceRef{ia, fa}, FaceRef{ib, fb}, p);
}

// Checks that every pair of pattern tetrahedra sharing a face in the
// bipyramid is glued there exactly as the labels say.
void check_pattern_gluings(const Triangulation& X, const std::vector<PatternTet>& P) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      auto want = label_gluing(P[i].index, P[i].labels, P[j].index, P[j].labels);
      if (!want) continue;
      auto have = X.partner(want->from);
      if (!have || !(*have == *want)) {
        throw PatternMismatch("tetrahedra '" + X.tetrahedra()[std::size_t(P[i].index)].id +
                              "' and '" + X.tetrahedra()[std::size_t(P[j].index)].id +
                              "' are not glued in the bipyramid pattern");
      }
    }
  }
}

// Replaces the pattern tetrahedra by new ones with the same boundary. New
// tetrahedra take the slots of the old ones in order; surplus new ones are
// appended and surplus old slots removed.
PachnerResult rewrite(const Triangulation& X, const std::vector<PatternTet>& old_tets,
                      const std::vector<NewTet>& new_tets, double level) {
  const int n = int(X.tetrahedra().size());
  std::vector<int> index_map(std::size_t(n), -1);  // for tets outside the pattern
  std::vector<int> pattern_pos(std::size_t(n), -1);
  for (std::size_t k = 0; k < old_tets.size(); ++k) pattern_pos[std::size_t(old_tets[k].index)] = int(k);

  std::vector<int> removed;
  for (std::size_t k = new_tets.size(); k < old_tets.size(); ++k) removed.push_back(old_tets[k].index);
  std::vector<ShapedTetrahedron> tets;
  std::vector<int> new_index(new_tets.size(), -1);
  for (int t = 0; t < n; ++t) {
    const int k = pattern_pos[std::size_t(t)];
    if (k < 0) {
      index_map[std::size_t(t)] = int(tets.size());
      tets.push_back(X.tetrahedra()[std::size_t(t)]);
    } else if (k < int(new_tets.size())) {
      new_index[std::size_t(k)] = int(tets.size());
      tets.push_back(new_tets[std::size_t(k)].tet);
    }
  }
  for (std::size_t k = old_tets.size(); k < new_tets.size(); ++k) {
    new_index[k] = int(tets.size());
    tets.push_back(new_tets[k].tet);
  }

  // Old pattern face -> new tetrahedron position and local relabeling.
  auto remap_side = [&](FaceRef f, Perm& to_new) -> FaceRef {
    const int k = pattern_pos[std::size_t(f.tet)];
    if (k < 0) {
      to_new = {0, 1, 2, 3};
      return FaceRef{index_map[std::size_t(f.tet)], f.face};
    }
    const Labels& L = old_tets[std::size_t(k)].labels;
    for (std::size_t j = 0; j < new_tets.size(); ++j) {
      const Labels& M = new_tets[j].labels;
      bool contains = true;
      for (int v = 0; v < 4; ++v)
        if (v != f.face && local_of(M, L[v]) < 0) contains = false;
      if (!contains) continue;
      for (int v = 0; v < 4; ++v) {
        to_new[v] = v == f.face ? -1 : local_of(M, L[v]);
      }
      int missing = 6;  // 0+1+2+3
      for (int v = 0; v < 4; ++v)
        if (v != f.face) missing -= to_new[v];
      to_new[f.face] = missing;
      return FaceRef{new_index[j], missing};
    }
    throw PatternMismatch("boundary face of the pattern has no image");
  };

  std::vector<FaceGluing> gluings;
  for (const auto& g : X.gluings()) {
    const int ka = pattern_pos[std::size_t(g.from.tet)];
    const int kb = pattern_pos[std::size_t(g.to.tet)];
    if (ka >= 0 && kb >= 0) {
      auto inner = label_gluing(g.from.tet, old_tets[std::size_t(ka)].labels, g.to.tet,
                                old_tets[std::size_t(kb)].labels);
      if (inner && *inner == g) continue;
    }
    Perm fa{};
    Perm fb{};
    const FaceRef from = remap_side(g.from, fa);
    const FaceRef to = remap_side(g.to, fb);
    const Perm p = full_perm(g);
    Perm q{};
    for (int v = 0; v < 4; ++v) q[fa[v]] = fb[p[v]];
    gluings.push_back(from_perm(from, to, q));
  }
  for (std::size_t i = 0; i < new_tets.size(); ++i) {
    for (std::size_t j = i + 1; j < new_tets.size(); ++j) {
      auto g = label_gluing(new_index[i], new_tets[i].labels, new_index[j], new_tets[j].labels);
      if (g) gluings.push_back(*g);
    }
  }

  PachnerResult out{Triangulation::build(std::move(tets), std::move(gluings), level), {}, -1, {}, {}};
  out.result.b = X.b;

  // Old (tet, edge) -> new (tet, edge), when the edge survives.
  auto map_edge = [&](int tet, int i, int j) -> std::optional<std::pair<int, std::array<int, 2>>> {
    const int k = pattern_pos[std::size_t(tet)];
    if (k < 0) return std::make_pair(index_map[std::size_t(tet)], std::array<int, 2>{i, j});
    const Labels& L = old_tets[std::size_t(k)].labels;
    for (std::size_t m = 0; m < new_tets.size(); ++m) {
      const int li = local_of(new_tets[m].labels, L[i]);
      const int lj = local_of(new_tets[m].labels, L[j]);
      if (li >= 0 && lj >= 0) return std::make_pair(new_index[m], std::array<int, 2>{li, lj});
    }
    return std::nullopt;
  };

  for (const auto& cls : X.edge_classes()) {
    int target = -1;
    for (const auto& m : cls.members) {
      auto r = map_edge(m.tet, kEdgeVertices[m.local_edge][0], kEdgeVertices[m.local_edge][1]);
      if (r) {
        target = out.result.edge_class(r->first, local_edge_index(r->second[0], r->second[1]));
        break;
      }
    }
    out.edge_map.push_back(target);
  }
  for (const auto& bv : X.boundary_state) {
    const int t = X.tet_index(bv.tet);
    if (t < 0) {
      out.result.boundary_state.push_back(bv);
      continue;
    }
    auto r = map_edge(t, bv.edge[0], bv.edge[1]);
    if (!r) continue;
    out.result.boundary_state.push_back(BoundaryValue{
        out.result.tetrahedra()[std::size_t(r->first)].id, r->second, bv.value});
  }
  out.warnings = out.result.warnings();
  return out;
}

Shape positive_or_throw(const Shape& s, const std::string& what) {
  if (!s.positive()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s has non-positive angles (a=%.6g, b=%.6g, c=%.6g)",
                  what.c_str(), s.a.real(), s.b().real(), s.c.real());
    throw ShapeInfeasible(buf);
  }
  return s;
}

void balance_warning(PachnerResult& r, int e) {
  const EdgeAngle w = edge_angle_sum(r.result, e);
  if (!w.balanced) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "edge %d is not balanced: omega/2pi = %.17g", e,
                  w.omega.real() / (2.0 * kPi));
    r.warnings.push_back(buf);
  }
}

}  // namespace

std::array<double, 2> pachner_23_interval(const Shape& t1, const Shape& t3) {
  const double a1 = t1.a.real();
  const double c1 = t1.c.real();
  const double a3 = t3.a.real();
  const double c3 = t3.c.real();
  const double b1 = t1.b().real();
  return {std::max({0.0, a1 - a3, c3 - b1}), std::min({a1, a1 + c1 - a3, c3})};
}

PachnerResult pachner_23(const Triangulation& X, FaceRef f, std::optional<cd> a0_in) {
  auto glued = X.partner(f);
  if (!glued) throw NotAdjacent(face_name(X.tetrahedra(), f) + " is not glued to another face");
  FaceGluing g = *glued;
  if (g.from.tet == g.to.tet) throw NotAdjacent("face is glued to its own tetrahedron");
  if (g.from.face == 1 && g.to.face == 2) g = inverse(g);
  if (!(g.from.face == 2 && g.to.face == 1)) {
    throw PatternMismatch("shared face must be face 2 of one tetrahedron and face 1 of the other");
  }
  const int i1 = g.from.tet;
  const int i3 = g.to.tet;
  const auto& T1 = X.tetrahedra()[std::size_t(i1)];
  const auto& T3 = X.tetrahedra()[std::size_t(i3)];
  if (T1.sign != T3.sign) throw PatternMismatch("tetrahedra have opposite signs");
  check_pattern_gluings(X, {{i1, kL1}, {i3, kL3}});

  const cd a1 = T1.shape.a;
  const cd c1 = T1.shape.c;
  const cd a3 = T3.shape.a;
  const cd c3 = T3.shape.c;
  auto shapes = [&](cd a0) {
    return std::array<Shape, 3>{Shape{a0, c1 - a3 + a1 - a0}, Shape{a1 - a0, c1 + c3},
                                Shape{a3 - a1 + a0, c3 - a0}};
  };
  auto feasible = [&](cd a0) {
    auto s = shapes(a0);
    return s[0].positive() && s[1].positive() && s[2].positive();
  };
  cd a0;
  if (a0_in) {
    a0 = *a0_in;
  } else {
    a0 = a1 * c3 / (c1 + c3);
    if (!feasible(a0)) {
      const auto iv = pachner_23_interval(T1.shape, T3.shape);
      if (!(iv[0] < iv[1])) {
        throw ShapeInfeasible("no positive shapes for the 2-3 move: a0 interval (" +
                              std::to_string(iv[0]) + ", " + std::to_string(iv[1]) + ") is empty");
      }
      a0 = cd(0.5 * (iv[0] + iv[1]), a0.imag());
    }
  }
  const auto s = shapes(a0);
  positive_or_throw(s[0], "T0");
  positive_or_throw(s[1], "T2");
  positive_or_throw(s[2], "T4");

  const cd pe = 2.0 * (s[0].c + s[1].a + s[2].c) - 0.5;
  const double level = X.level() + kLevelSign * T1.sign * pe.real() / 3.0;
  const std::string stem = T1.id + "." + T3.id;
  std::vector<NewTet> nt{{{stem + ".0", T1.sign, s[0]}, kL0},
                         {{stem + ".2", T1.sign, s[1]}, kL2},
                         {{stem + ".4", T1.sign, s[2]}, kL4}};
  PachnerResult out = rewrite(X, {{i1, kL1}, {i3, kL3}}, nt, level);
  const int i4 = out.result.tet_index(stem + ".4");
  out.new_edge = out.result.edge_class(i4, local_edge_index(1, 3));
  out.pe = pe;
  balance_warning(out, out.new_edge);
  return out;
}

PachnerResult pachner_32(const Triangulation& X, int e) {
  if (e < 0 || e >= X.num_edge_classes()) throw PatternMismatch("no such edge class");
  const auto& cls = X.edge_classes()[std::size_t(e)];
  if (cls.boundary) throw PatternMismatch("edge " + std::to_string(e) + " is on the boundary");
  if (cls.members.size() != 3) {
    throw PatternMismatch("edge " + std::to_string(e) + " has valence " +
                          std::to_string(cls.members.size()) + ", not 3");
  }
  int i0 = -1;
  int i2 = -1;
  int i4 = -1;
  for (const auto& m : cls.members) {
    int* slot = m.local_edge == 1 ? &i0 : m.local_edge == 3 ? &i2 : m.local_edge == 4 ? &i4 : nullptr;
    if (!slot || *slot >= 0) {
      throw PatternMismatch("edge incidences are not the local edges 02, 12, 13 of three tetrahedra");
    }
    *slot = m.tet;
  }
  if (i0 == i2 || i0 == i4 || i2 == i4) throw PatternMismatch("edge meets a tetrahedron twice");
  const auto& T0 = X.tetrahedra()[std::size_t(i0)];
  const auto& T2 = X.tetrahedra()[std::size_t(i2)];
  const auto& T4 = X.tetrahedra()[std::size_t(i4)];
  if (T0.sign != T2.sign || T0.sign != T4.sign) throw PatternMismatch("tetrahedra have mixed signs");
  check_pattern_gluings(X, {{i0, kL0}, {i2, kL2}, {i4, kL4}});

  const Shape s0 = T0.shape;
  const Shape s2 = T2.shape;
  const Shape s4 = T4.shape;
  const Shape s1{s0.a + s2.a, s0.c + s4.a};
  const Shape s3{s2.a + s4.a, s0.a + s4.c};
  const cd defect = s2.c - (s1.c + s3.c);
  if (std::abs(defect) > 1e-12) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "relation c2 = c1 + c3 fails by %.3g", std::abs(defect));
    throw ShapeInfeasible(buf);
  }
  positive_or_throw(s1, "T1");
  positive_or_throw(s3, "T3");

  const cd pe = 2.0 * (s0.c + s2.a + s4.c) - 0.5;
  const double level = X.level() - kLevelSign * T0.sign * pe.real() / 3.0;

  std::string id1 = T0.id + "." + T2.id + "." + T4.id + ".1";
  std::string id3 = T0.id + "." + T2.id + "." + T4.id + ".3";
  auto strip = [](const std::string& s, const std::string& suffix) -> std::optional<std::string> {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
      return s.substr(0, s.size() - suffix.size());
    return std::nullopt;
  };
  auto p0 = strip(T0.id, ".0");
  if (p0 && strip(T2.id, ".2") == p0 && strip(T4.id, ".4") == p0 &&
      std::count(p0->begin(), p0->end(), '.') == 1) {
    const auto dot = p0->find('.');
    if (dot > 0 && dot + 1 < p0->size()) {
      id1 = p0->substr(0, dot);
      id3 = p0->substr(dot + 1);
    }
  }
  std::vector<NewTet> nt{{{id1, T0.sign, s1}, kL1}, {{id3, T0.sign, s3}, kL3}};
  PachnerResult out = rewrite(X, {{i0, kL0}, {i2, kL2}, {i4, kL4}}, nt, level);
  out.pe = pe;
  const EdgeAngle w = edge_angle_sum(X, e);
  if (!w.balanced) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "removed edge %d is not balanced: omega/2pi = %.17g", e,
                  w.omega.real() / (2.0 * kPi));
    out.warnings.push_back(buf);
  }
  return out;
}

// ---- file format ----

namespace {

using nlohmann::json;

std::string where_in(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(ctx + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& ctx) {
  if (!v.is_number()) throw ParseError(ctx + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& ctx) {
  if (!v.is_number_integer()) throw ParseError(ctx + ": expected an integer");
  return v.get<int>();
}

cd complex_value(const json& v, const std::string& ctx) {
  if (v.is_number()) return cd(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2) {
    return cd(number(v[0], ctx + "[0]"), number(v[1], ctx + "[1]"));
  }
  throw ParseError(ctx + ": expected a number or a [re, im] pair");
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string complex_text(cd z) {
  if (z.imag() == 0.0) return num(z.real());
  return "[" + num(z.real()) + ", " + num(z.imag()) + "]";
}

}  // namespace

Triangulation parse_triangulation(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at " + where_in(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("top level: expected an object");

  std::optional<cd> b;
  if (doc.contains("b")) b = complex_value(doc["b"], "b");
  const double level = doc.contains("level") ? number(doc["level"], "level") : 0.0;

  std::vector<ShapedTetrahedron> tets;
  std::map<std::string, int> index;
  const json& jt = field(doc, "tetrahedra", "top level");
  if (!jt.is_array()) throw ParseError("tetrahedra: expected an array");
  for (std::size_t k = 0; k < jt.size(); ++k) {
    std::string ctx = "tetrahedra[" + std::to_string(k) + "]";
    const json& id = field(jt[k], "id", ctx);
    if (!id.is_string()) throw ParseError(ctx + ".id: expected a string");
    ShapedTetrahedron t;
    t.id = id.get<std::string>();
    ctx += " (id \"" + t.id + "\")";
    t.sign = integer(field(jt[k], "sign", ctx), ctx + ".sign");
    const json& sh = field(jt[k], "shape", ctx);
    t.shape.a = complex_value(field(sh, "a", ctx + ".shape"), ctx + ".shape.a");
    t.shape.c = complex_value(field(sh, "c", ctx + ".shape"), ctx + ".shape.c");
    if (!index.emplace(t.id, int(k)).second) throw ParseError(ctx + ": duplicate id");
    tets.push_back(std::move(t));
  }

  auto tet_ref = [&](const json& v, const std::string& ctx) {
    const json& id = field(v, "tet", ctx);
    if (!id.is_string()) throw ParseError(ctx + ".tet: expected a tetrahedron id");
    auto it = index.find(id.get<std::string>());
    if (it == index.end()) {
      throw ParseError(ctx + ".tet: unknown tetrahedron id \"" + id.get<std::string>() + "\"");
    }
    const int face = integer(field(v, "face", ctx), ctx + ".face");
    if (face < 0 || face > 3) throw ParseError(ctx + ".face: must be 0..3");
    return FaceRef{it->second, face};
  };

  std::vector<FaceGluing> gluings;
  if (doc.contains("gluings")) {
    const json& jg = doc["gluings"];
    if (!jg.is_array()) throw ParseError("gluings: expected an array");
    for (std::size_t k = 0; k < jg.size(); ++k) {
      const std::string ctx = "gluings[" + std::to_string(k) + "]";
      FaceGluing g;
      g.from = tet_ref(field(jg[k], "from", ctx), ctx + ".from");
      g.to = tet_ref(field(jg[k], "to", ctx), ctx + ".to");
      const json& vm = field(jg[k], "vertex_map", ctx);
      if (!vm.is_array() || vm.size() != 3) throw ParseError(ctx + ".vertex_map: expected 3 vertices");
      for (int i = 0; i < 3; ++i) g.vertex_map[std::size_t(i)] = integer(vm[std::size_t(i)], ctx + ".vertex_map");
      gluings.push_back(g);
    }
  }

  std::vector<BoundaryValue> state;
  if (doc.contains("boundary_state")) {
    const json& js = doc["boundary_state"];
    if (!js.is_array()) throw ParseError("boundary_state: expected an array");
    for (std::size_t k = 0; k < js.size(); ++k) {
      const std::string ctx = "boundary_state[" + std::to_string(k) + "]";
      BoundaryValue bv;
      const json& id = field(js[k], "tet", ctx);
      if (!id.is_string() || !index.count(id.get<std::string>())) {
        throw ParseError(ctx + ".tet: unknown tetrahedron id");
      }
      bv.tet = id.get<std::string>();
      const json& e = field(js[k], "edge", ctx);
      if (!e.is_array() || e.size() != 2) throw ParseError(ctx + ".edge: expected [i, j]");
      bv.edge = {integer(e[0], ctx + ".edge"), integer(e[1], ctx + ".edge")};
      if (bv.edge[0] < 0 || bv.edge[0] > 3 || bv.edge[1] < 0 || bv.edge[1] > 3 ||
          bv.edge[0] == bv.edge[1]) {
        throw ParseError(ctx + ".edge: not an edge of a tetrahedron");
      }
      bv.value = number(field(js[k], "value", ctx), ctx + ".value");
      state.push_back(bv);
    }
  }

  Triangulation X = Triangulation::build(std::move(tets), std::move(gluings), level);
  X.b = b;
  X.boundary_state = std::move(state);
  return X;
}

std::string serialize_triangulation(const Triangulation& X) {
  std::string s = "{\n";
  if (X.b) s += "  \"b\": [" + num(X.b->real()) + ", " + num(X.b->imag()) + "],\n";
  s += "  \"level\": " + num(X.level()) + ",\n";
  s += "  \"tetrahedra\": [";
  const auto& T = X.tetrahedra();
  for (std::size_t k = 0; k < T.size(); ++k) {
    s += k ? ",\n    " : "\n    ";
    s += "{\"id\": " + json(T[k].id).dump() + ", \"sign\": " + std::to_string(T[k].sign) +
         ", \"shape\": {\"a\": " + complex_text(T[k].shape.a) +
         ", \"c\": " + complex_text(T[k].shape.c) + "}}";
  }
  s += T.empty() ? "],\n" : "\n  ],\n";
  s += "  \"gluings\": [";
  const auto& G = X.gluings();
  for (std::size_t k = 0; k < G.size(); ++k) {
    const auto& g = G[k];
    s += k ? ",\n    " : "\n    ";
    s += "{\"from\": {\"tet\": " + json(T[std::size_t(g.from.tet)].id).dump() +
         ", \"face\": " + std::to_string(g.from.face) + "}, \"to\": {\"tet\": " +
         json(T[std::size_t(g.to.tet)].id).dump() + ", \"face\": " + std::to_string(g.to.face) +
         "}, \"vertex_map\": [" + std::to_string(g.vertex_map[0]) + ", " +
         std::to_string(g.vertex_map[1]) + ", " + std::to_string(g.vertex_map[2]) + "]}";
  }
  s += G.empty() ? "]" : "\n  ]";
  if (!X.boundary_state.empty()) {
    s += ",\n  \"boundary_state\": [";
    for (std::size_t k = 0; k < X.boundary_state.size(); ++k) {
      const auto& bv = X.boundary_state[k];
      s += k ? ",\n    " : "\n    ";
      s += "{\"tet\": " + json(bv.tet).dump() + ", \"edge\": [" + std::to_string(bv.edge[0]) +
           ", " + std::to_string(bv.edge[1]) + "], \"value\": " + num(bv.value) + "}";
    }
    s += "\n  ]";
  }
  s += "\n}\n";
  return s;
}

}  // namespace tqft
