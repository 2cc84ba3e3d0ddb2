#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tqft/integrator.hpp"

using namespace tqft;

namespace {

Triangulation load(const std::string& name) {
  std::ifstream in(std::string(TQFT_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_triangulation(ss.str());
}

const ModularParameter& p1() {
  static const ModularParameter p = make_parameter(1.0);
  return p;
}

// Assigns one value per edge class through (tet, edge) references.
void set_state(Triangulation& X, const std::vector<double>& vals) {
  X.boundary_state.clear();
  std::vector<int> done(std::size_t(X.num_edge_classes()), 0);
  std::size_t k = 0;
  for (int t = 0; t < int(X.tetrahedra().size()); ++t) {
    for (int e = 0; e < 6; ++e) {
      const int c = X.edge_class(t, e);
      if (done[std::size_t(c)] || !X.edge_classes()[std::size_t(c)].boundary) continue;
      done[std::size_t(c)] = 1;
      X.boundary_state.push_back({X.tetrahedra()[std::size_t(t)].id, kEdgeVertices[std::size_t(e)],
                                  vals[k++ % vals.size()]});
    }
  }
}

}  // namespace

TEST_CASE("one tetrahedron is its Boltzmann weight") {
  const Triangulation T = load("tetrahedron.json");
  const IntegrationResult r = partition_function(T, p1());
  CHECK(r.dims == 0);
  const TetEdgeValues x{0.2, 0.45, 0.1, 0.7, 0.35, 0.9};
  CHECK(std::abs(r.value - boltzmann_weight(T.tetrahedra()[0].shape, 1, x, p1())) < 1e-12);
}

TEST_CASE("boundary values follow the stored state") {
  const Triangulation X = load("bipyramid2.json");
  const auto v = boundary_values(X);
  CHECK(v.size() == 9);
  for (double x : v) CHECK((x >= 0.0 && x < 1.0));
  Triangulation Y = X;
  Y.boundary_state.pop_back();
  CHECK_THROWS_AS(boundary_values(Y), ValidationError);
}

TEST_CASE("the two sides of the bipyramid agree at several boundary states") {
  const Triangulation X0 = load("bipyramid2.json");
  const std::vector<std::vector<double>> states{
      {0.13, 0.71, 0.42, 0.05, 0.88, 0.27, 0.6, 0.33, 0.91},
      {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {0.5, 0.25, 0.75, 0.1, 0.9, 0.3, 0.2, 0.8, 0.4}};
  for (int sign : {1, -1}) {
    for (const auto& s : states) {
      Triangulation X = Triangulation::build(
          {{"A", sign, {0.1, 0.15}}, {"B", sign, {0.1, 0.15}}}, X0.gluings(), 0.0);
      set_state(X, s);
      MoveSpec mv;
      mv.face = {0, 2};
      const InvarianceReport r = pachner_invariance_check(X, mv, p1());
      CHECK(r.defect < 1e-5);
      CHECK(r.after.dims == 1);
    }
  }
}

TEST_CASE("an unbalanced move needs the level update") {
  Triangulation X = Triangulation::build({{"A", 1, {0.1, 0.15}}, {"B", 1, {0.1, 0.2}}},
                                         {{{0, 2}, {1, 1}, {0, 2, 3}}}, 0.0);
  set_state(X, {0.13, 0.71, 0.42, 0.05, 0.88, 0.27, 0.6, 0.33, 0.91});
  MoveSpec mv;
  mv.face = {0, 2};
  mv.a0 = cd(0.05);
  const InvarianceReport with = pachner_invariance_check(X, mv, p1(), {}, true);
  const InvarianceReport without = pachner_invariance_check(X, mv, p1(), {}, false);
  CHECK(std::abs(with.move.pe - 0.1) < 1e-12);
  CHECK(with.defect < 1e-5);
  CHECK(without.defect > 1e-2);
}

TEST_CASE("3-2 direction") {
  Triangulation Y = load("bipyramid3.json");
  MoveSpec mv;
  mv.kind = MoveSpec::three_two;
  mv.edge = Y.internal_edges()[0];
  CHECK(pachner_invariance_check(Y, mv, p1()).defect < 1e-5);
}

TEST_CASE("contour shift inside the strip leaves the integral unchanged") {
  const Triangulation Y = load("bipyramid3.json");
  const int e = Y.internal_edges()[0];
  CHECK(contour_shift_check(Y, e, 0.0, p1()) == 0.0);
  CHECK(contour_shift_check(Y, e, 0.05, p1()) < 1e-8);
  CHECK(contour_shift_check(Y, e, -0.05, p1()) < 1e-8);
  IntegratorOptions stub;
  stub.tol = 1e-2;
  stub.weight_override = [](const ShapedTetrahedron&, cd s, cd t) {
    return std::exp(2.0 * s + 0.3 * t);
  };
  CHECK(contour_shift_check(Y, e, 0.05, p1(), stub) > 1e-3);
}

TEST_CASE("shifting a boundary edge by one gives the quasi-periodicity factor") {
  const Triangulation T = load("tetrahedron.json");
  std::vector<double> v = boundary_values(T);
  const Shape s = T.tetrahedra()[0].shape;
  const TetEdgeValues x{v[0], v[1], v[2], v[3], v[4], v[5]};
  const auto st = weight_arguments(x);
  // edge 02 enters s with coefficient 1 and t with coefficient 1
  TetEdgeValues y = x;
  y[1] += 1.0;
  const cd base = boltzmann_weight(s, 1, x, p1());
  const cd moved = boltzmann_weight(s, 1, y, p1());
  const double ds = 1.0, dt = 1.0;
  const cd predicted =
      std::exp(-kI * kPi * ds * st[1]) * std::exp(kI * kPi * dt * (st[0] + ds)) * base;
  CHECK(std::abs(moved - predicted) < 1e-10);
  const cd base_bar = boltzmann_weight(s, -1, x, p1());
  const cd moved_bar = boltzmann_weight(s, -1, y, p1());
  const cd predicted_bar =
      std::exp(kI * kPi * ds * st[1]) * std::exp(-kI * kPi * dt * (st[0] + ds)) * base_bar;
  CHECK(std::abs(moved_bar - predicted_bar) < 1e-10);
}

TEST_CASE("the periodic rule is exact on low trigonometric polynomials") {
  // one internal edge: integrate through the override, weights e^{2 pi i k s}
  const Triangulation Y = load("bipyramid3.json");
  for (int k : {0, 1, 3, 7}) {
    IntegratorOptions opt;
    opt.grid_start = 16;
    opt.no_prefactor = true;
    opt.weight_override = [k](const ShapedTetrahedron& t, cd s, cd) {
      return t.id == "A.B.2" ? std::exp(2.0 * kPi * kI * double(k) * s) : cd(1.0);
    };
    const IntegrationResult r = partition_function(Y, p1(), opt);
    if (k == 0) CHECK(std::abs(r.value - 1.0) < 1e-14);
    else CHECK(std::abs(r.value) < 1e-14);
  }
}

TEST_CASE("too many internal edges are refused") {
  // double of the two-tetrahedron side: nine internal edges
  const Triangulation X = load("bipyramid2.json");
  std::vector<ShapedTetrahedron> tets = X.tetrahedra();
  for (const auto& t : X.tetrahedra()) tets.push_back({t.id + "'", -t.sign, t.shape});
  std::vector<FaceGluing> gl = X.gluings();
  for (FaceGluing g : X.gluings()) {
    g.from.tet += 2;
    g.to.tet += 2;
    gl.push_back(g);
  }
  for (const FaceRef& f : X.boundary_faces()) gl.push_back({f, {f.tet + 2, f.face}, face_vertices(f.face)});
  const Triangulation D = Triangulation::build(tets, gl, 0.0);
  CHECK(D.internal_edges().size() == 9);
  CHECK_THROWS_AS(partition_function(D, p1()), DimensionGuard);
}

TEST_CASE("results are deterministic across thread counts") {
  const Triangulation Y = load("bipyramid3.json");
  IntegratorOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const IntegrationResult a = partition_function(Y, p1(), one);
  const IntegrationResult b = partition_function(Y, p1(), many);
  CHECK(a.value == b.value);
  CHECK(a.grid == b.grid);
}

TEST_CASE("thread budget") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("closed double of one tetrahedron") {
  // Z equals the squared norm of psi for the double of a tetrahedron
  const Triangulation S = load("s3_double.json");
  IntegratorOptions opt;
  opt.tol = 1e-4;
  opt.grid_start = 8;
  const IntegrationResult r = partition_function(S, p1(), opt);
  // squared L2 norm of psi at the shape (c, b), computed separately
  CHECK(std::abs(r.value - 0.5257311121191337) < 1e-4);
}

TEST_CASE("json output") {
  const IntegrationResult r = partition_function(load("tetrahedron.json"), p1());
  const std::string j = r.to_json();
  CHECK(j.find("\"value\"") != std::string::npos);
  CHECK(j.find("\"grid\"") != std::string::npos);
}

TEST_CASE("grid doubling converges geometrically") {
  IntegratorOptions opt;
  opt.tol = 1e-14;
  opt.grid_start = 8;
  const IntegrationResult r = partition_function(load("bipyramid3.json"), p1(), opt);
  REQUIRE(r.history.size() >= 4);
  std::vector<double> diff;
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    diff.push_back(std::abs(r.history[i].second - r.history[i - 1].second));
  }
  for (std::size_t i = 1; i < diff.size(); ++i) {
    if (r.history[i + 1].first >= 32 && diff[i - 1] > 1e-13) CHECK(diff[i] < 0.1 * diff[i - 1]);
  }
}
