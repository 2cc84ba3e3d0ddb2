#include <map>
#include <set>

#include "doctest.h"
#include "tqft/identities.hpp"

using namespace tqft;

namespace {

const ModularParameter& p1() {
  static const ModularParameter p = make_parameter(1.0);
  return p;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

std::map<std::string, std::vector<IdentityReport>> by_name(const std::vector<IdentityReport>& rs) {
  std::map<std::string, std::vector<IdentityReport>> out;
  for (const auto& r : rs) out[r.identity].push_back(r);
  return out;
}

}  // namespace

TEST_CASE("Phi_b functional equations") {
  for (double b : {1.0, 0.8, 1.2}) {
    const ModularParameter p = make_parameter(b);
    CHECK(check_inversion(cd(0.4, 0.1), p).pass);
    CHECK(check_shift(cd(-0.3, 0.05), false, p).pass);
    CHECK(check_shift(cd(-0.3, 0.05), true, p).pass);
    CHECK(check_unitarity(cd(1.7), p).pass);
  }
  CHECK(check_product_oracle(cd(0.2, 0.1), make_parameter(std::exp(kI * kPi / 6.0))).pass);
}

TEST_CASE("quasi-classical fit") {
  const QuasiclassicalFit f = quasiclassical_fit(0.5, {0.2, 0.1, 0.05});
  REQUIRE(f.defect.size() == 3);
  CHECK(f.slope >= 3.5);
  CHECK(f.defect[2] < f.defect[0]);
}

TEST_CASE("pentagon at the reference shapes") {
  const auto s = pentagon_shapes(0.05, 0.05, 0.05, 0.1, 0.1);
  CHECK_NOTHROW(require_pentagon_conditions(s));
  CHECK(std::abs(pentagon_pe(s)) < 1e-12);
  CHECK(check_pentagon(s, 0.0, 0.0, 0.0, 0.0, p1()).pass);
  CHECK(check_pentagon(s, 0.3, 0.7, 0.1, 0.55, p1()).pass);
  CHECK(check_pentagon_noncompact(s, 0.3, -0.2, p1()).pass);

  const auto t = pentagon_shapes(0.05, 0.05, 0.05, 0.1, 0.15);
  CHECK(std::abs(pentagon_pe(t) - 0.1) < 1e-12);
  CHECK(check_pentagon(t, 0.2, 0.4, 0.6, 0.8, p1()).pass);
}

TEST_CASE("pentagon refuses infeasible shapes and flags a broken one") {
  auto s = pentagon_shapes(0.05, 0.05, 0.05, 0.1, 0.1);
  s[2].c += 0.01;
  CHECK_THROWS_AS(require_pentagon_conditions(s), ShapeInfeasible);
  CHECK_THROWS_AS(check_pentagon(s, 0, 0, 0, 0, p1()), ShapeInfeasible);
  const IdentityReport r = check_pentagon(s, 0, 0, 0, 0, p1(), 1e-3, false);
  CHECK(r.defect > 1e-3);
  CHECK_FALSE(r.pass);
  CHECK_THROWS_AS(require_pentagon_conditions(pentagon_shapes(0.3, 0.3, 0.3, 0.3, 0.3)),
                  ShapeInfeasible);
}

TEST_CASE("Ramanujan integral outside its domain") {
  // the sample point u = -0.3i, v = 0.3i violates the convergence conditions
  CHECK_FALSE(ramanujan_admissible(cd(0.0, -0.3), cd(0.0, 0.3), cd(0.0, -0.2), p1()));
  CHECK_THROWS_AS(ramanujan_psi(cd(0.0, -0.3), cd(0.0, 0.3), cd(0.0, -0.2), p1()), DomainError);
}

TEST_CASE("Fourier transforms of Phi_b") {
  const cd w{0.0, -0.1};
  for (int sign : {1, -1}) {
    const FourierValues v = fourier_phib(sign, w, p1());
    CHECK(rel(v.numeric, v.closed_form) < 1e-7);
    CHECK(rel(v.closed_form, v.closed_form_2) < 1e-12);
    CHECK(rel(fourier_phib_closed(sign, w, p1()), v.closed_form) < 1e-14);
  }
  CHECK(rel(fourier_inverse(1, 0.2, p1()), phib(0.2, p1())) < 1e-6);
  CHECK(rel(fourier_inverse(-1, 0.2, p1()), 1.0 / phib(0.2, p1())) < 1e-6);
}

TEST_CASE("contour integral of a Gaussian") {
  const cd v = contour_integral([](cd x) { return std::exp(-kPi * x * x); }, Contour{cd(0.0, -0.05)});
  CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("hypergeometric integrals reject inadmissible data") {
  CHECK_THROWS_AS(ihg({cd(0.0, 2.0)}, {}, cd(0.1), p1()), DomainError);
  CHECK_FALSE(ramanbar_admissible(cd(0.0, -2.0), cd(0.0), p1()));
}

TEST_CASE("appendix suite passes and its controls fail") {
  const auto rs = by_name(run_suite("appendix", 3, 4, 1));
  for (const char* id : {"ramanujan", "ramanujan_closed_forms", "raman", "fourier_plus",
                         "fourier_minus", "finv_plus", "finv_minus", "fourier1_limit", "ihg1",
                         "ramanbar", "ramanbar_ihg1", "heine", "euler_heine", "saalschutz",
                         "saalschutz_limit", "saalschutz_limit_surrogate", "quasiclassical"}) {
    INFO(id);
    REQUIRE(rs.count(id) == 1);
    for (const auto& r : rs.at(id)) CHECK(r.pass);
  }
  for (const char* id : {"ramanujan_control", "saalschutz_control"}) {
    INFO(id);
    REQUIRE(rs.count(id) == 1);
    for (const auto& r : rs.at(id)) {
      CHECK(r.control);
      CHECK(r.defect > 1e-3);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("weight symmetries") {
  const Shape s{0.1, 0.15};
  CHECK(check_fund1(s, 0.3, 0.6, p1()).pass);
  CHECK(check_fund2(s, 0.3, 0.6, p1()).pass);
  CHECK(check_gac_gba(s, 0.3, 0.6, p1()).pass);
  CHECK(check_gac_psicb(s, 0.3, 0.6, p1()).pass);
  for (int k = 0; k < 4; ++k) CHECK(check_wgz_intertwining(k, 0.25, 0.8).pass);
  CHECK(check_wgz_roundtrip(0.37).pass);
  CHECK(check_quasi_periodicity(s, 0.37, 0.61, p1()).pass);
  const TetEdgeValues x{0.13, 0.71, 0.42, 0.05, 0.88, 0.27};
  CHECK(check_symmetry_orbit(s, x, p1()).pass);
  for (const auto& r : check_symmetries(s, 3, p1(), 1e-9, 5)) CHECK(r.pass);
}

TEST_CASE("suites are deterministic in the seed") {
  const auto a = run_suite("pentagon", 7, 2, 1);
  const auto b = run_suite("pentagon", 7, 2, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json() == b[i].to_json());
  const auto c = run_suite("symmetries", 7, 2, 1);
  const auto d = run_suite("symmetries", 8, 2, 1);
  CHECK(c.front().to_json() != d.front().to_json());
}

TEST_CASE("every suite passes with few samples") {
  for (const auto& name : suite_names()) {
    if (name == "all") continue;
    for (const auto& r : run_suite(name, 1, 2, 0)) {
      INFO(r.to_json());
      CHECK(r.pass);
    }
  }
}

TEST_CASE("suite argument handling") {
  CHECK(run_suite("all", 1, 0, 1).empty());
  CHECK_THROWS_AS(run_suite("nonsense", 1, 3, 1), ValidationError);
  CHECK_THROWS_AS(run_suite("qdilog", 1, -1, 1), ValidationError);
}

TEST_CASE("report json") {
  const IdentityReport r = make_report("x", {{"z", cd(1.0, 2.0)}}, 1.0, 1.0, 1e-9);
  const std::string j = r.to_json();
  CHECK(r.pass);
  CHECK(j.find("\"identity\":\"x\"") != std::string::npos);
  CHECK(j.find("\"z\":[1.0,2.0]") != std::string::npos);
}
