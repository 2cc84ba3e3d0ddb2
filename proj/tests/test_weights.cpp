#include <cmath>
#include <random>

#include "doctest.h"
#include "tqft/quadrature.hpp"
#include "tqft/weights.hpp"

using namespace tqft;

namespace {

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

const ModularParameter& p1() {
  static const ModularParameter p = make_parameter(1.0);
  return p;
}

}  // namespace

TEST_CASE("shape bookkeeping") {
  const Shape s{0.1, 0.15};
  CHECK(s.b().real() == doctest::Approx(0.25));
  CHECK(s.positive());
  CHECK_FALSE((Shape{0.3, 0.3}).positive());
}

TEST_CASE("both displayed forms of psi and psi_bar agree") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.02, 0.2);
  std::uniform_real_distribution<double> t(-3.0, 3.0);
  for (double b : {1.0, 0.8}) {
    const ModularParameter p = make_parameter(b);
    for (int i = 0; i < 50; ++i) {
      const Shape s{u(rng), u(rng)};
      const cd x{t(rng), 0.1 * t(rng)};
      CHECK(rel(psi(s, x, p), psi_form2(s, x, p)) < 1e-12);
      CHECK(rel(psi_bar(s, x, p), psi_bar_form2(s, x, p)) < 1e-12);
    }
  }
}

TEST_CASE("psi_bar is the conjugate of psi for real data") {
  const Shape s{0.1, 0.15};
  for (double t : {-1.5, 0.0, 0.7, 2.2}) {
    CHECK(rel(psi_bar(s, t, p1()), std::conj(psi(s, t, p1()))) < 1e-12);
  }
}

TEST_CASE("psi decays at the predicted rates") {
  const Shape s{0.1, 0.15};
  const DecayRates r = psi_decay(s, p1());
  CHECK(r.left == doctest::Approx(4.0 * kPi * 0.1));
  CHECK(r.right == doctest::Approx(4.0 * kPi * 0.15));
  const double left = std::abs(psi(s, -20.0, p1())) / std::abs(psi(s, -19.0, p1()));
  const double right = std::abs(psi(s, 20.0, p1())) / std::abs(psi(s, 19.0, p1()));
  CHECK(left == doctest::Approx(std::exp(-r.left)).epsilon(1e-6));
  CHECK(right == doctest::Approx(std::exp(-r.right)).epsilon(1e-6));
}

TEST_CASE("closed-form transforms against the numeric Fourier oracle") {
  const Shape s{0.1, 0.15};
  for (double x : {-0.8, -0.1, 0.0, 0.45, 1.3}) {
    const cd oracle = fourier_tpsi(s, x, p1());
    CHECK(rel(tilde_psi(s, x, p1()), oracle) < 1e-8);
    CHECK(rel(std::exp(kI * kPi * x * x) * tilde_psi_prime(s, x, p1()), oracle) < 1e-8);
    const Shape sw{s.b(), s.c};
    CHECK(rel(std::exp(kI * kPi / 12.0) * psi_bar(sw, -x, p1()), oracle) < 1e-8);
  }
}

TEST_CASE("tilde_psi_prime decays both ways") {
  const Shape s{0.1, 0.15};
  CHECK(std::abs(tilde_psi_prime(s, -15.0, p1())) < 1e-6);
  CHECK(std::abs(tilde_psi_prime(s, 15.0, p1())) < 1e-6);
}

TEST_CASE("g is the WGZ transform of tilde_psi_prime") {
  const Shape s{0.1, 0.15};
  const Shape sw{s.c, s.b()};
  const DecayRates r = psi_decay(sw, p1());
  const DecayingFunction f{[&](double t) { return tilde_psi_prime(s, t, p1()); }, r.left,
                           r.right};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(std::abs(g(s, x, y, p1(), 1e-14) - wgz(f, x, y, 1e-15)) < 1e-10);
  }
}

TEST_CASE("g quasi-periodicity and the WGZ inverse") {
  const Shape s{0.12, 0.2};
  const QuasiPeriodicSection sec{[&](double x, double y) { return g(s, x, y, p1(), 1e-14); }};
  for (double x : {0.1, 0.6}) {
    for (double y : {0.3, 0.85}) CHECK(quasi_periodicity_defect(sec, x, y) < 1e-10);
    CHECK(std::abs(wgz_inverse(sec, x) - tilde_psi_prime(s, x, p1())) < 1e-8);
  }
}

TEST_CASE("g at the symmetric shape: lattice sum at double truncation") {
  const Shape s{1.0 / 6.0, 1.0 / 6.0};
  auto sum = [&](int m) {
    cd acc = 0.0;
    for (int k = -m; k <= m; ++k) acc += tilde_psi_prime(s, double(k), p1());
    return acc;
  };
  CHECK(std::abs(sum(40) - sum(80)) < 1e-12);
  CHECK(std::abs(g(s, 0.0, 0.0, p1(), 1e-14) - sum(80)) < 1e-12);
}

TEST_CASE("g_bar is a reflection of g") {
  const Shape s{0.1, 0.15};
  const Shape sr{s.a, s.b()};
  for (double x : {0.2, 0.7}) {
    for (double y : {0.1, 0.55}) {
      const cd expected = g(sr, -x, y - x - 0.5, p1(), 1e-14) * std::exp(-kI * kPi * x / 2.0);
      CHECK(std::abs(g_bar(s, x, y, p1(), 1e-14) - expected) < 1e-12);
      // real b and real shape
      CHECK(std::abs(g_bar(s, x, y, p1(), 1e-14) - std::conj(g(s, x, y, p1(), 1e-14))) < 1e-12);
    }
  }
}

TEST_CASE("complex shapes stay holomorphic in the positive half-space") {
  const Shape s{cd(0.1, 0.02), cd(0.15, -0.01)};
  const cd v = g(s, 0.3, 0.4, p1(), 1e-13);
  CHECK(std::isfinite(v.real()));
  const QuasiPeriodicSection sec{[&](double x, double y) { return g(s, x, y, p1(), 1e-14); }};
  CHECK(quasi_periodicity_defect(sec, 0.3, 0.4) < 1e-10);
}

TEST_CASE("WGZ isometry on a Gaussian") {
  auto f = [](double t) { return cd(std::exp(-kPi * 1.3 * (t - 0.2) * (t - 0.2))); };
  const DecayingFunction df{f, 2.0, 2.0};
  const int n = 48;
  double norm_w = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm_w += std::norm(wgz(df, double(i) / n, double(j) / n));
  norm_w /= double(n) * n;
  const double norm_f = std::sqrt(1.0 / (2.0 * 1.3));
  CHECK(norm_w == doctest::Approx(norm_f).epsilon(1e-8));
}

TEST_CASE("Boltzmann weight") {
  const Shape s{0.1, 0.15};
  const TetEdgeValues zero{};
  CHECK(std::abs(boltzmann_weight(s, 1, zero, p1()) - g(s, 0.0, 0.0, p1())) < 1e-13);

  const TetEdgeValues x{0.13, 0.71, 0.42, 0.05, 0.88, 0.27};
  TetEdgeValues shifted = x;
  for (double& v : shifted) v += 0.37;
  for (int sign : {1, -1}) {
    CHECK(std::abs(boltzmann_weight(s, sign, x, p1()) - boltzmann_weight(s, sign, shifted, p1())) <
          1e-12);
  }
  const auto st = weight_arguments(x);
  CHECK(st[0] == doctest::Approx(0.71 + 0.88 - 0.42 - 0.05));
  CHECK(st[1] == doctest::Approx(0.71 + 0.88 - 0.13 - 0.27));
  CHECK(std::abs(boltzmann_weight(s, -1, x, p1()) - g_bar(s, st[0], st[1], p1())) < 1e-13);
  CHECK(std::abs(boltzmann_weight(s, -1, x, p1()) - std::conj(boltzmann_weight(s, 1, x, p1()))) <
        1e-12);
}

TEST_CASE("phi_b = W Phi_b: relocations agree with the direct sum") {
  const cd x{0.3, 0.7};
  const cd y{0.2, -0.3};
  const cd direct = phi_wgz_direct(x, y, p1());
  CHECK(rel(phi_wgz_via_d2(x, y, p1()), direct) < 1e-9);
  CHECK(rel(phi_wgz_via_d3(x, y, p1()), direct) < 1e-9);
  CHECK(rel(phi_wgz_eval(x, y, p1()).value, direct) < 1e-9);
  CHECK(phi_direct_margin(x, y) > 0.0);
  CHECK_THROWS_AS(phi_wgz_direct(cd(0.3, 0.2), cd(0.1, -0.4), p1()), DomainError);
}

TEST_CASE("phi_b quasi-periodicity") {
  const cd x{0.3, 0.7};
  const cd y{0.2, -0.3};
  const cd v = phi_wgz(x, y, p1());
  CHECK(rel(phi_wgz(x + 1.0, y, p1()), std::exp(-kI * kPi * y) * v) < 1e-9);
  CHECK(rel(phi_wgz(x, y + 1.0, p1()), std::exp(kI * kPi * x) * v) < 1e-9);
}

TEST_CASE("xi and chi vanish on the pole families") {
  CHECK(std::abs(xi(0.0, p1())) < 1e-15);
  const cd y{0.1, -0.4};
  CHECK(std::abs(chi(p1().c_b, y, p1())) < 1e-15);
  CHECK(std::abs(chi(cd(0.3, 0.2), 0.0, p1())) < 1e-15);
  const cd x{0.3, 0.2};
  CHECK(std::abs(chi(x, 0.5 - x, p1())) < 1e-15);
  CHECK(std::abs(chi(x, y, p1())) > 1e-3);
}

TEST_CASE("phi_b chi stays bounded near a pole of phi_b") {
  const cd y{0.0, -0.5};
  const cd pole = p1().c_b + kI;  // double pole for b = 1
  const cd x0 = pole + 0.1;
  const double start = std::abs(phi_wgz(x0, y, p1()) * chi(x0, y, p1()));
  const double phi_start = std::abs(phi_wgz(x0, y, p1()));
  for (double d : {0.01, 0.001}) {
    const cd x = pole + d;
    CHECK(std::abs(phi_wgz(x, y, p1()) * chi(x, y, p1())) < 10.0 * start);
  }
  CHECK(std::abs(phi_wgz(pole + 0.001, y, p1())) > 1e3 * phi_start);
}
