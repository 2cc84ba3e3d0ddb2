#pragma once

// The psi family, the WGZ transform and the tetrahedral weight g_{a,c}.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "tqft/qdilog.hpp"

namespace tqft {

/// Angle fractions (units of 2 pi) of a tetrahedron: a at edges 01/23,
/// c at 03/12, and the derived middle angle at 02/13.
struct Shape {
  cd a;
  cd c;

  cd b() const { return 0.5 - a - c; }
  bool positive() const {
    return a.real() > 0 && c.real() > 0 && b().real() > 0;
  }
  bool operator==(const Shape&) const = default;
};

cd log_psi(const Shape& s, cd t, const ModularParameter& p);
cd psi(const Shape& s, cd t, const ModularParameter& p);
/// Second displayed form, kept for cross-checking.
cd psi_form2(const Shape& s, cd t, const ModularParameter& p);

cd log_psi_bar(const Shape& s, cd t, const ModularParameter& p);
cd psi_bar(const Shape& s, cd t, const ModularParameter& p);
cd psi_bar_form2(const Shape& s, cd t, const ModularParameter& p);

/// Closed form e^{-i pi / 12} psi_{c,b}(x).
cd log_tilde_psi_prime(const Shape& s, cd x, const ModularParameter& p);
cd tilde_psi_prime(const Shape& s, cd x, const ModularParameter& p);
/// e^{i pi x^2} tilde_psi_prime(x).
cd tilde_psi(const Shape& s, cd x, const ModularParameter& p);

/// Numeric Fourier transform of psi over the real line; a test oracle.
cd fourier_tpsi(const Shape& s, double x, const ModularParameter& p);

/// Exponential decay rates of |psi_{a,c}(t)| for t -> -inf and t -> +inf.
struct DecayRates {
  double left;
  double right;
};
DecayRates psi_decay(const Shape& s, const ModularParameter& p);

/// Truncated lattice sum of tilde_psi_prime(s0 + m) e^{i pi t (s0 + 2m)}:
/// the per-s0 data is computed once and reused for any t with
/// |Im t| <= im_t_max.
class WeightSeries {
 public:
  WeightSeries(const Shape& s, cd s0, const ModularParameter& p, double tol,
               double im_t_max = 0.0);
  cd operator()(cd t) const;
  int m_lo() const { return m_lo_; }
  int size() const { return int(log_terms_.size()); }

 private:
  cd s0_;
  int m_lo_ = 0;
  std::vector<cd> log_terms_;
};

/// The weight g_{a,c}(x, y); accepts complex arguments within the
/// convergent regime.
cd g(const Shape& s, cd x, cd y, const ModularParameter& p, double tol = 1e-10);

/// g_{a,b}(-x, y - x - 1/2) e^{-i pi x / 2}, the holomorphic form of the
/// conjugate weight.
cd g_bar(const Shape& s, cd x, cd y, const ModularParameter& p, double tol = 1e-10);

/// A function on the line together with exponential decay rates.
struct DecayingFunction {
  std::function<cd(double)> f;
  double rate_left;
  double rate_right;
};

/// e^{i pi x y} sum_m f(x + m) e^{2 pi i m y}, truncated once the geometric
/// tail is below tol.
cd wgz(const DecayingFunction& f, double x, double y, double tol = 1e-13);

/// A section g(x, y) with g(x+1, y) = e^{-i pi y} g and g(x, y+1) = e^{i pi x} g.
struct QuasiPeriodicSection {
  std::function<cd(double, double)> evaluator;

  cd operator()(double x, double y) const { return evaluator(x, y); }
  /// The multipliers for unit shifts of x and y.
  static cd px(double y) { return std::exp(-kI * kPi * y); }
  static cd py(double x) { return std::exp(kI * kPi * x); }
};

/// Largest deviation from quasi-periodicity at (x, y).
double quasi_periodicity_defect(const QuasiPeriodicSection& s, double x, double y);

/// int_0^1 section(x, y) e^{-i pi x y} dy by the periodic rule with doubling.
cd wgz_inverse(const QuasiPeriodicSection& s, double x, double tol = 1e-12);

// ---- phi_b = W Phi_b and its continuation ----

enum class PhiRegion { d1, d2, d3, functional_step };

struct PhiValue {
  cd value;
  PhiRegion region;
};

/// Direct sum, only where it converges (Im x > -Im y > 0).
cd phi_wgz_direct(cd x, cd y, const ModularParameter& p, double tol = 1e-14);

/// phi_b on D1 u D2 u D3 and one functional-equation step beyond.
PhiValue phi_wgz_eval(cd x, cd y, const ModularParameter& p, double tol = 1e-14);
cd phi_wgz(cd x, cd y, const ModularParameter& p, double tol = 1e-14);

/// Region-3 and region-2 relocations; exposed for tests.
cd phi_wgz_via_d2(cd x, cd y, const ModularParameter& p, double tol = 1e-14);
cd phi_wgz_via_d3(cd x, cd y, const ModularParameter& p, double tol = 1e-14);

/// The convergence margin of the direct sum at (x, y): the smaller decay
/// rate; positive inside D1.
double phi_direct_margin(cd x, cd y);

cd xi(cd x, const ModularParameter& p);
cd chi(cd x, cd y, const ModularParameter& p);

// ---- Boltzmann weight ----

/// Edge values of a tetrahedron in the order 01, 02, 03, 12, 13, 23.
using TetEdgeValues = std::array<double, 6>;

/// The two alternating sums fed into g.
std::array<double, 2> weight_arguments(const TetEdgeValues& x);

cd boltzmann_weight(const Shape& s, int sign, const TetEdgeValues& x,
                    const ModularParameter& p, double tol = 1e-10);

}  // namespace tqft
