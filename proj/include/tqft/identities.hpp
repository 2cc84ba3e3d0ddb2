#pragma once

// Numeric checks of the closed-form identities satisfied by Phi_b, the
// tetrahedral weights and the hypergeometric-type integrals.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tqft/weights.hpp"

namespace tqft {

struct IdentityReport {
  std::string identity;
  std::vector<std::pair<std::string, cd>> params;
  cd lhs;
  cd rhs;
  double defect = 0.0;  // |lhs - rhs| / |rhs|
  double tol = 0.0;
  /// A control expects the defect to exceed tol.
  bool control = false;
  bool pass = false;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

IdentityReport make_report(std::string identity, std::vector<std::pair<std::string, cd>> params,
                           cd lhs, cd rhs, double tol, bool control = false);

// ---- contours ----

/// Path from infinity along -left_dir into origin, then out along right_dir.
struct Contour {
  cd origin = 0.0;
  cd left_dir = -1.0;
  cd right_dir = 1.0;
};

cd contour_integral(const std::function<cd(cd)>& f, const Contour& c, double rel_tol = 1e-13);

// ---- Phi_b relations ----

IdentityReport check_inversion(cd z, const ModularParameter& p, double tol = 1e-9);
/// inverse_b selects the 1/b shift.
IdentityReport check_shift(cd z, bool inverse_b, const ModularParameter& p, double tol = 1e-9);
IdentityReport check_unitarity(cd z, const ModularParameter& p, double tol = 1e-10);
IdentityReport check_product_oracle(cd z, const ModularParameter& p, double tol = 1e-8);

struct QuasiclassicalFit {
  std::vector<double> b;
  std::vector<double> defect;  // after the first correction term
  double slope = 0.0;          // log-log slope of defect against b
};
QuasiclassicalFit quasiclassical_fit(double x, const std::vector<double>& bs);

// ---- pentagon ----

/// Shapes T0..T4 from the free data (a0, a2, a4, c0, c4).
std::array<Shape, 5> pentagon_shapes(double a0, double a2, double a4, double c0, double c4);
/// 2(c0 + a2 + c4) - 1/2.
cd pentagon_pe(const std::array<Shape, 5>& s);
/// Throws ShapeInfeasible unless the five relations and positivity hold.
void require_pentagon_conditions(const std::array<Shape, 5>& s, double tol = 1e-12);

IdentityReport check_pentagon(const std::array<Shape, 5>& s, double alpha, double beta,
                              double gamma, double delta, const ModularParameter& p,
                              double tol = 1e-6, bool enforce = true);
IdentityReport check_pentagon_noncompact(const std::array<Shape, 5>& s, double alpha,
                                         double gamma, const ModularParameter& p,
                                         double tol = 1e-6, bool enforce = true);

// ---- Ramanujan integral and Fourier transforms ----

bool ramanujan_admissible(cd u, cd v, cd w, const ModularParameter& p, double margin = 0.0);

struct RamanujanValues {
  cd numeric;
  cd closed_form_1;
  cd closed_form_2;
};
/// Throws DomainError outside the admissible domain.
RamanujanValues ramanujan_psi(cd u, cd v, cd w, const ModularParameter& p);
cd ramanujan_numeric(cd u, cd v, cd w, const ModularParameter& p);
cd ramanujan_closed_1(cd u, cd v, cd w, const ModularParameter& p);
cd ramanujan_closed_2(cd u, cd v, cd w, const ModularParameter& p);

struct FourierValues {
  cd numeric;
  cd closed_form;    // the zeta_o form
  cd closed_form_2;  // the zeta_o^{-1} form
};
/// Fourier transform of Phi_b^{sign}; the Gaussian tail is integrated along
/// a ray rotated by pi/8 off the real axis.
FourierValues fourier_phib(int sign, cd w, const ModularParameter& p);
cd fourier_phib_closed(int sign, cd w, const ModularParameter& p);
/// Inverse transform of the closed form along R - i eps (pole at 0 passed
/// from below), returning Phi_b(x)^{sign}.
cd fourier_inverse(int sign, cd x, const ModularParameter& p, double eps = 0.05);

// ---- the integrals I_n ----

bool ihg_admissible(const std::vector<cd>& a, const std::vector<cd>& b, cd w,
                    const ModularParameter& p, double margin = 0.0);
/// I_n(a_1..a_n; b_1..b_{n-1}; w). Throws DomainError when inadmissible.
cd ihg(const std::vector<cd>& a, const std::vector<cd>& b, cd w, const ModularParameter& p);
cd ihg1_closed(cd a, cd w, const ModularParameter& p);

bool ramanbar_admissible(cd a, cd w, const ModularParameter& p, double margin = 0.0);
cd ramanbar_numeric(cd a, cd w, const ModularParameter& p);
cd ramanbar_closed(cd a, cd w, const ModularParameter& p);

cd saalschutz_closed(cd a, cd b, cd c, cd d, const ModularParameter& p);
cd saalschutz_limit_closed(cd a, cd b, cd d, const ModularParameter& p);
bool saalschutz_admissible(cd a, cd b, cd c, cd d, const ModularParameter& p, double margin = 0.0);
bool saalschutz_limit_admissible(cd a, cd b, cd d, const ModularParameter& p, double margin = 0.0);

/// I_3(a, b, c; d, a + b + c - d - c_b + pin_offset; -c_b) against the
/// closed form; pin_offset != 0 breaks the hypothesis.
IdentityReport saalschutz_check(cd a, cd b, cd c, cd d, const ModularParameter& p,
                                double tol = 1e-6, double pin_offset = 0.0);
IdentityReport saalschutz_limit_check(cd a, cd b, cd d, const ModularParameter& p,
                                      double tol = 1e-6);
/// Numeric I_3 with c = c_re + i c_im against the limit closed form.
IdentityReport saalschutz_surrogate_check(cd a, cd b, cd d, double c_re,
                                          const ModularParameter& p, double tol = 1e-4);

IdentityReport heine_check(cd a, cd b, cd c, cd w, const ModularParameter& p, double tol = 1e-6);
IdentityReport euler_heine_check(cd a, cd b, cd c, cd w, const ModularParameter& p,
                                 double tol = 1e-6);

// ---- weight symmetries ----

IdentityReport check_fund1(const Shape& s, double x, double y, const ModularParameter& p,
                           double tol = 1e-9);
IdentityReport check_fund2(const Shape& s, double x, double y, const ModularParameter& p,
                           double tol = 1e-9);
IdentityReport check_gac_gba(const Shape& s, double x, double y, const ModularParameter& p,
                             double tol = 1e-9);
IdentityReport check_gac_psicb(const Shape& s, double x, double y, const ModularParameter& p,
                               double tol = 1e-9);

/// WGZ intertwining relations on a shifted Gaussian e^{-pi k (t - t0)^2}; which = 0..3 picks
/// WF, WF^{-1}, WG, WG^{-1}.
IdentityReport check_wgz_intertwining(int which, double x, double y, double tol = 1e-9);
IdentityReport check_wgz_roundtrip(double x, double tol = 1e-10);
IdentityReport check_quasi_periodicity(const Shape& s, double x, double y,
                                       const ModularParameter& p, double tol = 1e-10);

/// All 24 vertex orderings of one tetrahedron: the weight of each ordering
/// predicted by composing the generator relations against direct evaluation.
IdentityReport check_symmetry_orbit(const Shape& s, const TetEdgeValues& x,
                                    const ModularParameter& p, double tol = 1e-9);

/// fund1, fund2, gac-gba, gac-psicb at `samples` seeded points each.
std::vector<IdentityReport> check_symmetries(const Shape& s, int samples,
                                             const ModularParameter& p, double tol,
                                             std::uint64_t seed);

// ---- suites ----

/// Named suites: qdilog, pentagon, appendix, symmetries, all.
std::vector<std::string> suite_names();
/// Throws ValidationError for an unknown suite.
std::vector<IdentityReport> run_suite(const std::string& name, std::uint64_t seed, int samples,
                                      int threads = 0);

}  // namespace tqft
