#pragma once

// Faddeev's noncompact quantum dilogarithm Phi_b and its companions.

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "tqft/errors.hpp"

namespace tqft {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

/// The coupling b together with the constants derived from it.
struct ModularParameter {
  cd b;
  cd c_b;       // i(b + 1/b)/2
  cd hbar;      // (b + 1/b)^-2
  cd q, qbar;   // e^{i pi b^2}, e^{-i pi b^-2}
  cd zeta_o;    // e^{i pi (1 - 4 c_b^2)/12}
  cd zeta_inv;  // e^{i pi (1 + 2 c_b^2)/6}
  cd log_zeta_o;
  cd log_zeta_inv;

  double strip = 0.0;        // Im c_b, half-width of the analyticity strip
  double line_offset = 0.0;  // height of the integration line above the real axis
  double tail_bound = 0.0;   // bound on the contour integral for |Im z| <= strip/2

  // Equispaced rule on the integration line, used for |Im z| <= strip/2:
  // node k sits at w = k * trap_step + i line_offset, k = -trap_half..trap_half,
  // with the z-independent part of the integrand stored per node.
  double trap_step = 0.0;
  int trap_half = 0;
  std::shared_ptr<const std::vector<cd>> trap_weights;

  bool is_real() const { return b.imag() == 0.0; }
};

/// Requires Re b > 0, Im b >= 0; throws DomainError otherwise.
ModularParameter make_parameter(cd b);

/// Maps any b with Re b != 0 into the normalized quadrant using
/// Phi_b = Phi_{-b} = Phi_{1/b}, then calls make_parameter.
ModularParameter normalized_parameter(cd b);

struct StripPoint {
  cd z;
  bool in_strip = false;
};

StripPoint strip_point(cd z, const ModularParameter& p);

struct PhiOptions {
  double pole_radius = 1e-8;
  int max_ladder = 10000;
};

/// The defining contour integral at z. Valid for |Im z| < Im c_b; no use of
/// functional relations. This is the principal branch of ln Phi_b.
cd log_phib_integral(cd z, const ModularParameter& p);

/// Same branch as log_phib_integral, evaluated through the inversion relation
/// when Re z > 0. Requires |Im z| < Im c_b. For |Im z| <= Im c_b / 2 the
/// integral is done by the equispaced rule.
cd log_phib_strip(cd z, const ModularParameter& p);

/// A logarithm of Phi_b(z) anywhere off the poles (branch not canonical
/// outside the strip; exponentiate it).
cd log_phib(cd z, const ModularParameter& p, const PhiOptions& opt = {});

cd phib(cd z, const ModularParameter& p, const PhiOptions& opt = {});

/// 1 / Phi_b(z); throws ZeroError near a zero of Phi_b.
cd phib_bar(cd z, const ModularParameter& p, const PhiOptions& opt = {});

/// Ratio of q-Pochhammer products; needs Im(b^2) > 0.
cd phib_product_oracle(cd z, const ModularParameter& p);

/// (x; q)_inf truncated once |x q^k| < 1e-18. Needs |q| < 1.
cd q_pochhammer(cd x, cd q);

/// Jacobi theta sum_n exp(i pi tau n^2 + 2 pi i z n), Im tau > 0.
cd theta(cd z, cd tau);

enum class PoleZeroKind { zero, pole };

struct PoleZero {
  cd location;
  PoleZeroKind kind;
  int m = 0;
  int n = 0;
};

std::vector<PoleZero> pole_zero_locations(int m_max, int n_max, const ModularParameter& p);

/// Nearest pole (or zero, with sign = -1) of Phi_b to z, searched over the
/// lattice c_b + i m b + i n / b.
cd nearest_singularity(cd z, const ModularParameter& p, int sign);

enum class AsymptoticSector { unit, gaussian, theta_upper, theta_lower };

std::string to_string(AsymptoticSector s);

struct AsymptoticRegime {
  AsymptoticSector sector;
  cd leading;
};

/// Classifies arg z into the sectors of the behaviour at infinity and
/// returns the leading approximation. threshold <= 0 selects 5(1 + |c_b|).
AsymptoticRegime asymptotic_regime(cd z, const ModularParameter& p,
                                   double threshold = 0.0);

/// Partial sum of the small-b expansion of ln Phi_b(x / (2 pi b)).
/// Real b in (0, 0.5], order <= 4.
cd quasiclassical_logphib(double x, const ModularParameter& p, int order);

/// Li_2 on the real half-line x <= 1.
double dilog_real(double x);

/// B_{2n}(1/2).
double bernoulli_half(int n);

/// k-th derivative of the logistic function e^x / (1 + e^x).
double logistic_derivative(int k, double x);

}  // namespace tqft
