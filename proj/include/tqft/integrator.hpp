#pragma once

// State integral over the internal edges of a shaped triangulation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tqft/triangulation.hpp"

namespace tqft {

/// Replaces the Boltzmann weight of a tetrahedron; used for controls.
using WeightOverride = std::function<cd(const ShapedTetrahedron&, cd s, cd t)>;

struct IntegratorOptions {
  double tol = 1e-8;        // absolute, on the doubling difference
  int grid_start = 16;
  int grid_max = 4096;
  int threads = 0;          // 0: TQFT_THREADS, else hardware concurrency
  double weight_tol = 1e-13;
  /// Imaginary offsets of the integration contour, one per internal edge
  /// (in the order of Triangulation::internal_edges()); empty means none.
  std::vector<double> contour_offset;
  /// Skip the level prefactor.
  bool no_prefactor = false;
  WeightOverride weight_override;
};

struct IntegrationResult {
  cd value;
  double abs_err = 0.0;  // |value(N) - value(N/2)| from the last doubling
  int grid = 0;
  int dims = 0;
  std::vector<std::pair<int, cd>> history;

  std::string to_json() const;
};

/// Thread budget: explicit value, else TQFT_THREADS, else hardware.
int resolve_threads(int requested);

/// Boundary values per edge class taken from the triangulation's
/// boundary_state; internal classes get 0. Throws ValidationError when a
/// boundary class has no value.
std::vector<double> boundary_values(const Triangulation& X);

/// e^{i pi l / 4 hbar} times the integral of the product of weights over
/// the internal edges, boundary edges fixed at X.boundary_state.
IntegrationResult partition_function(const Triangulation& X, const ModularParameter& p,
                                     const IntegratorOptions& opt = {});

/// Same with explicit values per edge class (only boundary entries used).
IntegrationResult boundary_section(const Triangulation& X, const std::vector<double>& values,
                                   const ModularParameter& p,
                                   const IntegratorOptions& opt = {});

/// |Z_shifted - Z| / |Z| with the contour of internal edge e moved by
/// i * shift.
double contour_shift_check(const Triangulation& X, int e, double shift,
                           const ModularParameter& p, const IntegratorOptions& opt = {});

struct MoveSpec {
  enum Kind { two_three, three_two } kind = two_three;
  FaceRef face;              // for 2-3
  int edge = -1;             // for 3-2
  std::optional<cd> a0;      // free shape parameter of 2-3
};

struct InvarianceReport {
  IntegrationResult before;
  IntegrationResult after;
  double defect = 0.0;
  PachnerResult move;
};

/// Runs the move and compares the two partition functions. With
/// apply_level = false the level of the result is reset to that of X.
InvarianceReport pachner_invariance_check(const Triangulation& X, const MoveSpec& move,
                                          const ModularParameter& p,
                                          const IntegratorOptions& opt = {},
                                          bool apply_level = true);

}  // namespace tqft
