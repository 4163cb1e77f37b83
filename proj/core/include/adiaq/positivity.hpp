#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adiaq/family.hpp"
#include "adiaq/spectral.hpp"
#include "adiaq/state.hpp"

namespace adiaq {

inline constexpr int kMaxPositivityQubits = 10;
inline constexpr double kMatrixPositivityTol = 1e-14;
inline constexpr double kVectorPositivityTol = 1e-12;

/// exp(-tau * a/2 * (I - sigma_x)) for one qubit: a symmetric 2x2 with
/// equal diagonal (1 + e^{-tau a})/2 and off-diagonal (1 - e^{-tau a})/2.
/// Rows sum to exactly 1; entries are strictly positive for tau a > 0.
QubitBlock single_qubit_factor(double a, double tau);

/// First-order product approximation of exp(-H(s)) for families whose
/// driver is qubit-wise and whose final is diagonal:
///
///   T_m(s) = ( exp(-(s/m) H1) exp(-((1-s)/m) H0) )^m.
///
/// Both factors apply in closed form (a diagonal scale and a tensor
/// product of 2x2 blocks), so one application costs 2m structured passes.
/// The deviation from exp(-H(s)) falls off like 1/m.
class TrotterApproximant {
 public:
  TrotterApproximant(const InterpolatingFamily& family, double s, int m);

  int steps() const { return m_; }
  double s() const { return s_; }
  int n() const { return n_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  StateVector apply(const StateVector& v) const;

  /// Dense matrix of the product (n <= 10), row-major.
  std::vector<double> dense() const;

 private:
  int n_;
  double s_;
  int m_;
  std::vector<QubitBlock> h0_factors;   // per-qubit exp factors
  std::vector<double> h1_scale;         // exp(-(s/m) E_k)
};

/// One-shot product application without keeping the approximant around.
StateVector trotter_exp_action(const InterpolatingFamily& family, double s, int m,
                               const StateVector& v);

struct PositivityReport {
  std::string family_id;
  double s = 0.0;
  std::string check;          // "matrix" or "ground-vector"
  bool applicable = true;     // false when the ground state is degenerate
  bool positive = false;
  double min_entry = 0.0;
  double tolerance = 0.0;
  int trotter_m = 0;          // matrix check only
  std::uint64_t ground_multiplicity = 1;  // vector check only
};

/// Entrywise positivity of the Trotter product at s (n <= 10). Starts at
/// m_start steps and doubles m until the verdict survives one doubling.
PositivityReport verify_matrix_positivity(const InterpolatingFamily& family, double s,
                                         int m_start = 64, int threads = 1);

/// Entrywise positivity of the ground eigenvector at s in [0, 1), in the
/// gauge where the largest-magnitude amplitude is positive. A degenerate
/// ground level has no distinguished eigenvector, so the check reports
/// applicable = false instead of a verdict.
PositivityReport verify_ground_positivity(const InterpolatingFamily& family, double s,
                                         const LanczosOptions& opts = {});

}  // namespace adiaq
