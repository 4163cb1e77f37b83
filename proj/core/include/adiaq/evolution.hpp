#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adiaq/family.hpp"
#include "adiaq/spectral.hpp"
#include "adiaq/state.hpp"

namespace adiaq {

/// Reparametrization u in [0,1] -> s in [0,1] of the interpolation path.
struct Schedule {
  std::string name = "linear";
  std::function<double(double)> map;

  double operator()(double u) const { return map ? map(u) : u; }
  static Schedule linear() { return Schedule{}; }
};

struct EvolutionSpec {
  double total_time = 1.0;
  Schedule schedule = Schedule::linear();
  double tol = 1e-8;              // accumulated local-error budget for the run
  double norm_drift_bound = 1e-8; // |norm - 1| beyond this aborts
  int krylov_dim = 30;
  int trace_samples = 33;         // 0 disables the trace
};

struct TracePoint {
  double t = 0.0;
  double s = 0.0;
  double ground_overlap = 0.0;  // |<ground(s)|psi>|^2, summed over a degenerate pair
  double norm_drift = 0.0;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  long matvecs = 0;
  double min_dt = 0.0;
  double max_dt = 0.0;
};

struct EvolutionResult {
  std::vector<TracePoint> trace;
  double final_fidelity = 0.0;  // overlap with the final ground space
  double final_norm_drift = 0.0;
  IntegratorStats stats;
};

/// Integrate i d/dt psi = H(s(t/T)) psi from t=0 to T with a fourth-order
/// commutator-free exponential propagator (two Krylov exponentials per
/// step at interior nodes) under step-doubling control. The propagator is
/// an isometry, so norm drift only measures roundoff; a drift beyond the
/// bound raises IntegratorError, and a step size driven below 1e-12 * T
/// raises StiffnessError.
EvolutionResult evolve(const InterpolatingFamily& family, const StateVector& initial,
                       const EvolutionSpec& spec);

/// Fidelity of a state against the ground space of a final Hamiltonian.
/// Diagonal finals use the exact minimal-entry projector, so degenerate
/// ground spaces are handled exactly.
double ground_space_fidelity(const Operator& h1, const StateVector& psi);

struct ScalingOptions {
  double f_star = 0.9;
  int sweep_points = 65;
  double evolve_tol = 1e-6;
  double t_rel_tol = 0.02;   // relative width at which bisection stops
  LanczosOptions solver;
  /// Marked basis index whose symmetric sector, when it closes at low rank,
  /// carries the whole computation: gap sweep and evolution both restrict
  /// to the sector, which is exact because H(s) maps it to itself and the
  /// uniform initial state lies inside it. Sizes whose sector does not
  /// close (or leaks the initial state) fall back to the full-space path.
  std::optional<std::uint64_t> sector_target;
};

struct ScalingPoint {
  int n = 0;
  double g_min = 0.0;
  double s_star = 0.0;
  double t_star = 0.0;
  bool bracketed = false;
  bool reduced_sector = false;
  double fidelity_at_t_star = 0.0;
  std::vector<std::pair<double, double>> fidelity_curve;  // (T, F) evaluations
};

struct ScalingStudy {
  std::vector<ScalingPoint> points;
  double slope_log2t_vs_n = 0.0;
  double slope_logt_vs_log_inv_gap = 0.0;
  double intercept_logt = 0.0;
};

/// For each n: find g_min by a gap sweep, then the smallest total time T*
/// reaching fidelity f_star by geometric bracketing from T=1 (capped at
/// 2^(n+6)) and bisection. Emits regressions of log2 T* against n and of
/// log T* against log(1/g_min). A point whose bracket hits the cap is
/// reported unbracketed with its fidelity curve.
ScalingStudy runtime_scaling_study(const std::function<InterpolatingFamily(int)>& make_family,
                           const std::vector<int>& sizes,
                           const ScalingOptions& opts = {});

}  // namespace adiaq
