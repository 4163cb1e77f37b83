#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adiaq/family.hpp"
#include "adiaq/operator.hpp"

namespace adiaq {

inline constexpr int kMaxDenseSpectrumQubits = 12;

struct SolverStats {
  int restarts = 0;
  long matvecs = 0;
  double residual0 = 0.0;
  double residual1 = 0.0;
  bool warm_started = false;
};

struct LanczosOptions {
  double tol = 1e-10;       // residual bound, relative to max(1, |E|)
  int max_basis = 48;       // Krylov basis size per restart cycle
  int keep = 8;             // Ritz vectors carried across a restart
  long max_matvecs = 500000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  const std::vector<double>* warm0 = nullptr;
  const std::vector<double>* warm1 = nullptr;
};

/// Two lowest eigenpairs of a symmetric operator. Small dimensions are
/// solved densely; otherwise a block Krylov iteration with full
/// reorthogonalization and thick restarts runs until both residuals pass
/// the tolerance. Deterministic for a fixed seed; warm starts accepted.
struct LowestTwoResult {
  double e0 = 0.0, e1 = 0.0;
  std::vector<double> v0, v1;
  bool ground_degenerate = false;
  SolverStats stats;
};

LowestTwoResult lowest_two(const Operator& op, const LanczosOptions& opts = {});

/// Full dense spectrum (n <= 12). Eigenvalues ascending; eigenvectors
/// column-major when requested. `levels` groups eigenvalues into
/// (energy, multiplicity) pairs at tolerance 1e-8 * max(1, |E|).
struct SpectrumResult {
  int n = 0;
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;  // dim x dim, column-major; empty unless requested
  std::vector<std::pair<double, std::int64_t>> levels;
};

SpectrumResult dense_spectrum(const Operator& op, bool want_vectors = false);

std::vector<std::pair<double, std::int64_t>> group_levels(
    const std::vector<double>& eigenvalues);

/// Closed-form spectrum of the qubit-wise family at interpolation s:
/// levels (n/2)(1 - sqrt(q)) + k sqrt(q) with q = 1 - 2s + 2s^2 and
/// multiplicity C(n,k). The gap sqrt(q) is n-independent with minimum
/// 1/sqrt(2) at s = 1/2.
SpectrumResult separable_closed_form(int n, double s);

struct GapSample {
  double s = 0.0;
  double e0 = 0.0, e1 = 0.0;
  double residual0 = 0.0, residual1 = 0.0;
};

struct RefinementRecord {
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int iterations = 0;
  int extra_evaluations = 0;
  bool densified = false;  // bracket was not unimodal; subdivided 10x first
  bool converged_on_gap = false;  // stopped on the gap tolerance, not the s width
};

struct GapProfile {
  std::string family_id;
  std::vector<GapSample> samples;  // ascending in s
  double g_min = 0.0;
  double s_star = 0.0;
  RefinementRecord refinement;
  SolverStats total_stats;
};

struct SweepOptions {
  LanczosOptions solver;
  bool warm_start = true;  // reuse the previous grid point's eigenvectors
  int threads = 1;         // >1 forces cold starts so results don't depend on order
  double s_tol = 1e-6;
  double gap_tol = 1e-10;
  bool refine = true;
};

/// Sweep the gap over an s-grid, then shrink the bracket around the
/// smallest sample by golden-section search until the bracket width or
/// the gap improvement passes tolerance. The reported g_min is never
/// larger than any evaluated gap.
GapProfile gap_sweep(const InterpolatingFamily& family, std::vector<double> grid,
                     const SweepOptions& opts = {});

std::vector<double> uniform_grid(int points);

/// Krylov closure of the marked state under {H0, H1} for search families
/// whose driver is qubit-wise and whose final is diagonal with a single
/// sign-flipped entry. The closure is the (n+1)-dimensional symmetric
/// sector; a closure exceeding n+2 directions means the family lacks the
/// symmetry and raises RankToleranceError.
class ReducedSearchSubspace {
 public:
  ReducedSearchSubspace(const InterpolatingFamily& family, const TargetState& target,
                       double rank_tol = 1e-10);

  int full_n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<std::vector<double>>& basis() const { return basis_; }

  /// dim x dim row-major matrix of H(s) compressed to the closure.
  std::vector<double> reduced_matrix(double s) const;

  /// Two lowest eigenvalues of the reduced matrix at s.
  std::pair<double, double> lowest_two_reduced(double s) const;

 private:
  int n_;
  InterpolatingFamily family_;
  std::vector<std::vector<double>> basis_;
};

/// Gap profile computed inside the reduced sector; exact for the search
/// families and cheap enough for golden refinement at every n.
GapProfile reduced_gap_profile(const ReducedSearchSubspace& problem,
                               std::vector<double> grid, double s_tol = 1e-6,
                               double gap_tol = 1e-10);

struct CrossingEvent {
  double s = 0.0;
  int lower_level = 0;        // index of the lower of the two levels involved
  double min_separation = 0.0;
  bool true_crossing = false;  // levels actually intersect and swap character
  double target_overlap = 0.0; // |<target|psi_lower>|^2 at the event, if a target is set
};

struct CrossingOptions {
  int tracked_levels = 4;
  double window = 0.05;          // report separations dipping below this
  double s_tol = 1e-8;
  std::optional<std::uint64_t> target;  // basis index for overlap reporting
};

/// Scan adjacent-level separations over the grid (dense path, n <= 12),
/// refine each local minimum below the window, and classify it as a true
/// crossing (separation at numerical zero with eigenvector characters
/// swapping) or an avoided crossing.
std::vector<CrossingEvent> detect_crossings(const InterpolatingFamily& family,
                                            const std::vector<double>& grid,
                                            const CrossingOptions& opts = {});

/// Golden-section minimizer used by the refinement passes. Tracks the
/// best evaluation ever seen; stops when the bracket is narrower than
/// x_tol or the improvement over one shrink falls below f_tol.
struct MinimizeResult {
  double x = 0.0, f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged_on_f = false;
};

MinimizeResult golden_minimize(const std::function<double(double)>& f, double a,
                               double b, double x_tol, double f_tol,
                               int max_iterations = 200);

}  // namespace adiaq
