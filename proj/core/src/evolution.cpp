#include "adiaq/evolution.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "adiaq/basis.hpp"
#include "adiaq/errors.hpp"

namespace adiaq {

namespace {

double l2_norm(const std::vector<cxd>& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

cxd inner(const std::vector<cxd>& a, const std::vector<cxd>& b) {
  cxd acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// One Krylov application of exp(-i dt H) to psi, in place. The Lanczos
// recurrence runs with one full reorthogonalization pass; the standard
// a-posteriori estimate beta_m |y_m| decides whether the step is split.
void krylov_apply(const Operator& h, double dt, std::vector<cxd>& psi, int mmax,
                  double tol, long& matvecs, double t_now, int depth) {
  if (depth > 40)
    throw StiffnessError("propagator kept splitting its step", t_now);
  const double nrm = l2_norm(psi);
  if (nrm == 0.0) return;

  std::vector<std::vector<cxd>> basis;
  basis.reserve(static_cast<std::size_t>(mmax) + 1);
  {
    auto v0 = psi;
    for (auto& z : v0) z /= nrm;
    basis.push_back(std::move(v0));
  }
  std::vector<double> alpha, beta;
  std::vector<cxd> w(psi.size());
  bool happy = false;

  for (int j = 0; j < mmax; ++j) {
    h.apply(std::span<const cxd>(basis.back()), std::span<cxd>(w));
    ++matvecs;
    const double aj = inner(basis[static_cast<std::size_t>(j)], w).real();
    alpha.push_back(aj);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const cxd c = inner(basis[i], w);
      for (std::size_t p = 0; p < w.size(); ++p) w[p] -= c * basis[i][p];
    }
    const double bj = l2_norm(w);
    const double scale = std::max(1.0, std::abs(aj));
    if (bj <= 1e-12 * scale) {
      happy = true;
      break;
    }
    if (j + 1 == mmax) {
      beta.push_back(bj);
      break;
    }
    beta.push_back(bj);
    auto vj = w;
    for (auto& z : vj) z /= bj;
    basis.push_back(std::move(vj));
  }

  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    tmat(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      tmat(i, i + 1) = beta[static_cast<std::size_t>(i)];
      tmat(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tmat);

  std::vector<cxd> y(static_cast<std::size_t>(m), cxd{0.0, 0.0});
  for (int k = 0; k < m; ++k) {
    const cxd phase = std::exp(cxd{0.0, -dt * es.eigenvalues()[k]});
    const double u0k = es.eigenvectors()(0, k);
    for (int j = 0; j < m; ++j)
      y[static_cast<std::size_t>(j)] += es.eigenvectors()(j, k) * phase * u0k;
  }

  if (!happy && m == mmax && !beta.empty()) {
    const double err = nrm * beta.back() * std::abs(y[static_cast<std::size_t>(m - 1)]);
    if (err > tol) {
      krylov_apply(h, 0.5 * dt, psi, mmax, 0.5 * tol, matvecs, t_now, depth + 1);
      krylov_apply(h, 0.5 * dt, psi, mmax, 0.5 * tol, matvecs, t_now, depth + 1);
      return;
    }
  }

  std::fill(psi.begin(), psi.end(), cxd{0.0, 0.0});
  for (int j = 0; j < m; ++j) {
    const cxd c = nrm * y[static_cast<std::size_t>(j)];
    const auto& vj = basis[static_cast<std::size_t>(j)];
    for (std::size_t p = 0; p < psi.size(); ++p) psi[p] += c * vj[p];
  }
}

double overlap_with_real(const std::vector<double>& g, const std::vector<cxd>& psi) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    re += g[i] * psi[i].real();
    im += g[i] * psi[i].imag();
  }
  return re * re + im * im;
}

// Fourth-order commutator-free scheme over one step: two exponentials at
// the Gauss nodes c1,2 = 1/2 -+ sqrt(3)/6 with weights a1,2. Because H(s)
// is affine in s, each weighted pair a*H(s_a) + b*H(s_b) is itself
// (a+b) * H(sigma) for the matching combination sigma, so both factors stay
// plain exponentials of family members. sigma is clamped into [0,1]: the
// combination extrapolates slightly (a1 < 0) and can overshoot the path
// ends by O(dt^2) under a curved schedule.
inline constexpr double kCf4Node1 = 0.21132486540518711775;  // (3 - sqrt(3)) / 6
inline constexpr double kCf4Node2 = 0.78867513459481288225;
inline constexpr double kCf4Weight1 = -0.038675134594812882255;  // (3 - 2 sqrt(3)) / 12
inline constexpr double kCf4Weight2 = 0.53867513459481288225;

std::pair<double, double> cf4_nodes(const Schedule& schedule, double total,
                                    double t0, double dt) {
  const double sa = schedule((t0 + kCf4Node1 * dt) / total);
  const double sb = schedule((t0 + kCf4Node2 * dt) / total);
  const double first = 2.0 * (kCf4Weight2 * sa + kCf4Weight1 * sb);
  const double second = 2.0 * (kCf4Weight1 * sa + kCf4Weight2 * sb);
  return {std::clamp(first, 0.0, 1.0), std::clamp(second, 0.0, 1.0)};
}

}  // namespace

double ground_space_fidelity(const Operator& h1, const StateVector& psi) {
  if (h1.n() != psi.n())
    throw ContractViolation("state size does not match operator");
  if (h1.is_diagonal()) {
    const auto& table = h1.diagonal_table();
    double lo = table[0];
    for (double e : table) lo = std::min(lo, e);
    const double tol = 1e-12 * std::max(1.0, std::abs(lo));
    double acc = 0.0;
    for (std::size_t k = 0; k < table.size(); ++k)
      if (table[k] - lo <= tol) acc += std::norm(psi.amplitudes()[k]);
    return acc;
  }
  auto r = lowest_two(h1);
  double acc = overlap_with_real(r.v0, psi.amplitudes());
  if (r.ground_degenerate) acc += overlap_with_real(r.v1, psi.amplitudes());
  return acc;
}

EvolutionResult evolve(const InterpolatingFamily& family, const StateVector& initial,
                       const EvolutionSpec& spec) {
  if (initial.n() != family.n())
    throw ContractViolation("state size does not match family");
  if (!(spec.total_time > 0.0)) throw ContractViolation("total time must be positive");
  if (!(spec.tol > 0.0)) throw ContractViolation("tolerance must be positive");
  if (spec.krylov_dim < 4) throw ContractViolation("Krylov dimension too small");
  if (spec.trace_samples == 1)
    throw ContractViolation("trace needs at least two samples (or zero)");
  if (std::abs(initial.norm() - 1.0) > 1e-6)
    throw ContractViolation("initial state must be normalized");

  const double total = spec.total_time;
  std::vector<cxd> psi = initial.amplitudes();
  {
    const double nrm = l2_norm(psi);
    for (auto& z : psi) z /= nrm;
  }

  EvolutionResult out;
  out.stats.min_dt = std::numeric_limits<double>::infinity();

  // Ground overlap along the trace, warm-starting each eigensolve from the
  // previous trace point.
  std::vector<double> warm0, warm1;
  auto record = [&](double t) {
    if (spec.trace_samples == 0) return;
    const double s = spec.schedule(t / total);
    LanczosOptions lo;
    if (!warm0.empty()) {
      lo.warm0 = &warm0;
      lo.warm1 = &warm1;
    }
    auto r = lowest_two(family.at(s), lo);
    double overlap = overlap_with_real(r.v0, psi);
    if (r.ground_degenerate) overlap += overlap_with_real(r.v1, psi);
    warm0 = std::move(r.v0);
    warm1 = std::move(r.v1);
    out.trace.push_back(TracePoint{t, s, overlap, std::abs(l2_norm(psi) - 1.0)});
  };

  std::size_t next_target = 0;
  std::vector<double> targets;
  if (spec.trace_samples > 0) {
    targets.resize(static_cast<std::size_t>(spec.trace_samples));
    for (int k = 0; k < spec.trace_samples; ++k)
      targets[static_cast<std::size_t>(k)] =
          total * k / (spec.trace_samples - 1);
    record(0.0);
    next_target = 1;
  }

  const double dt_floor = 1e-12 * total;
  double t = 0.0;
  double dt_ctrl = std::min(total / 64.0, 0.5);
  std::vector<cxd> psi1, psi2;

  while (t < total) {
    double dt = std::min(dt_ctrl, total - t);
    if (next_target < targets.size())
      dt = std::min(dt, targets[next_target] - t);
    dt = std::max(dt, dt_floor);

    // The step-doubling estimate compares two unit vectors computed in
    // double precision, so it cannot resolve differences below the
    // rounding noise of the vectors themselves. A budget that pushes the
    // per-step allowance under that floor would otherwise reject forever.
    const double noise_floor = 16.0 *
                               std::numeric_limits<double>::epsilon() *
                               std::sqrt(static_cast<double>(psi.size()));
    const double allowance = spec.tol * dt / total + noise_floor;
    const double ktol = 0.1 * allowance;

    auto cf4_step = [&](std::vector<cxd>& v, double t0, double h, double kt) {
      const auto [s1, s2] = cf4_nodes(spec.schedule, total, t0, h);
      krylov_apply(family.at(s1), 0.5 * h, v, spec.krylov_dim, 0.5 * kt,
                   out.stats.matvecs, t0, 0);
      krylov_apply(family.at(s2), 0.5 * h, v, spec.krylov_dim, 0.5 * kt,
                   out.stats.matvecs, t0, 0);
    };

    psi1 = psi;
    cf4_step(psi1, t, dt, ktol);
    psi2 = psi;
    cf4_step(psi2, t, 0.5 * dt, 0.5 * ktol);
    cf4_step(psi2, t + 0.5 * dt, 0.5 * dt, 0.5 * ktol);

    double err = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) err += std::norm(psi1[i] - psi2[i]);
    err = std::sqrt(err);

    if (err <= allowance) {
      psi.swap(psi2);
      t += dt;
      ++out.stats.steps;
      out.stats.min_dt = std::min(out.stats.min_dt, dt);
      out.stats.max_dt = std::max(out.stats.max_dt, dt);
      const double drift = std::abs(l2_norm(psi) - 1.0);
      if (drift > spec.norm_drift_bound)
        throw IntegratorError("propagator lost normalization");
      if (next_target < targets.size() &&
          t >= targets[next_target] - 1e-12 * total) {
        record(t);
        ++next_target;
      }
      const double fac =
          err > 0.0 ? 0.9 * std::pow(allowance / err, 0.2) : 2.5;
      dt_ctrl = dt * std::clamp(fac, 0.3, 2.5);
    } else {
      ++out.stats.rejected;
      const double fac = 0.9 * std::pow(allowance / err, 0.2);
      dt_ctrl = dt * std::clamp(fac, 0.1, 0.7);
      if (dt_ctrl < dt_floor)
        throw StiffnessError("step size collapsed", t);
    }
  }

  out.final_norm_drift = std::abs(l2_norm(psi) - 1.0);
  out.final_fidelity =
      ground_space_fidelity(family.h1(), StateVector(family.n(), psi));
  return out;
}

namespace {

// H0 and H1 compressed once onto an orthonormal sector basis, together with
// the sector coordinates of the initial state. Because the sector is
// invariant under both endpoints, propagating inside it reproduces the full
// dynamics exactly whenever the initial state has no component outside.
struct SectorPencil {
  Eigen::MatrixXd r0, r1;
  Eigen::VectorXd y0;
  double leak = 0.0;  // squared norm of the initial state outside the sector
};

SectorPencil compress_sector(const InterpolatingFamily& family,
                             const ReducedSearchSubspace& sector,
                             const StateVector& initial) {
  const int k = sector.dim();
  const std::uint64_t d = dimension(family.n());
  const auto h0 = family.at(0.0);
  const auto h1 = family.at(1.0);

  SectorPencil out;
  out.r0.resize(k, k);
  out.r1.resize(k, k);
  out.y0.resize(k);

  std::vector<double> w(d);
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < d; ++i) acc += a[i] * b[i];
    return acc;
  };
  for (int j = 0; j < k; ++j) {
    const auto& bj = sector.basis()[static_cast<std::size_t>(j)];
    h0.apply(bj, w);
    for (int i = 0; i < k; ++i)
      out.r0(i, j) = dot(sector.basis()[static_cast<std::size_t>(i)], w);
    h1.apply(bj, w);
    for (int i = 0; i < k; ++i)
      out.r1(i, j) = dot(sector.basis()[static_cast<std::size_t>(i)], w);
  }
  out.r0 = 0.5 * (out.r0 + out.r0.transpose()).eval();
  out.r1 = 0.5 * (out.r1 + out.r1.transpose()).eval();

  double inside = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto& bi = sector.basis()[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (std::uint64_t p = 0; p < d; ++p)
      acc += bi[p] * initial.amplitudes()[p].real();
    out.y0[i] = acc;
    inside += acc * acc;
  }
  out.leak = std::abs(initial.squared_norm() - inside);
  return out;
}

// Propagation of the compressed pencil with the same fourth-order pair and
// step-doubling control as the full-space integrator. The sector dimension
// is tiny, so each exponential diagonalizes the frozen matrix directly.
double sector_fidelity(const SectorPencil& pencil, double total, double tol) {
  const int k = static_cast<int>(pencil.r0.rows());
  Eigen::VectorXcd psi = pencil.y0.cast<cxd>();
  psi /= psi.norm();

  const Schedule linear = Schedule::linear();
  auto exp_apply = [&](const Eigen::VectorXcd& v, double s, double dt) {
    Eigen::MatrixXd h = (1.0 - s) * pencil.r0 + s * pencil.r1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXcd phases(k);
    for (int i = 0; i < k; ++i)
      phases[i] = std::exp(cxd{0.0, -dt * es.eigenvalues()[i]});
    return (es.eigenvectors() *
            (phases.asDiagonal() * (es.eigenvectors().transpose() * v)))
        .eval();
  };
  auto advance = [&](Eigen::VectorXcd v, double t0, double dt) {
    const auto [s1, s2] = cf4_nodes(linear, total, t0, dt);
    return exp_apply(exp_apply(v, s1, 0.5 * dt), s2, 0.5 * dt);
  };

  const double dt_floor = 1e-12 * total;
  double t = 0.0;
  double dt_ctrl = std::min(total / 64.0, 0.5);
  const double noise_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                             std::sqrt(static_cast<double>(k));
  while (t < total) {
    const double dt = std::max(std::min(dt_ctrl, total - t), dt_floor);
    // Same rounding-noise floor as the full-space controller; see there.
    const double allowance = tol * dt / total + noise_floor;
    Eigen::VectorXcd one = advance(psi, t, dt);
    Eigen::VectorXcd two = advance(advance(psi, t, 0.5 * dt), t + 0.5 * dt, 0.5 * dt);
    const double err = (one - two).norm();
    if (err <= allowance) {
      psi.swap(two);
      t += dt;
      const double fac = err > 0.0 ? 0.9 * std::pow(allowance / err, 0.2) : 2.5;
      dt_ctrl = dt * std::clamp(fac, 0.3, 2.5);
    } else {
      const double fac = 0.9 * std::pow(allowance / err, 0.2);
      dt_ctrl = dt * std::clamp(fac, 0.1, 0.7);
      if (dt_ctrl < dt_floor)
        throw StiffnessError("sector step size collapsed", t);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pencil.r1);
  const double lo = es.eigenvalues()[0];
  const double gtol = 1e-9 * std::max(1.0, std::abs(lo));
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    if (es.eigenvalues()[i] - lo > gtol) break;
    acc += std::norm(es.eigenvectors().col(i).cast<cxd>().dot(psi));
  }
  return acc;
}

std::pair<double, double> regression(const std::vector<std::pair<double, double>>& xy) {
  const double n = static_cast<double>(xy.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return {0.0, 0.0};
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

ScalingStudy runtime_scaling_study(const std::function<InterpolatingFamily(int)>& make_family,
                           const std::vector<int>& sizes, const ScalingOptions& opts) {
  if (sizes.empty()) throw ContractViolation("no sizes given");
  if (!(opts.f_star > 0.0 && opts.f_star < 1.0))
    throw ContractViolation("target fidelity must lie in (0,1)");

  ScalingStudy study;
  for (int n : sizes) {
    auto family = make_family(n);
    ScalingPoint point;
    point.n = n;

    const auto initial = StateVector::uniform(n);
    std::optional<SectorPencil> pencil;
    std::optional<ReducedSearchSubspace> sector;
    if (opts.sector_target && *opts.sector_target < dimension(n)) {
      try {
        sector.emplace(family, TargetState{n, *opts.sector_target});
        auto compressed = compress_sector(family, *sector, initial);
        if (compressed.leak <= 1e-9) pencil = std::move(compressed);
      } catch (const RankToleranceError&) {
        sector.reset();
      }
    }
    point.reduced_sector = sector.has_value() && pencil.has_value();

    if (point.reduced_sector) {
      auto profile = reduced_gap_profile(*sector, uniform_grid(opts.sweep_points));
      point.g_min = profile.g_min;
      point.s_star = profile.s_star;
    } else {
      SweepOptions sweep;
      sweep.solver = opts.solver;
      auto profile = gap_sweep(family, uniform_grid(opts.sweep_points), sweep);
      point.g_min = profile.g_min;
      point.s_star = profile.s_star;
    }

    auto fidelity_at = [&](double total) {
      double f;
      if (point.reduced_sector) {
        f = sector_fidelity(*pencil, total, opts.evolve_tol);
      } else {
        EvolutionSpec es;
        es.total_time = total;
        es.tol = opts.evolve_tol;
        es.trace_samples = 0;
        f = evolve(family, initial, es).final_fidelity;
      }
      point.fidelity_curve.emplace_back(total, f);
      return f;
    };

    const double cap = std::ldexp(1.0, n + 6);
    double lo = 1e-3, hi = 1.0;
    double f_hi = fidelity_at(hi);
    point.bracketed = f_hi >= opts.f_star;
    if (!point.bracketed) {
      lo = 1.0;
      for (double trial = 2.0; trial <= cap; trial *= 2.0) {
        const double f = fidelity_at(trial);
        if (f >= opts.f_star) {
          hi = trial;
          f_hi = f;
          point.bracketed = true;
          break;
        }
        lo = trial;
      }
    }
    if (!point.bracketed) {
      point.t_star = cap;
      study.points.push_back(std::move(point));
      continue;
    }
    while (hi / lo > 1.0 + opts.t_rel_tol) {
      const double mid = std::sqrt(hi * lo);
      const double f = fidelity_at(mid);
      if (f >= opts.f_star) {
        hi = mid;
        f_hi = f;
      } else {
        lo = mid;
      }
    }
    point.t_star = hi;
    point.fidelity_at_t_star = f_hi;
    study.points.push_back(std::move(point));
  }

  std::vector<std::pair<double, double>> nvst, gvst;
  for (const auto& p : study.points) {
    if (!p.bracketed) continue;
    nvst.emplace_back(p.n, std::log2(p.t_star));
    gvst.emplace_back(std::log(1.0 / p.g_min), std::log(p.t_star));
  }
  if (nvst.size() >= 2) {
    study.slope_log2t_vs_n = regression(nvst).first;
    const auto [slope, icept] = regression(gvst);
    study.slope_logt_vs_log_inv_gap = slope;
    study.intercept_logt = icept;
  }
  return study;
}

}  // namespace adiaq
